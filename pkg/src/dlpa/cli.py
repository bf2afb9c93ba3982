"""Command-line surface.

Subcommands: mc, sat, compare, dclpc {mc,sat,reduce},
peek {solve,encode,refute,export-smv}.

Exit codes: 0 = yes, 1 = no, 2 = usage or parse error, 3 = timeout.
"""

from __future__ import annotations

import argparse
import json
import random
import statistics
import sys
import time

from . import dclpc as dclpc_mod
from . import peek as peek_mod
from . import randgen
from .oracle import mc_oracle, mod_oracle, rel_oracle, sat_oracle
from .pspace import DEFAULT_TIMEOUT, EngineTimeout, PspaceEngine, mc_pspace, sat_pspace
from .syntax import (
    ParseError, UnknownVariable, Universe, node_len, parse_formula,
    print_formula, vars_in_order,
)

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_TIMEOUT = 0, 1, 2, 3


def _split_list(text):
    return [v for v in (text or "").replace(",", " ").split() if v]


def _build_universe(args, formula):
    names = vars_in_order(formula)
    for extra in _split_list(getattr(args, "true_vars", "")):
        if extra not in names:
            names.append(extra)
    if args.universe:
        override = _split_list(args.universe)
        missing = [n for n in names if n not in override]
        if missing:
            raise UnknownVariable(f"--universe omits occurring variables: {missing}")
        names = override
    return Universe(names)


def _emit(args, payload: dict, text_lines) -> None:
    if args.json:
        if args.stable:
            payload = {k: v for k, v in payload.items() if k != "elapsed_ms"}
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _verdict_code(verdict: bool) -> int:
    return EXIT_YES if verdict else EXIT_NO


# ---------------------------------------------------------------------------
# mc / sat
# ---------------------------------------------------------------------------

def _read_formula_arg(args):
    """The formula argument, or a JSON instance piped from `peek encode`."""
    text = args.formula
    if text == "-":
        text = sys.stdin.read()
    text = text.strip()
    if text.startswith("{"):
        data = json.loads(text)
        return data["formula"], _split_list(",".join(data.get("true", []))), \
            data.get("universe")
    return text, None, None


def cmd_mc(args) -> int:
    text, piped_true, piped_universe = _read_formula_arg(args)
    if piped_true is not None and not args.true_vars:
        args.true_vars = ",".join(piped_true)
    if piped_universe and not args.universe:
        args.universe = ",".join(piped_universe)
    formula = parse_formula(text)
    universe = _build_universe(args, formula)
    valuation = universe.valuation(_split_list(args.true_vars))

    start = time.monotonic()
    payload = {"command": "mc", "engine": args.engine, "formula": text.strip(),
               "true": universe.names_of(valuation)}
    try:
        if args.engine == "pspace":
            verdict, stats = mc_pspace(valuation, formula, universe, args.timeout)
            bound = 2 * node_len(formula) * max(universe.k, 1)
            payload["depth"] = {
                "max_nesting_rel": stats.max_nesting_rel,
                "max_nesting_mod": stats.max_nesting_mod,
                "max_nesting_ite": stats.max_nesting_ite,
                "bound_2_len_k": bound,
                "within_bound": stats.max_nesting <= bound,
            }
        else:
            verdict = mc_oracle(valuation, formula, universe)
    except EngineTimeout:
        payload["verdict"] = "timeout"
        payload["elapsed_ms"] = round(1000 * (time.monotonic() - start), 3)
        _emit(args, payload, ["timeout"])
        return EXIT_TIMEOUT
    payload["verdict"] = "yes" if verdict else "no"
    payload["elapsed_ms"] = round(1000 * (time.monotonic() - start), 3)
    lines = ["yes" if verdict else "no"]
    if "depth" in payload:
        d = payload["depth"]
        lines.append(f"max nesting rel/mod/ite = {d['max_nesting_rel']}/"
                     f"{d['max_nesting_mod']}/{d['max_nesting_ite']}"
                     f" (bound 2*len*k = {d['bound_2_len_k']})")
    _emit(args, payload, lines)
    return _verdict_code(verdict)


def cmd_sat(args) -> int:
    text, _, _ = _read_formula_arg(args)
    formula = parse_formula(text)
    universe = _build_universe(args, formula)
    start = time.monotonic()
    payload = {"command": "sat", "engine": args.engine, "formula": text.strip()}
    try:
        if args.engine == "pspace":
            verdict = sat_pspace(formula, universe, args.timeout)
        else:
            verdict = sat_oracle(formula, universe)
    except EngineTimeout:
        payload["verdict"] = "timeout"
        payload["elapsed_ms"] = round(1000 * (time.monotonic() - start), 3)
        _emit(args, payload, ["timeout"])
        return EXIT_TIMEOUT
    payload["verdict"] = "yes" if verdict else "no"
    payload["elapsed_ms"] = round(1000 * (time.monotonic() - start), 3)
    _emit(args, payload, ["yes" if verdict else "no"])
    return _verdict_code(verdict)


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------

def cmd_compare(args) -> int:
    if args.k > 3:
        print("compare sweeps all pairs; k must be <= 3", file=sys.stderr)
        return EXIT_USAGE
    rng = random.Random(args.seed)
    universe = Universe(list(randgen.VAR_POOL[:args.k]))
    n = 1 << universe.k
    mismatches = 0
    max_seen, max_bound = 0, 0
    timings = []

    for _ in range(args.count):
        formula = randgen.random_formula(rng, args.k, args.max_len)
        truth = mod_oracle(formula, universe)
        engine = PspaceEngine(universe, args.timeout)
        start = time.monotonic()
        for val in range(n):
            got = engine.run_mod(1, val, formula)
            if got != bool(truth[val]):
                mismatches += 1
            nesting = engine.stats.max_nesting
            bound = 2 * node_len(formula) * universe.k
            if nesting > max_seen:
                max_seen, max_bound = nesting, bound
        timings.append(time.monotonic() - start)

        program = randgen.random_program(rng, args.k, max(args.max_len // 2, 1))
        rel_truth = rel_oracle(program, universe)
        for u in range(n):
            for v in range(n):
                for b in (0, 1):
                    want = bool(rel_truth[u, v]) == (b == 1)
                    if engine.run_rel(b, u, v, program) != want:
                        mismatches += 1

    payload = {
        "command": "compare",
        "cases": args.count,
        "k": args.k,
        "max_len": args.max_len,
        "seed": args.seed,
        "mismatches": mismatches,
        "max_nesting": max_seen,
        "nesting_bound": max_bound,
    }
    if timings and not args.stable:
        payload["timing_ms"] = {
            "p50": round(1000 * statistics.median(timings), 3),
            "p90": round(1000 * sorted(timings)[int(0.9 * (len(timings) - 1))], 3),
            "max": round(1000 * max(timings), 3),
        }
    lines = [f"cases: {args.count}",
             f"mismatches: {mismatches}",
             f"max nesting: {max_seen} (bound {max_bound})"]
    _emit(args, payload, lines)
    return EXIT_YES if mismatches == 0 else EXIT_NO


# ---------------------------------------------------------------------------
# dclpc
# ---------------------------------------------------------------------------

def _load_dclpc_model(path: str) -> dclpc_mod.DclpcModel:
    with open(path) as fh:
        return dclpc_mod.DclpcModel.from_json(fh.read())


def cmd_dclpc(args) -> int:
    formula = dclpc_mod.parse_dclpc_formula(args.formula)
    start = time.monotonic()
    if args.dclpc_cmd == "reduce":
        reduced, target = dclpc_mod.reduce_formula(formula)
        payload = {"command": "dclpc reduce",
                   "formula": print_formula(reduced),
                   "universe": list(target.names)}
        lines = [print_formula(reduced)]
        if args.model:
            model = _load_dclpc_model(args.model)
            bits, target2 = dclpc_mod.reduce_model(model)
            payload["true"] = target2.names_of(bits)
            lines.append("true: " + ",".join(target2.names_of(bits)))
        _emit(args, payload, lines)
        return EXIT_YES

    if args.dclpc_cmd == "mc":
        model = _load_dclpc_model(args.model)
        if args.via_reduction:
            reduced, _ = dclpc_mod.reduce_formula(
                formula, model.universe, model.agents)
            bits, target = dclpc_mod.reduce_model(model)
            verdict = mc_oracle(bits, reduced, target)
        else:
            verdict = dclpc_mod.mc_dclpc(model, formula)
    else:  # sat
        verdict = dclpc_mod.sat_dclpc(formula)
    payload = {"command": f"dclpc {args.dclpc_cmd}",
               "formula": args.formula,
               "verdict": "yes" if verdict else "no",
               "elapsed_ms": round(1000 * (time.monotonic() - start), 3)}
    _emit(args, payload, ["yes" if verdict else "no"])
    return _verdict_code(verdict)


# ---------------------------------------------------------------------------
# peek
# ---------------------------------------------------------------------------

def cmd_peek(args) -> int:
    with open(args.instance) as fh:
        pe = peek_mod.PeekInstance.from_json(fh.read())

    if args.peek_cmd == "solve":
        verdict = solve = peek_mod.solve_peek(pe)
        payload = {"command": "peek solve", "verdict": "yes" if solve else "no"}
        _emit(args, payload, ["yes" if verdict else "no"])
        return _verdict_code(verdict)

    if args.peek_cmd == "encode":
        bits, phi_pe, uni = peek_mod.encode_peek(pe)
        payload = {"formula": print_formula(phi_pe),
                   "true": uni.names_of(bits),
                   "universe": list(uni.names)}
        # always JSON so the output can be piped into `mc -`
        print(json.dumps(payload, indent=2, sort_keys=True))
        return EXIT_YES

    if args.peek_cmd == "refute":
        report = peek_mod.refute_lemma(pe)
        payload = {"command": "peek refute", **report.as_dict()}
        lines = [f"peek: {'yes' if report.peek_answer else 'no'}",
                 f"mc: {'yes' if report.mc_answer else 'no'}",
                 f"verdict: {report.verdict}"]
        _emit(args, payload, lines)
        return EXIT_YES if report.verdict == "REFUTED" else EXIT_NO

    # export-smv
    sys.stdout.write(peek_mod.export_smv(pe))
    return EXIT_YES


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--stable", action="store_true",
                   help="omit timing fields for byte-identical output")
    p.add_argument("--timeout", type=float, default=DEFAULT_TIMEOUT,
                   help="wall-clock budget in seconds (pspace engine)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dlpa", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    mc = sub.add_parser("mc", help="model-check a formula at a valuation")
    mc.add_argument("formula", help="formula text, or '-' to read stdin")
    mc.add_argument("--true", dest="true_vars", default="",
                    help="comma list of variables set true")
    mc.add_argument("--universe", default="", help="comma list enlarging the universe")
    mc.add_argument("--engine", choices=["oracle", "pspace"], default="oracle")
    _add_common(mc)
    mc.set_defaults(func=cmd_mc)

    sat = sub.add_parser("sat", help="decide satisfiability")
    sat.add_argument("formula")
    sat.add_argument("--universe", default="")
    sat.add_argument("--engine", choices=["oracle", "pspace"], default="oracle")
    _add_common(sat)
    sat.set_defaults(func=cmd_sat, true_vars="")

    cmp_p = sub.add_parser("compare", help="random cross-check of both engines")
    cmp_p.add_argument("--count", type=int, default=100)
    cmp_p.add_argument("--k", type=int, default=2)
    cmp_p.add_argument("--max-len", type=int, default=10)
    cmp_p.add_argument("--seed", type=int, default=0)
    _add_common(cmp_p)
    cmp_p.set_defaults(func=cmd_compare)

    dc = sub.add_parser("dclpc", help="DCL-PC model checking / satisfiability")
    dsub = dc.add_subparsers(dest="dclpc_cmd", required=True)
    for name in ("mc", "sat", "reduce"):
        p = dsub.add_parser(name)
        p.add_argument("formula")
        if name in ("mc", "reduce"):
            p.add_argument("--model", default="" if name == "reduce" else None,
                           required=(name == "mc"),
                           help="JSON model file")
        p.add_argument("--via-reduction", action="store_true")
        _add_common(p)
        p.set_defaults(func=cmd_dclpc)

    pk = sub.add_parser("peek", help="Peek game commands")
    psub = pk.add_subparsers(dest="peek_cmd", required=True)
    for name in ("solve", "encode", "refute", "export-smv"):
        p = psub.add_parser(name)
        p.add_argument("instance", help="JSON instance file")
        _add_common(p)
        p.set_defaults(func=cmd_peek)

    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ParseError, UnknownVariable, ValueError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
