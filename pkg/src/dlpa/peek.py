"""Peek game instances, an exact alternating-game solver, the DL-PA
encoding of instances, and the SMV export.

A Peek instance gives each of two players (E and A) a set of variables;
they alternate flipping at most one of their own, and E wins as soon as
the goal formula becomes true. The exact solver computes E's winning
region by a backward attractor fixpoint. The encoding builds the
(V_PE, phi_PE) pair whose claimed equivalence with the game answer the
counterexample instance disproves.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .oracle import mc_oracle, mod_oracle
from .syntax import (
    Assign, Atom, Box, Choice, FALSE, Falsum, Formula, Program, Seq, Star,
    Test, Universe, and_, big_choice, conj, dia, free_vars, implies, neg,
    parse_formula, print_formula,
)

MAX_PEEK_VARS = 16


def is_propositional(f: Formula) -> bool:
    """True when every program inside `f` is a test (no assignments/stars),
    i.e. `f` is a desugared propositional formula."""

    def prog_ok(p: Program) -> bool:
        return isinstance(p, Test) and is_propositional(p.cond)

    if isinstance(f, (Atom, Falsum)):
        return True
    if isinstance(f, Box):
        return prog_ok(f.prog) and is_propositional(f.body)
    return False


@dataclass(frozen=True)
class PeekInstance:
    x_e: tuple
    x_a: tuple
    phi: Formula
    v0: frozenset
    tau: str  # 'E' or 'A'

    def __post_init__(self):
        if set(self.x_e) & set(self.x_a):
            raise ValueError("X_E and X_A must be disjoint")
        if self.tau not in ("E", "A"):
            raise ValueError("tau must be 'E' or 'A'")
        allowed = set(self.x_e) | set(self.x_a)
        if not free_vars(self.phi) <= allowed:
            raise ValueError("goal formula mentions variables outside X_E u X_A")
        if not self.v0 <= allowed:
            raise ValueError("V0 mentions variables outside X_E u X_A")
        if not is_propositional(self.phi):
            raise ValueError("goal formula must be propositional")
        if len(allowed) > MAX_PEEK_VARS:
            raise ValueError(f"instance has more than {MAX_PEEK_VARS} variables")

    @classmethod
    def make(cls, x_e, x_a, phi, v0, tau) -> "PeekInstance":
        if isinstance(phi, str):
            phi = parse_formula(phi)
        return cls(tuple(x_e), tuple(x_a), phi, frozenset(v0), tau)

    @classmethod
    def from_json(cls, text: str) -> "PeekInstance":
        data = json.loads(text)
        return cls.make(data["xe"], data["xa"], data["phi"], data.get("v0", []),
                        data["tau"])

    @property
    def universe(self) -> Universe:
        return Universe(list(self.x_e) + list(self.x_a))


# ---------------------------------------------------------------------------
# Exact solver
# ---------------------------------------------------------------------------

def solve_peek(pe: PeekInstance) -> bool:
    """Does E have a winning strategy? Backward attractor over the game
    states (valuation, player-to-move); goal valuations are terminal wins."""
    uni = pe.universe
    n = 1 << uni.k
    goal = mod_oracle(pe.phi, uni)

    e_bits = [1 << uni.index(x) for x in pe.x_e]
    a_bits = [1 << uni.index(y) for y in pe.x_a]

    def moves(val, bits):
        yield val  # "at most one": changing nothing is a move
        for b in bits:
            yield val ^ b

    # win[turn][val]: E forces a win from (val, turn); goal states included
    win_e = goal.copy()
    win_a = goal.copy()
    changed = True
    while changed:
        changed = False
        for val in range(n):
            if not win_e[val] and any(win_a[m] for m in moves(val, e_bits)):
                win_e[val] = True
                changed = True
            if not win_a[val] and all(win_e[m] for m in moves(val, a_bits)):
                win_a[val] = True
                changed = True
    v0 = uni.valuation(sorted(pe.v0, key=uni.index))
    return bool(win_e[v0] if pe.tau == "E" else win_a[v0])


# ---------------------------------------------------------------------------
# DL-PA encoding
# ---------------------------------------------------------------------------

NOWIN = "nowin"
ELO = "elo"


def encode_peek(pe: PeekInstance) -> Tuple[int, Formula, Universe]:
    """The (V_PE, phi_PE) pair over X_E u X_A plus the fresh atoms
    nowin and elo. The boolean answer of model checking phi_PE at V_PE
    was claimed to coincide with E *lacking* a winning strategy."""
    taken = set(pe.x_e) | set(pe.x_a)
    if NOWIN in taken or ELO in taken:
        raise ValueError(f"{NOWIN!r}/{ELO!r} must not occur in the instance")
    uni = Universe(list(pe.x_e) + list(pe.x_a) + [NOWIN, ELO])

    move_e = Seq(Seq(Test(Atom(ELO)),
                     big_choice([Choice(Assign(x, False), Assign(x, True))
                                 for x in pe.x_e])),
                 Assign(ELO, False))
    move_a = Seq(Seq(Test(neg(Atom(ELO))),
                     big_choice([Choice(Assign(y, False), Assign(y, True))
                                 for y in pe.x_a])),
                 Assign(ELO, True))
    move = Seq(Choice(move_e, move_a),
               Choice(Seq(Test(pe.phi), Assign(NOWIN, False)),
                      Test(neg(pe.phi))))
    phi_pe = Box(Star(move),
                 implies(Atom(NOWIN),
                         conj([neg(pe.phi),
                               implies(Atom(ELO), Box(move, Atom(NOWIN))),
                               implies(neg(Atom(ELO)), dia(move, Atom(NOWIN)))])))
    true_vars = sorted(pe.v0, key=uni.index) + [NOWIN] + ([ELO] if pe.tau == "E" else [])
    return uni.valuation(true_vars), phi_pe, uni


@dataclass(frozen=True)
class RefutationReport:
    peek_answer: bool       # E has a winning strategy
    mc_answer: bool         # model checking (V_PE, phi_PE)
    verdict: str            # CONSISTENT or REFUTED

    def as_dict(self) -> dict:
        return {"peek": "yes" if self.peek_answer else "no",
                "mc": "yes" if self.mc_answer else "no",
                "verdict": self.verdict}


def refute_lemma(pe: PeekInstance) -> RefutationReport:
    """Check the claimed biconditional: game answer no <=> MC answer yes."""
    peek_answer = solve_peek(pe)
    v_pe, phi_pe, uni = encode_peek(pe)
    mc_answer = mc_oracle(v_pe, phi_pe, uni)
    consistent = (not peek_answer) == mc_answer
    return RefutationReport(peek_answer, mc_answer,
                            "CONSISTENT" if consistent else "REFUTED")


# ---------------------------------------------------------------------------
# SMV export
# ---------------------------------------------------------------------------

def _smv_bool(f: Formula, rename) -> str:
    """Propositional core formula -> SMV boolean expression."""
    if isinstance(f, Atom):
        return rename(f.var)
    if isinstance(f, Falsum):
        return "FALSE"
    if isinstance(f, Box):
        assert isinstance(f.prog, Test)
        cond = _smv_bool(f.prog.cond, rename)
        if isinstance(f.body, Falsum):
            return f"!({cond})"
        return f"({cond} -> {_smv_bool(f.body, rename)})"
    raise TypeError(f"not propositional: {f!r}")


def export_smv(pe: PeekInstance) -> str:
    """SMV model of the game with a CTLSPEC mirroring phi_PE."""

    def rename(var):
        return f"elo.{var}" if var in pe.x_e else f"abe.{var}"

    def player_module(name: str, short: str, variables: tuple) -> list:
        lines = [f"MODULE {name}(turn, Phi)", " VAR"]
        choices = ",".join(str(i + 1) for i in range(max(len(variables), 1)))
        lines.append(f"  vartochange-{short} : {{{choices}}};")
        for v in variables:
            lines.append(f"  {v} : boolean;")
        lines.append(" ASSIGN")
        lines.append(f"  init(vartochange-{short}) := {{{choices}}};")
        for v in variables:
            init = "TRUE" if v in pe.v0 else "FALSE"
            lines.append(f"  init({v}) := {init};")
        # the player picks the variable to change while waiting for its turn
        other = "a" if short == "e" else "e"
        lines.append(f"  next(vartochange-{short}) := (!Phi & turn = {other})"
                     f" ? {{{choices}}} : vartochange-{short};")
        for i, v in enumerate(variables):
            lines.append(f"  next({v}) := (!Phi & turn = {short} &"
                         f" vartochange-{short} = {i + 1}) ? {{TRUE, FALSE}} : {v};")
        lines.append("")
        return lines

    lines = []
    lines += player_module("eloise", "e", pe.x_e)
    lines += player_module("abelard", "a", pe.x_a)
    lines += [
        "MODULE main",
        " VAR",
        "  turn : {e,a};",
        "  nowin : boolean;",
        "  elo : eloise(turn, Phi);",
        "  abe : abelard(turn, Phi);",
        "",
        " DEFINE",
        f"  Phi := {_smv_bool(pe.phi, rename)};",
        f"  Tau := {pe.tau.lower()};",
        "",
        " ASSIGN",
        "  init(turn) := Tau;",
        "  init(nowin) := TRUE;",
        "  next(turn) :=",
        "   case",
        "    (turn = e) : a;",
        "    (turn = a) : e;",
        "   esac;",
        "  next(nowin) := Phi ? FALSE : nowin;",
        "",
        "CTLSPEC",
        "  AG (nowin -> (",
        "    !Phi &",
        "    ((turn = e) -> AX nowin) &",
        "    ((turn = a) -> EX nowin)",
        "  ))",
        "",
    ]
    return "\n".join(lines)
