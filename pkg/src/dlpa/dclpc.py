"""DCL-PC: coalition logic of propositional control and delegation.

States are pairs (V, xi) of a valuation and a total control function
mapping each variable to the one agent owning it. Atomic programs
transfer control between agents; the ability modality dia(i) quantifies
over the valuations agent i can reach by rewriting its own variables.

Two routes to model checking are provided: a direct brute-force
evaluation over the explicit (V, xi) state space, and a reduction into
DL-PA using one control atom c_<agent>_<var> per (agent, variable) pair.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from . import kernels
from .syntax import (
    Assign, Atom, Box, Choice, FALSE, Falsum, Formula, Parser, ParseError,
    Program, Seq, Star, Test, Universe, big_choice, dia as dlpa_dia,
    neg as dlpa_neg,
)

# ---------------------------------------------------------------------------
# AST (Seq/Choice/Star/Test are shared with DL-PA; their children here are
# DCL-PC nodes)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Transfer:
    frm: str
    var: str
    to: str


@dataclass(frozen=True)
class DAtom:
    var: str


@dataclass(frozen=True)
class DFalsum:
    pass


@dataclass(frozen=True)
class Not:
    body: "DclpcFormula"


@dataclass(frozen=True)
class Ability:
    agent: str
    body: "DclpcFormula"


@dataclass(frozen=True)
class Dia:
    prog: "DclpcProgram"
    body: "DclpcFormula"


DclpcProgram = Union[Transfer, Seq, Choice, Star, Test]
DclpcFormula = Union[DAtom, DFalsum, Not, Ability, Dia]

DFALSE = DFalsum()


def dclpc_vars(node) -> list:
    """Variables in first-occurrence order."""
    out, seen = [], set()

    def add(v):
        if v not in seen:
            seen.add(v)
            out.append(v)

    def walk(n):
        if isinstance(n, (DAtom,)):
            add(n.var)
        elif isinstance(n, Transfer):
            add(n.var)
        elif isinstance(n, (Seq, Choice)):
            walk(n.left)
            walk(n.right)
        elif isinstance(n, Star):
            walk(n.body)
        elif isinstance(n, Test):
            walk(n.cond)
        elif isinstance(n, Not):
            walk(n.body)
        elif isinstance(n, Ability):
            walk(n.body)
        elif isinstance(n, Dia):
            walk(n.prog)
            walk(n.body)

    walk(node)
    return out


def dclpc_agents(node) -> list:
    """Agents in first-occurrence order."""
    out, seen = [], set()

    def add(a):
        if a not in seen:
            seen.add(a)
            out.append(a)

    def walk(n):
        if isinstance(n, Transfer):
            add(n.frm)
            add(n.to)
        elif isinstance(n, (Seq, Choice)):
            walk(n.left)
            walk(n.right)
        elif isinstance(n, Star):
            walk(n.body)
        elif isinstance(n, Test):
            walk(n.cond)
        elif isinstance(n, Not):
            walk(n.body)
        elif isinstance(n, Ability):
            add(n.agent)
            walk(n.body)
        elif isinstance(n, Dia):
            walk(n.prog)
            walk(n.body)

    walk(node)
    return out


def dclpc_len(node) -> int:
    if isinstance(node, (DAtom, DFalsum, Transfer)):
        return 1
    if isinstance(node, (Seq, Choice)):
        return 1 + dclpc_len(node.left) + dclpc_len(node.right)
    if isinstance(node, Star):
        return 1 + dclpc_len(node.body)
    if isinstance(node, Test):
        return 1 + dclpc_len(node.cond)
    if isinstance(node, Not):
        return 1 + dclpc_len(node.body)
    if isinstance(node, Ability):
        return 1 + dclpc_len(node.body)
    if isinstance(node, Dia):
        return 1 + dclpc_len(node.prog) + dclpc_len(node.body)
    raise TypeError(f"not a DCL-PC node: {node!r}")


# ---------------------------------------------------------------------------
# Parser: the DL-PA surface grammar plus transfer(i,p,j) and dia(i) f
# ---------------------------------------------------------------------------

class DclpcParser(Parser):
    """Negation stays primitive here: the diamond-only core cannot express
    it, so the formula core is Atom | false | Not | dia(i) | <prog>."""

    def mk_atom(self, name):
        return DAtom(name)

    def mk_false(self):
        return DFALSE

    def mk_true(self):
        return Not(DFALSE)

    def mk_not(self, f):
        return Not(f)

    def mk_and(self, a, b):
        return Dia(Test(a), b)

    def mk_or(self, a, b):
        return Not(Dia(Test(Not(a)), Not(b)))

    def mk_implies(self, a, b):
        return Not(Dia(Test(a), Not(b)))

    def mk_box(self, prog, f):
        return Not(Dia(prog, Not(f)))

    def mk_dia(self, prog, f):
        return Dia(prog, f)

    def formula_unary(self):
        t = self.peek()
        if t.kind == "ident" and t.text == "dia":
            self.next()
            self.expect("(")
            agent = self.next()
            if agent.kind != "ident":
                raise ParseError("expected an agent name", agent.pos)
            self.expect(")")
            return Ability(agent.text, self.formula_unary())
        return super().formula_unary()


# The shared tokenizer has no comma token, so transfer(i,p,j) is rewritten
# into a placeholder identifier before parsing and substituted back in
# program-atom position. transfer(i,p,j) reads "agent i hands p to agent j".
_TRANSFER_RE = re.compile(
    r"transfer\s*\(\s*([a-zA-Z][a-zA-Z0-9_]*)\s*,\s*"
    r"([a-zA-Z][a-zA-Z0-9_]*)\s*,\s*([a-zA-Z][a-zA-Z0-9_]*)\s*\)"
)


class _PlaceholderParser(DclpcParser):
    def __init__(self, text, placeholders):
        super().__init__(text)
        self._placeholders = placeholders

    def program_atom(self):
        t = self.peek()
        if t.kind == "ident" and t.text in self._placeholders:
            self.next()
            return self._placeholders[t.text]
        return super().program_atom()


def parse_dclpc_formula(text: str) -> DclpcFormula:
    placeholders = {}

    def repl(m):
        name = f"xfer{len(placeholders)}_"
        placeholders[name] = Transfer(m.group(1), m.group(2), m.group(3))
        return name

    parser = _PlaceholderParser(_TRANSFER_RE.sub(repl, text), placeholders)
    f = parser.formula()
    parser.expect_end()
    return f


# ---------------------------------------------------------------------------
# Models and direct semantics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DclpcModel:
    universe: Universe
    agents: tuple
    valuation: int              # bitmask over universe
    control: tuple              # agent index per variable, len == k

    @classmethod
    def make(cls, variables: Sequence[str], agents: Sequence[str],
             true_vars: Sequence[str], control: dict) -> "DclpcModel":
        if not agents:
            raise ValueError("agent set must be nonempty")
        universe = Universe(variables)
        agents = tuple(dict.fromkeys(agents))
        missing = [v for v in universe.names if v not in control]
        if missing:
            raise ValueError(f"control map not total: missing {missing}")
        agent_index = {a: i for i, a in enumerate(agents)}
        ctrl = []
        for v in universe.names:
            owner = control[v]
            if owner not in agent_index:
                raise ValueError(f"unknown agent {owner!r} controls {v!r}")
            ctrl.append(agent_index[owner])
        return cls(universe, agents, universe.valuation(true_vars), tuple(ctrl))

    @classmethod
    def from_json(cls, text: str) -> "DclpcModel":
        data = json.loads(text)
        return cls.make(data["vars"], data["agents"], data.get("true", []),
                        data["control"])


class DclpcSpace:
    """Explicit (V, xi) state space over a universe and an agent list."""

    def __init__(self, universe: Universe, agents: Sequence[str]):
        if not agents:
            raise ValueError("agent set must be nonempty")
        self.universe = universe
        self.agents = tuple(agents)
        self.k = universe.k
        self.n_agents = len(self.agents)
        self.n_vals = 1 << self.k
        self.n_ctrl = self.n_agents ** self.k
        self.size = self.n_vals * self.n_ctrl

    def index(self, valuation: int, control: Tuple[int, ...]) -> int:
        c = 0
        for owner in reversed(control):
            c = c * self.n_agents + owner
        return valuation * self.n_ctrl + c

    def decode(self, state: int) -> Tuple[int, Tuple[int, ...]]:
        valuation, c = divmod(state, self.n_ctrl)
        control = []
        for _ in range(self.k):
            c, owner = divmod(c, self.n_agents)
            control.append(owner)
        return valuation, tuple(control)

    def eval_program(self, pi: DclpcProgram) -> np.ndarray:
        m = np.zeros((self.size, self.size), dtype=bool)
        if isinstance(pi, Transfer):
            i = self.agents.index(pi.frm)
            j = self.agents.index(pi.to)
            p = self.universe.index(pi.var)
            for s in range(self.size):
                val, ctrl = self.decode(s)
                if ctrl[p] == i:
                    ctrl2 = ctrl[:p] + (j,) + ctrl[p + 1:]
                    m[s, self.index(val, ctrl2)] = True
            return m
        if isinstance(pi, Seq):
            return kernels.compose(self.eval_program(pi.left), self.eval_program(pi.right))
        if isinstance(pi, Choice):
            return self.eval_program(pi.left) | self.eval_program(pi.right)
        if isinstance(pi, Star):
            return kernels.star_closure(self.eval_program(pi.body))
        if isinstance(pi, Test):
            sat = self.eval_formula(pi.cond)
            idx = np.flatnonzero(sat)
            m[idx, idx] = True
            return m
        raise TypeError(f"not a DCL-PC program: {pi!r}")

    def eval_formula(self, phi: DclpcFormula) -> np.ndarray:
        if isinstance(phi, DAtom):
            bit = 1 << self.universe.index(phi.var)
            return np.array([(self.decode(s)[0] & bit) > 0 for s in range(self.size)])
        if isinstance(phi, DFalsum):
            return np.zeros(self.size, dtype=bool)
        if isinstance(phi, Not):
            return ~self.eval_formula(phi.body)
        if isinstance(phi, Ability):
            i = self.agents.index(phi.agent)
            body = self.eval_formula(phi.body)
            out = np.zeros(self.size, dtype=bool)
            for s in range(self.size):
                val, ctrl = self.decode(s)
                own_mask = 0
                for p, owner in enumerate(ctrl):
                    if owner == i:
                        own_mask |= 1 << p
                # sweep the valuations reachable by rewriting i's variables
                sub = own_mask
                while True:
                    u = (val & ~own_mask) | sub
                    if body[self.index(u, ctrl)]:
                        out[s] = True
                        break
                    if sub == 0:
                        break
                    sub = (sub - 1) & own_mask
            return out
        if isinstance(phi, Dia):
            rel = self.eval_program(phi.prog)
            body = self.eval_formula(phi.body)
            return (rel & body[None, :]).any(axis=1)
        raise TypeError(f"not a DCL-PC formula: {phi!r}")


def mc_dclpc(model: DclpcModel, phi: DclpcFormula) -> bool:
    missing = [v for v in dclpc_vars(phi) if v not in model.universe]
    if missing:
        raise ValueError(f"formula mentions variables outside the model: {missing}")
    missing_agents = [a for a in dclpc_agents(phi) if a not in model.agents]
    if missing_agents:
        raise ValueError(f"formula mentions unknown agents: {missing_agents}")
    space = DclpcSpace(model.universe, model.agents)
    sat = space.eval_formula(phi)
    return bool(sat[space.index(model.valuation, model.control)])


def sat_dclpc(phi: DclpcFormula, universe: Optional[Universe] = None,
              agents: Optional[Sequence[str]] = None) -> bool:
    if universe is None:
        universe = Universe(dclpc_vars(phi))
    if agents is None:
        agents = dclpc_agents(phi) or ["i"]
    space = DclpcSpace(universe, agents)
    return bool(space.eval_formula(phi).any())


# ---------------------------------------------------------------------------
# Reduction into DL-PA
# ---------------------------------------------------------------------------

def control_atom(agent: str, var: str) -> str:
    return f"c_{agent}_{var}"


def reduction_universe(universe: Universe, agents: Sequence[str]) -> Universe:
    names = list(universe.names)
    for p in universe.names:
        for i in agents:
            c = control_atom(i, p)
            if c in universe:
                raise ValueError(f"control atom {c!r} collides with a variable")
            names.append(c)
    return Universe(names)


def reduce_formula(phi: DclpcFormula, universe: Optional[Universe] = None,
                   agents: Optional[Sequence[str]] = None) -> Tuple[Formula, Universe]:
    """DL-PA formula equivalent to `phi` over valuations encoding (V, xi).

    Control atom c_i_p true encodes xi(p) = i; transfers move the atom,
    the ability modality becomes a starred union of guarded flips of the
    owned variables.
    """
    if universe is None:
        universe = Universe(dclpc_vars(phi))
    if agents is None:
        agents = dclpc_agents(phi) or ["i"]
    agents = tuple(agents)
    target = reduction_universe(universe, agents)

    def rf(f: DclpcFormula) -> Formula:
        if isinstance(f, DAtom):
            return Atom(f.var)
        if isinstance(f, DFalsum):
            return FALSE
        if isinstance(f, Not):
            return dlpa_neg(rf(f.body))
        if isinstance(f, Ability):
            flips = [
                Seq(Test(Atom(control_atom(f.agent, p))),
                    Choice(Assign(p, True), Assign(p, False)))
                for p in universe.names
            ]
            return dlpa_dia(Star(big_choice(flips)), rf(f.body))
        if isinstance(f, Dia):
            return dlpa_dia(rp(f.prog), rf(f.body))
        raise TypeError(f"not a DCL-PC formula: {f!r}")

    def rp(pi: DclpcProgram) -> Program:
        if isinstance(pi, Transfer):
            c_from = control_atom(pi.frm, pi.var)
            c_to = control_atom(pi.to, pi.var)
            return Seq(Seq(Test(Atom(c_from)), Assign(c_from, False)),
                       Assign(c_to, True))
        if isinstance(pi, Seq):
            return Seq(rp(pi.left), rp(pi.right))
        if isinstance(pi, Choice):
            return Choice(rp(pi.left), rp(pi.right))
        if isinstance(pi, Star):
            return Star(rp(pi.body))
        if isinstance(pi, Test):
            return Test(rf(pi.cond))
        raise TypeError(f"not a DCL-PC program: {pi!r}")

    return rf(phi), target


def reduce_model(model: DclpcModel) -> Tuple[int, Universe]:
    """Valuation encoding (V, xi): V's bits plus one control atom per var."""
    target = reduction_universe(model.universe, model.agents)
    bits = model.valuation
    for p_idx, owner in enumerate(model.control):
        c = control_atom(model.agents[owner], model.universe.names[p_idx])
        bits |= 1 << target.index(c)
    return bits, target
