"""Random core ASTs for the comparison harness and the test suite.

Shapes are drawn uniformly within a node budget; star probability is
damped (0.15 by default) because undamped stars dominate the exponential
engine's runtime without adding coverage.
"""

from __future__ import annotations

import random
from typing import Optional

from . import dclpc
from .syntax import (
    Assign, Atom, Box, Choice, FALSE, Formula, Program, Seq, Star, Test,
)

STAR_PROB = 0.15

VAR_POOL = "pqrstuvw".replace("u", "")  # `u` is reserved by the grammar


def _var(rng: random.Random, k: int) -> str:
    return VAR_POOL[rng.randrange(k)]


def random_program(rng: random.Random, k: int, budget: int,
                   allow_star: bool = True) -> Program:
    """A program with node count <= budget (budget >= 1).

    At most one star per AST: nested stars make the divide-and-conquer
    engine's worst case intractable at this scale.
    """
    if budget <= 1:
        return Assign(_var(rng, k), rng.random() < 0.5)
    roll = rng.random()
    if roll < STAR_PROB and allow_star:
        return Star(random_program(rng, k, budget - 1, allow_star=False))
    if roll < 0.45 and budget >= 2:
        return Test(random_formula(rng, k, budget - 1, allow_star))
    if roll < 0.95 and budget >= 3:
        split = rng.randint(1, budget - 2)
        ctor = Seq if rng.random() < 0.5 else Choice
        left = random_program(rng, k, split, allow_star)
        star_used = allow_star and _has_star(left)
        return ctor(left, random_program(rng, k, budget - 1 - split,
                                         allow_star and not star_used))
    return Assign(_var(rng, k), rng.random() < 0.5)


def random_formula(rng: random.Random, k: int, budget: int,
                   allow_star: bool = True) -> Formula:
    """A core formula with node count <= budget (budget >= 1)."""
    if budget <= 2:
        return FALSE if rng.random() < 0.2 else Atom(_var(rng, k))
    if rng.random() < 0.7:
        split = rng.randint(1, budget - 2)
        prog = random_program(rng, k, split, allow_star)
        star_used = allow_star and _has_star(prog)
        return Box(prog, random_formula(rng, k, budget - 1 - split,
                                        allow_star and not star_used))
    return FALSE if rng.random() < 0.2 else Atom(_var(rng, k))


def _has_star(node) -> bool:
    if isinstance(node, Star):
        return True
    if isinstance(node, (Seq, Choice)):
        return _has_star(node.left) or _has_star(node.right)
    if isinstance(node, Test):
        return _has_star(node.cond)
    if isinstance(node, Box):
        return _has_star(node.prog) or _has_star(node.body)
    return False


AGENT_POOL = ("i", "j", "m")


def random_dclpc_formula(rng: random.Random, k: int, n_agents: int,
                         budget: int) -> "dclpc.DclpcFormula":
    agents = AGENT_POOL[:n_agents]
    if budget <= 1:
        return dclpc.DFALSE if rng.random() < 0.2 else dclpc.DAtom(_var(rng, k))
    roll = rng.random()
    if roll < 0.2:
        return dclpc.Not(random_dclpc_formula(rng, k, n_agents, budget - 1))
    if roll < 0.45:
        return dclpc.Ability(rng.choice(agents),
                             random_dclpc_formula(rng, k, n_agents, budget - 1))
    if roll < 0.8 and budget >= 3:
        split = rng.randint(1, budget - 2)
        return dclpc.Dia(random_dclpc_program(rng, k, n_agents, split),
                         random_dclpc_formula(rng, k, n_agents, budget - 1 - split))
    return dclpc.DFALSE if rng.random() < 0.2 else dclpc.DAtom(_var(rng, k))


def random_dclpc_program(rng: random.Random, k: int, n_agents: int,
                         budget: int) -> "dclpc.DclpcProgram":
    agents = AGENT_POOL[:n_agents]
    if budget <= 1:
        return dclpc.Transfer(rng.choice(agents), _var(rng, k), rng.choice(agents))
    roll = rng.random()
    if roll < STAR_PROB:
        return Star(random_dclpc_program(rng, k, n_agents, budget - 1))
    if roll < 0.4 and budget >= 2:
        return Test(random_dclpc_formula(rng, k, n_agents, budget - 1))
    if roll < 0.9 and budget >= 3:
        split = rng.randint(1, budget - 2)
        ctor = Seq if rng.random() < 0.5 else Choice
        return ctor(random_dclpc_program(rng, k, n_agents, split),
                    random_dclpc_program(rng, k, n_agents, budget - 1 - split))
    return dclpc.Transfer(rng.choice(agents), _var(rng, k), rng.choice(agents))
