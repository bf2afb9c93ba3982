"""Brute-force explicit-state semantics for DL-PA.

Programs denote relations over all 2^k valuations (dense boolean
matrices), formulas denote sets of valuations (boolean vectors). This is
the reference engine: slow in space, unarguably correct, and used to
validate the polynomial-space engine.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .syntax import (
    Assign, Atom, Box, Choice, Falsum, Formula, Program, Seq, Star, Test,
    Universe, free_vars, universe_of,
)

# Dense 2^k x 2^k matrices; beyond this the representation is hopeless.
MAX_K = 20


class UniverseTooLarge(ValueError):
    pass


def _check_k(universe: Universe, cap: int) -> int:
    if universe.k > cap:
        raise UniverseTooLarge(f"universe has {universe.k} variables, cap is {cap}")
    return universe.k


def rel_oracle(alpha: Program, universe: Universe, cap: int = MAX_K) -> np.ndarray:
    """The relation of `alpha` as a 2^k x 2^k boolean matrix."""
    k = _check_k(universe, cap)
    n = 1 << k
    if isinstance(alpha, Assign):
        bit = 1 << universe.index(alpha.var)
        rows = np.arange(n)
        cols = rows | bit if alpha.value else rows & ~bit
        m = np.zeros((n, n), dtype=bool)
        m[rows, cols] = True
        return m
    if isinstance(alpha, Seq):
        return kernels.compose(rel_oracle(alpha.left, universe, cap),
                               rel_oracle(alpha.right, universe, cap))
    if isinstance(alpha, Choice):
        return rel_oracle(alpha.left, universe, cap) | rel_oracle(alpha.right, universe, cap)
    if isinstance(alpha, Star):
        return kernels.star_closure(rel_oracle(alpha.body, universe, cap))
    if isinstance(alpha, Test):
        m = np.zeros((n, n), dtype=bool)
        sat = mod_oracle(alpha.cond, universe, cap)
        idx = np.flatnonzero(sat)
        m[idx, idx] = True
        return m
    raise TypeError(f"not a program: {alpha!r}")


def mod_oracle(phi: Formula, universe: Universe, cap: int = MAX_K) -> np.ndarray:
    """The set of valuations satisfying `phi` as a 2^k boolean vector."""
    k = _check_k(universe, cap)
    n = 1 << k
    if isinstance(phi, Atom):
        bit = 1 << universe.index(phi.var)
        return (np.arange(n) & bit) > 0
    if isinstance(phi, Falsum):
        return np.zeros(n, dtype=bool)
    if isinstance(phi, Box):
        rel = rel_oracle(phi.prog, universe, cap)
        body = mod_oracle(phi.body, universe, cap)
        # U satisfies [a]b iff no successor of U falsifies b
        return ~(rel & ~body[None, :]).any(axis=1)
    raise TypeError(f"not a formula: {phi!r}")


def mc_oracle(valuation: int, phi: Formula, universe: Universe, cap: int = MAX_K) -> bool:
    return bool(mod_oracle(phi, universe, cap)[valuation])


def sat_oracle(phi: Formula, universe: Universe | None = None, cap: int = MAX_K) -> bool:
    if universe is None:
        universe = universe_of(phi)
    if not free_vars(phi) <= set(universe.names):
        raise ValueError("formula mentions variables outside the universe")
    return bool(mod_oracle(phi, universe, cap).any())


def power_oracle(alpha: Program, d: int, universe: Universe, cap: int = MAX_K) -> np.ndarray:
    """Relation of alpha composed with itself d times (identity at d=0)."""
    return kernels.matrix_power(rel_oracle(alpha, universe, cap), d)
