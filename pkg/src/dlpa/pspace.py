"""Polynomial-space deterministic model checking for DL-PA.

Three mutually recursive Boolean functions decide relation membership
(REL), formula truth (MOD) and membership in the d-th iterate of a
program (ITE). Each takes a bit b selecting whether it certifies the
positive (b=1) or the negative (b=0) answer; loops over the 2^k
valuations replace set-valued intermediates, so only the recursion stack
grows and its depth stays linear in len * k.

The price is exponential running time, hence the wall-clock timeout.
Recursion depth is instrumented so the documented nesting bounds
(f_REL <= 2*len*k, f_MOD <= 2*len*k, f_ITE <= f_REL + 2k - 1) can be
checked on every run.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from typing import Optional, Tuple

from .syntax import (
    Assign, Atom, Box, Choice, Falsum, Formula, Program, Seq, Star, Test,
    Universe, free_vars, universe_of,
)

DEFAULT_TIMEOUT = 60.0

_TIME_CHECK_MASK = 0x3FF  # consult the clock every 1024 calls


class EngineTimeout(Exception):
    """The wall-clock budget ran out mid-recursion."""


@dataclass
class DepthStats:
    """Maximal number of stacked REL/MOD/ITE frames seen during one run."""

    max_nesting_rel: int = 0
    max_nesting_mod: int = 0
    max_nesting_ite: int = 0

    @property
    def max_nesting(self) -> int:
        return max(self.max_nesting_rel, self.max_nesting_mod, self.max_nesting_ite)


class PspaceEngine:
    """One engine instance per universe; each call owns private stats."""

    def __init__(self, universe: Universe, timeout: Optional[float] = DEFAULT_TIMEOUT):
        self.universe = universe
        self.k = universe.k
        self.n = 1 << universe.k
        self.timeout = timeout
        self._deadline = None
        self._depth = 0
        self._calls = 0
        self.stats = DepthStats()
        # lookup: variable name -> bitmask
        self._bit = {name: 1 << i for i, name in enumerate(universe.names)}

    # -- bookkeeping

    def _begin(self) -> None:
        self.stats = DepthStats()
        self._depth = 0
        self._calls = 0
        if self.timeout is not None:
            self._deadline = time.monotonic() + self.timeout
        depth_need = 2 * 64 * max(self.k, 1) + 100  # generous for desk-scale input
        if sys.getrecursionlimit() < depth_need:
            sys.setrecursionlimit(depth_need)

    def _tick(self) -> None:
        self._calls += 1
        if (self._calls & _TIME_CHECK_MASK) == 0 and self._deadline is not None:
            if time.monotonic() > self._deadline:
                raise EngineTimeout(f"timed out after {self.timeout}s")

    # -- the three functions; valuations are k-bit ints

    def rel(self, b: int, val: int, val2: int, alpha: Program) -> bool:
        depth = self._depth + 1
        self._depth = depth
        stats = self.stats
        if depth > stats.max_nesting_rel:
            stats.max_nesting_rel = depth
        self._tick()
        try:
            t = type(alpha)
            if t is Assign:
                bit = self._bit[alpha.var]
                target = (val | bit) if alpha.value else (val & ~bit)
                return (val2 == target) if b else (val2 != target)
            if t is Seq:
                absorbing = b == 1
                left, right, n = alpha.left, alpha.right, self.n
                w = 0
                while True:
                    if b:
                        ok = self.rel(1, val, w, left) and self.rel(1, w, val2, right)
                    else:
                        ok = self.rel(0, val, w, left) or self.rel(0, w, val2, right)
                    w = (w + 1) % n
                    if ok == absorbing or w == 0:
                        return ok
            if t is Choice:
                if b:
                    return (self.rel(1, val, val2, alpha.left)
                            or self.rel(1, val, val2, alpha.right))
                return (self.rel(0, val, val2, alpha.left)
                        and self.rel(0, val, val2, alpha.right))
            if t is Star:
                absorbing = b == 1
                body, n = alpha.body, self.n
                d = 0
                while True:
                    ok = self.ite(b, val, val2, body, d)
                    d = (d + 1) % n
                    if ok == absorbing or d == 0:
                        return ok
            if t is Test:
                if b:
                    return val == val2 and self.mod(1, val2, alpha.cond)
                return val != val2 or self.mod(0, val2, alpha.cond)
            raise TypeError(f"not a program: {alpha!r}")
        finally:
            self._depth = depth - 1

    def mod(self, b: int, val: int, phi: Formula) -> bool:
        depth = self._depth + 1
        self._depth = depth
        stats = self.stats
        if depth > stats.max_nesting_mod:
            stats.max_nesting_mod = depth
        self._tick()
        try:
            t = type(phi)
            if t is Atom:
                holds = bool(val & self._bit[phi.var])
                return holds if b else not holds
            if t is Falsum:
                return b == 0
            if t is Box:
                absorbing = b == 0
                prog, body, n = phi.prog, phi.body, self.n
                v = 0
                while True:
                    if b:
                        ok = self.rel(0, val, v, prog) or self.mod(1, v, body)
                    else:
                        ok = self.rel(1, val, v, prog) and self.mod(0, v, body)
                    v = (v + 1) % n
                    if ok == absorbing or v == 0:
                        return ok
            raise TypeError(f"not a formula: {phi!r}")
        finally:
            self._depth = depth - 1

    def ite(self, b: int, val: int, val2: int, alpha: Program, d: int) -> bool:
        depth = self._depth + 1
        self._depth = depth
        stats = self.stats
        if depth > stats.max_nesting_ite:
            stats.max_nesting_ite = depth
        self._tick()
        try:
            if d == 0:
                return (val == val2) if b else (val != val2)
            absorbing = b == 1
            n = self.n
            w = 0
            if d & 1:
                e = d - 1
                while True:
                    if b:
                        ok = self.rel(1, val, w, alpha) and self.ite(1, w, val2, alpha, e)
                    else:
                        ok = self.rel(0, val, w, alpha) or self.ite(0, w, val2, alpha, e)
                    w = (w + 1) % n
                    if ok == absorbing or w == 0:
                        return ok
            half = d >> 1
            while True:
                if b:
                    ok = self.ite(1, val, w, alpha, half) and self.ite(1, w, val2, alpha, half)
                else:
                    ok = self.ite(0, val, w, alpha, half) or self.ite(0, w, val2, alpha, half)
                w = (w + 1) % n
                if ok == absorbing or w == 0:
                    return ok
        finally:
            self._depth = depth - 1

    # -- top-level entry points

    def run_rel(self, b, val, val2, alpha) -> bool:
        self._begin()
        return self.rel(b, val, val2, alpha)

    def run_mod(self, b, val, phi) -> bool:
        self._begin()
        return self.mod(b, val, phi)

    def run_ite(self, b, val, val2, alpha, d) -> bool:
        self._begin()
        return self.ite(b, val, val2, alpha, d)


def mc_pspace(valuation: int, phi: Formula, universe: Universe,
              timeout: Optional[float] = DEFAULT_TIMEOUT) -> Tuple[bool, DepthStats]:
    """Model-check via MOD(1, U, phi); returns the verdict and depth stats."""
    engine = PspaceEngine(universe, timeout)
    verdict = engine.run_mod(1, valuation, phi)
    return verdict, engine.stats


def sat_pspace(phi: Formula, universe: Optional[Universe] = None,
               timeout: Optional[float] = DEFAULT_TIMEOUT) -> bool:
    """Deterministic sweep of all valuations in place of the SAT guess."""
    if universe is None:
        universe = universe_of(phi)
    if not free_vars(phi) <= set(universe.names):
        raise ValueError("formula mentions variables outside the universe")
    engine = PspaceEngine(universe, timeout)
    for val in range(1 << universe.k):
        if engine.run_mod(1, val, phi):
            return True
    return False
