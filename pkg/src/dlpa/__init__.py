"""DL-PA / DCL-PC model checking toolkit.

Two DL-PA engines (a brute-force explicit-state oracle and a
polynomial-space recursive engine), DCL-PC semantics with a reduction
into DL-PA, and Peek game tooling including the encoding counterexample.
"""

from .oracle import mc_oracle, mod_oracle, power_oracle, rel_oracle, sat_oracle
from .pspace import DepthStats, EngineTimeout, PspaceEngine, mc_pspace, sat_pspace
from .syntax import (
    Assign, Atom, Box, Choice, FALSE, Falsum, ParseError, Seq, Star, Test,
    Universe, UnknownVariable, node_len, parse_formula, parse_program,
    print_formula, print_program, universe_of,
)

__all__ = [
    "Assign", "Atom", "Box", "Choice", "FALSE", "Falsum", "Seq", "Star",
    "Test", "Universe", "ParseError", "UnknownVariable",
    "parse_formula", "parse_program", "print_formula", "print_program",
    "node_len", "universe_of",
    "rel_oracle", "mod_oracle", "mc_oracle", "sat_oracle", "power_oracle",
    "PspaceEngine", "DepthStats", "EngineTimeout", "mc_pspace", "sat_pspace",
]

__version__ = "0.1.0"
