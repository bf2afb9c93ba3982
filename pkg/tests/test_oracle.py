import random

import numpy as np
import pytest

from dlpa.oracle import (
    UniverseTooLarge, mc_oracle, mod_oracle, power_oracle, rel_oracle,
    sat_oracle,
)
from dlpa.randgen import random_program
from dlpa.syntax import Star, Universe, parse_formula, parse_program

U1 = Universe(["p"])
U2 = Universe(["p", "q"])


def pairs(m):
    return {(u, v) for u, v in zip(*np.nonzero(m))}


class TestRelOracle:
    def test_assign_true_k1(self):
        # +p relates every U to U u {p}
        assert pairs(rel_oracle(parse_program("+p"), U1)) == {(0, 1), (1, 1)}

    def test_test_k1(self):
        assert pairs(rel_oracle(parse_program("p?"), U1)) == {(1, 1)}

    def test_star_of_settings_is_superset_order(self):
        # (+p u +q)* relates exactly U to V with U subset of V
        m = rel_oracle(parse_program("(+p u +q)*"), U2)
        expected = {(u, v) for u in range(4) for v in range(4) if u & ~v == 0}
        assert pairs(m) == expected

    def test_seq_composes(self):
        m = rel_oracle(parse_program("+p ; -p"), U1)
        assert pairs(m) == {(0, 0), (1, 0)}

    def test_cap(self):
        big = Universe([f"v{i}" for i in range(6)])
        with pytest.raises(UniverseTooLarge):
            rel_oracle(parse_program("+v0"), big, cap=5)


class TestModOracle:
    def test_atom(self):
        assert list(mod_oracle(parse_formula("p"), U1)) == [False, True]

    def test_false_is_empty(self):
        assert not mod_oracle(parse_formula("false"), U1).any()

    def test_box_assign(self):
        assert list(mod_oracle(parse_formula("[+p]p"), U1)) == [True, True]


class TestMcSat:
    def test_mc_yes(self):
        assert mc_oracle(0, parse_formula("[+p]p"), U1)

    def test_mc_no(self):
        assert not mc_oracle(0, parse_formula("p"), U1)

    def test_sat_false(self):
        assert not sat_oracle(parse_formula("false"), U1)

    def test_sat_diamond(self):
        assert sat_oracle(parse_formula("<+p>p"))

    def test_sat_contradiction(self):
        assert not sat_oracle(parse_formula("p & ~p"))

    def test_mc_stable_under_universe_enlargement(self):
        f = parse_formula("[(+p)*]p -> q")
        small = Universe(["p", "q"])
        big = Universe(["p", "q", "r", "s"])
        for val in range(4):
            assert mc_oracle(val, f, small) == mc_oracle(val, f, big)


class TestPowerOracle:
    def test_zero_is_identity(self):
        m = power_oracle(parse_program("+p"), 0, U1)
        assert pairs(m) == {(0, 0), (1, 1)}

    def test_one_is_rel(self):
        a = parse_program("+p ; -q")
        assert np.array_equal(power_oracle(a, 1, U2), rel_oracle(a, U2))

    def test_square_of_assign(self):
        # +p composed with itself: same relation (idempotent effect)
        assert pairs(power_oracle(parse_program("+p"), 2, U1)) == {(0, 1), (1, 1)}


class TestStarProperties:
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_star_truncation(self, k):
        # ||a*|| equals the union of ||a^d|| for d < 2^k
        rng = random.Random(k)
        uni = Universe(list("pqr"[:k]))
        n = 1 << k
        for _ in range(30):
            a = random_program(rng, k, 6)
            star = rel_oracle(Star(a), uni)
            union = np.zeros_like(star)
            for d in range(n):
                union |= power_oracle(a, d, uni)
            assert np.array_equal(star, union)

    def test_halving(self):
        # even N: a^N = a^(N/2) ; a^(N/2)
        rng = random.Random(9)
        uni = Universe(["p", "q", "r"])
        from dlpa.kernels import compose
        for _ in range(30):
            a = random_program(rng, 3, 6)
            for n_exp in (2, 4, 6):
                half = power_oracle(a, n_exp // 2, uni)
                assert np.array_equal(power_oracle(a, n_exp, uni),
                                      compose(half, half))

    def test_star_fixpoint_stabilizes_quickly(self):
        # closure by squaring: at most k squarings change anything
        rng = random.Random(5)
        from dlpa.kernels import compose, identity
        uni = Universe(["p", "q", "r"])
        for _ in range(20):
            a = random_program(rng, 3, 6)
            m = rel_oracle(a, uni) | identity(8)
            for _ in range(3):  # k = 3
                m = compose(m, m)
            assert np.array_equal(compose(m, m), m)
