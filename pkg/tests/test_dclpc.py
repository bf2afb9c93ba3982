import itertools
import random

import numpy as np
import pytest

from dlpa.dclpc import (
    Ability, DAtom, DFALSE, DclpcModel, DclpcSpace, Dia, Not, Transfer,
    control_atom, dclpc_agents, dclpc_len, dclpc_vars, mc_dclpc,
    parse_dclpc_formula, reduce_formula, reduce_model, sat_dclpc,
)
from dlpa.oracle import mc_oracle, rel_oracle
from dlpa.randgen import random_dclpc_formula
from dlpa.syntax import Choice, Seq, Star, Test, Universe, node_len


def space(variables, agents):
    return DclpcSpace(Universe(variables), agents)


def all_models(variables, agents):
    k = len(variables)
    for bits in range(1 << k):
        for ctrl in itertools.product(agents, repeat=k):
            yield DclpcModel.make(variables, agents,
                                  [v for i, v in enumerate(variables) if bits >> i & 1],
                                  dict(zip(variables, ctrl)))


class TestParser:
    def test_ability(self):
        assert parse_dclpc_formula("dia(i) p") == Ability("i", DAtom("p"))

    def test_transfer_diamond(self):
        f = parse_dclpc_formula("<transfer(i,p,j)>true")
        assert f == Dia(Transfer("i", "p", "j"), Not(DFALSE))

    def test_negation_stays_primitive(self):
        assert parse_dclpc_formula("~p") == Not(DAtom("p"))

    def test_vars_and_agents(self):
        f = parse_dclpc_formula("dia(i) (p & <transfer(j,q,m)>q)")
        assert dclpc_vars(f) == ["p", "q"]
        assert dclpc_agents(f) == ["i", "j", "m"]


class TestProgramSemantics:
    def test_transfer_moves_control_only(self):
        sp = space(["p"], ["i", "j"])
        m = sp.eval_program(Transfer("i", "p", "j"))
        for s, t in zip(*np.nonzero(m)):
            (v1, c1), (v2, c2) = sp.decode(int(s)), sp.decode(int(t))
            assert v1 == v2 and c1 == (0,) and c2 == (1,)
        assert m.sum() == 2  # one pair per valuation of p

    def test_self_transfer_is_identity_on_owned(self):
        sp = space(["p"], ["i", "j"])
        m = sp.eval_program(Transfer("i", "p", "i"))
        for s in range(sp.size):
            _, ctrl = sp.decode(s)
            assert m[s].sum() == (1 if ctrl[0] == 0 else 0)
            if ctrl[0] == 0:
                assert m[s, s]

    def test_star_of_back_and_forth(self):
        # (i~>p~>j u j~>p~>i)* relates states equal except control of p,
        # provided p is owned by i or j
        sp = space(["p", "q"], ["i", "j", "m"])
        prog = Star(Choice(Transfer("i", "p", "j"), Transfer("j", "p", "i")))
        m = sp.eval_program(prog)
        for s in range(sp.size):
            v1, c1 = sp.decode(s)
            for t in range(sp.size):
                v2, c2 = sp.decode(t)
                expected = (s == t) or (
                    v1 == v2 and c1[1] == c2[1]
                    and c1[0] in (0, 1) and c2[0] in (0, 1))
                assert bool(m[s, t]) == expected


class TestFormulaSemantics:
    def test_ability_owned_var(self):
        m = DclpcModel.make(["p"], ["i", "j"], [], {"p": "i"})
        assert mc_dclpc(m, parse_dclpc_formula("dia(i) p"))
        assert mc_dclpc(m, parse_dclpc_formula("dia(i) ~p"))

    def test_ability_unowned_var(self):
        m = DclpcModel.make(["p"], ["i", "j"], [], {"p": "j"})
        assert not mc_dclpc(m, parse_dclpc_formula("dia(i) p"))

    def test_transfer_requires_ownership(self):
        m = DclpcModel.make(["p"], ["i", "j"], [], {"p": "j"})
        assert not mc_dclpc(m, parse_dclpc_formula("<transfer(i,p,j)>true"))

    def test_ability_does_not_change_control(self):
        # i can make "j owns p" true only if j already owns it
        m = DclpcModel.make(["p"], ["i", "j"], [], {"p": "i"})
        f = parse_dclpc_formula("dia(i) <transfer(j,p,i)>true")
        assert not mc_dclpc(m, f)

    def test_mc_atom(self):
        m = DclpcModel.make(["p"], ["i"], ["p"], {"p": "i"})
        assert mc_dclpc(m, parse_dclpc_formula("p"))
        assert not mc_dclpc(m, parse_dclpc_formula("false"))

    def test_sat(self):
        assert not sat_dclpc(parse_dclpc_formula("false"))
        assert sat_dclpc(parse_dclpc_formula("dia(i) p"))
        assert not sat_dclpc(parse_dclpc_formula("p & ~p"))


class TestModelIO:
    def test_from_json(self):
        m = DclpcModel.from_json(
            '{"agents": ["i","j"], "vars": ["p","q"], "true": ["p"],'
            ' "control": {"p": "i", "q": "j"}}')
        assert m.valuation == 0b01 and m.control == (0, 1)

    def test_control_must_be_total(self):
        with pytest.raises(ValueError, match="not total"):
            DclpcModel.make(["p", "q"], ["i"], [], {"p": "i"})

    def test_unknown_agent(self):
        with pytest.raises(ValueError, match="unknown agent"):
            DclpcModel.make(["p"], ["i"], [], {"p": "z"})


class TestReduction:
    def test_atom_is_homomorphic(self):
        reduced, _ = reduce_formula(DAtom("p"))
        from dlpa.syntax import Atom
        assert reduced == Atom("p")

    def test_reduce_model_control_atoms(self):
        m = DclpcModel.make(["p"], ["i", "j"], [], {"p": "i"})
        bits, uni = reduce_model(m)
        assert uni.names_of(bits) == [control_atom("i", "p")]
        m2 = DclpcModel.make(["p"], ["i", "j"], ["p"], {"p": "j"})
        bits2, uni2 = reduce_model(m2)
        assert set(uni2.names_of(bits2)) == {"p", control_atom("j", "p")}

    def test_exhaustive_equivalence_k2(self):
        rng = random.Random(5)
        variables, agents = ["p", "q"], ["i", "j"]
        for _ in range(25):
            f = random_dclpc_formula(rng, 2, 2, 6)
            uni = Universe(variables)
            reduced, target = reduce_formula(f, uni, agents)
            for m in all_models(variables, agents):
                bits, _ = reduce_model(m)
                assert mc_dclpc(m, f) == mc_oracle(bits, reduced, target), f

    def test_transfer_diamond_against_direct(self):
        f = parse_dclpc_formula("<transfer(i,p,j)>true")
        for m in all_models(["p"], ["i", "j"]):
            reduced, target = reduce_formula(f, m.universe, m.agents)
            bits, _ = reduce_model(m)
            assert mc_dclpc(m, f) == mc_oracle(bits, reduced, target)

    def test_control_exclusivity_preserved(self):
        # from a well-formed encoding, every program successor keeps exactly
        # one control atom per variable
        from dlpa.randgen import random_dclpc_program
        rng = random.Random(8)
        variables, agents = ["p", "q"], ["i", "j"]
        uni = Universe(variables)
        for _ in range(15):
            pi = random_dclpc_program(rng, 2, 2, 5)
            reduced, target = reduce_formula(Dia(pi, Not(DFALSE)), uni, agents)
            # reduced is ~[pi']~true; grab the program from the box
            prog = reduced.prog.cond.prog
            m = rel_oracle(prog, target)
            ctrl_groups = [
                [1 << target.index(control_atom(a, p)) for a in agents]
                for p in variables
            ]
            for s, t in zip(*np.nonzero(m)):
                s, t = int(s), int(t)
                if all(sum(bool(s & b) for b in grp) == 1 for grp in ctrl_groups):
                    assert all(sum(bool(t & b) for b in grp) == 1
                               for grp in ctrl_groups)

    def test_size_is_linear_in_len_agents_vars(self):
        rng = random.Random(13)
        ratios = []
        for _ in range(200):
            k = rng.choice([1, 2, 3])
            n_agents = rng.choice([1, 2, 3])
            f = random_dclpc_formula(rng, k, n_agents, rng.randint(1, 10))
            uni = Universe(dclpc_vars(f) or ["p"])
            agents = dclpc_agents(f) or ["i"]
            reduced, _ = reduce_formula(f, uni, agents)
            ratios.append(node_len(reduced) /
                          (dclpc_len(f) * (len(agents) * uni.k + 1)))
        assert max(ratios) <= 9.0  # measured constant, see test body
