import itertools
import random

import pytest

import oracles as O
from flyauto.aggregates import (MSP, SP, aggregate_automaton, builtin_semiring,
                                count_runs_automaton, enumerate_sat, find_witness,
                                msp_to_json, sat_automaton, tuples_to_json, witness_automaton)
from flyauto.automata import constant_automaton, determinize, image, run_det, run_nondet
from flyauto.corpus import all_terms_F2, complete_graph, random_term
from flyauto.graph import trivial_term
from flyauto.graphprops import IsEmpty, Link, Partition, Sgl, Stable
from flyauto.automata import conj, inverse_image
from flyauto.setterms import Compl, Projection, Var, set_term_relabelling
from flyauto.terms import annotate, leaf_positions, term
from flyauto.values import FrozenMap

TRIANGLE = trivial_term(complete_graph(3))


def stable_pair():
    """Partition(X1, X2) ∧ St[X1] ∧ St[X2]."""
    s1 = inverse_image(set_term_relabelling([Var(1)], 2), Stable())
    s2 = inverse_image(set_term_relabelling([Var(2)], 2), Stable())
    return conj(Partition(2), s1, s2)


def test_sat_examples():
    t = term("oplus(1, oplus(2, 2))")
    assert run_det(sat_automaton(constant_automaton(False, 1)), t).output == frozenset()
    sat = run_det(sat_automaton(Sgl()), t).output
    assert sat == {(frozenset([u]),) for u in leaf_positions(t)}
    sat = run_det(sat_automaton(Stable()), TRIANGLE).output
    assert sat == {(frozenset(),)} | {(frozenset([u]),) for u in leaf_positions(TRIANGLE)}


def test_builtin_examples():
    t = term("oplus(1, 2)")
    assert run_det(aggregate_automaton(constant_automaton(True, 1), "count"), t).output == 4
    assert dict(run_det(aggregate_automaton(Stable(), MSP), TRIANGLE).output) == {(0,): 1, (1,): 3}
    k2 = trivial_term(complete_graph(2))
    assert run_det(aggregate_automaton(stable_pair(), SP), k2).output == {(1, 1)}
    # X = V, written as Xᶜ = ∅
    univ = inverse_image(set_term_relabelling([Compl(Var(1))], 1), IsEmpty())
    for n in range(1, 6):
        t = trivial_term(complete_graph(n))
        assert run_det(aggregate_automaton(univ, "mincard"), t).output == n


def test_mincard_needs_one_variable():
    with pytest.raises(ValueError):
        aggregate_automaton(stable_pair(), "mincard")
    with pytest.raises(ValueError):
        builtin_semiring("median")


def test_exists_is_determinized_projection():
    rng = random.Random(0)
    A = Link()
    E = aggregate_automaton(A, "exists")
    D = determinize(image(Projection(2, 0), A))
    for _ in range(100):
        t = random_term(rng, rng.randint(1, 6), k=3)
        assert run_det(E, t).output == run_det(D, t).output


def _gamma(kind, S):
    cards = [tuple(len(X) for X in x) for x in S]
    if kind == "exists":
        return bool(S)
    if kind == "count":
        return len(S)
    if kind == "sp":
        return set(cards)
    if kind == "msp":
        m = {}
        for c in cards:
            m[c] = m.get(c, 0) + 1
        return m
    if kind == "mincard":
        return min((c[0] for c in cards), default=None)
    return max((c[0] for c in cards), default=None)


def _normal(kind, v):
    if kind == "msp":
        return dict(v)
    if kind == "sp":
        return set(v)
    return v


def test_homomorphism_law():
    """Comp(A^γ) = γ(Comp(A^Sat)) for every built-in semiring."""
    props = [(1, Stable()), (1, inverse_image(set_term_relabelling([Var(1), Compl(Var(1))], 1),
                                             Link())),
             (2, Link()), (2, stable_pair())]
    for s, A in props:
        sat = sat_automaton(A)
        kinds = ["exists", "count", "sp", "msp"] + (["mincard", "maxcard"] if s == 1 else [])
        autos = {k: aggregate_automaton(A, k) for k in kinds}
        for t in all_terms_F2(6):
            S = run_det(sat, t).output
            for k, B in autos.items():
                assert _normal(k, run_det(B, t).output) == _gamma(k, S), (k, t)


def test_sat_matches_brute_force_and_states_are_disjoint():
    rng = random.Random(1)
    A = stable_pair()
    sat = sat_automaton(A)
    for _ in range(60):
        t = random_term(rng, rng.randint(1, 6), k=3)
        g = O.graph_of(t)
        want = O.sat(g, lambda g, X, Y: not (X & Y) and X | Y == set(g.V)
                     and O.is_stable(g, X) and O.is_stable(g, Y), 2)
        r = run_det(sat, t)
        assert r.output == want
        parts = list(r.state.values())
        for p, q in itertools.combinations(parts, 2):
            assert not (p & q)


def test_consistency_between_heads():
    rng = random.Random(2)
    A = Stable()
    heads = {k: aggregate_automaton(A, k) for k in
             ("exists", "count", "sp", "msp", "mincard", "maxcard", "sat")}
    for _ in range(60):
        t = random_term(rng, rng.randint(1, 7), k=3)
        v = {k: run_det(B, t).output for k, B in heads.items()}
        assert v["count"] == len(v["sat"]) == sum(dict(v["msp"]).values())
        assert set(v["sp"]) == set(dict(v["msp"]))
        assert v["mincard"] == min(c[0] for c in v["sp"])
        assert v["maxcard"] == max(c[0] for c in v["sp"])
        assert v["exists"] == (v["count"] > 0)


def test_convolution_sums_multiply():
    rng = random.Random(3)
    for _ in range(100):
        a = FrozenMap({(rng.randint(0, 4), rng.randint(0, 4)): rng.randint(1, 9) for _ in range(4)})
        b = FrozenMap({(rng.randint(0, 4), rng.randint(0, 4)): rng.randint(1, 9) for _ in range(4)})
        assert sum(MSP.times(a, b).values()) == sum(a.values()) * sum(b.values())
        assert MSP.plus(a, MSP.zero) == a


def test_witnesses():
    t = TRIANGLE
    assert find_witness(constant_automaton(False, 1), t) is None
    assert find_witness(Stable(), t, "min") == (frozenset(),)
    w = find_witness(Stable(), t, "max")
    assert len(w[0]) == 1
    per = run_det(witness_automaton(Stable(), "per-cardinality"), t).output
    assert set(per) == {(0,), (1,)}
    rng = random.Random(4)
    A = stable_pair()
    for _ in range(50):
        tt = random_term(rng, rng.randint(1, 6), k=3)
        x = find_witness(A, tt)
        g = O.graph_of(tt)
        exists = bool(O.colorings(g, 2))
        assert (x is not None) == exists


def test_count_runs():
    rng = random.Random(5)
    for _ in range(30):
        t = random_term(rng, rng.randint(1, 6), k=3)
        X = frozenset(u for u in leaf_positions(t) if rng.random() < 0.5)
        ta = annotate(t, (X,))
        assert run_det(count_runs_automaton(Stable()), ta).output == int(run_det(Stable(), ta).output)
    N = image(Projection(1, 0), Sgl())
    assert run_det(count_runs_automaton(N), term("oplus(1, oplus(2, 2))")).output == 3
    A = stable_pair()
    C = count_runs_automaton(image(Projection(2, 0), A))
    K = aggregate_automaton(A, "count")
    for _ in range(50):
        t = random_term(rng, rng.randint(1, 6), k=3)
        assert run_det(C, t).output == run_det(K, t).output == O.colorings(O.graph_of(t), 2)


def test_enumerate_sat():
    assert len(list(enumerate_sat(Stable(), TRIANGLE, limit=1))) == 1
    full = list(enumerate_sat(Stable(), TRIANGLE))
    assert len(full) == 4 and set(full) == run_det(sat_automaton(Stable()), TRIANGLE).output
    assert list(enumerate_sat(constant_automaton(False, 1), TRIANGLE)) == []
    rng = random.Random(6)
    A = stable_pair()
    for _ in range(40):
        t = random_term(rng, rng.randint(1, 6), k=3)
        got = list(enumerate_sat(A, t))
        assert len(got) == len(set(got))
        assert set(got) == run_det(sat_automaton(A), t).output


def test_json_helpers():
    assert msp_to_json({(0,): 1, (1,): 3}) == [{"card": [0], "mult": 1}, {"card": [1], "mult": 3}]
    x = (frozenset([(1,), (2, 1)]),)
    assert tuples_to_json([x]) == [[["1", "21"]]]
