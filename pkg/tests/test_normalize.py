import random

import pytest

import oracles as O
from flyauto.automata import run_det
from flyauto.corpus import random_irredundant_term, random_term
from flyauto.graph import PGraph, trivial_term
from flyauto.normalize import (GoodAutomaton, IrredundancyAutomaton, check_good,
                               check_irredundant, good_bound, is_good, is_irredundant,
                               make_good, make_irredundant, normalize, normalize_full)
from flyauto.terms import render, term

EXAMPLE = "relab(5>1, add(1,9, add(1,8, oplus(1, oplus(5,8)))))"


def test_check_irredundant():
    ok, u = check_irredundant(term("add(1,2, add(1,2, oplus(1,2)))"))
    assert not ok and u == ()
    assert check_irredundant(term("add(1,2, oplus(1,2))")) == (True, None)
    # an add with a missing port class creates nothing and is not redundant
    assert is_irredundant(term("add(1,3, add(1,3, oplus(1,2)))"))


def test_check_good():
    ok, why = check_good(term(EXAMPLE))
    assert not ok and "label 9" in why
    assert is_good(term("add(1,2, oplus(1,2))"))
    assert good_bound(2, 2) == 19
    big = term("relab(1>2, relab(2>1, relab(1>2, relab(2>1, 1))))")
    assert not is_good(big)  # label 2 with a single vertex


def test_trivial_terms_are_normal():
    rng = random.Random(0)
    for _ in range(50):
        n = rng.randint(0, 9)
        g = PGraph(range(1, n + 1), [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)
                                     if rng.random() < 0.4])
        t = trivial_term(g)
        assert is_good(t) and is_irredundant(t)


def test_automata_agree_with_checks():
    rng = random.Random(1)
    for _ in range(300):
        t = random_term(rng, rng.randint(1, 8), k=rng.randint(2, 4))
        assert run_det(IrredundancyAutomaton(), t).output == is_irredundant(t)
        assert run_det(GoodAutomaton(), t).output == is_good(t)


def test_make_irredundant_drops_repeated_add():
    t, fallback = make_irredundant(term("add(1,2, add(1,2, oplus(1,2)))"))
    assert render(t) == "add(1,2,oplus(1,2))" and not fallback


def test_make_irredundant_fixpoint():
    rng = random.Random(2)
    for _ in range(100):
        t = random_irredundant_term(rng, rng.randint(1, 10))
        t2, fallback = make_irredundant(t)
        assert t2 == t and not fallback


def test_partial_redundancy_falls_back_keeping_ports():
    # the inner add links only the 1-port on the left, the outer add is partial
    t = term("add(1,2, oplus(1, add(1,2, oplus(1,2))))")
    t2, fallback = make_irredundant(t)
    assert fallback and is_irredundant(t2)
    r = normalize_full(t)
    assert r.fallback
    g, gh = O.graph_of(t), O.graph_of(r.with_ports())
    assert O.isomorphic(g, gh)
    assert sorted(g.ports.values()) == sorted(gh.ports.values())


def test_worked_example():
    r = normalize_full(term(EXAMPLE))
    assert render(r.term) == "relab(2>1;3>2,add(1,3,oplus(1,oplus(2,3))))"
    assert r.h == {1: 1, 2: 8}
    assert not r.fallback
    assert is_good(r.term) and is_irredundant(r.term)
    assert O.isomorphic(O.graph_of(term(EXAMPLE)), O.graph_of(r.term))


def test_make_good_small_cases():
    assert make_good(term("1")) == (term("1"), {1: 1})
    t, h = make_good(term("oplus(empty, add(3,4, oplus(3,4)))"))
    assert render(t) == "add(1,2,oplus(1,2))"
    assert sorted(h.values()) == [3, 4]
    assert normalize(term("relab(1>2, empty)")) == term("empty")


def test_make_good_rejects_redundant_input():
    with pytest.raises(ValueError):
        make_good(term("add(1,2, add(1,2, oplus(1,2)))"))


def test_label_bijection():
    rng = random.Random(3)
    for _ in range(200):
        t = random_term(rng, rng.randint(1, 9), k=rng.randint(2, 6))
        r = normalize_full(t)
        k = max(r.h, default=0)
        assert sorted(r.h) == list(range(1, k + 1))
        assert len(set(r.h.values())) == len(r.h)
        assert set(r.h.values()) == set(O.graph_of(t).ports.values())
