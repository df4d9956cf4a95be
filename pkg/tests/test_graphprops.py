import itertools
import random

import oracles as O
from flyauto.aggregates import aggregate_automaton
from flyauto.automata import run_det
from flyauto.corpus import (all_terms_F2, complete_graph, cycle_graph, house, path_graph, random_graph,
                            random_irredundant_term, random_term)
from flyauto.graph import PGraph, trivial_term
from flyauto.graphprops import (Card, Clique, Conn, Cycle, DirCycle, EdgeCount, EdgesBetween,
                                Edg, Kappa, Lab, Link, MaxDeg, Partition, Path, Regular, Sgl,
                                Stable, basic_set_automaton, induced_pattern_count,
                                separation_profile)
from flyauto.logic import compile_query, parse_query
from flyauto.normalize import is_irredundant
from flyauto.terms import annotate, leaf_positions, term
from flyauto.values import ERROR

K2 = trivial_term(complete_graph(2))
K3 = trivial_term(complete_graph(3))
P3 = trivial_term(path_graph(3))


def ann(t, *sets):
    return annotate(t, tuple(frozenset(X) for X in sets))


def leaves(t):
    return leaf_positions(t)


def test_basic_set_examples():
    t = K3
    a, b, c = leaves(t)
    assert run_det(Sgl(), ann(t, [a])).output is True
    r = run_det(Sgl(), ann(t, [a, b]))
    assert r.state is ERROR and r.output is False
    assert run_det(Partition(2), ann(t, [a, b, c], [])).output is True
    t10 = trivial_term(PGraph(range(1, 11), []))
    five = leaves(t10)[:5]
    assert run_det(Card(), ann(t10, five)).output == 5
    assert run_det(basic_set_automaton("card_le", 2), ann(t10, five)).output is False
    assert run_det(basic_set_automaton("cardmod", 2, 1), ann(t10, five)).output is True


def test_edge_atoms_examples():
    u, v = leaves(K2)
    assert run_det(Edg(), ann(K2, [u], [v])).output is True
    e2 = trivial_term(PGraph([1, 2], []))
    x, y = leaves(e2)
    assert run_det(Edg(), ann(e2, [x], [y])).output is False
    a, b, c = leaves(P3)
    assert run_det(Stable(), ann(P3, [a, c])).output is True
    assert run_det(Clique(), ann(K3, leaves(K3))).output is True
    assert run_det(Clique(), ann(P3, leaves(P3))).output is False
    assert run_det(Lab(2), ann(term("oplus(1, 2)"), [(2,)])).output is True


def test_conn_and_cycle_examples():
    two = term("oplus(add(1,2,oplus(1,2)), add(3,4,oplus(3,4)))")
    conn = Conn()
    assert run_det(conn, two).output is False
    assert run_det(conn, term("add(2,3," + "oplus(add(1,2,oplus(1,2)), add(3,4,oplus(3,4))))")).output
    assert run_det(conn, term("empty")).output is True
    cyc = Cycle()
    assert run_det(cyc, K3).output is True
    assert run_det(cyc, trivial_term(path_graph(5))).output is False


def test_edge_counts():
    assert run_det(EdgeCount(), ann(K3, leaves(K3))).output == 3
    a, b, c = leaves(K3)
    assert run_det(EdgesBetween(), ann(K3, [a, b], [b])).output is None
    cut = compile_query(parse_query("setval(X, e_between(X, compl(X)))"))
    assert max(run_det(cut, K2).output) == 1


def test_degree_examples():
    assert run_det(Regular(), K3).output is True
    assert run_det(Regular(), P3).output is False
    assert run_det(Regular(), term("empty")).state == ({}, {})
    assert run_det(MaxDeg(), K3).output == 2
    assert run_det(MaxDeg(), trivial_term(PGraph([1, 2, 3], []))).output == 0


def test_pattern_counts():
    q, div = induced_pattern_count(complete_graph(3))
    assert run_det(compile_query(q), trivial_term(complete_graph(4))).output // div == 4
    rng = random.Random(0)
    q, div = induced_pattern_count(complete_graph(2))
    A = compile_query(q)
    for _ in range(10):
        g = random_graph(rng, rng.randint(1, 6))
        assert run_det(A, trivial_term(g)).output // div == len(g.edges)
    h = trivial_term(house())
    q, div = induced_pattern_count(house())
    assert run_det(compile_query(q), h).output == 2 and div == 2
    q, div = induced_pattern_count(house(), break_symmetry=True)
    assert run_det(compile_query(q), h).output == 1 and div == 1


def test_separation_profiles():
    alpha = compile_query(separation_profile("alpha"))
    beta = compile_query(separation_profile("beta"))
    assert set(run_det(alpha, K3).output) == {(0, 1), (1, 1), (2, 1), (3, 0)}
    assert set(run_det(beta, K2).output) == {(0, 2), (1, 1), (2, 0)}
    assert (0, 2) in run_det(alpha, trivial_term(PGraph([1, 2], []))).output
    rng = random.Random(1)
    for _ in range(15):
        t = random_term(rng, rng.randint(1, 5), k=3)
        g = O.graph_of(t)
        want_a, want_b = set(), set()
        for (X,) in O.assignments(g.V, 1):
            rest = set(g.V) - X
            comps = O.components(rest, O.induced_edges(g, rest))
            want_a.add((len(X), len(comps)))
            want_b.add((len(X), max((len(c) for c in comps), default=0)))
        assert set(run_det(alpha, t).output) == want_a
        assert set(run_det(beta, t).output) == want_b


# ---------------------------------------------------------------- oracle sweeps

ORACLE_QUERIES = [
    ("stable(X)", lambda g, X, Y: O.is_stable(g, X), False),
    ("link(X, Y)", lambda g, X, Y: O.link(g, X, Y), False),
    ("edg(X, Y)", lambda g, X, Y: len(X) == len(Y) == 1 and O.link(g, X, Y), False),
    ("path(X, Y)", lambda g, X, Y: O.path(g, X, Y), False),
    ("clique(X)", lambda g, X, Y: O.is_clique(g, X), False),
    ("conn(X)", lambda g, X, Y: O.connected(g, X), False),
    ("cycle(X)", lambda g, X, Y: O.has_cycle(g, X), True),
    ("e(X)", lambda g, X, Y: O.edges_in(g, X), True),
    ("e_between(X, compl(X))", lambda g, X, Y: O.edges_between(g, X, set(g.V) - X), True),
]
COMPILED = [(compile_query(parse_query(q), free=("X", "Y")), f, irr)
            for q, f, irr in ORACLE_QUERIES]


def _check(t, rng, tries, irredundant):
    g = O.graph_of(t)
    for A, pred, irr in COMPILED:
        if irr and not irredundant:
            continue
        for _ in range(tries):
            X = frozenset(v for v in g.V if rng.random() < 0.5)
            Y = frozenset(v for v in g.V if rng.random() < 0.5)
            if rng.random() < 0.3 and g.V:
                X, Y = frozenset([rng.choice(g.V)]), frozenset([rng.choice(g.V)])
            assert run_det(A, annotate(t, (X, Y))).output == pred(g, X, Y), (A.name, t, X, Y)
    assert run_det(Kappa(), t).output == O.kappa(g)
    if irredundant:
        assert run_det(MaxDeg(), t).output == O.max_degree(g)
        assert run_det(Regular(), t).output == O.is_regular(g)


def test_exhaustive_small_terms_F2():
    rng = random.Random(2)
    for t in all_terms_F2(7):
        _check(t, rng, 2, is_irredundant(t))


def test_random_irredundant_terms():
    rng = random.Random(3)
    for _ in range(200):
        t = random_irredundant_term(rng, rng.randint(1, 25), k=4)
        _check(t, rng, 1, True)


def test_redundant_counterexample():
    """e(X) on a redundant term counts a repeated add twice; normalization fixes it."""
    from flyauto.normalize import normalize
    t = term("add(1,2, add(1,2, oplus(1[1], 2[1])))")
    assert run_det(EdgeCount(), t).output == 2
    base = term("add(1,2, add(1,2, oplus(1, 2)))")
    n = normalize(base)
    assert run_det(EdgeCount(), annotate(n, (frozenset(leaves(n)),))).output == 1


def test_conn_accepts_iff_kappa_le_1():
    rng = random.Random(4)
    conn = compile_query(parse_query("conn(univ)"))
    for _ in range(200):
        t = random_term(rng, rng.randint(1, 8), k=3)
        assert run_det(conn, t).output == (O.kappa(O.graph_of(t)) <= 1)


def test_dircycle():
    rng = random.Random(5)
    A = compile_query(parse_query("dircycle(univ)"))
    for _ in range(100):
        g = random_graph(rng, rng.randint(1, 6), p=0.3, directed=True)
        t = trivial_term(g)
        assert run_det(A, t).output == O.has_dircycle(O.graph_of(t, True))
