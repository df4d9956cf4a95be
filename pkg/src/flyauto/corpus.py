"""Named graphs, random terms and exhaustive enumeration of small terms."""

import itertools
import random

from .graph import PGraph, trivial_term
from .values import ERROR
from .terms import (AddDir, AddUndir, Const, Relab, Term, EMPTY, OPLUS, add, adddir, leaf,
                    oplus, relab_term)


# ---------------------------------------------------------------- named graphs

def petersen():
    outer = [(i, i % 5 + 1) for i in range(1, 6)]
    spokes = [(i, i + 5) for i in range(1, 6)]
    inner = [(6 + i, 6 + (i + 2) % 5) for i in range(5)]
    return PGraph(range(1, 11), outer + spokes + inner)


def mcgee():
    """The McGee graph: the (3,7)-cage on 24 vertices (LCF [12,7,-7]^8)."""
    n = 24
    lcf = [12, 7, -7] * 8
    edges = set()
    for i in range(n):
        edges.add(frozenset((i, (i + 1) % n)))
        edges.add(frozenset((i, (i + lcf[i]) % n)))
    return PGraph(range(1, n + 1), [tuple(sorted(v + 1 for v in e)) for e in edges])


def house():
    """A square 1-2-3-4 with a roof vertex 5 on the edge 1-2."""
    return PGraph(range(1, 6), [(1, 2), (2, 3), (3, 4), (1, 4), (1, 5), (2, 5)])


def cycle_graph(n):
    return PGraph(range(1, n + 1), [(i, i % n + 1) for i in range(1, n + 1)] if n > 2 else
                  ([(1, 2)] if n == 2 else []))


def path_graph(n):
    return PGraph(range(1, n + 1), [(i, i + 1) for i in range(1, n)])


def complete_graph(n):
    return PGraph(range(1, n + 1), itertools.combinations(range(1, n + 1), 2))


def eight_component_graph():
    """17 vertices, 8 connected components: two triangles, a 4-vertex path,
    two single edges and three isolated vertices."""
    edges = [(1, 2), (2, 3), (1, 3),
             (4, 5), (5, 6), (6, 7),
             (8, 9), (10, 11),
             (12, 13), (13, 14), (12, 14)]
    return PGraph(range(1, 18), edges)


def from_networkx(g):
    """PGraph with vertices 1..n in the iteration order of g."""
    idx = {v: i + 1 for i, v in enumerate(g.nodes)}
    directed = g.is_directed()
    return PGraph(range(1, len(idx) + 1), [(idx[u], idx[v]) for u, v in g.edges if u != v],
                  directed=directed)


# ---------------------------------------------------------------- better-than-trivial terms

def linear_term(g, order=None):
    """Linear clique-width term built along a vertex order.

    Label 1 is the dead label: a vertex is relabelled to 1 once all its
    neighbours are present.  Live vertices keep distinct labels from 2 on,
    reused after they die.  The width is 1 + the vertex separation number of
    the order, which is much smaller than |V| for sparse graphs.
    """
    if g.directed:
        raise ValueError("linear_term handles undirected graphs")
    order = list(order) if order is not None else list(g.vertices)
    pos = {v: i for i, v in enumerate(order)}
    adj = g.neighbours()
    last = {v: max([pos[v]] + [pos[u] for u in adj[v]]) for v in order}
    label = {}
    free = []
    top = 1
    t = None
    for i, v in enumerate(order):
        if free:
            a = min(free)
            free.remove(a)
        else:
            top += 1
            a = top
        label[v] = a
        t = leaf(a) if t is None else oplus(t, leaf(a))
        for u in sorted((u for u in adj[v] if pos[u] < i), key=lambda u: label[u]):
            t = add(min(a, label[u]), max(a, label[u]), t)
        dead = {label[u]: 1 for u in label if last[u] == i and label[u] != 1}
        if dead:
            t = relab_term(dead, t)
            for u in list(label):
                if label[u] in dead and last[u] == i:
                    free.append(label[u])
                    label[u] = 1
    return t if t is not None else Term(EMPTY)


def good_order(g, tries=200, seed=0):
    """A vertex order with small vertex separation, by greedy search plus
    random restarts (deterministic for a given seed)."""
    rng = random.Random(seed)
    adj = g.neighbours()

    def width(order):
        pos = {v: i for i, v in enumerate(order)}
        last = {v: max([pos[v]] + [pos[u] for u in adj[v]]) for v in order}
        best = 0
        for i in range(len(order)):
            best = max(best, sum(1 for v in order[:i + 1] if last[v] > i))
        return best

    def greedy(start):
        order, placed = [start], {start}
        while len(order) < g.n:
            def cost(v):
                trial = placed | {v}
                open_ = sum(1 for u in trial if any(x not in trial for x in adj[u]))
                return (open_, rng.random())
            v = min((v for v in g.vertices if v not in placed), key=cost)
            order.append(v)
            placed.add(v)
        return order

    best = list(g.vertices)
    bw = width(best)
    for k in range(tries):
        start = g.vertices[k % g.n]
        o = greedy(start)
        w = width(o)
        if w < bw:
            best, bw = o, w
    return best


# ---------------------------------------------------------------- random terms

def random_term(rng, n_leaves, k=3, directed=False, p_add=0.5, p_relab=0.2):
    """Random term over F_k with n_leaves port constants (redundancy allowed)."""
    def build(n):
        if n == 1:
            t = leaf(rng.randint(1, k))
        else:
            left = rng.randint(1, n - 1)
            t = oplus(build(left), build(n - left))
        while rng.random() < p_add and k >= 2:
            a, b = rng.sample(range(1, k + 1), 2)
            t = adddir(a, b, t) if directed else add(a, b, t)
        if rng.random() < p_relab and k >= 2:
            a, b = rng.sample(range(1, k + 1), 2)
            t = relab_term({a: b}, t)
        return t
    return build(n_leaves)


def random_irredundant_term(rng, n_leaves, k=3, directed=False, p_add=0.5, p_relab=0.2):
    """Like random_term but an add is only placed when it creates all its edges anew."""
    from .normalize import IrredundancyAutomaton
    checker = IrredundancyAutomaton(directed)

    def build(n):
        if n == 1:
            a = rng.randint(1, k)
            t, q = leaf(a), checker.delta(Const(a), (), ())
        else:
            left = rng.randint(1, n - 1)
            (t1, q1), (t2, q2) = build(left), build(n - left)
            t, q = oplus(t1, t2), checker.delta(OPLUS, (), (q1, q2))
        tries = 0
        while rng.random() < p_add and k >= 2 and tries < 4:
            tries += 1
            a, b = rng.sample(range(1, k + 1), 2)
            sym = AddDir(a, b) if directed else AddUndir(a, b)
            q2 = checker.delta(sym, (), (q,))
            if q2 is not ERROR:
                t, q = Term(sym, (t,)), q2
        if rng.random() < p_relab and k >= 2:
            a, b = rng.sample(range(1, k + 1), 2)
            sym = Relab(((a, b),))
            t, q = Term(sym, (t,)), checker.delta(sym, (), (q,))
        return t, q
    return build(n_leaves)[0]


def random_graph(rng, n, p=0.4, directed=False):
    pairs = itertools.permutations(range(1, n + 1), 2) if directed else \
        itertools.combinations(range(1, n + 1), 2)
    return PGraph(range(1, n + 1), [e for e in pairs if rng.random() < p], directed=directed)


def random_graph_term(rng, n, p=0.4, directed=False):
    return trivial_term(random_graph(rng, n, p, directed))


# ---------------------------------------------------------------- exhaustive enumeration

def all_terms_F2(max_size):
    """Every undirected term over F_2 (labels 1, 2; no empty) of size ≤ max_size.

    Symbols: the constants 1 and 2, ⊕, add_{1,2}, relab_{1>2} and relab_{2>1}.
    """
    unary = [AddUndir(1, 2), Relab(((1, 2),)), Relab(((2, 1),))]
    by_size = {1: [leaf(1), leaf(2)]}
    for s in range(2, max_size + 1):
        out = []
        for sym in unary:
            out.extend(Term(sym, (t,)) for t in by_size[s - 1])
        for s1 in range(1, s - 1):
            s2 = s - 1 - s1
            for t1 in by_size.get(s1, ()):
                for t2 in by_size.get(s2, ()):
                    out.append(Term(OPLUS, (t1, t2)))
        by_size[s] = out
    return [t for s in range(1, max_size + 1) for t in by_size[s]]


def corpus_terms(seed=0, count=60):
    """A reproducible mixed corpus: named graphs, random terms, a few directed ones."""
    rng = random.Random(seed)
    ts = [trivial_term(house()), trivial_term(petersen()), trivial_term(cycle_graph(5)),
          linear_term(path_graph(6)), add(1, 2, oplus(leaf(1), leaf(2))), Term(EMPTY)]
    for _ in range(count):
        ts.append(random_term(rng, rng.randint(1, 8), k=rng.randint(2, 4)))
    for _ in range(count // 4):
        ts.append(random_term(rng, rng.randint(1, 6), k=3, directed=True))
    return ts
