"""Brute-force reference implementations used by the tests.

Nothing here calls the automata; graphs are rebuilt from terms by a plain
recursive evaluator so that a bug in the library's evaluator is not shared.
"""

import itertools
from functools import lru_cache

from flyauto.terms import AddDir, AddUndir, Const, Oplus, Relab


class G:
    """Plain graph: vertices (sorted positions), edge set, port map."""

    def __init__(self, vertices, edges, ports, directed):
        self.V = list(vertices)
        self.E = set(edges)
        self.ports = ports
        self.directed = directed

    def adj(self, u, v):
        if self.directed:
            return (u, v) in self.E
        return (u, v) in self.E or (v, u) in self.E

    def und_edges(self):
        return {frozenset(e) for e in self.E}


def graph_of(t, directed=None):
    if directed is None:
        directed = _has(t, AddDir)

    def go(node, u):
        sym = node.sym
        if isinstance(sym, Const):
            return {u: sym.a}, set()
        if isinstance(sym, Oplus):
            p1, e1 = go(node.kids[0], u + (1,))
            p2, e2 = go(node.kids[1], u + (2,))
            return {**p1, **p2}, e1 | e2
        if isinstance(sym, (AddUndir, AddDir)):
            p, e = go(node.kids[0], u + (1,))
            e = set(e)
            for x in p:
                for y in p:
                    if p[x] == sym.a and p[y] == sym.b:
                        if isinstance(sym, AddDir):
                            e.add((x, y))
                        else:
                            e.add((min(x, y), max(x, y)))
            return p, e
        if isinstance(sym, Relab):
            p, e = go(node.kids[0], u + (1,))
            return {x: sym(a) for x, a in p.items()}, e
        return {}, set()
    ports, edges = go(t, ())
    return G(sorted(ports), edges, ports, directed)


def _has(t, cls):
    stack = [t]
    while stack:
        n = stack.pop()
        if isinstance(n.sym, cls):
            return True
        stack.extend(n.kids)
    return False


# ---------------------------------------------------------------- graph facts

def components(vertices, edges):
    """Union-find; returns a list of vertex sets."""
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x
    for e in edges:
        a, b = tuple(e)
        if a in parent and b in parent:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    comps = {}
    for v in vertices:
        comps.setdefault(find(v), set()).add(v)
    return list(comps.values())


def induced_edges(g, X):
    return {e for e in g.und_edges() if e <= X}


def kappa(g, X=None):
    X = set(g.V) if X is None else set(X)
    return len(components(X, induced_edges(g, X)))


def connected(g, X=None):
    X = set(g.V) if X is None else set(X)
    return kappa(g, X) <= 1


def has_cycle(g, X=None):
    X = set(g.V) if X is None else set(X)
    es = induced_edges(g, X)
    return len(es) > len(X) - kappa(g, X)


def has_dircycle(g):
    color = {v: 0 for v in g.V}
    succ = {v: [y for (x, y) in g.E if x == v] for v in g.V}

    def dfs(v):
        color[v] = 1
        for y in succ[v]:
            if color[y] == 1 or (color[y] == 0 and dfs(y)):
                return True
        color[v] = 2
        return False
    return any(color[v] == 0 and dfs(v) for v in g.V)


def degree(g, v, X=None):
    X = set(g.V) if X is None else X
    return sum(1 for e in g.und_edges() if v in e and (e - {v}) <= X)


def is_regular(g, X=None):
    X = set(g.V) if X is None else set(X)
    return len({degree(g, v, X) for v in X}) <= 1


def max_degree(g):
    return max((degree(g, v) for v in g.V), default=0)


def edges_in(g, X):
    X = set(X)
    return sum(1 for (a, b) in g.E if a in X and b in X)


def edges_between(g, X, Y):
    X, Y = set(X), set(Y)
    if g.directed:
        return sum(1 for (a, b) in g.E if a in X and b in Y)
    return sum(1 for (a, b) in g.E if (a in X and b in Y) or (a in Y and b in X))


def is_stable(g, X):
    return not any(e <= set(X) for e in g.und_edges())


def link(g, X, Y):
    return any(g.adj(x, y) for x in X for y in Y)


def path(g, X1, X2):
    """X1 = {x, y}, x ≠ y, X1 ⊆ X2, and G[X2] has an undirected x–y path."""
    if len(X1) != 2 or not set(X1) <= set(X2):
        return False
    x, y = sorted(X1)
    for comp in components(set(X2), induced_edges(g, set(X2))):
        if x in comp:
            return y in comp
    return False


def is_clique(g, X):
    return all(g.adj(a, b) or g.adj(b, a) for a, b in itertools.combinations(sorted(X), 2))


def component_sizes(g):
    out = {}
    for c in components(g.V, g.und_edges()):
        out[len(c)] = out.get(len(c), 0) + 1
    return out


# ---------------------------------------------------------------- enumeration

def assignments(vertices, s):
    """All s-tuples of subsets, as tuples of frozensets."""
    vs = list(vertices)
    for bits in itertools.product(range(1 << s), repeat=len(vs)):
        yield tuple(frozenset(v for v, b in zip(vs, bits) if b >> i & 1) for i in range(s))


def sat(g, pred, s):
    return {x for x in assignments(g.V, s) if pred(g, *x)}


def colorings(g, s):
    """Number of proper s-colorings (ordered partitions into stable sets)."""
    vs = g.V
    count = 0
    for cols in itertools.product(range(s), repeat=len(vs)):
        c = dict(zip(vs, cols))
        if all(c[a] != c[b] for a, b in g.E):
            count += 1
    return count


def chromatic_polynomial(n, edges, x):
    """Deletion–contraction, evaluated at x."""
    @lru_cache(maxsize=None)
    def P(n, es):
        if not es:
            return x ** n
        e = min(es, key=sorted)
        rest = es - {e}
        a, b = sorted(e)
        merged = set()
        for f in rest:
            f2 = frozenset(a if v == b else v for v in f)
            if len(f2) == 2:
                merged.add(f2)
        return P(n, rest) - P(n - 1, frozenset(merged))
    return P(n, frozenset(frozenset(e) for e in edges))


def isomorphic(g1, g2):
    """Permutation search (small graphs only)."""
    if len(g1.V) != len(g2.V) or len(g1.E) != len(g2.E):
        return False
    e1 = g1.und_edges() if not g1.directed else g1.E
    target = g2.und_edges() if not g2.directed else g2.E
    for perm in itertools.permutations(g2.V):
        m = dict(zip(g1.V, perm))
        if g1.directed:
            img = {(m[a], m[b]) for a, b in e1}
        else:
            img = {frozenset(m[v] for v in e) for e in e1}
        if img == target:
            return True
    return False


def degree_fingerprint(g):
    deg = sorted(degree(g, v) for v in g.V)
    return (len(g.V), len(g.E), tuple(deg))
