"""Hand-built fly-automata for graph properties and graph functions.

All automata here run in graph mode: Booleans sit on port constants only.
Automata marked ``irredundant`` give correct answers only on irredundant
terms (every add creates all its edges anew); the CLI normalizes first.
"""

from .automata import (FlyAutomaton, SignatureError, inverse_image, product)
from .setterms import Compl, SetTermRelabelling, Var
from .terms import AddDir, AddUndir, Const, Empty, Oplus, Relab
from .values import ERROR, FrozenMap


class GraphAutomaton(FlyAutomaton):
    """Dispatches on the clique-width operation; subclasses fill in the cases."""

    mode = "graph"
    deterministic = True
    irredundant = False

    def _delta(self, sym, w, qs):
        t = type(sym)
        if t is Oplus:
            return self.oplus(qs[0], qs[1])
        if t is Const:
            return self.const(sym.a, w)
        if t is AddUndir:
            return self.add(sym.a, sym.b, qs[0])
        if t is AddDir:
            return self.adddir(sym.a, sym.b, qs[0])
        if t is Relab:
            return self.relab(sym.mapping, qs[0])
        if t is Empty:
            return self.empty()
        raise SignatureError(f"{self.name}: {sym!r} is not a graph operation")

    def adddir(self, a, b, q):
        return self.add(a, b, q)


def _mapped(h, x):
    return h.get(x, x)


def _add_maps(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for k, v in m2.items():
        d[k] = d.get(k, 0) + v
    return FrozenMap(d)


def _relab_counts(h, lam, cap=None):
    d = {}
    for k, v in lam.items():
        c = h.get(k, k)
        d[c] = d.get(c, 0) + v
    if cap is not None:
        d = {k: min(v, cap) for k, v in d.items()}
    return FrozenMap(d)


# ---------------------------------------------------------------- set automata

class _LeafCount(GraphAutomaton):
    """Shared skeleton: state is a number combined by addition."""

    cap = None

    def leaf_value(self, w):
        return w[0]

    def const(self, a, w):
        return self._norm(self.leaf_value(w))

    def empty(self):
        return 0

    def oplus(self, q1, q2):
        return self._norm(q1 + q2)

    def add(self, a, b, q):
        return q

    def relab(self, h, q):
        return q

    def _norm(self, n):
        return n


class Sgl(_LeafCount):
    name = "sgl"
    width = 1

    def _norm(self, n):
        return ERROR if n > 1 else n

    def _output(self, q):
        return q == 1


class IsEmpty(_LeafCount):
    name = "empty"
    width = 1

    def _norm(self, n):
        return ERROR if n > 0 else n

    def _output(self, q):
        return q == 0


class Subseteq(_LeafCount):
    name = "subseteq"
    width = 2

    def leaf_value(self, w):
        return 1 if w[0] and not w[1] else 0

    def _norm(self, n):
        return ERROR if n else 0


class SetEq(Subseteq):
    name = "eq"

    def leaf_value(self, w):
        return 1 if w[0] != w[1] else 0


class Partition(_LeafCount):
    name = "partition"

    def __init__(self, s):
        self.width = s

    def leaf_value(self, w):
        return 0 if sum(w) == 1 else 1

    def _norm(self, n):
        return ERROR if n else 0


class CardMod(_LeafCount):
    width = 1

    def __init__(self, p, q):
        if q < 1:
            raise ValueError("modulus must be positive")
        self.p, self.q = p % q, q
        self.name = f"cardmod({p},{q})"

    def _norm(self, n):
        return n % self.q

    def _output(self, q):
        return q == self.p


class CardLe(_LeafCount):
    width = 1

    def __init__(self, c):
        self.c = c
        self.name = f"card_le({c})"

    def _norm(self, n):
        return ERROR if n > self.c else n


class CardGe(_LeafCount):
    width = 1

    def __init__(self, c):
        self.c = c
        self.name = f"card_ge({c})"

    def _norm(self, n):
        return min(n, self.c)

    def _output(self, q):
        return q >= self.c


class Card(_LeafCount):
    """|X| as a function."""
    name = "card"
    width = 1
    acceptor = False

    def _output(self, q):
        return q


# ---------------------------------------------------------------- edge atoms

class Edg(GraphAutomaton):
    """edg(X1, X2): X1 = {x}, X2 = {y} and there is an edge x-y (x->y if directed)."""
    name = "edg"
    width = 2

    def const(self, a, w):
        return (a if w[0] else 0, a if w[1] else 0, False)

    def empty(self):
        return (0, 0, False)

    def oplus(self, q1, q2):
        if (q1[0] and q2[0]) or (q1[1] and q2[1]):
            return ERROR
        return (q1[0] or q2[0], q1[1] or q2[1], q1[2] or q2[2])

    def add(self, a, b, q):
        x, y, found = q
        if not found and {x, y} == {a, b}:
            return (x, y, True)
        return q

    def adddir(self, a, b, q):
        x, y, found = q
        if not found and x == a and y == b:
            return (x, y, True)
        return q

    def relab(self, h, q):
        x, y, found = q
        return (_mapped(h, x) if x else 0, _mapped(h, y) if y else 0, found)

    def _output(self, q):
        return q[2]


class _LabelSet(GraphAutomaton):
    """State: set of labels of the ports in X."""
    width = 1

    def const(self, a, w):
        return frozenset([a]) if w[0] else frozenset()

    def empty(self):
        return frozenset()

    def oplus(self, q1, q2):
        return q1 | q2

    def add(self, a, b, q):
        return q

    def relab(self, h, q):
        return frozenset(_mapped(h, x) for x in q)


class Lab(_LabelSet):
    """lab_a(X): every vertex of X is an a-port."""

    def __init__(self, a):
        self.a = a
        self.name = f"lab({a})"

    def _output(self, q):
        return q <= {self.a}


class Stable(_LabelSet):
    """St[X]: no edge between two vertices of X."""
    name = "stable"

    def add(self, a, b, q):
        if a in q and b in q:
            return ERROR
        return q


FOUND = "found"


class Link(GraphAutomaton):
    """Link(X1, X2): some edge from X1 to X2."""
    name = "link"
    width = 2

    def const(self, a, w):
        return (frozenset([a]) if w[0] else frozenset(), frozenset([a]) if w[1] else frozenset())

    def empty(self):
        return (frozenset(), frozenset())

    def oplus(self, q1, q2):
        if q1 == FOUND or q2 == FOUND:
            return FOUND
        return (q1[0] | q2[0], q1[1] | q2[1])

    def add(self, a, b, q):
        if q == FOUND:
            return q
        if (a in q[0] and b in q[1]) or (b in q[0] and a in q[1]):
            return FOUND
        return q

    def adddir(self, a, b, q):
        if q == FOUND:
            return q
        if a in q[0] and b in q[1]:
            return FOUND
        return q

    def relab(self, h, q):
        if q == FOUND:
            return q
        return (frozenset(_mapped(h, x) for x in q[0]), frozenset(_mapped(h, x) for x in q[1]))

    def _output(self, q):
        return q == FOUND


def _pair(c, d):
    return (c, d) if c <= d else (d, c)


class Path(GraphAutomaton):
    """Path(X1, X2): X1 = {x, y}, X1 ⊆ X2, and x, y are linked by a path inside G[X2].

    Edges are read as undirected.  The state holds the relation M of label
    pairs co-occurring in a component of G[X2] (at most k² pairs), the label
    sets of the components holding the X1 vertices, a flag telling whether
    both X1 vertices share a component, and |X1|.
    """
    name = "path"
    width = 2

    def const(self, a, w):
        x1, x2 = w
        if x1 and not x2:
            return ERROR
        M = frozenset([(a, a)]) if x2 else frozenset()
        tracked = (frozenset([a]),) if x1 else ()
        return (M, tracked, False, 1 if x1 else 0)

    def empty(self):
        return (frozenset(), (), False, 0)

    def oplus(self, q1, q2):
        n = q1[3] + q2[3]
        if n > 2:
            return ERROR
        tracked = tuple(sorted(q1[1] + q2[1], key=sorted))
        return (q1[0] | q2[0], tracked, q1[2] or q2[2], n)

    def add(self, a, b, q):
        M, tracked, joined, n = q
        if (a, a) not in M or (b, b) not in M:
            return q
        U = set()
        for c, d in M:
            if c in (a, b) or d in (a, b):
                U.add(c)
                U.add(d)
        U = frozenset(U)
        M2 = M | frozenset(_pair(c, d) for c in U for d in U)
        touched = [L for L in tracked if a in L or b in L]
        rest = [L for L in tracked if not (a in L or b in L)]
        if len(touched) >= 2:
            joined = True
        if touched:
            rest.append(U)
        return (M2, tuple(sorted(rest, key=sorted)), joined, n)

    def relab(self, h, q):
        M, tracked, joined, n = q
        M2 = frozenset(_pair(_mapped(h, c), _mapped(h, d)) for c, d in M)
        tr = tuple(sorted((frozenset(_mapped(h, x) for x in L) for L in tracked), key=sorted))
        return (M2, tr, joined, n)

    def _output(self, q):
        return q[3] == 2 and q[2]


class Clique(GraphAutomaton):
    """Clique[X]: G[X] is complete (both directions for directed graphs).

    State (L, P): labels of X-ports and the ordered label pairs (a, b) such
    that every a-port of X is linked to every b-port of X.  Two X-ports with
    the same label that are not yet adjacent can never become adjacent, so
    that situation is an error.
    """
    name = "clique"
    width = 1

    def const(self, a, w):
        return (frozenset([a]), frozenset()) if w[0] else (frozenset(), frozenset())

    def empty(self):
        return (frozenset(), frozenset())

    def oplus(self, q1, q2):
        if q1[0] & q2[0]:
            return ERROR
        return (q1[0] | q2[0], q1[1] | q2[1])

    def add(self, a, b, q):
        L, P = q
        if a in L and b in L:
            return (L, P | {(a, b), (b, a)})
        return q

    def adddir(self, a, b, q):
        L, P = q
        if a in L and b in L:
            return (L, P | {(a, b)})
        return q

    def relab(self, h, q):
        L, P = q
        groups = {}
        for x in L:
            groups.setdefault(_mapped(h, x), []).append(x)
        for c, xs in groups.items():
            for x in xs:
                for y in xs:
                    if x != y and (x, y) not in P:
                        return ERROR
        P2 = set()
        for c, xs in groups.items():
            for d, ys in groups.items():
                if c != d and all((x, y) in P for x in xs for y in ys):
                    P2.add((c, d))
        return (frozenset(groups), frozenset(P2))

    def _output(self, q):
        L, P = q
        return all((a, b) in P for a in L for b in L if a != b)


# ---------------------------------------------------------------- connectivity

MULTI = "multi"


def _types(q):
    if isinstance(q, tuple):
        return {q[1]}
    return set(q)


class Conn(GraphAutomaton):
    """Connectedness (weak, for directed graphs); the empty graph is connected.

    State: the set of label sets (types) of the components, or
    ("multi", L) when there are several components, all of type L.
    """
    name = "conn"
    width = 0

    def const(self, a, w):
        return frozenset([frozenset([a])])

    def empty(self):
        return frozenset()

    def oplus(self, q1, q2):
        if q1 == frozenset():
            return q2
        if q2 == frozenset():
            return q1
        T = _types(q1) | _types(q2)
        if len(T) == 1:
            return (MULTI, T.pop())
        return frozenset(T)

    def add(self, a, b, q):
        T = _types(q)
        present = set().union(*T) if T else set()
        if a not in present or b not in present:
            return q
        if isinstance(q, tuple):
            L = q[1]
            if a in L and b in L:
                return frozenset([L])
            return q
        touched = [L for L in T if a in L or b in L]
        rest = [L for L in T if not (a in L or b in L)]
        merged = frozenset().union(*touched)
        return frozenset(rest + [merged])

    def relab(self, h, q):
        if isinstance(q, tuple):
            return (MULTI, frozenset(_mapped(h, x) for x in q[1]))
        T = {frozenset(_mapped(h, x) for x in L) for L in q}
        if len(q) >= 2 and len(T) == 1:
            return (MULTI, T.pop())
        return frozenset(T)

    def _output(self, q):
        return not isinstance(q, tuple) and len(q) <= 1


def _cap(n, c=2):
    return n if n < c else c


class Cycle(GraphAutomaton):
    """Undirected graph has a cycle (irredundant terms only).

    State: multiset (multiplicities capped at 2) of component summaries,
    each summary a set of (label, count capped at 2); or "found".
    """
    name = "cycle"
    width = 0
    irredundant = True

    def const(self, a, w):
        return FrozenMap({frozenset([(a, 1)]): 1})

    def empty(self):
        return FrozenMap()

    def oplus(self, q1, q2):
        if q1 == FOUND or q2 == FOUND:
            return FOUND
        d = dict(q1)
        for k, v in q2.items():
            d[k] = _cap(d.get(k, 0) + v)
        return FrozenMap(d)

    def add(self, a, b, q):
        if q == FOUND:
            return q
        na = nb = 0
        touched = []
        rest = {}
        for comp, mult in q.items():
            cnt = dict(comp)
            ca, cb = cnt.get(a, 0), cnt.get(b, 0)
            na += ca * mult
            nb += cb * mult
            if ca or cb:
                touched.append((cnt, mult))
            else:
                rest[comp] = mult
        if not na or not nb:
            return q
        for cnt, mult in touched:
            ca, cb = cnt.get(a, 0), cnt.get(b, 0)
            if ca and cb:
                return FOUND
            if ca >= 2 or cb >= 2:
                return FOUND
        if na >= 2 and nb >= 2:
            return FOUND
        merged = {}
        for cnt, mult in touched:
            for lab, c in cnt.items():
                merged[lab] = _cap(merged.get(lab, 0) + c * mult)
        key = frozenset(merged.items())
        rest[key] = _cap(rest.get(key, 0) + 1)
        return FrozenMap(rest)

    def adddir(self, a, b, q):
        raise SignatureError("cycle is for undirected terms; use dircycle")

    def relab(self, h, q):
        if q == FOUND:
            return q
        out = {}
        for comp, mult in q.items():
            cnt = {}
            for lab, c in comp:
                x = _mapped(h, lab)
                cnt[x] = _cap(cnt.get(x, 0) + c)
            key = frozenset(cnt.items())
            out[key] = _cap(out.get(key, 0) + mult)
        return FrozenMap(out)

    def _output(self, q):
        return q == FOUND


class DirCycle(GraphAutomaton):
    """Directed graph has a directed cycle.

    State: pairs (c, d) such that some c-port reaches some d-port (pairs
    (c, c) record presence), or "found".  Works on any directed term.
    """
    name = "dircycle"
    width = 0

    def const(self, a, w):
        return frozenset([(a, a)])

    def empty(self):
        return frozenset()

    def oplus(self, q1, q2):
        if q1 == FOUND or q2 == FOUND:
            return FOUND
        return q1 | q2

    def add(self, a, b, q):
        raise SignatureError("dircycle is for directed terms")

    def adddir(self, a, b, q):
        if q == FOUND:
            return q
        if (a, a) not in q or (b, b) not in q:
            return q
        if (b, a) in q:
            return FOUND
        into_a = [c for c, d in q if d == a]
        from_b = [d for c, d in q if c == b]
        return q | frozenset((c, d) for c in into_a for d in from_b)

    def relab(self, h, q):
        if q == FOUND:
            return q
        return frozenset((_mapped(h, c), _mapped(h, d)) for c, d in q)

    def _output(self, q):
        return q == FOUND


# ---------------------------------------------------------------- edge counting

class EdgeCount(GraphAutomaton):
    """e(X): number of edges of G[X].  State (m, λ_X)."""
    name = "e"
    width = 1
    acceptor = False
    irredundant = True

    def const(self, a, w):
        return (0, FrozenMap({a: 1}) if w[0] else FrozenMap())

    def empty(self):
        return (0, FrozenMap())

    def oplus(self, q1, q2):
        return (q1[0] + q2[0], _add_maps(q1[1], q2[1]))

    def add(self, a, b, q):
        m, lam = q
        return (m + lam.get(a, 0) * lam.get(b, 0), lam)

    def relab(self, h, q):
        return (q[0], _relab_counts(h, q[1]))

    def _output(self, q):
        return q[0]


class EdgesBetween(GraphAutomaton):
    """e(X1, X2): edges from X1 to X2; bottom when X1 and X2 overlap."""
    name = "e_between"
    width = 2
    acceptor = False
    irredundant = True

    def const(self, a, w):
        if w[0] and w[1]:
            return ERROR
        one = FrozenMap({a: 1})
        return (0, one if w[0] else FrozenMap(), one if w[1] else FrozenMap())

    def empty(self):
        return (0, FrozenMap(), FrozenMap())

    def oplus(self, q1, q2):
        return (q1[0] + q2[0], _add_maps(q1[1], q2[1]), _add_maps(q1[2], q2[2]))

    def add(self, a, b, q):
        m, l1, l2 = q
        m += l1.get(a, 0) * l2.get(b, 0) + l1.get(b, 0) * l2.get(a, 0)
        return (m, l1, l2)

    def adddir(self, a, b, q):
        m, l1, l2 = q
        return (m + l1.get(a, 0) * l2.get(b, 0), l1, l2)

    def relab(self, h, q):
        return (q[0], _relab_counts(h, q[1]), _relab_counts(h, q[2]))

    def _output(self, q):
        return q[0]


def outdegree_automaton():
    """Out-degree of x (degree for undirected graphs): e(X, Xᶜ) restricted to Sgl(X)."""
    cut = inverse_image(SetTermRelabelling((Var(1), Compl(Var(1))), 1), EdgesBetween())
    sgl = Sgl()

    def g(p, s):
        if not sgl.accepts(s):
            return None
        return cut.output(p)
    A = product((cut, sgl), g, acceptor=False, name="outdeg")
    A.irredundant = True
    return A


class MaxDeg(GraphAutomaton):
    """Maximum degree.  State (α, λ): per-label maximum degree and port counts."""
    name = "maxdeg"
    width = 0
    acceptor = False
    irredundant = True

    def const(self, a, w):
        return (FrozenMap({a: 0}), FrozenMap({a: 1}))

    def empty(self):
        return (FrozenMap(), FrozenMap())

    def oplus(self, q1, q2):
        al = dict(q1[0])
        for k, v in q2[0].items():
            al[k] = max(al.get(k, 0), v)
        return (FrozenMap(al), _add_maps(q1[1], q2[1]))

    def add(self, a, b, q):
        al, lam = q
        if a not in lam or b not in lam:
            return q
        d = dict(al)
        d[a] += lam[b]
        d[b] += lam[a]
        return (FrozenMap(d), lam)

    def relab(self, h, q):
        al = {}
        for k, v in q[0].items():
            c = _mapped(h, k)
            al[c] = max(al.get(c, 0), v)
        return (FrozenMap(al), _relab_counts(h, q[1]))

    def _output(self, q):
        return max(q[0].values(), default=0)


class DegLe(MaxDeg):
    """Every vertex has degree at most d; counters saturate at d+1."""
    acceptor = True

    def __init__(self, d):
        self.d = d
        self.name = f"degle({d})"

    def const(self, a, w):
        return (FrozenMap({a: 0}), FrozenMap({a: min(1, self.d + 1)}))

    def oplus(self, q1, q2):
        al, lam = MaxDeg.oplus(self, q1, q2)
        return (al, FrozenMap({k: min(v, self.d + 1) for k, v in lam.items()}))

    def add(self, a, b, q):
        al, lam = MaxDeg.add(self, a, b, q)
        if any(v > self.d for v in al.values()):
            return ERROR
        return (al, lam)

    def relab(self, h, q):
        al, lam = MaxDeg.relab(self, h, q)
        return (al, FrozenMap({k: min(v, self.d + 1) for k, v in lam.items()}))

    def _output(self, q):
        return True


class Regular(GraphAutomaton):
    """All vertices have the same degree.  State (∂, λ) or Error.

    ∂(a) is the common degree of the a-ports (absent when there is none).
    Relabelling a onto b requires equal degrees and moves ∂(a) to b.
    """
    name = "regular"
    width = 0
    irredundant = True

    def const(self, a, w):
        return (FrozenMap({a: 0}), FrozenMap({a: 1}))

    def empty(self):
        return (FrozenMap(), FrozenMap())

    def oplus(self, q1, q2):
        d = dict(q1[0])
        for k, v in q2[0].items():
            if k in d and d[k] != v:
                return ERROR
            d[k] = v
        return (FrozenMap(d), _add_maps(q1[1], q2[1]))

    def add(self, a, b, q):
        dg, lam = q
        if a not in lam or b not in lam:
            return q
        d = dict(dg)
        d[a] += lam[b]
        d[b] += lam[a]
        return (FrozenMap(d), lam)

    def relab(self, h, q):
        dg, lam = q
        d = {}
        for k, v in dg.items():
            c = _mapped(h, k)
            if c in d and d[c] != v:
                return ERROR
            d[c] = v
        return (FrozenMap(d), _relab_counts(h, lam))

    def _output(self, q):
        return len(set(q[0].values())) <= 1


# ---------------------------------------------------------------- components

def _merge_components(q, a, b, with_size):
    present = set()
    for key in q:
        present |= key[0] if with_size else key
    if a not in present or b not in present:
        return q
    touched, rest = [], {}
    for key, m in q.items():
        L = key[0] if with_size else key
        if a in L or b in L:
            touched.append((key, m))
        else:
            rest[key] = m
    if len(touched) == 1 and touched[0][1] == 1:
        return q
    L = frozenset().union(*((k[0] if with_size else k) for k, _ in touched))
    if with_size:
        p = sum(k[1] * m for k, m in touched)
        key = (L, p)
    else:
        key = L
    rest[key] = rest.get(key, 0) + 1
    return FrozenMap(rest)


class Kappa(GraphAutomaton):
    """κ(G): number of connected components.  State: type L -> multiplicity."""
    name = "kappa"
    width = 0
    acceptor = False

    def const(self, a, w):
        return FrozenMap({frozenset([a]): 1})

    def empty(self):
        return FrozenMap()

    def oplus(self, q1, q2):
        return _add_maps(q1, q2)

    def add(self, a, b, q):
        return _merge_components(q, a, b, False)

    def relab(self, h, q):
        d = {}
        for L, m in q.items():
            k = frozenset(_mapped(h, x) for x in L)
            d[k] = d.get(k, 0) + m
        return FrozenMap(d)

    def _output(self, q):
        return sum(q.values())


class CompMSp(GraphAutomaton):
    """Multiset of component sizes.  State: (L, p) -> multiplicity m."""
    name = "comp_msp"
    width = 0
    acceptor = False

    def const(self, a, w):
        return FrozenMap({(frozenset([a]), 1): 1})

    def empty(self):
        return FrozenMap()

    def oplus(self, q1, q2):
        return _add_maps(q1, q2)

    def add(self, a, b, q):
        return _merge_components(q, a, b, True)

    def relab(self, h, q):
        d = {}
        for (L, p), m in q.items():
            k = (frozenset(_mapped(h, x) for x in L), p)
            d[k] = d.get(k, 0) + m
        return FrozenMap(d)

    def _output(self, q):
        mu = {}
        for (L, p), m in q.items():
            mu[p] = mu.get(p, 0) + m
        return FrozenMap(mu)


def component_triples(q):
    """CompMSp state as a set of (L, p, m) triples."""
    return {(L, p, m) for (L, p), m in q.items()}


def from_triples(triples):
    d = {}
    for L, p, m in triples:
        k = (frozenset(L), p)
        d[k] = d.get(k, 0) + m
    return FrozenMap(d)


class CardLeq(GraphAutomaton):
    """|X1| <= |X2|; the state is |X1| - |X2| (unbounded)."""
    name = "card_leq"
    width = 2

    def const(self, a, w):
        return w[0] - w[1]

    def empty(self):
        return 0

    def oplus(self, q1, q2):
        return q1 + q2

    def add(self, a, b, q):
        return q

    def relab(self, h, q):
        return q

    def _output(self, q):
        return q <= 0


class VertexLt(GraphAutomaton):
    """X1 = {x}, X2 = {y} and the leaf of x comes before the leaf of y.

    This is the prefix order restricted to leaves.  States: 0 (none seen),
    1 (only y), 2 (only x), 3 (x before y), Error.
    """
    name = "vertex_lt"
    width = 2

    def const(self, a, w):
        return {(0, 0): 0, (1, 0): 2, (0, 1): 1}.get(tuple(w), ERROR)

    def empty(self):
        return 0

    def oplus(self, q1, q2):
        if q1 == 0:
            return q2
        if q2 == 0:
            return q1
        if q1 == 2 and q2 == 1:
            return 3
        return ERROR

    def add(self, a, b, q):
        return q

    def relab(self, h, q):
        return q

    def _output(self, q):
        return q == 3


# ---------------------------------------------------------------- builders

def basic_set_automaton(kind, *params):
    table = {
        "sgl": Sgl, "empty": IsEmpty, "subseteq": Subseteq, "subset": Subseteq, "eq": SetEq,
        "cardmod": CardMod, "card_le": CardLe, "card_ge": CardGe, "partition": Partition,
        "card": Card, "cardinality": Card,
    }
    return table[kind](*params)


def edge_atom(kind, *params):
    table = {"edg": Edg, "lab": Lab, "stable": Stable, "link": Link, "path": Path,
             "clique": Clique}
    return table[kind](*params)


def conn_automaton():
    return Conn()


def cycle_automaton(directed=False):
    return DirCycle() if directed else Cycle()


def edge_count_automaton(kind):
    if kind in ("e", "e_of_X"):
        return EdgeCount()
    if kind == "e_between":
        return EdgesBetween()
    if kind in ("outdeg", "outdegree"):
        return outdegree_automaton()
    raise ValueError(kind)


def maxdeg_automaton():
    return MaxDeg()


def regular_automaton():
    return Regular()


def deg_le_automaton(d):
    return DegLe(d)


def component_automaton(kind):
    return Kappa() if kind == "kappa" else CompMSp()


# ---------------------------------------------------------------- query builders

def induced_pattern_count(H, break_symmetry=False):
    """Query counting induced copies of the small connected graph H.

    Returns (query, divisor): the count head of the query divided by
    ``divisor`` is the number of induced subgraphs isomorphic to H.
    """
    import itertools
    import networkx as nx
    from . import logic as L

    if H.n == 0 or H.n > 8:
        raise ValueError("pattern must have between 1 and 8 vertices")
    adj = H.neighbours()
    if not nx.is_connected(H.to_networkx().to_undirected()):
        raise ValueError("pattern must be connected")
    verts = list(H.vertices)
    s = len(verts)
    names = [f"X{i + 1}" for i in range(s)]
    parts = [L.atom("sgl", L.V(x)) for x in names]
    for i, j in itertools.combinations(range(s), 2):
        e = L.atom("edg", L.V(names[i]), L.V(names[j]))
        if H.directed:
            e2 = L.atom("edg", L.V(names[j]), L.V(names[i]))
            parts.append(e if H.has_edge(verts[i], verts[j]) else L.Not(e))
            parts.append(e2 if H.has_edge(verts[j], verts[i]) else L.Not(e2))
        else:
            parts.append(e if verts[j] in adj[verts[i]] else L.Not(e))
    aut = _automorphism_count(H)
    divisor = aut
    if break_symmetry and aut > 1:
        pair = _swappable_pair(H)
        if pair is not None:
            i, j = pair
            parts.append(L.atom("vertex_lt", L.V(names[i]), L.V(names[j])))
            divisor = aut // 2
    q = L.Head("count", tuple(names), L.And(tuple(parts)))
    return q, divisor


def _automorphisms(H):
    import networkx.algorithms.isomorphism as iso
    g = H.to_networkx()
    M = iso.DiGraphMatcher(g, g) if H.directed else iso.GraphMatcher(g, g)
    return list(M.isomorphisms_iter())


def _automorphism_count(H):
    return len(_automorphisms(H))


def _swappable_pair(H):
    """Two vertices exchanged by some involutive automorphism, with exactly
    half of the automorphisms putting the first before the second."""
    verts = list(H.vertices)
    autos = _automorphisms(H)
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            x, y = verts[i], verts[j]
            if any(f[x] == y and f[y] == x for f in autos):
                before = sum(1 for f in autos if verts.index(f[x]) < verts.index(f[y]))
                if 2 * before == len(autos):
                    return i, j
    return None


def separation_profile(kind):
    """Sp head for α(G) = {(|X|, κ(G[Xᶜ]))} or β(G) = {(|X|, size of a largest component of G[Xᶜ])}.

    α uses P(X, U): U meets every component of G[Xᶜ] in exactly one vertex.
    β uses Q(X, Y): Y is a largest component of G[Xᶜ], or Y = ∅ when X = V.
    """
    from . import logic as L
    if kind == "alpha":
        text = ("sp(X, U, and(subseteq(U, compl(X)), "
                "forall(Y, implies(cc(Y, compl(X)), sgl(inter(Y, U))))))")
    elif kind == "beta":
        text = ("sp(X, Y, or(and(empty(Y), eq(X, univ)), "
                "and(cc(Y, compl(X)), forall(Z, implies(cc(Z, compl(X)), card_leq(Z, Y))))))")
    else:
        raise ValueError(kind)
    return L.parse_query(text)
