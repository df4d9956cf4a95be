"""Term-domain automata: Booleans sit on every symbol (term mode).

These work over any signature, including generic symbols ``f(...)`` read
by the term parser, and do not look at graph semantics.
"""

from collections import Counter

from .automata import FlyAutomaton
from .terms import Fn
from .values import ERROR, FrozenMap


class TermAutomaton(FlyAutomaton):
    mode = "term"
    deterministic = True


class _Func(TermAutomaton):
    def __init__(self, name, step, out=None, width=0, acceptor=False):
        self.name = name
        self.step = step
        self.out = out
        self.width = width
        self.acceptor = acceptor

    def _delta(self, sym, w, qs):
        return self.step(sym, w, qs)

    def _output(self, q):
        return q if self.out is None else self.out(q)


def height_automaton(width=0):
    """ht(t); the state at u is ht(t/u)."""
    return _Func("ht", lambda sym, w, qs: 1 + max(qs, default=0), width=width)


def size_automaton(width=0):
    """|t|, the number of positions."""
    return _Func("size", lambda sym, w, qs: 1 + sum(qs), width=width)


def _shifted(qs):
    out = set()
    for i, S in enumerate(qs, start=1):
        for v in S:
            out.add((i,) + v)
    return out


def posf_automaton(f):
    """Pos_f(t): the Dewey words of the occurrences of symbol f.

    ``f`` is a symbol or a symbol name (compared with ``sym.text()``).
    """
    def is_f(sym):
        if isinstance(f, str):
            return getattr(sym, "name", None) == f or sym.text() == f
        return sym == f

    def step(sym, w, qs):
        S = _shifted(qs)
        if is_f(sym):
            S.add(())
        return frozenset(S)
    return _Func(f"posf({f if isinstance(f, str) else f.text()})", step)


def id_automaton():
    """Id(X) = X, as a set of Dewey words."""
    def step(sym, w, qs):
        S = _shifted(qs)
        if w[0]:
            S.add(())
        return frozenset(S)
    return _Func("id", step, width=1)


def element_automaton():
    """The unique element of X (as a Dewey word), bottom unless |X| = 1."""
    def step(sym, w, qs):
        found = [i for i, q in enumerate(qs, start=1) if q is not None]
        if len(found) + w[0] > 1:
            return ERROR
        if w[0]:
            return ()
        if found:
            return (found[0],) + qs[found[0] - 1]
        return None

    def out(q):
        return q
    A = _Func("elem", step, out, width=1)
    return A


class Uniform(TermAutomaton):
    """Unif: all leaves at the same depth; the state is ht(t) or Error."""
    name = "unif"
    acceptor = True

    def __init__(self, width=0):
        self.width = width

    def _delta(self, sym, w, qs):
        if not qs:
            return 1
        if any(q != qs[0] for q in qs):
            return ERROR
        return qs[0] + 1


def uniform_automaton(width=0):
    return Uniform(width)


_PREFIX_LEAF = {(0, 0): 0, (1, 0): 2, (0, 1): 1}


def _prefix_then(s, t):
    """State of the concatenation 'positions of s, then positions of t'."""
    if s is ERROR or t is ERROR:
        return ERROR
    if s == 0:
        return t
    if t == 0:
        return s
    if s == 2:
        return 2 if t == 2 else 3
    if s == 1:
        return 1 if t == 1 else ERROR
    # s == 3
    return 3 if t == 1 else ERROR


class PrefixOrder(TermAutomaton):
    """X1 < X2 in prefix order, both nonempty.

    States 0 (both empty), 1 (only X2 nonempty), 2 (only X1 nonempty),
    3 (X1 < X2, accepting) and Error.
    """
    name = "prefix_lt"
    width = 2
    acceptor = True

    def _delta(self, sym, w, qs):
        s = _PREFIX_LEAF.get(tuple(w), ERROR)
        for q in qs:
            s = _prefix_then(s, q)
            if s is ERROR:
                return ERROR
        return s

    def _output(self, q):
        return q == 3


def prefix_order_automaton():
    return PrefixOrder()


def relativized_height_automaton():
    """ht(t, X): maximal number of X-positions on a root-to-leaf branch."""
    return _Func("relht", lambda sym, w, qs: w[0] + max(qs, default=0), width=1)


class Son(TermAutomaton):
    """son(X1, X2): X1 = {x}, X2 = {y} and y is a son of x (the i-th if given)."""
    acceptor = True
    width = 2

    def __init__(self, index=None):
        self.index = index
        self.name = "son" if index is None else f"son({index})"

    def _delta(self, sym, w, qs):
        c1 = w[0] + sum(q[0] for q in qs)
        c2 = w[1] + sum(q[1] for q in qs)
        if c1 > 1 or c2 > 1:
            return ERROR
        found = any(q[3] for q in qs)
        if w[0]:
            for i, q in enumerate(qs, start=1):
                if q[2] and (self.index is None or self.index == i):
                    found = True
        return (c1, c2, bool(w[1]), found)

    def _output(self, q):
        return q[0] == 1 and q[1] == 1 and q[3]


class TermCount(TermAutomaton):
    """Term-mode version of a counting set automaton: every symbol carries Booleans."""

    def __init__(self, base):
        self.base = base
        self.width = base.width
        self.acceptor = base.acceptor
        self.name = base.name

    def _delta(self, sym, w, qs):
        return self.base._norm(sum(qs) + self.base.leaf_value(w))

    def _output(self, q):
        return self.base._output(q)


def term_set_atom(base):
    return TermCount(base)


class SubtermRestrict(FlyAutomaton):
    """α↓ from α: evaluate A on t/lca(X_{s+1}) (bottom when X_{s+1} is empty).

    States ("0", q) while no marked position lies below, ("1", q, p) once
    p = q_A(t/lca) is fixed; q is always A's state on the whole subterm.
    With ``single`` the last set must be a singleton (the α⇂ variant).
    """

    def __init__(self, A, single=False):
        self.inner = A
        self.width = A.width + 1
        self.mode = "term"
        self.deterministic = True
        self.acceptor = A.acceptor
        self.single = single
        self.name = f"{'sub1' if single else 'sub'}({A.name})"

    def _delta(self, sym, w, qs):
        inner = self.inner
        wa, x = w[:-1], w[-1]
        q = inner.delta(sym, wa, tuple(c[1] for c in qs))
        marked = [c for c in qs if c[0] == "1"]
        if self.single and (len(marked) + x > 1):
            return ERROR
        if x or len(marked) >= 2:
            return ("1", q, q)
        if marked:
            return ("1", q, marked[0][2])
        return ("0", q)

    def output(self, q):
        if q is ERROR or q[0] == "0":
            return False if self.acceptor else None
        return self.inner.output(q[2])


def subterm_restrict(A, single=False):
    return SubtermRestrict(A, single)


class CounterExample18(TermAutomaton):
    """P(X) over {f, g, a}: X nonempty, made of first sons of f, and the
    multiset of subterm sizes s(u), u in X, has every element exactly twice.

    State (ε, m, |t/u|) with ε = [u ∈ X] and m the multiset of sizes, or Error.
    Its projection has a large nondeterminism degree on the family of
    :func:`counter_example_term`.
    """
    name = "ce18"
    width = 1
    acceptor = True

    def _delta(self, sym, w, qs):
        arity = len(qs)
        size = 1 + sum(q[2] for q in qs)
        m = Counter()
        for i, q in enumerate(qs, start=1):
            if q[0] and not (arity == 2 and i == 1):
                return ERROR
            m.update(dict(q[1]))
        if w[0]:
            m[size] += 1
        if any(c >= 3 for c in m.values()):
            return ERROR
        return (w[0], FrozenMap(m), size)

    def _output(self, q):
        eps, m, _ = q
        return eps == 0 and bool(m) and all(c == 2 for c in m.values())


def counter_example_automaton():
    return CounterExample18()


def counter_example_term(p):
    """f(a, f(ga, f(gga, ... f(g^p a, a)...))) with p+1 occurrences of f."""
    from .terms import Term
    f, g, a = Fn("f", 2), Fn("g", 1), Fn("a", 0)

    def gs(n):
        t = Term(a)
        for _ in range(n):
            t = Term(g, (t,))
        return t
    t = Term(f, (gs(p), Term(a)))
    for i in range(p - 1, -1, -1):
        t = Term(f, (gs(i), t))
    return t


def max_uniform_query():
    """W = SetVal u. (u, |t/u|, ht(t/u)) restricted to maximal uniform subterms."""
    from . import logic as L
    u, w = L.V("u"), L.V("w")
    maxunif = L.And((
        L.atom("unif_at", u),
        L.Not(L.Exists(("w",), L.And((L.atom("son", w, u), L.atom("unif_at", w))))),
    ))
    triple = L.Compose("tuple", (L.atom("elem", u), L.atom("size_at", u), L.atom("ht_at", u)))
    return L.Head("setval", ("u",), L.RestrictF(triple, maxunif))
