"""Good and irredundant clique-width terms.

A term is irredundant when no add operation meets an existing edge between
its two port classes; it is good when it uses at most |V| labels and its
size is at most (k+1)²·|V| + 1.  ``normalize`` produces terms with both
properties.
"""

from dataclasses import dataclass

from .automata import FlyAutomaton
from .graph import eval_graph, trivial_term
from .terms import (AddDir, AddUndir, Const, Empty, Oplus, Relab, Term, EMPTY, OPLUS,
                    mu, n_vertices, postorder_positions, relab, size)
from .values import ERROR


# ---------------------------------------------------------------- label summaries

def _key(c, d, directed):
    if directed or c <= d:
        return (c, d)
    return (d, c)


def _summaries(t, directed):
    """Yield (position, node, λ, N) bottom-up.

    λ counts ports per label; N counts edges per label pair, so that the
    pair (a, b) has some edge iff N > 0 and is complete iff N = λ(a)·λ(b).
    """
    memo = {}
    for u, node in postorder_positions(t):
        sym = node.sym
        kids = [memo.pop(u + (i,)) for i in range(1, len(node.kids) + 1)]
        if isinstance(sym, Const):
            lam, N = {sym.a: 1}, {}
        elif isinstance(sym, Empty):
            lam, N = {}, {}
        elif isinstance(sym, Oplus):
            (l1, n1), (l2, n2) = kids
            lam = dict(l1)
            for k, v in l2.items():
                lam[k] = lam.get(k, 0) + v
            N = dict(n1)
            for k, v in n2.items():
                N[k] = N.get(k, 0) + v
        elif isinstance(sym, (AddUndir, AddDir)):
            lam, N = kids[0]
            la, lb = lam.get(sym.a, 0), lam.get(sym.b, 0)
            if la and lb:
                N = dict(N)
                N[_key(sym.a, sym.b, directed)] = la * lb
        elif isinstance(sym, Relab):
            l1, n1 = kids[0]
            h = sym.mapping
            lam = {}
            for k, v in l1.items():
                x = h.get(k, k)
                lam[x] = lam.get(x, 0) + v
            N = {}
            for (c, d), v in n1.items():
                k = _key(h.get(c, c), h.get(d, d), directed)
                N[k] = N.get(k, 0) + v
        else:
            raise ValueError(f"{sym.text()} is not a graph operation")
        memo[u] = (lam, N)
        yield u, node, kids, (lam, N)


def _directed(t):
    return any(isinstance(n.sym, AddDir) for _, n in postorder_positions(t))


def _add_status(node, kids, directed):
    """'new', 'complete' (no-op) or 'partial' for an add node."""
    lam, N = kids[0]
    a, b = node.sym.a, node.sym.b
    la, lb = lam.get(a, 0), lam.get(b, 0)
    have = N.get(_key(a, b, directed), 0)
    if have == 0:
        return "new" if la and lb else "complete"
    if have == la * lb:
        return "complete"
    return "partial"


# ---------------------------------------------------------------- checks

def check_irredundant(t):
    """(True, None) or (False, u) with u the first offending add in bottom-up order."""
    directed = _directed(t)
    for u, node, kids, _ in _summaries(t, directed):
        if isinstance(node.sym, (AddUndir, AddDir)):
            lam, N = kids[0]
            if N.get(_key(node.sym.a, node.sym.b, directed), 0):
                return False, u
    return True, None


def is_irredundant(t):
    return check_irredundant(t)[0]


def good_bound(k, n):
    return (k + 1) ** 2 * n + 1


def check_good(t):
    """(True, '') or (False, reason)."""
    n = n_vertices(t)
    labels = mu(t)
    k = max(labels, default=0)
    if k > n:
        return False, f"uses label {k} but has only {n} vertices"
    if size(t) > good_bound(k, n):
        return False, f"size {size(t)} exceeds (k+1)^2*n+1 = {good_bound(k, n)}"
    return True, ""


def is_good(t):
    return check_good(t)[0]


class IrredundancyAutomaton(FlyAutomaton):
    """Deterministic acceptor of irredundant terms.

    State: (ports present, label pairs having an edge) or Error.
    """
    name = "irredundant"
    mode = "graph"
    width = 0

    def __init__(self, directed=False):
        self.directed = directed

    def _delta(self, sym, w, qs):
        if isinstance(sym, Const):
            return (frozenset([sym.a]), frozenset())
        if isinstance(sym, Empty):
            return (frozenset(), frozenset())
        if isinstance(sym, Oplus):
            return (qs[0][0] | qs[1][0], qs[0][1] | qs[1][1])
        U, E = qs[0]
        if isinstance(sym, (AddUndir, AddDir)):
            k = _key(sym.a, sym.b, self.directed)
            if k in E:
                return ERROR
            if sym.a in U and sym.b in U:
                return (U, E | {k})
            return (U, E)
        if isinstance(sym, Relab):
            h = sym.mapping
            return (frozenset(h.get(x, x) for x in U),
                    frozenset(_key(h.get(c, c), h.get(d, d), self.directed) for c, d in E))
        raise ValueError(sym)


class GoodAutomaton(FlyAutomaton):
    """Deterministic acceptor of good terms; state (|t|, max label, |V|)."""
    name = "good"
    mode = "graph"
    width = 0

    def _delta(self, sym, w, qs):
        sz = 1 + sum(q[0] for q in qs)
        k = max([q[1] for q in qs] + list(sym.labels()) + [0])
        n = sum(q[2] for q in qs) + (1 if isinstance(sym, Const) else 0)
        return (sz, k, n)

    def _output(self, q):
        sz, k, n = q
        return k <= n and sz <= good_bound(k, n)


# ---------------------------------------------------------------- transformations

@dataclass
class Normalized:
    term: Term
    h: dict            # bijection from the labels of G(term) to those of G(input)
    fallback: bool     # True when the trivial-term fallback was used

    def with_ports(self):
        """relab_h(term): same p-graph as the input, port labels included."""
        h = {a: b for a, b in self.h.items() if a != b}
        return relab_term_if(h, self.term)


def relab_term_if(h, t):
    if not h:
        return t
    return Term(relab(h), (t,))


def make_irredundant(t):
    """(t', fallback).  No-op adds are dropped; a partially redundant add
    forces the trivial term of G(t) (fallback=True).  Irredundant input is
    returned unchanged."""
    if is_irredundant(t):
        return t, False
    directed = _directed(t)
    built = {}
    for u, node, kids, _ in _summaries(t, directed):
        sym = node.sym
        sub = [built.pop(u + (i,)) for i in range(1, len(node.kids) + 1)]
        if isinstance(sym, (AddUndir, AddDir)):
            status = _add_status(node, kids, directed)
            if status == "partial":
                return _port_preserving_trivial_term(eval_graph(t, directed)), True
            if status == "complete":
                built[u] = sub[0]
                continue
        if sub and all(a is b for a, b in zip(sub, node.kids)):
            built[u] = node
        else:
            built[u] = Term(sym, tuple(sub), node.w)
    return built[()], False


def _port_preserving_trivial_term(g):
    """trivial_term(g) relabelled so that every vertex gets back its port label."""
    h = {i: g.ports[v] for i, v in enumerate(g.vertices, 1) if g.ports[v] != i}
    return relab_term_if(h, trivial_term(g))


def _rename(t, sigma):
    """Apply the label permutation sigma to every symbol of t."""
    if not sigma:
        return t
    memo = {}
    for u, node in postorder_positions(t):
        sym = node.sym
        kids = tuple(memo.pop(u + (i,)) for i in range(1, len(node.kids) + 1))
        f = lambda x: sigma.get(x, x)
        if isinstance(sym, Const):
            sym = Const(f(sym.a))
        elif isinstance(sym, AddUndir):
            sym = AddUndir(f(sym.a), f(sym.b))
        elif isinstance(sym, AddDir):
            sym = AddDir(f(sym.a), f(sym.b))
        elif isinstance(sym, Relab):
            sym = relab({f(a): f(b) for a, b in sym.mapping.items()})
        memo[u] = Term(sym, kids, node.w)
    return memo[()]


def _permutation(inj, labels):
    """Extend the injection inj (on [m]) to a permutation of a label range
    containing ``labels`` without growing beyond what is needed."""
    top = max(list(labels) + list(inj) + list(inj.values()) + [0])
    sigma = dict(inj)
    free_src = [x for x in range(1, top + 1) if x not in sigma]
    used = set(sigma.values())
    free_dst = [x for x in range(1, top + 1) if x not in used]
    for x, y in zip(free_src, free_dst):
        sigma[x] = y
    return {a: b for a, b in sigma.items() if a != b}


def make_good(t):
    """(t̂, h_t) for an irredundant t: t̂ is good, irredundant, uses the
    labels 1..m exactly, and relab_{h_t}(t̂) defines the same p-graph as t.

    At ⊕ the bijection ℓ keeps the labels of the left part and numbers the
    new labels of the right part in increasing order; the right part is
    renamed in place rather than wrapped in a relab.  A non-injective relab
    merges label classes, numbered by their least member.
    """
    ok, where = check_irredundant(t)
    if not ok:
        raise ValueError(f"make_good needs an irredundant term (redundant add at {where})")
    memo = {}
    for u, node in postorder_positions(t):
        sym = node.sym
        kids = [memo.pop(u + (i,)) for i in range(1, len(node.kids) + 1)]
        if isinstance(sym, Const):
            res = (Term(Const(1)), {1: sym.a})
        elif isinstance(sym, Empty):
            res = None
        elif isinstance(sym, Oplus):
            r1, r2 = kids
            if r1 is None:
                res = r2
            elif r2 is None:
                res = r1
            else:
                (t1, h1), (t2, h2) = r1, r2
                ell = dict(h1)
                inv = {v: k for k, v in ell.items()}
                nxt = len(ell) + 1
                for lab in sorted(set(h2.values()) - set(inv)):
                    ell[nxt] = lab
                    inv[lab] = nxt
                    nxt += 1
                inj = {i: inv[h2[i]] for i in h2}
                t2r = _rename(t2, _permutation(inj, mu(t2)))
                res = (Term(OPLUS, (t1, t2r)), ell)
        elif isinstance(sym, (AddUndir, AddDir)):
            r1 = kids[0]
            if r1 is None:
                res = None
            else:
                t1, h1 = r1
                inv = {v: k for k, v in h1.items()}
                if sym.a in inv and sym.b in inv:
                    a, b = inv[sym.a], inv[sym.b]
                    op = AddDir(a, b) if isinstance(sym, AddDir) else AddUndir(min(a, b), max(a, b))
                    res = (Term(op, (t1,)), h1)
                else:
                    res = r1
        elif isinstance(sym, Relab):
            r1 = kids[0]
            if r1 is None:
                res = None
            else:
                t1, h1 = r1
                comp = {i: sym(h1[i]) for i in h1}
                if len(set(comp.values())) == len(comp):
                    res = (t1, comp)
                else:
                    classes = {}
                    for i in sorted(comp):
                        classes.setdefault(comp[i], []).append(i)
                    order = sorted(classes.values(), key=min)
                    g, h = {}, {}
                    for j, cls in enumerate(order, start=1):
                        h[j] = comp[cls[0]]
                        for i in cls:
                            if i != j:
                                g[i] = j
                    res = (Term(relab(g), (t1,)) if g else t1, h)
        else:
            raise ValueError(f"{sym.text()} is not a graph operation")
        memo[u] = res
    res = memo[()]
    if res is None:
        return Term(EMPTY), {}
    return res


def normalize_full(t):
    t1, fallback = make_irredundant(t)
    that, h = make_good(t1)
    return Normalized(that, h, fallback)


def normalize(t):
    """Good irredundant term whose graph is isomorphic to G(t)."""
    return normalize_full(t).term
