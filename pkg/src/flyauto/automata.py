"""Fly-automata: computable transition maps run bottom-up on terms.

An automaton sees annotated symbols as a pair (sym, w).  In graph mode only
port constants carry a vector (internal symbols and the empty constant get
``w == ()``); in term mode every symbol carries one.  States are plain
values (see ``values``); the marker ``ERROR`` is a non-accepting sink.
"""

import itertools
import json

from .setterms import annotated
from .terms import postorder_positions
from .values import ACCEPT_SINK, ERROR, Sink, canon, sort_states, state_size


class SignatureError(ValueError):
    pass


class NondeterministicError(TypeError):
    pass


class Metrics:
    """Optional per-run counters: transitions fired, ndeg, max state size."""

    def __init__(self, sizes=True):
        self.transitions = 0
        self.ndeg = 0
        self.max_state_size = 0
        self.sizes = sizes

    def see(self, state):
        if isinstance(state, frozenset):
            self.ndeg = max(self.ndeg, len(state))
        else:
            self.ndeg = max(self.ndeg, 1)
        if self.sizes:
            self.max_state_size = max(self.max_state_size, state_size(state))

    def see_set(self, states):
        self.ndeg = max(self.ndeg, len(states))
        if self.sizes:
            for q in states:
                self.max_state_size = max(self.max_state_size, state_size(q))

    def as_dict(self):
        return {"max_state_size": self.max_state_size, "ndeg": self.ndeg,
                "transitions": self.transitions}

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True)


class FlyAutomaton:
    """Base class.  Subclasses implement ``_delta`` (deterministic) or
    ``_delta_set`` (nondeterministic) and ``_output``."""

    width = 0
    mode = "graph"
    deterministic = True
    acceptor = True
    name = "automaton"

    # -- transitions
    def delta(self, sym, w, qs):
        for q in qs:
            if q is ERROR:
                return ERROR
        return self._delta(sym, w, qs)

    def delta_set(self, sym, w, qs):
        for q in qs:
            if q is ERROR:
                return (ERROR,)
        if self.deterministic:
            return (self._delta(sym, w, qs),)
        return self._delta_set(sym, w, qs)

    def delta_multi(self, sym, w, qs):
        """Like delta_set, but one entry per underlying transition."""
        return self.delta_set(sym, w, qs)

    def _delta(self, sym, w, qs):
        raise NondeterministicError(f"{self.name} is nondeterministic")

    def _delta_set(self, sym, w, qs):
        return (self._delta(sym, w, qs),)

    # -- outputs
    def output(self, q):
        if isinstance(q, Sink):
            if q is ACCEPT_SINK:
                return True
            return False if self.acceptor else None
        return self._output(q)

    def _output(self, q):
        return True

    def accepts(self, q):
        v = self.output(q)
        if self.acceptor:
            return v is True
        return v is not None

    # -- signature
    def check_symbol(self, sym, w):
        want = self.width if annotated(sym, self.mode) else 0
        if len(w) != want:
            raise SignatureError(
                f"{self.name}: symbol {sym.text()} carries {len(w)} Booleans, expected {want}")
        if self.mode == "graph" and not hasattr(sym, "labels"):
            raise SignatureError(f"{self.name}: {sym!r} is not a graph symbol")

    def __repr__(self):
        kind = "det" if self.deterministic else "nondet"
        return f"<{self.name} s={self.width} {self.mode} {kind}>"


class FuncAutomaton(FlyAutomaton):
    """Automaton given by plain functions delta(sym, w, qs) and output(q)."""

    def __init__(self, delta, output=None, width=0, mode="graph", acceptor=True,
                 name="automaton", deterministic=True):
        self._fn = delta
        self._out = output or (lambda q: True)
        self.width = width
        self.mode = mode
        self.acceptor = acceptor
        self.name = name
        self.deterministic = deterministic

    def _delta(self, sym, w, qs):
        if not self.deterministic:
            raise NondeterministicError(self.name)
        return self._fn(sym, w, qs)

    def _delta_set(self, sym, w, qs):
        if self.deterministic:
            return (self._fn(sym, w, qs),)
        return sort_states(set(self._fn(sym, w, qs)))

    def _output(self, q):
        return self._out(q)


def constant_automaton(value=True, width=0, mode="graph"):
    """One-state automaton; with value=True it accepts everything."""
    return FuncAutomaton(lambda sym, w, qs: 0, lambda q: value, width, mode,
                         acceptor=isinstance(value, bool), name=f"const({value})")


# ---------------------------------------------------------------- runs

class RunResult:
    def __init__(self, state, output, trace=None, metrics=None):
        self.state = state
        self.output = output
        self.trace = trace
        self.metrics = metrics

    def __repr__(self):
        return f"RunResult(state={self.state!r}, output={self.output!r})"


def _check_term(A, t):
    for _, node in postorder_positions(t):
        A.check_symbol(node.sym, node.w)


def run_det(A, t, trace=False, metrics=None):
    """Deterministic bottom-up run; returns a RunResult."""
    if not A.deterministic:
        raise NondeterministicError(f"{A.name} is nondeterministic; use run_nondet")
    _check_term(A, t)
    states = {}
    tr = {} if trace else None
    for u, node in postorder_positions(t):
        if node.kids:
            qs = tuple(states.pop(u + (i,)) for i in range(1, len(node.kids) + 1))
        else:
            qs = ()
        q = A.delta(node.sym, node.w, qs)
        states[u] = q
        if trace:
            tr[u] = q
        if metrics is not None:
            metrics.transitions += 1
            metrics.see(q)
    q = states[()]
    return RunResult(q, A.output(q), tr, metrics)


def step_set(A, sym, w, child_sets, metrics=None):
    """All states reachable at a node from the children's state sets."""
    out = set()
    for qs in itertools.product(*child_sets):
        out.update(A.delta_set(sym, w, qs))
        if metrics is not None:
            metrics.transitions += 1
    # Error is a non-accepting sink: runs reaching it are dropped, as in determinize
    out.discard(ERROR)
    return sort_states(out)


def run_nondet(A, t, trace=False, metrics=None):
    """Determinized run: per-position sets of reachable states."""
    _check_term(A, t)
    sets = {}
    tr = {} if trace else None
    for u, node in postorder_positions(t):
        kids = [sets.pop(u + (i,)) for i in range(1, len(node.kids) + 1)]
        S = step_set(A, node.sym, node.w, kids, metrics)
        sets[u] = S
        if trace:
            tr[u] = S
        if metrics is not None:
            metrics.see_set(S)
    S = sets[()]
    if A.acceptor:
        out = any(A.accepts(q) for q in S)
    else:
        out = frozenset(A.output(q) for q in S)
    return RunResult(S, out, tr, metrics)


def instrument_ndeg(A, t):
    m = Metrics(sizes=False)
    run_nondet(A, t, metrics=m)
    return m.ndeg


def evaluate(A, t):
    """Comp(A)(t) for deterministic or nondeterministic A."""
    if A.deterministic:
        return run_det(A, t).output
    return run_nondet(A, t).output


# ---------------------------------------------------------------- combinators

def _same_signature(automata):
    widths = {A.width for A in automata}
    modes = {A.mode for A in automata}
    if len(widths) > 1 or len(modes) > 1:
        raise SignatureError("product factors must share annotation width and mode")


class Product(FlyAutomaton):
    """A1 x_g ... x_g Ak; states are tuples, output g(p1, ..., pk).

    With ``merge_error`` any tuple containing Error collapses to Error; this
    is only sound when such tuples can never reach a non-bottom output (as
    for conjunctions).
    """

    def __init__(self, automata, g, acceptor=None, merge_error=False, name=None):
        self.parts = tuple(automata)
        _same_signature(self.parts)
        self.width = self.parts[0].width
        self.mode = self.parts[0].mode
        self.deterministic = all(A.deterministic for A in self.parts)
        self.g = g
        self.acceptor = acceptor if acceptor is not None else all(A.acceptor for A in self.parts)
        self.merge_error = merge_error
        self.name = name or "product(" + ",".join(A.name for A in self.parts) + ")"

    def _delta(self, sym, w, qs):
        if qs:
            cols = list(zip(*qs))
            out = tuple(A.delta(sym, w, col) for A, col in zip(self.parts, cols))
        else:
            out = tuple(A.delta(sym, w, ()) for A in self.parts)
        if self.merge_error and ERROR in out:
            return ERROR
        return out

    def _delta_set(self, sym, w, qs):
        if self.deterministic:
            return (self._delta(sym, w, qs),)
        cols = list(zip(*qs)) if qs else [()] * len(self.parts)
        options = [A.delta_set(sym, w, col) for A, col in zip(self.parts, cols)]
        res = set()
        for combo in itertools.product(*options):
            if self.merge_error and ERROR in combo:
                res.add(ERROR)
            else:
                res.add(combo)
        return sort_states(res)

    def _output(self, q):
        return self.g(*q)


def product(automata, g, acceptor=None, merge_error=False, name=None):
    return Product(automata, g, acceptor, merge_error, name)


def on_outputs(automata, f):
    """g acting on the component outputs (the usual product)."""
    automata = tuple(automata)
    return lambda *ps: f(*(A.output(p) for A, p in zip(automata, ps)))


def conj(*automata):
    return Product(automata, on_outputs(automata, lambda *vs: all(v is True for v in vs)),
                   acceptor=True, merge_error=True, name="and")


def disj(*automata):
    return Product(automata, on_outputs(automata, lambda *vs: any(v is True for v in vs)),
                   acceptor=True, name="or")


def pairing(*automata):
    return Product(automata, on_outputs(automata, lambda *vs: tuple(vs)), acceptor=False,
                   name="pair")


class MapOutput(FlyAutomaton):
    """g o A: same states and transitions, output g(Out_A(q)); g(⊥) = ⊥."""

    def __init__(self, A, g, acceptor=False, name=None):
        self.inner = A
        self.g = g
        self.width = A.width
        self.mode = A.mode
        self.deterministic = A.deterministic
        self.acceptor = acceptor
        self.name = name or f"map({A.name})"

    def _delta(self, sym, w, qs):
        return self.inner.delta(sym, w, qs)

    def _delta_set(self, sym, w, qs):
        return self.inner.delta_set(sym, w, qs)

    def delta_multi(self, sym, w, qs):
        return self.inner.delta_multi(sym, w, qs)

    def _output(self, q):
        v = self.inner.output(q)
        if v is None:
            return False if self.acceptor else None
        return self.g(v)


def map_output(g, A, acceptor=False, name=None):
    return MapOutput(A, g, acceptor, name)


class Negate(FlyAutomaton):
    """Complement of a deterministic acceptor.

    The inner Error sink becomes an accepting sink, so it is renamed.
    """

    def __init__(self, A):
        if not A.deterministic:
            raise NondeterministicError("negation needs a deterministic automaton; determinize first")
        if not A.acceptor:
            raise TypeError("negation applies to acceptors")
        self.inner = A
        self.width = A.width
        self.mode = A.mode
        self.name = f"not({A.name})"

    def _delta(self, sym, w, qs):
        inner_qs = tuple(_swap_sinks(q) for q in qs)
        return _swap_sinks(self.inner.delta(sym, w, inner_qs))

    def _output(self, q):
        return not self.inner.accepts(_swap_sinks(q))

    def output(self, q):
        if q is ERROR:
            return False
        return self._output(q)


def _swap_sinks(q):
    if q is ERROR:
        return ACCEPT_SINK
    if q is ACCEPT_SINK:
        return ERROR
    return q


def negate(A):
    return Negate(A)


class Image(FlyAutomaton):
    """h(A): transitions of A relabelled by h (generally nondeterministic)."""

    def __init__(self, h, A):
        if A.width != h.src_width:
            raise SignatureError("relabelling source width differs from the automaton's")
        self.h = h
        self.inner = A
        self.width = h.dst_width
        self.mode = A.mode
        self.deterministic = False
        self.acceptor = A.acceptor
        self.name = f"image({A.name})"

    def check_symbol(self, sym, w):
        FlyAutomaton.check_symbol(self, sym, w)

    def delta_multi(self, sym, w, qs):
        for q in qs:
            if q is ERROR:
                return [ERROR]
        out = []
        for sym2, w2 in self.h.preimages(sym, w):
            if sym2.arity != sym.arity:
                raise SignatureError("image under a relabelling that changes arities")
            out.extend(self.inner.delta_multi(sym2, w2, qs))
        return out

    def _delta_set(self, sym, w, qs):
        return sort_states(set(self.delta_multi(sym, w, qs)))

    def _output(self, q):
        return self.inner.output(q)


def image(h, A):
    return Image(h, A)


class InverseImage(FlyAutomaton):
    """h^-1(A): reads (f, w) as A would read h(f, w)."""

    def __init__(self, h, A):
        if A.width != h.dst_width:
            raise SignatureError("relabelling target width differs from the automaton's")
        self.h = h
        self.inner = A
        self.width = h.src_width
        self.mode = A.mode
        self.deterministic = A.deterministic
        self.acceptor = A.acceptor
        self.name = f"inv({A.name})"

    def _delta(self, sym, w, qs):
        sym2, w2 = self.h.apply(sym, w)
        return self.inner.delta(sym2, w2, qs)

    def _delta_set(self, sym, w, qs):
        sym2, w2 = self.h.apply(sym, w)
        return self.inner.delta_set(sym2, w2, qs)

    def delta_multi(self, sym, w, qs):
        sym2, w2 = self.h.apply(sym, w)
        return self.inner.delta_multi(sym2, w2, qs)

    def _output(self, q):
        return self.inner.output(q)


def inverse_image(h, A):
    if getattr(h, "is_identity", lambda: False)():
        return A
    return InverseImage(h, A)


class Cached(FlyAutomaton):
    """A with a transition table filled on demand.

    Transitions are still computed by A; the table only remembers them, so
    runs over many similar terms share work.  The table is dropped when it
    grows past ``limit`` entries.
    """

    def __init__(self, A, limit=1_000_000):
        self.inner = A
        self.width = A.width
        self.mode = A.mode
        self.deterministic = A.deterministic
        self.acceptor = A.acceptor
        self.name = A.name
        self.limit = limit
        self.table = {}
        self.hits = 0

    def delta(self, sym, w, qs):
        key = (sym, w, qs)
        try:
            q = self.table[key]
            self.hits += 1
            return q
        except KeyError:
            pass
        q = self.inner.delta(sym, w, qs)
        if len(self.table) >= self.limit:
            self.table.clear()
        self.table[key] = q
        return q

    def _delta(self, sym, w, qs):
        return self.delta(sym, w, qs)

    def _delta_set(self, sym, w, qs):
        return self.inner.delta_set(sym, w, qs)

    def delta_multi(self, sym, w, qs):
        return self.inner.delta_multi(sym, w, qs)

    def output(self, q):
        return self.inner.output(q)

    def check_symbol(self, sym, w):
        return self.inner.check_symbol(sym, w)


def cached(A, limit=1_000_000):
    """Memoize the transitions of A (see :class:`Cached`)."""
    return A if isinstance(A, Cached) else Cached(A, limit)


class Restrict(FlyAutomaton):
    """A restricted to the symbols accepted by ``allowed(sym)``."""

    def __init__(self, A, allowed, name=None):
        self.inner = A
        self.allowed = allowed
        self.width = A.width
        self.mode = A.mode
        self.deterministic = A.deterministic
        self.acceptor = A.acceptor
        self.name = name or f"restrict({A.name})"

    def check_symbol(self, sym, w):
        if not self.allowed(sym):
            raise SignatureError(f"symbol {sym.text()} is outside the restricted signature")
        self.inner.check_symbol(sym, w)

    def _delta(self, sym, w, qs):
        return self.inner.delta(sym, w, qs)

    def _delta_set(self, sym, w, qs):
        return self.inner.delta_set(sym, w, qs)

    def _output(self, q):
        return self.inner.output(q)


def restrict(A, allowed):
    return Restrict(A, allowed)


def within_Fk(k):
    """Predicate for symbols of F_k (labels at most k)."""
    return lambda sym: all(x <= k for x in sym.labels())


class Determinize(FlyAutomaton):
    """Subset construction on the fly: states are frozensets of A-states.

    Error members are dropped (they can never be accepting); an empty set is
    itself reported as Error.  ``output`` is 'accept' (some member accepts)
    or 'set' (the set of member outputs, bottom removed).
    """

    def __init__(self, A, output="accept", name=None):
        self.inner = A
        self.width = A.width
        self.mode = A.mode
        self.deterministic = True
        self.kind = output
        self.acceptor = output == "accept"
        self.name = name or f"det({A.name})"

    def _delta(self, sym, w, qs):
        res = set()
        inner = self.inner
        for combo in itertools.product(*qs):
            res.update(inner.delta_set(sym, w, combo))
        res.discard(ERROR)
        if not res:
            return ERROR
        return frozenset(res)

    def _output(self, q):
        if self.kind == "accept":
            return any(self.inner.accepts(p) for p in q)
        outs = set()
        for p in q:
            v = self.inner.output(p)
            if v is not None:
                outs.add(v)
        return frozenset(outs)

    def output(self, q):
        if q is ERROR:
            return False if self.acceptor else frozenset()
        return self._output(q)


def determinize(A, output="accept", name=None):
    return Determinize(A, output, name)


def sorted_set(q):
    """Canonical order of a determinized state."""
    return tuple(sorted(q, key=canon))
