"""Satisfying-assignment sets and their compressed aggregates.

``aggregate_automaton(A, sr)`` turns a deterministic acceptor over
annotated symbols into a deterministic automaton over plain symbols whose
state at a node maps each A-state q to the aggregate (under ``sr``) of the
assignments leading to q.  With the tuple-set semiring this is the Sat
automaton; counting, spectra, extremal cardinalities and witnesses are
other semirings.
"""

import itertools

from .automata import FlyAutomaton, NondeterministicError, run_det, SignatureError
from .setterms import all_bits, annotated
from .terms import annotate, postorder_positions
from .values import ERROR, FrozenMap, canon


# ---------------------------------------------------------------- semirings

class Semiring:
    name = "semiring"
    zero = None
    shift_invariant = True
    needs_single = False

    def plus(self, a, b):
        raise NotImplementedError

    def times(self, a, b):
        raise NotImplementedError

    def unit(self, w):
        raise NotImplementedError

    def shift(self, i, a):
        return a

    def is_zero(self, a):
        return a == self.zero

    def check_width(self, s):
        if self.needs_single and s != 1:
            raise ValueError(f"{self.name} needs exactly one bound set variable, got {s}")


class ExistsSR(Semiring):
    name = "exists"
    zero = False

    def plus(self, a, b):
        return a or b

    def times(self, a, b):
        # the product of two nonempty tuple sets is nonempty
        return a and b

    def unit(self, w):
        return True


class CountSR(Semiring):
    name = "count"
    zero = 0

    def plus(self, a, b):
        return a + b

    def times(self, a, b):
        return a * b

    def unit(self, w):
        return 1


class MSpSR(Semiring):
    """Multispectrum: map from cardinality vector to number of tuples."""
    name = "msp"
    zero = FrozenMap()

    def plus(self, a, b):
        if not a:
            return b
        if not b:
            return a
        d = dict(a)
        for k, v in b.items():
            d[k] = d.get(k, 0) + v
        return FrozenMap(d)

    def times(self, a, b):
        d = {}
        for k1, v1 in a.items():
            for k2, v2 in b.items():
                k = tuple(x + y for x, y in zip(k1, k2))
                d[k] = d.get(k, 0) + v1 * v2
        return FrozenMap(d)

    def unit(self, w):
        return FrozenMap({tuple(w): 1})

    def is_zero(self, a):
        return not a


class SpSR(Semiring):
    """Spectrum: set of cardinality vectors."""
    name = "sp"
    zero = frozenset()

    def plus(self, a, b):
        return a | b

    def times(self, a, b):
        return frozenset(tuple(x + y for x, y in zip(k1, k2)) for k1 in a for k2 in b)

    def unit(self, w):
        return frozenset([tuple(w)])

    def is_zero(self, a):
        return not a


class MinCardSR(Semiring):
    name = "mincard"
    zero = None
    needs_single = True

    def plus(self, a, b):
        if a is None:
            return b
        if b is None:
            return a
        return min(a, b)

    def times(self, a, b):
        if a is None or b is None:
            return None
        return a + b

    def unit(self, w):
        return w[0]

    def is_zero(self, a):
        return a is None


class MaxCardSR(MinCardSR):
    name = "maxcard"

    def plus(self, a, b):
        if a is None:
            return b
        if b is None:
            return a
        return max(a, b)


def _combine_tuples(x, y):
    return tuple(a | b for a, b in zip(x, y))


def _shift_tuple(i, x):
    return tuple(frozenset((i,) + u for u in X) for X in x)


def _unit_tuple(w):
    return tuple(frozenset([()]) if b else frozenset() for b in w)


class SatSR(Semiring):
    """Tuple sets themselves: finite sets of s-tuples of position sets."""
    name = "sat"
    zero = frozenset()
    shift_invariant = False

    def plus(self, a, b):
        return a | b

    def times(self, a, b):
        return frozenset(_combine_tuples(x, y) for x in a for y in b)

    def unit(self, w):
        return frozenset([_unit_tuple(w)])

    def shift(self, i, a):
        return frozenset(_shift_tuple(i, x) for x in a)

    def is_zero(self, a):
        return not a


def witness_key(x):
    """Tie-break order on tuples: cardinalities, then sorted positions."""
    return (tuple(len(X) for X in x), tuple(tuple(sorted(X)) for X in x))


class AnyWitnessSR(Semiring):
    name = "witness"
    zero = None
    shift_invariant = False

    def plus(self, a, b):
        if a is None:
            return b
        if b is None:
            return a
        return a if witness_key(a) <= witness_key(b) else b

    def times(self, a, b):
        if a is None or b is None:
            return None
        return _combine_tuples(a, b)

    def unit(self, w):
        return _unit_tuple(w)

    def shift(self, i, a):
        return None if a is None else _shift_tuple(i, a)

    def is_zero(self, a):
        return a is None


class MinWitnessSR(AnyWitnessSR):
    """One tuple of minimal (max=False) or maximal cardinality."""
    needs_single = True

    def __init__(self, maximize=False):
        self.maximize = maximize
        self.name = "witness_max" if maximize else "witness_min"

    def plus(self, a, b):
        if a is None:
            return b
        if b is None:
            return a
        ka, kb = witness_key(a), witness_key(b)
        if self.maximize:
            if len(a[0]) != len(b[0]):
                return a if len(a[0]) > len(b[0]) else b
        return a if ka <= kb else b


class CardWitnessSR(Semiring):
    """One representative tuple per cardinality vector."""
    name = "witness_card"
    zero = FrozenMap()
    shift_invariant = False

    def plus(self, a, b):
        if not a:
            return b
        if not b:
            return a
        d = dict(a)
        for k, x in b.items():
            if k not in d or witness_key(x) < witness_key(d[k]):
                d[k] = x
        return FrozenMap(d)

    def times(self, a, b):
        d = {}
        for k1, x in a.items():
            for k2, y in b.items():
                k = tuple(p + q for p, q in zip(k1, k2))
                z = _combine_tuples(x, y)
                if k not in d or witness_key(z) < witness_key(d[k]):
                    d[k] = z
        return FrozenMap(d)

    def unit(self, w):
        return FrozenMap({tuple(w): _unit_tuple(w)})

    def shift(self, i, a):
        return FrozenMap({k: _shift_tuple(i, x) for k, x in a.items()})

    def is_zero(self, a):
        return not a


EXISTS = ExistsSR()
COUNT = CountSR()
MSP = MSpSR()
SP = SpSR()
MINCARD = MinCardSR()
MAXCARD = MaxCardSR()
SAT = SatSR()


def builtin_semiring(kind):
    table = {"exists": EXISTS, "count": COUNT, "msp": MSP, "sp": SP,
             "mincard": MINCARD, "maxcard": MAXCARD, "sat": SAT,
             "witness": AnyWitnessSR(), "witness_any": AnyWitnessSR(),
             "witness_card": CardWitnessSR(), "witness_min": MinWitnessSR(False),
             "witness_max": MinWitnessSR(True)}
    if kind not in table:
        raise ValueError(f"unknown semiring {kind!r}")
    return table[kind]


# ---------------------------------------------------------------- A^gamma

class AggregateAutomaton(FlyAutomaton):
    """A^gamma.  The first ``keep`` Booleans stay free; the rest are bound."""

    def __init__(self, A, sr, keep=0, name=None):
        if not A.deterministic:
            raise NondeterministicError("aggregation needs a deterministic automaton")
        if not 0 <= keep <= A.width:
            raise ValueError("bad number of free variables")
        self.inner = A
        self.sr = sr
        self.keep = keep
        self.bound = A.width - keep
        sr.check_width(self.bound)
        self.width = keep
        self.mode = A.mode
        self.deterministic = True
        self.acceptor = sr is EXISTS
        self.name = name or f"{sr.name}({A.name})"
        self._bits = all_bits(self.bound)
        self._zeros = (0,) * self.bound

    def _delta(self, sym, w, qs):
        A = self.inner
        sr = self.sr
        ann = annotated(sym, self.mode)
        acc = {}
        if ann:
            choices = [(w + b, sr.unit(b)) for b in self._bits]
        else:
            choices = None
        if not qs:
            if choices is None:
                choices = [(w, sr.unit(self._zeros))]
            for wf, val in choices:
                q = A.delta(sym, wf, ())
                if q is ERROR:
                    continue
                acc[q] = sr.plus(acc[q], val) if q in acc else val
        else:
            lists = [[(q, sr.shift(i + 1, v)) for q, v in sigma.items()] for i, sigma in enumerate(qs)]
            for combo in itertools.product(*lists):
                child_states = tuple(c[0] for c in combo)
                val = combo[0][1]
                for c in combo[1:]:
                    val = sr.times(val, c[1])
                if choices is None:
                    q = A.delta(sym, w, child_states)
                    if q is ERROR:
                        continue
                    acc[q] = sr.plus(acc[q], val) if q in acc else val
                else:
                    for wf, u in choices:
                        q = A.delta(sym, wf, child_states)
                        if q is ERROR:
                            continue
                        v = sr.times(u, val)
                        acc[q] = sr.plus(acc[q], v) if q in acc else v
        return FrozenMap((q, v) for q, v in acc.items() if not sr.is_zero(v))

    def _output(self, sigma):
        A = self.inner
        total = self.sr.zero
        for q in sorted(sigma, key=canon):
            if A.accepts(q):
                total = self.sr.plus(total, sigma[q])
        return total

    def output(self, q):
        if q is ERROR:
            return self.sr.zero
        return self._output(q)


def aggregate_automaton(A, sr, keep=0, name=None):
    if isinstance(sr, str):
        sr = builtin_semiring(sr)
    return AggregateAutomaton(A, sr, keep, name)


def sat_automaton(A, keep=0):
    return AggregateAutomaton(A, SAT, keep)


def witness_automaton(A, mode="any", keep=0):
    sr = {"any": AnyWitnessSR(), "per-cardinality": CardWitnessSR(), "card": CardWitnessSR(),
          "min": MinWitnessSR(False), "max": MinWitnessSR(True)}[mode]
    return AggregateAutomaton(A, sr, keep, name=f"witness-{mode}({A.name})")


def find_witness(A, t, mode="any"):
    """Witness tuple for P on t (or None), re-checked by a direct run."""
    W = witness_automaton(A, mode)
    res = run_det(W, t).output
    if res is None or res == FrozenMap():
        return None
    tuples = list(res.values()) if isinstance(res, dict) else [res]
    for x in tuples:
        if not run_det(A, annotate(t, x, A.mode)).output:
            raise AssertionError("witness does not satisfy the property")
    return res


# ---------------------------------------------------------------- run counting

class CountRuns(FlyAutomaton):
    """Number of accepting runs of a (nondeterministic) automaton."""

    def __init__(self, N):
        self.inner = N
        self.width = N.width
        self.mode = N.mode
        self.deterministic = True
        self.acceptor = False
        self.name = f"runs({N.name})"

    def _delta(self, sym, w, qs):
        N = self.inner
        acc = {}
        if not qs:
            for q in N.delta_multi(sym, w, ()):
                acc[q] = acc.get(q, 0) + 1
        else:
            lists = [list(m.items()) for m in qs]
            for combo in itertools.product(*lists):
                states = tuple(c[0] for c in combo)
                mult = 1
                for c in combo:
                    mult *= c[1]
                for q in N.delta_multi(sym, w, states):
                    acc[q] = acc.get(q, 0) + mult
        acc.pop(ERROR, None)
        return FrozenMap(acc)

    def _output(self, mu):
        return sum(c for q, c in mu.items() if self.inner.accepts(q))

    def output(self, q):
        if q is ERROR:
            return 0
        return self._output(q)


def count_runs_automaton(N):
    return CountRuns(N)


# ---------------------------------------------------------------- enumeration

def enumerate_sat(A, t, limit=None, verify=True):
    """Yield the satisfying tuples of A on t, one by one.

    A bottom-up pass records, for every node and reachable A-state, the
    (bound Booleans, child states) pairs producing it; a depth-first walk
    down from the accepting root states then rebuilds each assignment once.
    """
    if not A.deterministic:
        raise NondeterministicError("enumeration needs a deterministic automaton")
    s = A.width
    bits = all_bits(s)
    zeros = (0,) * s
    nodes = {}
    pre = {}
    for u, node in postorder_positions(t):
        if node.w:
            raise SignatureError("enumerate_sat expects a term without annotations")
        nodes[u] = node
        ann = annotated(node.sym, A.mode)
        ws = bits if ann else [()]
        table = {}
        kid_states = [sorted(pre[u + (i,)], key=canon) for i in range(1, len(node.kids) + 1)]
        for combo in itertools.product(*kid_states):
            for w in ws:
                q = A.delta(node.sym, w, combo)
                if q is ERROR:
                    continue
                table.setdefault(q, []).append((w if ann else zeros, combo))
        pre[u] = table

    def walk(u, q):
        node = nodes[u]
        for w, combo in pre[u][q]:
            here = tuple(frozenset([u]) if b else frozenset() for b in w)
            if not combo:
                yield here
                continue
            yield from _combine(u, combo, 0, here)

    def _combine(u, combo, i, acc):
        if i == len(combo):
            yield acc
            return
        for part in walk(u + (i + 1,), combo[i]):
            yield from _combine(u, combo, i + 1, _combine_tuples(acc, part))

    count = 0
    roots = sorted((q for q in pre[()] if A.accepts(q)), key=canon)
    for q in roots:
        for x in walk((), q):
            if verify and not run_det(A, annotate(t, x, A.mode)).output:
                raise AssertionError("enumerated tuple fails the property")
            yield x
            count += 1
            if limit is not None and count >= limit:
                return


# ---------------------------------------------------------------- JSON helpers

def tuples_to_json(tuples):
    from .terms import fmt_pos
    out = []
    for x in sorted(tuples, key=witness_key):
        out.append([[fmt_pos(u) for u in sorted(X)] for X in x])
    return out


def msp_to_json(m):
    return [{"card": list(k), "mult": v} for k, v in sorted(m.items())]


def value_to_json(v):
    """Convert aggregate outputs to JSON-friendly data."""
    if isinstance(v, FrozenMap):
        if v and all(isinstance(x, int) for x in v.values()):
            keys = list(v)
            if all(isinstance(k, tuple) for k in keys):
                return msp_to_json(v)
            return {str(k): x for k, x in sorted(v.items())}
        return [value_to_json(x) for _, x in sorted(v.items())]
    if isinstance(v, (frozenset, set)):
        items = list(v)
        if items and isinstance(items[0], tuple) and items[0] and isinstance(items[0][0], frozenset):
            return tuples_to_json(items)
        return [value_to_json(x) for x in sorted(items, key=canon)]
    if isinstance(v, tuple):
        if v and isinstance(v[0], frozenset):
            return tuples_to_json([v])[0]
        return [value_to_json(x) for x in v]
    return v
