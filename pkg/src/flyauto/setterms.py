"""Set terms over X1..Xn and relabellings of annotated symbols.

A relabelling maps an annotated symbol (sym, w) to another one.  The
engine uses ``apply`` for inverse images and ``preimages`` for images.
"""

import itertools
from dataclasses import dataclass

from .terms import Const, EMPTY, Term, map_nodes


# ---------------------------------------------------------------- set terms

@dataclass(frozen=True)
class Var:
    index: int  # 1-based

    def eval(self, w):
        return w[self.index - 1]

    def max_var(self):
        return self.index

    def __str__(self):
        return f"X{self.index}"


@dataclass(frozen=True)
class EmptySet:
    def eval(self, w):
        return 0

    def max_var(self):
        return 0

    def __str__(self):
        return "emptyset"


@dataclass(frozen=True)
class Universe:
    def eval(self, w):
        return 1

    def max_var(self):
        return 0

    def __str__(self):
        return "univ"


@dataclass(frozen=True)
class Union:
    parts: tuple

    def eval(self, w):
        return int(any(p.eval(w) for p in self.parts))

    def max_var(self):
        return max((p.max_var() for p in self.parts), default=0)

    def __str__(self):
        return "union(" + ",".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class Inter:
    parts: tuple

    def eval(self, w):
        return int(all(p.eval(w) for p in self.parts))

    def max_var(self):
        return max((p.max_var() for p in self.parts), default=0)

    def __str__(self):
        return "inter(" + ",".join(map(str, self.parts)) + ")"


@dataclass(frozen=True)
class Compl:
    part: object

    def eval(self, w):
        return 1 - self.part.eval(w)

    def max_var(self):
        return self.part.max_var()

    def __str__(self):
        return f"compl({self.part})"


def eval_set_term(expr, sets, universe):
    """Evaluate a set term on actual sets (used by oracles)."""
    if isinstance(expr, Var):
        return frozenset(sets[expr.index - 1])
    if isinstance(expr, EmptySet):
        return frozenset()
    if isinstance(expr, Universe):
        return frozenset(universe)
    if isinstance(expr, Union):
        out = frozenset()
        for p in expr.parts:
            out |= eval_set_term(p, sets, universe)
        return out
    if isinstance(expr, Inter):
        out = frozenset(universe)
        for p in expr.parts:
            out &= eval_set_term(p, sets, universe)
        return out
    if isinstance(expr, Compl):
        return frozenset(universe) - eval_set_term(expr.part, sets, universe)
    raise TypeError(expr)


# ---------------------------------------------------------------- relabellings

def annotated(sym, mode):
    return mode == "term" or isinstance(sym, Const)


def all_bits(s):
    return list(itertools.product((0, 1), repeat=s))


class Relabelling:
    src_width = 0
    dst_width = 0
    mode = "graph"

    def apply(self, sym, w):
        raise NotImplementedError

    def preimages(self, sym, w):
        raise NotImplementedError(f"{type(self).__name__} has no computable inverse")

    def apply_term(self, t):
        """h applied to every symbol of an annotated term."""
        def f(node, kids):
            sym, w = self.apply(node.sym, node.w)
            if sym.arity != node.sym.arity:
                raise ValueError("relabelling is not arity preserving")
            return Term(sym, kids, w)
        return map_nodes(t, f)


class Identity(Relabelling):
    def __init__(self, width, mode="graph"):
        self.src_width = self.dst_width = width
        self.mode = mode

    def apply(self, sym, w):
        return sym, w

    def preimages(self, sym, w):
        return [(sym, w)]


class Projection(Relabelling):
    """Keep the first ``keep`` Booleans, drop the rest (pr)."""

    def __init__(self, width, keep=0, mode="graph"):
        if not 0 <= keep <= width:
            raise ValueError("bad projection")
        self.src_width = width
        self.dst_width = keep
        self.mode = mode

    def apply(self, sym, w):
        if annotated(sym, self.mode):
            return sym, w[:self.dst_width]
        return sym, w

    def preimages(self, sym, w):
        if annotated(sym, self.mode):
            return [(sym, w + b) for b in all_bits(self.src_width - self.dst_width)]
        return [(sym, w)]


class SetTermRelabelling(Relabelling):
    """(f, w) -> (f, w') with w'[j] the truth value of S_j under w."""

    def __init__(self, exprs, n, mode="graph"):
        self.exprs = tuple(exprs)
        for e in self.exprs:
            if e.max_var() > n:
                raise ValueError(f"set term {e} uses a variable beyond X{n}")
        self.src_width = n
        self.dst_width = len(self.exprs)
        self.mode = mode
        self._cache = {}

    def is_identity(self):
        return self.exprs == tuple(Var(i + 1) for i in range(self.src_width))

    def map_bits(self, w):
        r = self._cache.get(w)
        if r is None:
            r = self._cache[w] = tuple(e.eval(w) for e in self.exprs)
        return r

    def apply(self, sym, w):
        if annotated(sym, self.mode):
            return sym, self.map_bits(w)
        return sym, w

    def preimages(self, sym, w):
        if annotated(sym, self.mode):
            return [(sym, v) for v in all_bits(self.src_width) if self.map_bits(v) == w]
        return [(sym, w)]


class Relativization(Relabelling):
    """Unselected vertices become the empty graph: (c,w0) -> ∅, (c,w1) -> (c,w)."""

    def __init__(self, width):
        self.src_width = width + 1
        self.dst_width = width
        self.mode = "graph"

    def apply(self, sym, w):
        if isinstance(sym, Const):
            if w[-1]:
                return sym, w[:-1]
            return EMPTY, ()
        return sym, w


def set_term_relabelling(exprs, n, mode="graph"):
    return SetTermRelabelling(exprs, n, mode)
