"""Queries: properties and functions built from atoms, compiled to fly-automata.

Variables whose name starts with an uppercase letter range over sets of
vertices (of positions, in term mode); lowercase names are first-order and
range over single vertices.  Text syntax::

    exists(X1..X4, and(partition(X1,X2,X3,X4), stable(X1), ...))
    count(x, y, edg(x, y))
    msp(X, cc(X))
    mincard(X, regular(compl(X)))

An atom of width k written with k+1 set arguments is relativized to the
last one: ``conn(X)`` is Conn[X], connectedness of G[X].
"""

import re
from dataclasses import dataclass

from . import graphprops as gp
from . import termprops as tp
from .aggregates import aggregate_automaton, builtin_semiring
from .automata import (conj, constant_automaton, determinize, disj, image,
                       inverse_image, map_output, negate, product)
from .setterms import (Compl, EmptySet, Inter, Projection, Relativization, SetTermRelabelling,
                       Union, Universe, Var)


class QueryError(ValueError):
    pass


# ---------------------------------------------------------------- AST

@dataclass(frozen=True)
class SVar:
    name: str

    def __str__(self):
        return self.name


def V(name):
    return SVar(name)


def compl(x):
    return Compl(x)


def inter(*xs):
    return Inter(tuple(xs))


def union(*xs):
    return Union(tuple(xs))


def univ():
    return Universe()


def emptyset():
    return EmptySet()


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple = ()
    params: tuple = ()


def atom(name, *args):
    sets = tuple(a for a in args if not isinstance(a, (int, str)))
    params = tuple(a for a in args if isinstance(a, (int, str)))
    return Atom(name, sets, params)


@dataclass(frozen=True)
class TrueQ:
    value: bool = True


@dataclass(frozen=True)
class ConstQ:
    value: object


@dataclass(frozen=True)
class And:
    parts: tuple


@dataclass(frozen=True)
class Or:
    parts: tuple


@dataclass(frozen=True)
class Not:
    part: object


def Implies(a, b):
    return Or((Not(a), b))


@dataclass(frozen=True)
class Exists:
    vars: tuple
    body: object


@dataclass(frozen=True)
class Forall:
    vars: tuple
    body: object


@dataclass(frozen=True)
class Head:
    """Aggregate head binding ``vars`` over ``body``.

    kind: count, sp, msp, mincard, maxcard, sat, witness, witness_min,
    witness_max, witness_card, setval.
    """
    kind: str
    vars: tuple
    body: object


@dataclass(frozen=True)
class Relativize:
    body: object
    set: object


@dataclass(frozen=True)
class Down:
    """α↓ (or α⇂ with single=True) relative to the set ``set``; term mode."""
    body: object
    set: object
    single: bool = False


@dataclass(frozen=True)
class Compose:
    fn: str
    parts: tuple


@dataclass(frozen=True)
class RestrictF:
    """α↾P: the value of α where P holds, bottom elsewhere."""
    body: object
    cond: object


@dataclass(frozen=True)
class Ite:
    cond: object
    then: object
    other: object


HEADS = ("count", "sp", "msp", "mincard", "maxcard", "sat", "witness", "witness_min",
         "witness_max", "witness_card", "setval")


def is_fo(name):
    return name[:1].islower()


# ---------------------------------------------------------------- atoms

class AtomSpec:
    def __init__(self, graph=None, term=None, nsets=None):
        self.graph = graph
        self.term = term
        self.nsets = nsets      # None: read from the built automaton

    def build(self, mode, nargs, params):
        b = self.graph if mode == "graph" else self.term
        if b is None:
            raise QueryError(f"atom not available in {mode} mode")
        return b(nargs, *params)


def _fixed(fn):
    return lambda n, *p: fn(*p)


def _both(cls):
    return AtomSpec(graph=_fixed(cls), term=lambda n, *p: tp.term_set_atom(cls(*p)))


ATOMS = {
    "sgl": _both(gp.Sgl),
    "empty": _both(gp.IsEmpty),
    "subseteq": _both(gp.Subseteq),
    "subset": _both(gp.Subseteq),
    "eq": _both(gp.SetEq),
    "cardmod": _both(gp.CardMod),
    "card_le": _both(gp.CardLe),
    "card_ge": _both(gp.CardGe),
    "card": _both(gp.Card),
    "card_leq": AtomSpec(graph=_fixed(gp.CardLeq)),
    "partition": AtomSpec(graph=lambda n, *p: gp.Partition(n), nsets="all"),
    "edg": AtomSpec(graph=_fixed(gp.Edg)),
    "lab": AtomSpec(graph=_fixed(gp.Lab)),
    "stable": AtomSpec(graph=_fixed(gp.Stable)),
    "link": AtomSpec(graph=_fixed(gp.Link)),
    "path": AtomSpec(graph=_fixed(gp.Path)),
    "clique": AtomSpec(graph=_fixed(gp.Clique)),
    "conn": AtomSpec(graph=_fixed(gp.Conn)),
    "cycle": AtomSpec(graph=_fixed(gp.Cycle)),
    "dircycle": AtomSpec(graph=_fixed(gp.DirCycle)),
    "e": AtomSpec(graph=_fixed(gp.EdgeCount)),
    "e_between": AtomSpec(graph=_fixed(gp.EdgesBetween)),
    "outdeg": AtomSpec(graph=_fixed(gp.outdegree_automaton)),
    "maxdeg": AtomSpec(graph=_fixed(gp.MaxDeg)),
    "regular": AtomSpec(graph=_fixed(gp.Regular)),
    "degle": AtomSpec(graph=_fixed(gp.DegLe)),
    "kappa": AtomSpec(graph=_fixed(gp.Kappa)),
    "comp_msp": AtomSpec(graph=_fixed(gp.CompMSp)),
    "vertex_lt": AtomSpec(graph=_fixed(gp.VertexLt)),
    # term mode
    "ht": AtomSpec(term=_fixed(tp.height_automaton)),
    "size": AtomSpec(term=_fixed(tp.size_automaton)),
    "unif": AtomSpec(term=_fixed(tp.uniform_automaton)),
    "posf": AtomSpec(term=_fixed(tp.posf_automaton)),
    "id": AtomSpec(term=_fixed(tp.id_automaton)),
    "elem": AtomSpec(term=_fixed(tp.element_automaton)),
    "prefix_lt": AtomSpec(term=_fixed(tp.prefix_order_automaton)),
    "relht": AtomSpec(term=_fixed(tp.relativized_height_automaton)),
    "son": AtomSpec(term=_fixed(tp.Son)),
    "ce18": AtomSpec(term=_fixed(tp.counter_example_automaton)),
    "unif_at": AtomSpec(term=_fixed(lambda: tp.subterm_restrict(tp.uniform_automaton(), True))),
    "ht_at": AtomSpec(term=_fixed(lambda: tp.subterm_restrict(tp.height_automaton(), True))),
    "size_at": AtomSpec(term=_fixed(lambda: tp.subterm_restrict(tp.size_automaton(), True))),
}


def register_atom(name, graph=None, term=None):
    """Add an atom; builders take the atom's integer/string parameters."""
    ATOMS[name] = AtomSpec(graph=_fixed(graph) if graph else None,
                           term=_fixed(term) if term else None)


# ---------------------------------------------------------------- computable maps

def _differ_le1(v):
    v = tuple(v)
    return not v or max(v) - min(v) <= 1


def _maxof(s):
    return max(s) if s else None


def _minof(s):
    return min(s) if s else None


MAPS = {
    "le": (lambda a, b: a <= b, True),
    "lt": (lambda a, b: a < b, True),
    "ge": (lambda a, b: a >= b, True),
    "gt": (lambda a, b: a > b, True),
    "eq": (lambda a, b: a == b, True),
    "ne": (lambda a, b: a != b, True),
    "not": (lambda a: not a, True),
    "sum": (lambda *xs: sum(xs), False),
    "add": (lambda *xs: sum(xs), False),
    "mul": (lambda a, b: a * b, False),
    "max": (lambda *xs: max(xs), False),
    "min": (lambda *xs: min(xs), False),
    "tuple": (lambda *xs: tuple(xs), False),
    "first": (lambda x: x[0], False),
    "second": (lambda x: x[1], False),
    "maxof": (_maxof, False),
    "minof": (_minof, False),
    "size": (len, False),
    "differ_le1": (_differ_le1, True),
    "any_differ_le1": (lambda s: any(_differ_le1(v) for v in s), True),
}


def register_map(name, fn, predicate=False):
    MAPS[name] = (fn, predicate)


# ---------------------------------------------------------------- analysis

def _set_vars(e):
    if isinstance(e, SVar):
        return [e.name]
    if isinstance(e, (Union, Inter)):
        out = []
        for p in e.parts:
            out += _set_vars(p)
        return out
    if isinstance(e, Compl):
        return _set_vars(e.part)
    return []


def free_vars(q):
    """Free variables in order of first occurrence."""
    seen = []

    def note(names, bound):
        for n in names:
            if n not in bound and n not in seen:
                seen.append(n)

    def walk(q, bound):
        if isinstance(q, Atom):
            for a in q.args:
                note(_set_vars(a), bound)
        elif isinstance(q, (And, Or)):
            for p in q.parts:
                walk(p, bound)
        elif isinstance(q, Not):
            walk(q.part, bound)
        elif isinstance(q, (Exists, Forall, Head)):
            walk(q.body, bound | set(q.vars))
        elif isinstance(q, (Relativize, Down)):
            walk(q.body, bound)
            note(_set_vars(q.set), bound)
        elif isinstance(q, Compose):
            for p in q.parts:
                walk(p, bound)
        elif isinstance(q, RestrictF):
            walk(q.body, bound)
            walk(q.cond, bound)
        elif isinstance(q, Ite):
            walk(q.cond, bound)
            walk(q.then, bound)
            walk(q.other, bound)
    walk(q, frozenset())
    return seen


def _atoms(q):
    if isinstance(q, Atom):
        yield q
    for f in ("parts",):
        for p in getattr(q, f, ()) or ():
            yield from _atoms(p)
    for f in ("part", "body", "cond", "then", "other"):
        p = getattr(q, f, None)
        if p is not None and not isinstance(p, (str, bool)):
            yield from _atoms(p)


def atom_names(q):
    """Names of the atoms occurring in q."""
    return {a.name for a in _atoms(q)}


def query_mode(q):
    """'term' when some atom exists only in term mode, else 'graph'."""
    modes = set()
    for a in _atoms(q):
        spec = ATOMS.get(a.name)
        if spec is None:
            raise QueryError(f"unknown atom {a.name!r}")
        if spec.graph is None:
            modes.add("term")
        elif spec.term is None:
            modes.add("graph")
    if len(modes) > 1:
        raise QueryError("query mixes graph atoms and term atoms")
    if any(isinstance(x, Down) for x in _nodes(q)):
        if "graph" in modes:
            raise QueryError("subterm restriction is for term queries")
        return "term"
    return modes.pop() if modes else "graph"


def _nodes(q):
    yield q
    for p in getattr(q, "parts", ()) or ():
        if not isinstance(p, (int, str)):
            yield from _nodes(p)
    for f in ("part", "body", "cond", "then", "other"):
        p = getattr(q, f, None)
        if p is not None and not isinstance(p, (str, bool, int)):
            yield from _nodes(p)


# ---------------------------------------------------------------- compiler

def _to_setterm(e, env):
    if isinstance(e, SVar):
        if e.name not in env:
            raise QueryError(f"variable {e.name} is not bound")
        return Var(env.index(e.name) + 1)
    if isinstance(e, Union):
        return Union(tuple(_to_setterm(p, env) for p in e.parts))
    if isinstance(e, Inter):
        return Inter(tuple(_to_setterm(p, env) for p in e.parts))
    if isinstance(e, Compl):
        return Compl(_to_setterm(e.part, env))
    if isinstance(e, (EmptySet, Universe)):
        return e
    raise QueryError(f"not a set term: {e!r}")


def _substitute(A, exprs, env, mode):
    h = SetTermRelabelling(tuple(_to_setterm(e, env) for e in exprs), len(env), mode)
    return inverse_image(h, A)


def sgl_automaton(mode="graph"):
    return gp.Sgl() if mode == "graph" else tp.term_set_atom(gp.Sgl())


def _trackers(n, idxs, mode):
    return [inverse_image(SetTermRelabelling((Var(i + 1),), n, mode), sgl_automaton(mode))
            for i in idxs]


def fo_guard(A, idxs, mode=None):
    """A restricted to assignments where the variables at ``idxs`` are singletons.

    Tuples with an Error component collapse into one Error state.
    """
    mode = mode or A.mode
    if not idxs:
        return A
    tr = _trackers(A.width, idxs, mode)
    if A.acceptor:
        return conj(A, *tr)
    parts = (A,) + tuple(tr)

    def g(q, *ts):
        if all(T.accepts(s) for T, s in zip(tr, ts)):
            return A.output(q)
        return None
    return product(parts, g, acceptor=False, merge_error=True, name=f"fo({A.name})")


def fo_image(A, k, mode=None):
    """pr of A ∧ Sgl(x) for the last k variables: nondeterministic."""
    mode = mode or A.mode
    n = A.width
    C = fo_guard(A, range(n - k, n), mode)
    return image(Projection(n, n - k, mode), C)


def fo_quantify(A, k, kind="exists"):
    """∃ (or ∀) over the last k variables, taken as first-order variables."""
    if kind == "exists":
        return determinize(fo_image(A, k))
    if kind == "forall":
        return negate(determinize(fo_image(negate(A), k)))
    raise ValueError(kind)


def setval_fo(A, k):
    """SetVal x1..xk. α(x1..xk): set of non-bottom values over vertex tuples."""
    return determinize(fo_image(A, k), output="set")


def sat_fo(A, k):
    """Sat over first-order variables, as a set of position tuples."""
    n = A.width
    B = aggregate_automaton(fo_guard(A, range(n - k, n)), "sat", keep=n - k)
    return map_output(_points, B, name=f"satfo({A.name})")


def count_fo(A, k):
    n = A.width
    return aggregate_automaton(fo_guard(A, range(n - k, n)), "count", keep=n - k)


def _points(tuples):
    return frozenset(tuple(next(iter(X)) for X in x) for x in tuples)


def relativize(A):
    """A over s+1 Booleans evaluated on G[X_{s+1}]."""
    if A.mode != "graph":
        raise QueryError("relativization is defined for graph automata only")
    return inverse_image(Relativization(A.width), A)


def subterm_restrict(A, single=False):
    if A.mode != "term":
        raise QueryError("subterm restriction is defined for term automata only")
    return tp.subterm_restrict(A, single)


def compile_query(q, free=(), mode=None):
    """Compile q to a deterministic automaton over len(free) Booleans."""
    free = tuple(free)
    missing = [v for v in free_vars(q) if v not in free]
    if missing:
        raise QueryError(f"free variables {', '.join(missing)} must be bound")
    mode = mode or query_mode(q)
    return _compile(q, free, mode)


def _check_new(vars, env):
    for v in vars:
        if v in env:
            raise QueryError(f"variable {v} is bound twice")
    if len(set(vars)) != len(vars):
        raise QueryError("repeated variable in a binder")


def _compile(q, env, mode):
    n = len(env)
    if isinstance(q, Atom):
        spec = ATOMS.get(q.name)
        if spec is None:
            raise QueryError(f"unknown atom {q.name!r}")
        try:
            A = spec.build(mode, len(q.args), q.params)
        except TypeError as exc:
            raise QueryError(f"bad parameters for {q.name}: {exc}") from None
        if len(q.args) == A.width + 1 and mode == "graph" and spec.nsets != "all":
            return _compile(Relativize(Atom(q.name, q.args[:-1], q.params), q.args[-1]),
                            env, mode)
        if len(q.args) != A.width:
            raise QueryError(f"{q.name} takes {A.width} set arguments, got {len(q.args)}")
        return _substitute(A, q.args, env, mode)
    if isinstance(q, TrueQ):
        return constant_automaton(q.value, n, mode)
    if isinstance(q, ConstQ):
        return constant_automaton(q.value, n, mode)
    if isinstance(q, And):
        parts = [_compile(p, env, mode) for p in q.parts]
        _need_acceptors(parts, "and")
        return parts[0] if len(parts) == 1 else conj(*parts)
    if isinstance(q, Or):
        parts = [_compile(p, env, mode) for p in q.parts]
        _need_acceptors(parts, "or")
        return parts[0] if len(parts) == 1 else disj(*parts)
    if isinstance(q, Not):
        A = _compile(q.part, env, mode)
        _need_acceptors([A], "not")
        return negate(A)
    if isinstance(q, Exists):
        _check_new(q.vars, env)
        env2 = env + tuple(q.vars)
        B = _compile(q.body, env2, mode)
        _need_acceptors([B], "exists")
        B = fo_guard(B, [i for i in range(n, len(env2)) if is_fo(env2[i])], mode)
        return determinize(image(Projection(len(env2), n, mode), B))
    if isinstance(q, Forall):
        return _compile(Not(Exists(q.vars, Not(q.body))), env, mode)
    if isinstance(q, Head):
        return _compile_head(q, env, mode)
    if isinstance(q, Relativize):
        if mode != "graph":
            raise QueryError("relativization is defined for graph queries only")
        R = relativize(_compile(q.body, env, mode))
        return _substitute(R, tuple(SVar(v) for v in env) + (q.set,), env, mode)
    if isinstance(q, Down):
        if mode != "term":
            raise QueryError("subterm restriction is for term queries")
        D = subterm_restrict(_compile(q.body, env, mode), q.single)
        return _substitute(D, tuple(SVar(v) for v in env) + (q.set,), env, mode)
    if isinstance(q, Compose):
        if q.fn not in MAPS:
            raise QueryError(f"unknown map {q.fn!r}")
        fn, pred = MAPS[q.fn]
        parts = tuple(_compile(p, env, mode) for p in q.parts)
        if len(parts) == 1:
            return map_output(fn, parts[0], acceptor=pred, name=q.fn)

        def g(*qs):
            vals = [A.output(s) for A, s in zip(parts, qs)]
            if any(v is None for v in vals):
                return False if pred else None
            return fn(*vals)
        return product(parts, g, acceptor=pred, name=q.fn)
    if isinstance(q, RestrictF):
        F = _compile(q.body, env, mode)
        P = _compile(q.cond, env, mode)
        _need_acceptors([P], "restrict")

        def g(qf, qp):
            if P.accepts(qp):
                return F.output(qf)
            return False if F.acceptor else None
        return product((F, P), g, acceptor=F.acceptor, name="restrict")
    if isinstance(q, Ite):
        P = _compile(q.cond, env, mode)
        F = _compile(q.then, env, mode)
        G = _compile(q.other, env, mode)
        _need_acceptors([P], "ite")

        def g(qp, qf, qg):
            return F.output(qf) if P.accepts(qp) else G.output(qg)
        return product((P, F, G), g, acceptor=F.acceptor and G.acceptor, name="ite")
    raise QueryError(f"cannot compile {q!r}")


def _need_acceptors(parts, where):
    for A in parts:
        if not A.acceptor:
            raise QueryError(f"{where} expects properties, got the function {A.name}")


def _compile_head(q, env, mode):
    _check_new(q.vars, env)
    n = len(env)
    env2 = env + tuple(q.vars)
    fo = [i for i in range(n, len(env2)) if is_fo(env2[i])]
    B = _compile(q.body, env2, mode)
    if q.kind == "setval":
        G = fo_guard(B, fo, mode)
        if G.acceptor:
            G = map_output(lambda v: v, G, name="value")
        return determinize(image(Projection(len(env2), n, mode), G), output="set",
                           name=f"setval({B.name})")
    if q.kind not in HEADS:
        raise QueryError(f"unknown head {q.kind!r}")
    _need_acceptors([B], q.kind)
    sr = builtin_semiring(q.kind)
    try:
        A = aggregate_automaton(fo_guard(B, fo, mode), sr, keep=n)
    except ValueError as exc:
        raise QueryError(str(exc)) from None
    if fo and len(fo) == len(q.vars):
        if q.kind == "sat":
            return map_output(_points, A, name="sat")
        if q.kind.startswith("witness") and q.kind != "witness_card":
            return map_output(lambda x: tuple(next(iter(X)) for X in x), A, name=q.kind)
    return A


def evaluate(q, t, mode=None):
    """Value of a closed query on a term (plain run of the compiled automaton)."""
    from .automata import run_det
    A = compile_query(q, mode=mode)
    return run_det(A, t).output


# ---------------------------------------------------------------- text syntax

_TOK = re.compile(r"\s*(?:(?P<range>\.\.)|(?P<id>\d*[A-Za-z_][A-Za-z0-9_]*)|(?P<int>-?\d+)"
                  r"|(?P<str>\"[^\"]*\")|(?P<p>[(),]))")


def _lex(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m or m.end() == pos:
            raise QueryError(f"unexpected character at offset {pos}: {text[pos:pos + 10]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


@dataclass
class _Call:
    name: str
    args: list
    paren: bool


class _Reader:
    def __init__(self, text):
        self.toks = _lex(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, -1)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None:
            raise QueryError(f"unexpected end of query, expected {value or 'more input'}")
        if value is not None and tok[1] != value:
            raise QueryError(f"expected {value!r} at offset {tok[2]}, found {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        kind, val, at = self.take()
        if kind == "int":
            return int(val)
        if kind == "str":
            return val[1:-1]
        if kind != "id":
            raise QueryError(f"unexpected {val!r} at offset {at}")
        if self.peek()[1] == "..":
            self.take("..")
            _, end, _ = self.take()
            return ("range", val, end)
        if self.peek()[1] == "(":
            self.take("(")
            args = []
            if self.peek()[1] != ")":
                args.append(self.expr())
                while self.peek()[1] == ",":
                    self.take(",")
                    args.append(self.expr())
            self.take(")")
            return _Call(val, args, True)
        return _Call(val, [], False)


def _expand_range(r):
    _, a, b = r
    ma, mb = re.fullmatch(r"(\D+)(\d+)", a), re.fullmatch(r"(\D+)(\d+)", b)
    if not ma or not mb or ma.group(1) != mb.group(1):
        raise QueryError(f"bad variable range {a}..{b}")
    lo, hi = int(ma.group(2)), int(mb.group(2))
    if hi < lo:
        raise QueryError(f"empty variable range {a}..{b}")
    return [f"{ma.group(1)}{i}" for i in range(lo, hi + 1)]


_SET_FUNS = {"union", "inter", "compl", "emptyset", "univ"}
_VAR = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


def _var_list(items):
    out = []
    for x in items:
        if isinstance(x, tuple):
            out += _expand_range(x)
        elif isinstance(x, _Call) and not x.paren and _VAR.fullmatch(x.name):
            out.append(x.name)
        else:
            raise QueryError(f"expected a variable, got {x!r}")
    return tuple(out)


def _flat_args(args):
    out = []
    for a in args:
        if isinstance(a, tuple):
            out += [_Call(v, [], False) for v in _expand_range(a)]
        else:
            out.append(a)
    return out


def _set_term(x):
    if isinstance(x, tuple):
        raise QueryError("a variable range cannot be used as a set term")
    if not isinstance(x, _Call):
        raise QueryError(f"expected a set term, got {x!r}")
    if x.name in _SET_FUNS:
        parts = [_set_term(a) for a in _flat_args(x.args)]
        if x.name == "compl":
            if len(parts) != 1:
                raise QueryError("compl takes one argument")
            return Compl(parts[0])
        if x.name == "emptyset":
            return EmptySet()
        if x.name == "univ":
            return Universe()
        if not parts:
            raise QueryError(f"{x.name} needs arguments")
        return (Union if x.name == "union" else Inter)(tuple(parts))
    if x.paren or not _VAR.fullmatch(x.name):
        raise QueryError(f"expected a set term, got {x.name}(...)")
    return SVar(x.name)


def _cc(args):
    if len(args) not in (1, 2):
        raise QueryError("cc takes one or two set arguments")
    Y = args[0]
    if len(args) == 1:
        return And((Not(atom("empty", Y)), Atom("conn", (Y,)),
                    Not(atom("link", Y, Compl(Y)))))
    S = args[1]
    return And((atom("subseteq", Y, S), Not(atom("empty", Y)), Atom("conn", (Y,)),
                Not(atom("link", Y, Inter((S, Compl(Y)))))))


def _convert(x):
    if isinstance(x, bool):
        return TrueQ(x)
    if isinstance(x, int):
        return ConstQ(x)
    if isinstance(x, str):
        return ConstQ(x)
    if isinstance(x, tuple):
        raise QueryError("a variable range is only allowed in binders and atom arguments")
    name, args = x.name, x.args
    if name in ("true", "false") and not args:
        return TrueQ(name == "true")
    if name in ("and", "or"):
        parts = tuple(_convert(a) for a in args)
        if not parts:
            return TrueQ(name == "and")
        return (And if name == "and" else Or)(parts)
    if name == "not":
        _arity(x, 1)
        return Not(_convert(args[0]))
    if name == "implies":
        _arity(x, 2)
        return Implies(_convert(args[0]), _convert(args[1]))
    if name == "iff":
        _arity(x, 2)
        a, b = _convert(args[0]), _convert(args[1])
        return And((Implies(a, b), Implies(b, a)))
    if name in ("exists", "forall") or name in HEADS:
        if len(args) < 2 and name not in HEADS:
            raise QueryError(f"{name} needs variables and a body")
        if not args:
            raise QueryError(f"{name} needs a body")
        vars_ = _var_list(args[:-1])
        body = _convert(args[-1])
        if name == "exists":
            return Exists(vars_, body)
        if name == "forall":
            return Forall(vars_, body)
        return Head(name, vars_, body)
    if name == "ite":
        _arity(x, 3)
        return Ite(*(_convert(a) for a in args))
    if name == "restrict":
        _arity(x, 2)
        return RestrictF(_convert(args[0]), _convert(args[1]))
    if name == "compose":
        if not args or not isinstance(args[0], _Call) or args[0].paren:
            raise QueryError("compose(map, f1, ..., fn)")
        return Compose(args[0].name, tuple(_convert(a) for a in args[1:]))
    if name == "relativize":
        _arity(x, 2)
        return Relativize(_convert(args[0]), _set_term(args[1]))
    if name in ("down", "down1"):
        _arity(x, 2)
        return Down(_convert(args[0]), _set_term(args[1]), name == "down1")
    if name == "cc":
        return _cc([_set_term(a) for a in _flat_args(args)])
    preset = expand_preset(name, args)
    if preset is not None:
        return preset
    if name in ATOMS:
        sets, params = [], []
        for a in _flat_args(args):
            if isinstance(a, (int, str)):
                params.append(a)
            else:
                sets.append(_set_term(a))
        return Atom(name, tuple(sets), tuple(params))
    raise QueryError(f"unknown name {name!r}")


def _arity(x, k):
    if len(x.args) != k:
        raise QueryError(f"{x.name} takes {k} arguments")


def parse_query(text):
    r = _Reader(text)
    if not r.toks:
        raise QueryError("empty query")
    tree = r.expr()
    if r.peek()[0] is not None:
        raise QueryError(f"trailing input at offset {r.peek()[2]}")
    return _convert(tree)


# ---------------------------------------------------------------- presets

def _vars(prefix, s):
    return ",".join(f"{prefix}{i}" for i in range(1, s + 1))


def _coloring_body(s):
    return f"and(partition({_vars('X', s)}), " + ", ".join(f"stable(X{i})" for i in range(1, s + 1)) + ")"


def _preset_text(name, params):
    m = re.fullmatch(r"(\d+)col", name)
    if m and not params:
        params, name = [int(m.group(1))], "col"
    if name == "col":
        (s,) = params
        return f"exists(X1..X{s}, {_coloring_body(s)})"
    if name == "equitable":
        (s,) = params
        return f"compose(any_differ_le1, sp(X1..X{s}, {_coloring_body(s)}))"
    if name == "defective":
        s, d = params
        degs = ", ".join(f"degle({d}, X{i})" for i in range(1, s + 1))
        return f"exists(X1..X{s}, and(partition({_vars('X', s)}), {degs}))"
    if name == "acyclic":
        (s,) = params
        pairs = ", ".join(f"not(cycle(union(X{i},X{j})))"
                          for i in range(1, s + 1) for j in range(i + 1, s + 1))
        body = _coloring_body(s)[:-1] + (", " + pairs if pairs else "") + ")"
        return f"exists(X1..X{s}, {body})"
    if name == "maxdircut" and not params:
        return "compose(maxof, setval(X, e_between(X, compl(X))))"
    if name == "regbipartition" and not params:
        return "exists(X, and(regular(X), regular(compl(X))))"
    if name == "minint":
        (s,) = params
        es = ", ".join(f"e(X{i})" for i in range(1, s + 1))
        return (f"compose(minof, setval(X1..X{s}, restrict(compose(sum, {es}), "
                f"partition({_vars('X', s)}))))")
    if name == "connected" and not params:
        return "not(exists(X, and(not(empty(X)), not(eq(X, univ)), not(link(X, compl(X))))))"
    return None


PRESETS = ("col(s) / Ncol", "equitable(s)", "defective(s,d)", "acyclic(s)", "maxdircut",
           "regbipartition", "minint(s)", "connected")


def expand_preset(name, args):
    if name in ATOMS and not re.fullmatch(r"\d+col", name):
        return None
    if not all(isinstance(a, int) for a in args):
        return None
    try:
        text = _preset_text(name, list(args))
    except ValueError:
        raise QueryError(f"bad parameters for preset {name}") from None
    if text is None:
        return None
    return parse_query(text)


def with_head(q, kind):
    """Put an aggregate head on q: a top-level ∃ becomes the head, otherwise
    the head binds the free variables of q."""
    if kind is None:
        return q
    if isinstance(q, Exists):
        if kind == "exists":
            return q
        return Head(kind, q.vars, q.body)
    fv = tuple(free_vars(q))
    if kind == "exists":
        return Exists(fv, q) if fv else q
    return Head(kind, fv, q)
