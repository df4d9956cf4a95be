"""Maximal subterm sharing and deterministic runs over the shared DAG.

``share`` hash-conses a term so that equal subterms become one node.  The
traversal is keyed on Python object identity first, so a term that is
already built with shared Python objects (like the recursive family below)
is processed in time linear in the number of distinct objects rather than
in its unfolded size.
"""

import re
from dataclasses import dataclass, field

from .automata import NondeterministicError, RunResult
from .terms import (AddDir, AddUndir, Const, Fn, Relab, Term, TermSyntaxError, EMPTY, OPLUS,
                    add, oplus, relab_term, leaf)


@dataclass
class SharedDag:
    """Node table: nodes[i] = (symbol, annotation, child ids); children precede parents."""
    nodes: list = field(default_factory=list)
    root: int = 0

    @property
    def node_count(self):
        return len(self.nodes)

    def __len__(self):
        return len(self.nodes)

    def edges(self):
        return sum(len(kids) for _, _, kids in self.nodes)


def share(t: Term) -> SharedDag:
    """Maximal sharing of t; ``unfold(share(t)) == t``."""
    table = {}
    nodes = []
    ids = {}  # id(Term object) -> node id
    stack = [(t, False)]
    while stack:
        node, done = stack.pop()
        if id(node) in ids:
            continue
        if not done:
            stack.append((node, True))
            for k in reversed(node.kids):
                if id(k) not in ids:
                    stack.append((k, False))
            continue
        key = (node.sym, node.w, tuple(ids[id(k)] for k in node.kids))
        nid = table.get(key)
        if nid is None:
            nid = len(nodes)
            table[key] = nid
            nodes.append(key)
        ids[id(node)] = nid
    return SharedDag(nodes, ids[id(t)])


def unfold(d: SharedDag) -> Term:
    """The term represented by the root.  Shared nodes become shared Python
    objects, so this is cheap even when the term is exponentially large."""
    built = []
    for sym, w, kids in d.nodes:
        built.append(Term(sym, tuple(built[k] for k in kids), w))
    return built[d.root]


def unfolded_size(d):
    """|t| for the represented term, computed on the DAG."""
    sizes = []
    for _, _, kids in d.nodes:
        sizes.append(1 + sum(sizes[k] for k in kids))
    return sizes[d.root]


def run_det_dag(A, d, metrics=None):
    """Deterministic run of A on the DAG: each node's state is computed once."""
    if not A.deterministic:
        raise NondeterministicError(f"{A.name} is nondeterministic; determinize it first")
    states = []
    for sym, w, kids in d.nodes:
        A.check_symbol(sym, w)
        q = A.delta(sym, w, tuple(states[k] for k in kids))
        states.append(q)
        if metrics is not None:
            metrics.transitions += 1
            metrics.see(q)
    q = states[d.root]
    return RunResult(q, A.output(q), None, metrics)


# ---------------------------------------------------------------- text format

def _sym_text(sym, w):
    if isinstance(sym, Fn):
        s = f"{sym.name}/{sym.arity}"
    elif isinstance(sym, Relab):
        s = "relab(" + ";".join(f"{a}>{b}" for a, b in sym.pairs) + ")"
    else:
        s = sym.text()
    if w:
        s += "[" + "".join(str(b) for b in w) + "]"
    return s


def write_dag(d: SharedDag) -> str:
    """Header ``dag <nodes> root <id>`` then one line per node: ``id symbol child-ids...``."""
    lines = [f"dag {d.node_count} root {d.root}"]
    for i, (sym, w, kids) in enumerate(d.nodes):
        lines.append(" ".join([str(i), _sym_text(sym, w)] + [str(k) for k in kids]))
    return "\n".join(lines) + "\n"


_SYM = re.compile(r"""^(?:
    (?P<const>\d+)
  | (?P<add>add|adddir)\((?P<a>\d+),(?P<b>\d+)\)
  | relab\((?P<pairs>\d+>\d+(?:;\d+>\d+)*)\)
  | (?P<kw>oplus|empty)
  | (?P<fn>[A-Za-z_][A-Za-z_0-9]*)/(?P<arity>\d+)
)(?:\[(?P<w>[01]*)\])?$""", re.X)


def _parse_sym(text, lineno):
    m = _SYM.match(text)
    if not m:
        raise TermSyntaxError(f"bad DAG symbol {text!r}", lineno, 1)
    w = tuple(int(c) for c in m.group("w")) if m.group("w") else ()
    try:
        if m.group("const"):
            a = int(m.group("const"))
            if a < 1:
                raise ValueError("port labels are positive integers")
            return Const(a), w
        if m.group("add"):
            a, b = int(m.group("a")), int(m.group("b"))
            return (AddUndir(a, b) if m.group("add") == "add" else AddDir(a, b)), w
        if m.group("pairs"):
            pairs = [tuple(int(x) for x in p.split(">")) for p in m.group("pairs").split(";")]
            return Relab(tuple(pairs)), w
        if m.group("kw"):
            return (OPLUS if m.group("kw") == "oplus" else EMPTY), w
        return Fn(m.group("fn"), int(m.group("arity"))), w
    except ValueError as e:
        raise TermSyntaxError(str(e), lineno, 1) from None


def read_dag(text) -> SharedDag:
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1)]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise TermSyntaxError("empty DAG file")
    i0, head = lines[0]
    m = re.match(r"^dag\s+(\d+)\s+root\s+(\d+)$", head)
    if not m:
        raise TermSyntaxError("expected header 'dag <nodes> root <id>'", i0, 1)
    n, root = int(m.group(1)), int(m.group(2))
    nodes = []
    for lineno, ln in lines[1:]:
        parts = ln.split()
        if len(parts) < 2:
            raise TermSyntaxError("expected 'id symbol child-ids...'", lineno, 1)
        nid = int(parts[0])
        if nid != len(nodes):
            raise TermSyntaxError(f"node ids must be 0..n-1 in order, got {nid}", lineno, 1)
        sym, w = _parse_sym(parts[1], lineno)
        kids = tuple(int(x) for x in parts[2:])
        if len(kids) != sym.arity:
            raise TermSyntaxError(f"{sym.text()} expects {sym.arity} children", lineno, 1)
        if any(k >= nid for k in kids):
            raise TermSyntaxError("children must be defined before their parent", lineno, 1)
        nodes.append((sym, w, kids))
    if len(nodes) != n:
        raise TermSyntaxError(f"header announces {n} nodes, found {len(nodes)}")
    if not 0 <= root < n:
        raise TermSyntaxError(f"root {root} is not a node")
    return SharedDag(nodes, root)


# ---------------------------------------------------------------- a recursive family

def family_base():
    """A path on two vertices with ports 1 and 2."""
    return add(1, 2, oplus(leaf(1), leaf(2)))


def family_step(x, y):
    """C[x, y]: disjoint union with the 2-ports of x joined to the 1-ports
    of y.  Ports keep their labels afterwards, so every t_k lies in F_3."""
    body = add(2, 3, oplus(x, relab_term({1: 3}, y)))
    return relab_term({3: 1}, body)


def recursive_family(n):
    """t_0 = base, t_{k+1} = C[t_k, t_k], built with shared Python objects."""
    t = family_base()
    for _ in range(n):
        t = family_step(t, t)
    return t
