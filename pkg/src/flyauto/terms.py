"""Clique-width terms: symbols, trees, text syntax, statistics, annotation."""

import re
from dataclasses import dataclass


class TermSyntaxError(ValueError):
    def __init__(self, msg, line=None, col=None):
        if line is not None:
            msg = f"{msg} (line {line}, column {col})"
        super().__init__(msg)
        self.line = line
        self.col = col


# ---------------------------------------------------------------- symbols

@dataclass(frozen=True)
class Oplus:
    arity = 2

    def labels(self):
        return ()

    def text(self):
        return "oplus"


@dataclass(frozen=True)
class AddUndir:
    a: int
    b: int
    arity = 1

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"add with equal labels {self.a}")
        if self.a > self.b:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    def labels(self):
        return (self.a, self.b)

    def text(self):
        return f"add({self.a},{self.b})"


@dataclass(frozen=True)
class AddDir:
    a: int
    b: int
    arity = 1

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"adddir with equal labels {self.a}")

    def labels(self):
        return (self.a, self.b)

    def text(self):
        return f"adddir({self.a},{self.b})"


@dataclass(frozen=True)
class Relab:
    pairs: tuple
    arity = 1

    def __post_init__(self):
        pairs = tuple(sorted(set(tuple(p) for p in self.pairs)))
        seen = set()
        for a, b in pairs:
            if a == b:
                raise ValueError(f"relab pair {a}>{b} is an identity pair")
            if a in seen:
                raise ValueError(f"relab maps label {a} twice")
            seen.add(a)
        object.__setattr__(self, "pairs", pairs)

    @property
    def mapping(self):
        return dict(self.pairs)

    def __call__(self, x):
        for a, b in self.pairs:
            if a == x:
                return b
        return x

    def labels(self):
        out = []
        for a, b in self.pairs:
            out += [a, b]
        return tuple(out)

    def text(self):
        return "relab(" + ";".join(f"{a}>{b}" for a, b in self.pairs) + ")"


@dataclass(frozen=True)
class Const:
    a: int
    arity = 0

    def labels(self):
        return (self.a,)

    def text(self):
        return str(self.a)


@dataclass(frozen=True)
class Empty:
    arity = 0

    def labels(self):
        return ()

    def text(self):
        return "empty"


@dataclass(frozen=True)
class Fn:
    """Generic ranked symbol, used for term-domain properties."""
    name: str
    arity: int = 0

    def labels(self):
        return ()

    def text(self):
        return self.name


OPLUS = Oplus()
EMPTY = Empty()
GRAPH_SYMBOLS = (Oplus, AddUndir, AddDir, Relab, Const, Empty)


def relab(mapping):
    if isinstance(mapping, dict):
        mapping = mapping.items()
    return Relab(tuple((a, b) for a, b in mapping if a != b))


def is_graph_symbol(sym):
    return isinstance(sym, GRAPH_SYMBOLS)


# ---------------------------------------------------------------- terms

class Term:
    """A node of a term.  ``w`` is the Boolean annotation (a tuple of 0/1)."""

    __slots__ = ("sym", "kids", "w", "_hash")

    def __init__(self, sym, kids=(), w=()):
        kids = tuple(kids)
        if len(kids) != sym.arity:
            raise ValueError(f"{sym.text()} expects {sym.arity} children, got {len(kids)}")
        self.sym = sym
        self.kids = kids
        self.w = tuple(w)
        self._hash = None

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Term):
            return NotImplemented
        if hash(self) != hash(other):
            return False
        stack = [(self, other)]
        while stack:
            x, y = stack.pop()
            if x is y:
                continue
            if x.sym != y.sym or x.w != y.w or len(x.kids) != len(y.kids):
                return False
            stack.extend(zip(x.kids, y.kids))
        return True

    def __hash__(self):
        if self._hash is None:
            for node in postorder(self):
                if node._hash is None:
                    node._hash = hash((node.sym, node.w, tuple(hash(k) for k in node.kids)))
        return self._hash

    def __repr__(self):
        return f"Term({render(self)!r})"

    def __str__(self):
        return render(self)

    @property
    def is_leaf(self):
        return not self.kids

    def subterm(self, u):
        t = self
        for i in u:
            t = t.kids[i - 1]
        return t


def postorder(t):
    """Nodes of t in post-order, without recursion."""
    out = []
    stack = [(t, False)]
    while stack:
        node, done = stack.pop()
        if done:
            out.append(node)
            continue
        stack.append((node, True))
        for k in reversed(node.kids):
            stack.append((k, False))
    return out


def positions(t):
    """List of (position, node) in pre-order; positions are tuples of ints."""
    out = []
    stack = [((), t)]
    while stack:
        u, node = stack.pop()
        out.append((u, node))
        for i in range(len(node.kids), 0, -1):
            stack.append((u + (i,), node.kids[i - 1]))
    return out


def postorder_positions(t):
    out = []
    stack = [((), t, False)]
    while stack:
        u, node, done = stack.pop()
        if done:
            out.append((u, node))
            continue
        stack.append((u, node, True))
        for i in range(len(node.kids), 0, -1):
            stack.append((u + (i,), node.kids[i - 1], False))
    return out


def leaf_positions(t):
    """Pos_0(t): positions of the port constants, in left-to-right order."""
    return [u for u, n in positions(t) if isinstance(n.sym, Const)]


def fmt_pos(u):
    if not u:
        return "ε"
    if any(i >= 10 for i in u):
        return ".".join(str(i) for i in u)
    return "".join(str(i) for i in u)


def parse_pos(text):
    text = text.strip()
    if text in ("", "ε"):
        return ()
    if "." in text:
        return tuple(int(x) for x in text.split("."))
    return tuple(int(c) for c in text)


# ---------------------------------------------------------------- building helpers

def leaf(a, w=()):
    return Term(Const(a), (), w)


def empty():
    return Term(EMPTY)


def oplus(t1, t2, *more):
    t = Term(OPLUS, (t1, t2))
    for x in more:
        t = Term(OPLUS, (t, x))
    return t


def oplus_right(ts):
    """Right-nested sum t1 ⊕ (t2 ⊕ (...))."""
    ts = list(ts)
    if not ts:
        return empty()
    t = ts[-1]
    for x in reversed(ts[:-1]):
        t = Term(OPLUS, (x, t))
    return t


def add(a, b, t):
    return Term(AddUndir(a, b), (t,))


def adddir(a, b, t):
    return Term(AddDir(a, b), (t,))


def relab_term(mapping, t):
    h = relab(mapping)
    if not h.pairs:
        return t
    return Term(h, (t,))


# ---------------------------------------------------------------- text syntax

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)(?![A-Za-z_])|(?P<id>[A-Za-z_][A-Za-z_0-9]*)|(?P<bits>\[[01]*\])|(?P<p>[(),;>]))")


def _tokens(text):
    toks = []
    pos = 0
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(i):
        line = 0
        while line + 1 < len(line_starts) and line_starts[line + 1] <= i:
            line += 1
        return line + 1, i - line_starts[line] + 1

    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            i = pos
            while i < len(text) and text[i].isspace():
                i += 1
            raise TermSyntaxError(f"unexpected character {text[i]!r}", *where(i))
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), where(start)))
        pos = m.end()
    toks.append(("eof", "", where(len(text))))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokens(text)
        self.i = 0
        self.width = None

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise TermSyntaxError(msg, *tok[2])

    def expect(self, value):
        tok = self.next()
        if tok[1] != value:
            self.error(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok)
        return tok

    def integer(self):
        tok = self.next()
        if tok[0] != "int":
            self.error(f"expected a port label, found {tok[1] or 'end of input'!r}", tok)
        v = int(tok[1])
        if v < 1:
            self.error("port labels are positive integers", tok)
        return v

    def annotation(self):
        if self.peek()[0] != "bits":
            return ()
        tok = self.next()
        w = tuple(int(c) for c in tok[1][1:-1])
        if not w:
            self.error("empty annotation", tok)
        if self.width is None:
            self.width = len(w)
        elif self.width != len(w):
            self.error(f"annotation width {len(w)} differs from {self.width}", tok)
        return w

    def term(self):
        tok = self.next()
        kind, val = tok[0], tok[1]
        try:
            if kind == "int":
                a = int(val)
                if a < 1:
                    self.error("port labels are positive integers", tok)
                return Term(Const(a), (), self.annotation())
            if kind != "id":
                self.error(f"expected a term, found {val or 'end of input'!r}", tok)
            if val == "empty":
                return Term(EMPTY, (), self.annotation())
            if val == "oplus":
                w = self.annotation()
                self.expect("(")
                t1 = self.term()
                self.expect(",")
                t2 = self.term()
                self.expect(")")
                return Term(OPLUS, (t1, t2), w)
            if val in ("add", "adddir"):
                w = self.annotation()
                self.expect("(")
                a = self.integer()
                self.expect(",")
                b = self.integer()
                self.expect(",")
                if a == b:
                    self.error(f"{val} with equal labels {a}", tok)
                t1 = self.term()
                self.expect(")")
                sym = AddUndir(a, b) if val == "add" else AddDir(a, b)
                return Term(sym, (t1,), w)
            if val == "relab":
                w = self.annotation()
                self.expect("(")
                pairs = []
                while True:
                    a = self.integer()
                    self.expect(">")
                    b = self.integer()
                    if a == b:
                        self.error(f"relab pair {a}>{b} maps a label to itself", tok)
                    pairs.append((a, b))
                    if self.peek()[1] == ";":
                        self.next()
                        continue
                    break
                self.expect(",")
                t1 = self.term()
                self.expect(")")
                return Term(Relab(tuple(pairs)), (t1,), w)
            # generic ranked symbol f(t1, ..., tr)
            w = self.annotation()
            kids = []
            if self.peek()[1] == "(":
                self.next()
                kids.append(self.term())
                while self.peek()[1] == ",":
                    self.next()
                    kids.append(self.term())
                self.expect(")")
            return Term(Fn(val, len(kids)), kids, w)
        except ValueError as e:
            if isinstance(e, TermSyntaxError):
                raise
            self.error(str(e), tok)


def parse_term(text):
    """Parse term text; returns (term, directed) where directed is True/False/None."""
    directed = None
    body_lines = []
    for line in text.splitlines():
        s = line.strip()
        if s.startswith("#"):
            m = re.match(r"#\s*mode\s+(directed|undirected)\s*$", s)
            if m:
                directed = m.group(1) == "directed"
            body_lines.append("")
            continue
        body_lines.append(line)
    p = _Parser("\n".join(body_lines))
    t = p.term()
    if p.peek()[0] != "eof":
        p.error(f"trailing input {p.peek()[1]!r}")
    kinds = {type(n.sym) for n in postorder(t)}
    if AddDir in kinds and AddUndir in kinds:
        raise TermSyntaxError("directed and undirected edge additions are mixed")
    if directed is True and AddUndir in kinds:
        raise TermSyntaxError("add used in a directed term (use adddir)")
    if directed is False and AddDir in kinds:
        raise TermSyntaxError("adddir used in an undirected term (use add)")
    if directed is None and AddDir in kinds:
        directed = True
    _check_annotation(t)
    return t, bool(directed)


def _check_annotation(t):
    """Annotations are either on port constants only or on every node."""
    nodes = postorder(t)
    widths = {len(n.w) for n in nodes if n.w}
    if not widths:
        return
    if all(n.w for n in nodes):
        return
    for n in nodes:
        if n.w and not isinstance(n.sym, Const):
            raise TermSyntaxError("annotation on an internal symbol requires every symbol to be annotated")
    # graph mode: every port constant annotated
    for n in nodes:
        if isinstance(n.sym, Const) and not n.w:
            raise TermSyntaxError("some port constants are annotated and others are not")


def term(text):
    """Shorthand: parse and return only the term."""
    return parse_term(text)[0]


def render(t, directive=False, directed=False):
    """Text form of t; parse(render(t)) == t."""
    out = {}
    for node in postorder(t):
        sym = node.sym
        ann = "[" + "".join(str(b) for b in node.w) + "]" if node.w else ""
        kids = [out[id(k)] for k in node.kids]
        if isinstance(sym, Const):
            s = f"{sym.a}{ann}"
        elif isinstance(sym, Empty):
            s = f"empty{ann}"
        elif isinstance(sym, Oplus):
            s = f"oplus{ann}({kids[0]},{kids[1]})"
        elif isinstance(sym, AddUndir):
            s = f"add{ann}({sym.a},{sym.b},{kids[0]})"
        elif isinstance(sym, AddDir):
            s = f"adddir{ann}({sym.a},{sym.b},{kids[0]})"
        elif isinstance(sym, Relab):
            pairs = ";".join(f"{a}>{b}" for a, b in sym.pairs)
            s = f"relab{ann}({pairs},{kids[0]})"
        else:
            s = sym.name + ann + ("(" + ",".join(kids) + ")" if kids else "")
        out[id(node)] = s
    text = out[id(t)]
    if directive:
        text = f"#mode {'directed' if directed else 'undirected'}\n{text}"
    return text


# ---------------------------------------------------------------- statistics

def symbol_encoding(sym):
    """Concrete encoding used for ‖t‖: arity digit, tag, decimal labels."""
    if isinstance(sym, Oplus):
        return "2+"
    if isinstance(sym, Empty):
        return "0e"
    if isinstance(sym, Const):
        return f"0c{sym.a}"
    if isinstance(sym, AddUndir):
        return f"1a{sym.a},{sym.b}"
    if isinstance(sym, AddDir):
        return f"1d{sym.a},{sym.b}"
    if isinstance(sym, Relab):
        return "1r" + ";".join(f"{a}>{b}" for a, b in sym.pairs)
    return f"{sym.arity}f{sym.name}"


def size(t):
    return len(postorder(t))


def encoded_size(t):
    return sum(len(symbol_encoding(n.sym)) for n in postorder(t))


def height(t):
    h = {}
    for node in postorder(t):
        h[id(node)] = 1 + max((h[id(k)] for k in node.kids), default=0)
    return h[id(t)]


def signature(t):
    return {n.sym for n in postorder(t)}


def mu(t):
    """Port labels occurring in t."""
    out = set()
    for n in postorder(t):
        out.update(n.sym.labels())
    return out


def port_types(t):
    """π(t): labels of the ports of G(t), computed without building edges."""
    memo = {}
    for node in postorder(t):
        sym = node.sym
        kids = [memo[id(k)] for k in node.kids]
        if isinstance(sym, Const):
            r = frozenset([sym.a])
        elif isinstance(sym, Oplus):
            r = kids[0] | kids[1]
        elif isinstance(sym, Relab):
            r = frozenset(sym(x) for x in kids[0])
        elif kids:
            r = kids[0]
        else:
            r = frozenset()
        memo[id(node)] = r
    return set(memo[id(t)])


def n_vertices(t):
    return sum(1 for n in postorder(t) if isinstance(n.sym, Const))


def term_stats(t):
    m = mu(t)
    p = port_types(t)
    return {
        "size": size(t),
        "encoded_size": encoded_size(t),
        "height": height(t),
        "mu": sorted(m),
        "max_mu": max(m, default=0),
        "pi": sorted(p),
        "max_pi": max(p, default=0),
        "vertices": n_vertices(t),
    }


def is_directed(t):
    return any(isinstance(n.sym, AddDir) for n in postorder(t))


def in_Fk(t, k):
    return all(x <= k for x in mu(t))


# ---------------------------------------------------------------- annotation

def map_nodes(t, fn):
    """Rebuild t bottom-up: fn(node, new_kids) returns the new node."""
    out = {}
    for node in postorder(t):
        out[id(node)] = fn(node, [out[id(k)] for k in node.kids])
    return out[id(t)]


def annotate(t, sets, mode="graph"):
    """t∗X̄ where sets is a sequence of position sets."""
    sets = [frozenset(X) for X in sets]
    s = len(sets)
    res = {}
    for u, node in postorder_positions(t):
        kids = [res[u + (i,)] for i in range(1, len(node.kids) + 1)]
        if mode == "term" or isinstance(node.sym, Const):
            w = tuple(1 if u in X else 0 for X in sets)
        else:
            w = ()
        res[u] = Term(node.sym, kids, w)
        for i in range(1, len(node.kids) + 1):
            del res[u + (i,)]
    if mode == "graph":
        allowed = set(leaf_positions(t))
        for X in sets:
            if not X <= allowed:
                raise ValueError("graph-mode sets must contain vertex positions only")
    return res[()]


def strip(t):
    """pr_s: remove all annotations."""
    return map_nodes(t, lambda n, kids: Term(n.sym, kids))


def decode(t, mode=None):
    """Inverse of annotate: returns (base term, tuple of position sets, mode)."""
    nodes = positions(t)
    widths = {len(n.w) for _, n in nodes if n.w}
    s = widths.pop() if widths else 0
    if mode is None:
        internal = any(n.w for _, n in nodes if not isinstance(n.sym, Const))
        mode = "term" if internal else "graph"
    sets = [set() for _ in range(s)]
    for u, n in nodes:
        for i, b in enumerate(n.w):
            if b:
                sets[i].add(u)
    return strip(t), tuple(frozenset(X) for X in sets), mode
