"""Labeled graphs denoted by terms, and the edge-list exchange format."""

from .terms import (AddDir, AddUndir, Const, Oplus, Relab, leaf, postorder_positions,
                    add, adddir, oplus, empty)


class PGraph:
    """A simple loop-free graph with port labels.

    ``vertices`` is a list of hashable ids (Dewey positions when the graph
    comes from a term).  Undirected edges are stored as (u, v) with u before v
    in vertex order; directed edges as ordered pairs.
    """

    def __init__(self, vertices=(), edges=(), ports=None, directed=False):
        self.vertices = list(vertices)
        self.directed = directed
        self._index = {v: i for i, v in enumerate(self.vertices)}
        self.ports = dict(ports) if ports else {v: 1 for v in self.vertices}
        self.edges = set()
        for u, v in edges:
            self.add_edge(u, v)

    def add_edge(self, u, v):
        if u == v:
            raise ValueError("loops are not allowed")
        if not self.directed and self._index[u] > self._index[v]:
            u, v = v, u
        self.edges.add((u, v))

    def has_edge(self, u, v):
        if self.directed:
            return (u, v) in self.edges
        return (u, v) in self.edges or (v, u) in self.edges

    @property
    def n(self):
        return len(self.vertices)

    def neighbours(self):
        """Underlying undirected adjacency: vertex -> set of vertices."""
        adj = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degree(self, v):
        return sum(1 for e in self.edges if v in e)

    def port_counts(self):
        lam = {}
        for v in self.vertices:
            lam[self.ports[v]] = lam.get(self.ports[v], 0) + 1
        return lam

    def port_types(self):
        return set(self.ports.values())

    def induced(self, keep):
        keep = set(keep)
        vs = [v for v in self.vertices if v in keep]
        es = [(u, v) for u, v in self.edges if u in keep and v in keep]
        return PGraph(vs, es, {v: self.ports[v] for v in vs}, self.directed)

    def relabel_vertices(self):
        """Copy with vertices renamed 1..n in current order."""
        ren = {v: i + 1 for i, v in enumerate(self.vertices)}
        return PGraph(range(1, self.n + 1), [(ren[u], ren[v]) for u, v in self.edges],
                      {ren[v]: a for v, a in self.ports.items()}, self.directed)

    def to_networkx(self):
        import networkx as nx
        g = nx.DiGraph() if self.directed else nx.Graph()
        for v in self.vertices:
            g.add_node(v, port=self.ports[v])
        g.add_edges_from(self.edges)
        return g

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"PGraph({self.n} vertices, {len(self.edges)} edges, {kind})"


def eval_graph(t, directed=None):
    """G(t): vertices are the positions of the port constants."""
    if directed is None:
        directed = any(isinstance(n.sym, AddDir) for _, n in postorder_positions(t))
    # per position: (ports dict, edge set)
    memo = {}
    for u, node in postorder_positions(t):
        sym = node.sym
        kids = [memo.pop(u + (i,)) for i in range(1, len(node.kids) + 1)]
        if isinstance(sym, Const):
            res = ({u: sym.a}, set())
        elif isinstance(sym, Oplus):
            p1, e1 = kids[0]
            p2, e2 = kids[1]
            p1.update(p2)
            e1 |= e2
            res = (p1, e1)
        elif isinstance(sym, AddUndir):
            ports, edges = kids[0]
            xs = [v for v, a in ports.items() if a == sym.a]
            ys = [v for v, a in ports.items() if a == sym.b]
            for x in xs:
                for y in ys:
                    edges.add((x, y) if x < y else (y, x))
            res = (ports, edges)
        elif isinstance(sym, AddDir):
            ports, edges = kids[0]
            xs = [v for v, a in ports.items() if a == sym.a]
            ys = [v for v, a in ports.items() if a == sym.b]
            for x in xs:
                for y in ys:
                    edges.add((x, y))
            res = (ports, edges)
        elif isinstance(sym, Relab):
            ports, edges = kids[0]
            h = sym.mapping
            res = ({v: h.get(a, a) for v, a in ports.items()}, edges)
        elif not kids:
            res = ({}, set())
        else:
            raise ValueError(f"{sym.text()} is not a graph operation")
        memo[u] = res
    ports, edges = memo[()]
    verts = sorted(ports)
    g = PGraph(verts, (), ports, directed)
    g.edges = edges if directed else {(x, y) if x < y else (y, x) for x, y in edges}
    return g


def trivial_term(g):
    """Term with one distinct label per vertex and no relabelling.

    Vertex i (in g's vertex order) gets label i.  Edges are added as soon as
    both endpoints are present, which keeps the term irredundant.
    """
    if g.n == 0:
        return empty()
    idx = {v: i + 1 for i, v in enumerate(g.vertices)}
    later = {i: [] for i in range(1, g.n + 1)}
    for u, v in g.edges:
        i, j = idx[u], idx[v]
        later[max(i, j)].append((i, j))
    t = leaf(1)
    for j in range(1, g.n + 1):
        if j > 1:
            t = oplus(t, leaf(j))
        for a, b in sorted(later[j]):
            t = adddir(a, b, t) if g.directed else add(a, b, t)
    return t


def isomorphic(g1, g2, ports=False):
    """Exact isomorphism test (optionally preserving port labels)."""
    import networkx as nx
    if g1.n != g2.n or len(g1.edges) != len(g2.edges) or g1.directed != g2.directed:
        return False
    match = (lambda a, b: a["port"] == b["port"]) if ports else None
    return nx.is_isomorphic(g1.to_networkx(), g2.to_networkx(), node_match=match)


def fingerprint(g):
    """Cheap isomorphism invariant: sizes plus sorted degree sequence."""
    deg = {v: 0 for v in g.vertices}
    for u, v in g.edges:
        deg[u] += 1
        deg[v] += 1
    return (g.n, len(g.edges), tuple(sorted(deg.values())))


# ---------------------------------------------------------------- edge lists

def read_edge_list(text):
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty edge list")
    head = lines[0].split()
    if len(head) != 3:
        raise ValueError("edge list header must be 'n m d'")
    n, m, d = (int(x) for x in head)
    if d not in (0, 1):
        raise ValueError("directed flag must be 0 or 1")
    g = PGraph(range(1, n + 1), (), None, directed=bool(d))
    edges = 0
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "p":
            if len(parts) != 3:
                raise ValueError(f"bad port line {ln!r}")
            u, a = int(parts[1]), int(parts[2])
            if not 1 <= u <= n or a < 1:
                raise ValueError(f"bad port line {ln!r}")
            g.ports[u] = a
            continue
        if len(parts) != 2:
            raise ValueError(f"bad edge line {ln!r}")
        u, v = int(parts[0]), int(parts[1])
        if not (1 <= u <= n and 1 <= v <= n):
            raise ValueError(f"vertex out of range in {ln!r}")
        g.add_edge(u, v)
        edges += 1
    if edges != m:
        raise ValueError(f"header announces {m} edges, found {edges}")
    return g


def write_edge_list(g):
    h = g.relabel_vertices()
    lines = [f"{h.n} {len(h.edges)} {1 if h.directed else 0}"]
    lines += [f"{u} {v}" for u, v in sorted(h.edges)]
    lines += [f"p {v} {h.ports[v]}" for v in h.vertices if h.ports[v] != 1]
    return "\n".join(lines) + "\n"
