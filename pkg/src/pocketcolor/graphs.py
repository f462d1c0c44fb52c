"""Immutable graph type plus the primitive operations everything else uses.

Vertices are dense ids 0..n-1.  Adjacency lists are sorted tuples; a CSR
view is cached lazily for the numba kernels.  Graphs carry a declared Euler
genus (an integer, default 0) and optionally a rotation system (cyclic
neighbor order per vertex) when an embedding is known.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels as K
from .errors import ParseError, SelfLoopError, VertexIdGap

INF = math.inf


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: tuple
    genus: int = 0
    rotation: Optional[tuple] = None
    _csr: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple:
        return self.adjacency[v]

    def edges(self):
        for u in range(self.n):
            for w in self.adjacency[u]:
                if w > u:
                    yield (u, w)

    def csr(self):
        if "indptr" not in self._csr:
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            for v in range(self.n):
                indptr[v + 1] = indptr[v] + len(self.adjacency[v])
            indices = np.empty(int(indptr[-1]), dtype=np.int32)
            pos = 0
            for v in range(self.n):
                for w in self.adjacency[v]:
                    indices[pos] = w
                    pos += 1
            self._csr["indptr"] = indptr
            self._csr["indices"] = indices
        return self._csr["indptr"], self._csr["indices"]

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)


def make_graph(n: int, edges: Iterable[tuple], genus: int = 0,
               rotation: Optional[Sequence[Sequence[int]]] = None) -> Graph:
    """Build a Graph, enforcing the representation invariants."""
    if n < 0:
        raise VertexIdGap("negative vertex count")
    adj = [set() for _ in range(n)]
    for (u, v) in edges:
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}")
        if not (0 <= u < n) or not (0 <= v < n):
            raise VertexIdGap(f"edge ({u},{v}) outside dense id range 0..{n - 1}")
        adj[u].add(v)
        adj[v].add(u)
    adjacency = tuple(tuple(sorted(a)) for a in adj)
    rot = None
    if rotation is not None:
        rot = tuple(tuple(r) for r in rotation)
        if len(rot) != n:
            raise ParseError("rotation system must cover every vertex")
        for v in range(n):
            if sorted(rot[v]) != list(adjacency[v]):
                raise ParseError(f"rotation at {v} is not a permutation of its adjacency")
    return Graph(n=n, adjacency=adjacency, genus=genus, rotation=rot)


def load_graph(text: str) -> Graph:
    """Parse the edge-list format.

    First line: vertex count.  Optional ``genus g`` line.  Then ``u v``
    pairs, 0-based.  ``#`` starts a comment.
    """
    n = None
    genus = 0
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 1:
                raise ParseError("expected vertex count on first data line", lineno)
            try:
                n = int(parts[0])
            except ValueError:
                raise ParseError(f"bad vertex count {parts[0]!r}", lineno)
            if n < 0:
                raise ParseError("vertex count must be non-negative", lineno)
            continue
        if parts[0] == "genus":
            if len(parts) != 2:
                raise ParseError("genus line must read 'genus g'", lineno)
            try:
                genus = int(parts[1])
            except ValueError:
                raise ParseError(f"bad genus {parts[1]!r}", lineno)
            if genus < 0:
                raise ParseError("genus must be non-negative", lineno)
            continue
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as exc:
            col = line.index(parts[0] if not parts[0].lstrip("-").isdigit() else parts[1]) + 1
            raise ParseError(f"non-integer vertex id in {line!r}", lineno, col) from exc
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}", lineno)
        if n is not None and (u >= n or v >= n or u < 0 or v < 0):
            raise VertexIdGap(f"edge ({u},{v}) outside dense id range 0..{n - 1}", lineno)
        edges.append((u, v))
    if n is None:
        raise ParseError("empty document", 1)
    return make_graph(n, edges, genus=genus)


def dump_graph(G: Graph) -> str:
    lines = [str(G.n)]
    if G.genus:
        lines.append(f"genus {G.genus}")
    lines.extend(f"{u} {v}" for (u, v) in G.edges())
    return "\n".join(lines) + "\n"


def girth(G: Graph) -> float:
    """Exact girth; math.inf for forests.

    BFS from every vertex, pruned by the best cycle found so far.
    """
    if G.n == 0:
        return INF
    indptr, indices = G.csr()
    dist = np.full(G.n, -1, dtype=np.int32)
    parent = np.full(G.n, -1, dtype=np.int32)
    queue = np.empty(G.n, dtype=np.int32)
    best = 1 << 30
    for v in range(G.n):
        cap = best // 2 + 1
        got = K.shortest_cycle_at(indptr, indices, v, cap, dist, parent, queue)
        if got < best:
            best = got
    return INF if best >= (1 << 30) else int(best)


def girth_at_least(G: Graph, g: int) -> bool:
    """Exact decision 'girth(G) >= g' via depth-capped BFS (cheap for small g)."""
    if g <= 3:
        return True  # simple graphs have no cycle shorter than 3
    if G.n == 0:
        return True
    indptr, indices = G.csr()
    dist = np.full(G.n, -1, dtype=np.int32)
    parent = np.full(G.n, -1, dtype=np.int32)
    queue = np.empty(G.n, dtype=np.int32)
    cap = (g - 1) // 2 + 1
    for v in range(G.n):
        if K.shortest_cycle_at(indptr, indices, v, cap, dist, parent, queue) < g:
            return False
    return True


def ball(G: Graph, v: int, radius: int) -> frozenset:
    """All vertices at distance <= radius from v."""
    if not (0 <= v < G.n):
        raise VertexIdGap(f"vertex {v} not in graph")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    indptr, indices = G.csr()
    dist = np.full(G.n, -1, dtype=np.int32)
    queue = np.empty(G.n, dtype=np.int32)
    cnt = K.bfs_capped(indptr, indices, v, radius, dist, queue)
    return frozenset(int(x) for x in queue[:cnt])


def coboundary(G: Graph, H: Iterable[int]) -> frozenset:
    """External neighborhood of H: union of N(v) over v in H, minus H."""
    hs = set(H)
    out = set()
    for v in hs:
        for w in G.adjacency[v]:
            if w not in hs:
                out.add(w)
    return frozenset(out)


def power_graph(H: Graph, k: int) -> Graph:
    """Graph on the same vertices with edges between vertices at distance <= k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return Graph(n=H.n, adjacency=H.adjacency, genus=H.genus, rotation=H.rotation)
    indptr, indices = H.csr()
    member = np.ones(H.n, dtype=np.int8)
    dist = np.full(H.n, -1, dtype=np.int32)
    queue = np.empty(H.n, dtype=np.int32)
    # upper bound on edge count: n * max ball size, grown on demand
    cap = max(16, H.n * 4)
    while True:
        out_u = np.empty(cap, dtype=np.int32)
        out_v = np.empty(cap, dtype=np.int32)
        cnt = K.power_edges_masked(indptr, indices, member, k, dist, queue, out_u, out_v)
        if cnt <= cap:
            break
        cap = max(cap * 4, cnt)
        dist[:] = -1
    edges = [(int(out_u[i]), int(out_v[i])) for i in range(cnt)]
    return make_graph(H.n, edges, genus=H.genus)


@dataclass
class Coloring:
    """Partial or total vertex -> color map."""
    assignment: dict

    def get(self, v, default=None):
        return self.assignment.get(v, default)

    def copy(self) -> "Coloring":
        return Coloring(dict(self.assignment))


@dataclass
class ValidityReport:
    uncolored: list
    monochromatic_edges: list
    list_violations: list

    @property
    def valid(self) -> bool:
        return not (self.uncolored or self.monochromatic_edges or self.list_violations)


def greedy_coloring(G: Graph, order: Sequence[int]) -> Coloring:
    """Greedy proper coloring along order (a permutation of V)."""
    if sorted(order) != list(range(G.n)):
        raise ValueError("order must be a permutation of the vertex set")
    indptr, indices = G.csr()
    colors = np.full(G.n, -1, dtype=np.int32)
    seen = np.full(G.max_degree() + 2, -1, dtype=np.int32)
    K.greedy_color(indptr, indices, np.asarray(order, dtype=np.int32), colors, seen)
    return Coloring({v: int(colors[v]) for v in range(G.n)})


def validate_coloring(G: Graph, L, c: Coloring) -> ValidityReport:
    """Check totality, properness and (when L given) list containment."""
    uncolored = [v for v in range(G.n) if v not in c.assignment]
    colors = np.full(G.n, -1, dtype=np.int64)
    for v, col in c.assignment.items():
        colors[v] = col
    indptr, indices = G.csr()
    cap = max(16, G.m)
    out_u = np.empty(cap, dtype=np.int32)
    out_v = np.empty(cap, dtype=np.int32)
    cnt = K.conflict_edges(indptr, indices, colors, out_u, out_v)
    mono = [(int(out_u[i]), int(out_v[i])) for i in range(min(cnt, cap))]
    violations = []
    if L is not None:
        for v, col in sorted(c.assignment.items()):
            if col not in L.lists[v]:
                violations.append(v)
    return ValidityReport(uncolored=uncolored, monochromatic_edges=mono,
                          list_violations=violations)


def connected_components(G: Graph) -> list:
    """List of sorted vertex lists, one per component."""
    if G.n == 0:
        return []
    indptr, indices = G.csr()
    labels = np.full(G.n, -1, dtype=np.int32)
    queue = np.empty(G.n, dtype=np.int32)
    ncomp = K.components(indptr, indices, labels, queue)
    comps = [[] for _ in range(ncomp)]
    for v in range(G.n):
        comps[labels[v]].append(v)
    return comps


def is_connected_subset(G: Graph, vertices) -> bool:
    vs = set(vertices)
    if not vs:
        return False
    start = next(iter(vs))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in G.adjacency[u]:
            if w in vs and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vs)


def induced_subgraph(G: Graph, vertices: Iterable[int]):
    """Induced subgraph with dense re-indexing.

    Returns (subgraph, old_ids) where old_ids[new] = old.  Rotation is
    filtered so an embedded graph stays embedded.
    """
    keep = sorted(set(vertices))
    index = {old: new for new, old in enumerate(keep)}
    edges = []
    for old_u in keep:
        for old_w in G.adjacency[old_u]:
            if old_w > old_u and old_w in index:
                edges.append((index[old_u], index[old_w]))
    rot = None
    if G.rotation is not None:
        rot = [tuple(index[w] for w in G.rotation[old] if w in index) for old in keep]
    sub = make_graph(len(keep), edges, genus=G.genus, rotation=rot)
    return sub, keep


def to_dot(G: Graph, coloring: Optional[Coloring] = None,
           clusters: Optional[dict] = None) -> str:
    """DOT export; coloring maps to fillcolor indexes, clusters to subgraphs."""
    palette = ["lightblue", "salmon", "palegreen", "gold", "violet", "orange",
               "cyan", "pink", "gray80", "chartreuse"]
    lines = ["graph G {", "  node [style=filled];"]
    clustered = set()
    if clusters:
        for name in sorted(clusters):
            lines.append(f"  subgraph cluster_{name} {{")
            for v in sorted(clusters[name]):
                clustered.add(v)
                lines.append(f"    {v};")
            lines.append("  }")
    for v in range(G.n):
        attrs = []
        if coloring is not None and v in coloring.assignment:
            c = coloring.assignment[v]
            attrs.append(f'fillcolor="{palette[c % len(palette)]}"')
            attrs.append(f'label="{v}:{c}"')
        lines.append(f"  {v} [{', '.join(attrs)}];" if attrs else f"  {v};")
    for (u, w) in G.edges():
        lines.append(f"  {u} -- {w};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def edge_count_fraction(G: Graph) -> Fraction:
    return Fraction(G.m)
