"""Structure pipeline: pocket classification, per-vertex deletable-pocket
search, separators, the shatterer, the low-degree filter, wallet extraction
and the density diagnostic."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from . import _kernels as K
from .choosability import (DEFAULT_SIZE_LIMIT, DeletabilityCertificate,
                           is_deletable)
from .errors import DegreeTooHigh, NotASubgraph, NotConnected, SizeLimitExceeded
from .graphs import (Graph, coboundary, connected_components, girth_at_least,
                     induced_subgraph, is_connected_subset)
from .planarity import is_planar

POCKET_SEARCH_BUDGET = 2_000_000  # oracle enumeration cap per candidate


@dataclass
class Pocket:
    vertices: tuple
    coboundary: tuple
    anchor: Optional[int] = None
    is_pocket: bool = True
    is_purse: bool = False
    is_k_deep: bool = False
    r: Optional[int] = None
    is_deletable: Optional[bool] = None
    certificate: Optional[DeletabilityCertificate] = None

    def to_json_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "coboundary": list(self.coboundary),
            "anchor": self.anchor,
            "is_pocket": self.is_pocket,
            "is_purse": self.is_purse,
            "is_k_deep": self.is_k_deep,
            "r": self.r,
            "is_deletable": self.is_deletable,
        }


@dataclass
class Wallet:
    pockets: List[Pocket]
    C: int
    k: int
    n_graph: int
    coverage_ratio: Fraction = field(init=False)
    target_met: bool = field(init=False)

    def __post_init__(self):
        count = len(self.pockets)
        self.coverage_ratio = Fraction(count, self.n_graph) if self.n_graph else Fraction(0)
        self.target_met = 2 * self.C * count >= self.n_graph

    def to_json_dict(self) -> dict:
        return {
            "C": self.C,
            "k": self.k,
            "n_graph": self.n_graph,
            "pockets": [p.to_json_dict() for p in self.pockets],
            "coverage_ratio": str(self.coverage_ratio),
            "target_met": self.target_met,
        }


@dataclass
class Density:
    value: Fraction
    g: int
    epsilon: Fraction
    d_bound_checked: bool = False

    def to_json_dict(self) -> dict:
        return {"value": str(self.value), "g": self.g, "epsilon": str(self.epsilon),
                "d_bound_checked": self.d_bound_checked}


def classify_pocket(G: Graph, H: Iterable[int], C: int, k: int,
                    r: Optional[int] = None,
                    size_limit: int = DEFAULT_SIZE_LIMIT) -> Pocket:
    """Compute all pocket flags for the vertex set H."""
    hs = tuple(sorted(set(H)))
    if not hs:
        raise NotConnected("empty vertex set")
    if not is_connected_subset(G, hs):
        raise NotConnected("G[H] is not connected")
    cob = tuple(sorted(coboundary(G, hs)))
    is_pocket = len(hs) <= C and all(G.degree(v) <= C for v in hs)
    # purse: coboundary S of size <= 2 and G[S u H] plus the S edge is planar
    is_purse = False
    if len(cob) <= 2:
        sub, ids = induced_subgraph(G, list(hs) + list(cob))
        if len(cob) == 2:
            idx = {old: new for new, old in enumerate(ids)}
            a, b = idx[cob[0]], idx[cob[1]]
            edges = list(sub.edges())
            if (min(a, b), max(a, b)) not in edges:
                edges.append((min(a, b), max(a, b)))
            from .graphs import make_graph
            sub = make_graph(sub.n, edges)
        is_purse = is_planar(sub)
    is_k_deep = bool(cob) and len(cob) * k <= len(hs)
    deletable = None
    cert = None
    if r is not None:
        try:
            cert = is_deletable(G, hs, r, size_limit=size_limit)
            deletable = cert.deletable
        except SizeLimitExceeded:
            deletable = None
    return Pocket(vertices=hs, coboundary=cob, is_pocket=is_pocket,
                  is_purse=is_purse, is_k_deep=is_k_deep, r=r,
                  is_deletable=deletable, certificate=cert)


def _connected_supersets(G: Graph, v: int, C: int, allowed: set) -> list:
    """All connected subsets of `allowed` containing v with size <= C,
    sorted by (size, id-tuple)."""
    out = []
    layer = {(v,)}
    out.extend(sorted(layer))
    for _ in range(C - 1):
        nxt = set()
        for S in layer:
            sset = set(S)
            ext = {w for u in S for w in G.adjacency[u] if w in allowed} - sset
            for w in ext:
                nxt.add(tuple(sorted(sset | {w})))
        if not nxt:
            break
        layer = nxt
        out.extend(sorted(layer))
    return out


def find_deletable_pocket(G: Graph, v: int, C: int, r: int,
                          size_limit: int = DEFAULT_SIZE_LIMIT,
                          budget: int = POCKET_SEARCH_BUDGET) -> Optional[Pocket]:
    """First r-deletable C-pocket containing v, in (size, id-lex) order.

    Candidates grow inside ball(v, C-1) over vertices of degree <= C.
    Candidates whose oracle call exceeds the enumeration budget are skipped
    (deterministically), which can only shrink the found set.
    """
    if G.degree(v) > C:
        raise DegreeTooHigh(f"vertex {v} has degree {G.degree(v)} > C={C}")
    ballset = set()
    frontier = {v}
    ballset.add(v)
    for _ in range(C - 1):
        frontier = {w for u in frontier for w in G.adjacency[u]} - ballset
        if not frontier:
            break
        ballset |= frontier
    allowed = {u for u in ballset if G.degree(u) <= C}
    for S in _connected_supersets(G, v, C, allowed):
        try:
            cert = is_deletable(G, S, r, size_limit=max(size_limit, C),
                                max_checked=budget)
        except SizeLimitExceeded:
            continue
        if cert.deletable:
            cob = tuple(sorted(coboundary(G, S)))
            return Pocket(vertices=S, coboundary=cob, anchor=v, is_pocket=True,
                          is_purse=False, is_k_deep=False, r=r,
                          is_deletable=True, certificate=cert)
    return None


@dataclass
class SeparatorResult:
    A: frozenset
    S: frozenset
    B: frozenset
    c_sep: float  # observed |S| / sqrt(n)
    method: str


def planar_separator(G: Graph) -> SeparatorResult:
    """Balanced separator: BFS-level cut with a fundamental-cycle fallback.

    Partition V = A + S + B with no A-B edge and |A|,|B| <= 2n/3.  The
    constant in |S| <= c*sqrt(n) is reported, not promised.
    """
    n = G.n
    if n == 0:
        return SeparatorResult(frozenset(), frozenset(), frozenset(), 0.0, "empty")
    if n <= 2:
        return SeparatorResult(frozenset(), frozenset(range(n)), frozenset(), n / math.sqrt(n), "tiny")
    comps = connected_components(G)
    if len(comps) > 1:
        # pack whole components; no separator vertices needed unless one
        # component alone exceeds the balance bound
        big = max(comps, key=len)
        if len(big) <= (2 * n) // 3:
            A, B = set(), set()
            for comp in sorted(comps, key=len, reverse=True):
                (A if len(A) <= len(B) else B).update(comp)
            return SeparatorResult(frozenset(A), frozenset(), frozenset(B), 0.0, "components")
        sub, ids = induced_subgraph(G, big)
        inner = planar_separator(sub)
        A = {ids[x] for x in inner.A}
        S = {ids[x] for x in inner.S}
        B = {ids[x] for x in inner.B}
        rest = [v for comp in comps if comp is not big for v in comp]
        for comp in sorted((c for c in comps if c is not big), key=len, reverse=True):
            if len(A) <= len(B):
                A.update(comp)
            else:
                B.update(comp)
        return SeparatorResult(frozenset(A), frozenset(S), frozenset(B),
                               len(S) / math.sqrt(n), inner.method)

    indptr, indices = G.csr()
    dist = np.full(n, -1, dtype=np.int32)
    queue = np.empty(n, dtype=np.int32)
    root = 0
    cnt = K.bfs_all_levels(indptr, indices, root, dist, queue)
    levels: Dict[int, list] = {}
    for x in range(cnt):
        vtx = int(queue[x])
        levels.setdefault(int(dist[vtx]), []).append(vtx)
    depth = max(levels)

    best = None
    for ell in range(depth + 1):
        S = levels[ell]
        below = sum(len(levels[i]) for i in range(ell))
        above = n - below - len(S)
        if below <= (2 * n) // 3 and above <= (2 * n) // 3:
            if best is None or len(S) < len(best[0]):
                best = (S, below, above, ell)
    if best is not None:
        S, below, above, ell = best
        A = {v for i in range(ell) for v in levels[i]}
        B = set(range(n)) - A - set(S)
        return SeparatorResult(frozenset(A), frozenset(S), frozenset(B),
                               len(S) / math.sqrt(n), "bfs-level")

    # long-thin case: no single level both small and balanced; cut two levels
    # around the median and, failing that, fall back to a fundamental cycle
    half = n // 2
    acc = 0
    mid = 0
    for ell in range(depth + 1):
        acc += len(levels[ell])
        if acc >= half:
            mid = ell
            break
    target = max(1, int(2 * math.sqrt(n)))
    lo = mid
    while lo > 0 and len(levels[lo]) > target:
        lo -= 1
    hi = mid
    while hi < depth and len(levels[hi]) > target:
        hi += 1
    S = set(levels[lo]) | (set(levels[hi]) if hi != lo else set())
    middle = {v for i in range(lo + 1, hi) for v in levels[i]}
    outer = set(range(n)) - S - middle
    pieces = []
    for part in (middle, outer):
        if part:
            sub, ids = induced_subgraph(G, part)
            for comp in connected_components(sub):
                pieces.append([ids[x] for x in comp])
    pieces.sort(key=len, reverse=True)
    A, B = set(), set()
    for comp in pieces:
        (A if len(A) <= len(B) else B).update(comp)
    if len(A) <= (2 * n) // 3 and len(B) <= (2 * n) // 3:
        return SeparatorResult(frozenset(A), frozenset(S), frozenset(B),
                               len(S) / math.sqrt(n), "bfs-two-level")

    # fundamental-cycle fallback: try cycles through BFS non-tree edges
    parent = {root: None}
    order = [int(queue[i]) for i in range(cnt)]
    for u in order:
        for w in G.adjacency[u]:
            if w not in parent and dist[w] == dist[u] + 1:
                parent[w] = u
    best_cut = None
    for u in range(n):
        for w in G.adjacency[u]:
            if w < u or parent.get(w) == u or parent.get(u) == w:
                continue
            pu, pw = [], []
            x = u
            while x is not None:
                pu.append(x)
                x = parent.get(x)
            seen = set(pu)
            x = w
            while x not in seen:
                pw.append(x)
                x = parent.get(x)
            meet = x
            cyc = []
            for y in pu:
                cyc.append(y)
                if y == meet:
                    break
            cyc.extend(reversed(pw))
            S2 = set(cyc)
            sub, ids = induced_subgraph(G, set(range(n)) - S2)
            comps2 = [[ids[x] for x in c] for c in connected_components(sub)]
            comps2.sort(key=len, reverse=True)
            A2, B2 = set(), set()
            for comp in comps2:
                (A2 if len(A2) <= len(B2) else B2).update(comp)
            score = max(len(A2), len(B2))
            if best_cut is None or score < best_cut[0]:
                best_cut = (score, S2, A2, B2)
            if score <= (2 * n) // 3:
                break
        if best_cut is not None and best_cut[0] <= (2 * n) // 3:
            break
    if best_cut is not None and best_cut[0] <= (2 * n) // 3:
        _, S2, A2, B2 = best_cut
        return SeparatorResult(frozenset(A2), frozenset(S2), frozenset(B2),
                               len(S2) / math.sqrt(n), "fundamental-cycle")
    # degenerate small or adversarial input: give the trivial partition
    return SeparatorResult(frozenset(), frozenset(range(n)), frozenset(),
                           n / math.sqrt(n), "trivial")


@dataclass
class ShatterResult:
    vertices: frozenset
    budget_exceeded: bool
    epsilon: Fraction
    size_target: int


def shatter(G: Graph, epsilon, size_target: int) -> ShatterResult:
    """Remove X so that every component of G-X has <= size_target vertices.

    Recursion always completes (the component bound holds unconditionally);
    when |X| ends up above epsilon*n the result is flagged, never hidden.
    """
    eps = Fraction(epsilon)
    if not (0 < eps < 1):
        raise ValueError("epsilon must be in (0,1)")
    if size_target < 1:
        raise ValueError("size_target must be >= 1")
    X: set = set()

    def rec(vertices):
        if len(vertices) <= size_target:
            return
        sub, ids = induced_subgraph(G, vertices)
        sep = planar_separator(sub)
        if not sep.S:
            return
        X.update(ids[x] for x in sep.S)
        rec([ids[x] for x in sorted(sep.A)])
        rec([ids[x] for x in sorted(sep.B)])

    rec(list(range(G.n)))
    exceeded = len(X) > eps * G.n
    return ShatterResult(frozenset(X), exceeded, eps, size_target)


def low_degree_filter(G: Graph, epsilon) -> frozenset:
    """X = {v : d(v) > 6/epsilon}; for planar inputs |X| <= epsilon*n by the
    counting argument (sum of degrees is at most 2e <= 6n)."""
    eps = Fraction(epsilon)
    if not (0 < eps <= 1):
        raise ValueError("epsilon must be in (0,1]")
    threshold = Fraction(6) / eps  # 2 * c_F / eps with c_F = 3
    X = frozenset(v for v in range(G.n) if G.degree(v) > threshold)
    if G.genus == 0:
        assert len(X) <= eps * G.n, "low-degree counting bound violated on planar input"
    return X


def find_wallet(G: Graph, C: int, k: int, epsilon=Fraction(1, 4),
                r: Optional[int] = None) -> Tuple[Wallet, dict]:
    """Shatter + low-degree filter, then keep components that are purses or
    k-deep C-pockets.  Returns (wallet, report)."""
    eps = Fraction(epsilon)
    sh = shatter(G, eps / 2, C)
    low = low_degree_filter(G, eps / 2)
    X = set(sh.vertices) | set(low)
    keep = [v for v in range(G.n) if v not in X]
    pockets = []
    skipped = {"not_pocket": 0, "not_purse_or_deep": 0}
    if keep:
        sub, ids = induced_subgraph(G, keep)
        for comp in connected_components(sub):
            hs = [ids[x] for x in comp]
            p = classify_pocket(G, hs, C, k, r=r)
            if not p.is_pocket:
                skipped["not_pocket"] += 1
                continue
            if p.is_purse or p.is_k_deep:
                pockets.append(p)
            else:
                skipped["not_purse_or_deep"] += 1
    wallet = Wallet(pockets=pockets, C=C, k=k, n_graph=G.n)
    report = {
        "X_size": len(X),
        "shatter_budget_exceeded": sh.budget_exceeded,
        "epsilon": str(eps),
        "skipped": skipped,
        "target_met": wallet.target_met,
        "coverage_ratio": str(wallet.coverage_ratio),
    }
    return wallet, report


def audit_wallet(G: Graph, wallet: Wallet) -> bool:
    """Single pass check that wallet pockets are pairwise non-touching."""
    owner = {}
    for i, p in enumerate(wallet.pockets):
        for v in p.vertices:
            if v in owner:
                return False
            owner[v] = i
    for (u, w) in G.edges():
        if u in owner and w in owner and owner[u] != owner[w]:
            return False
    return True


def density(G: Graph, H_vertices: Iterable[int], H_edges: Iterable[tuple],
            g: int, epsilon) -> Density:
    """d = (g-2)(e(G)-e(H)) - (g+eps)(v(G)-v(H)), exact rational.

    When the value is non-negative and G is planar with girth >= g, the
    linear bound v(G) <= ((g+eps)/eps) v(H) is asserted.
    """
    if g not in (3, 4, 5):
        raise ValueError("g must be 3, 4 or 5")
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    hv = set(H_vertices)
    he = {(min(u, w), max(u, w)) for (u, w) in H_edges}
    if not hv <= set(range(G.n)):
        raise NotASubgraph("H vertices outside G")
    for (u, w) in he:
        if u not in hv or w not in hv or w not in G.adjacency[u]:
            raise NotASubgraph(f"edge ({u},{w}) not inside G[H]")
    value = (g - 2) * Fraction(G.m - len(he)) - (g + eps) * Fraction(G.n - len(hv))
    checked = False
    if value >= 0 and G.genus == 0 and girth_at_least(G, g):
        assert eps * G.n <= (g + eps) * len(hv), "density linear bound violated"
        checked = True
    return Density(value=value, g=g, epsilon=eps, d_bound_checked=checked)


def wallet_to_json(wallet: Wallet, report: dict) -> str:
    doc = wallet.to_json_dict()
    doc["report"] = report
    return json.dumps(doc, indent=2)
