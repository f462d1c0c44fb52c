"""Centralized recursive coloring engine.

Each level: exhaustive base case below a threshold, per-vertex deletable
pocket search, deletion and recursion, greedy power-graph coloring of the
deleted union, then class-by-class re-extension.  A fallback chain (raise C,
structural route, exhaustive search) keeps the engine total when no pocket
is found.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels as K
from .choosability import (ListAssignment, Coloring, backtrack_color,
                           extend_precolored_path, is_deletable)
from .errors import ExtensionFailed, GirthViolation
from .graphs import Graph, induced_subgraph, validate_coloring
from .structure import POCKET_SEARCH_BUDGET, Pocket, find_deletable_pocket


@dataclass
class EngineConfig:
    C: int = 6
    base_threshold: int = 20
    raise_c_factor: int = 2
    fallback: tuple = ("raise_c", "structural", "exhaustive")
    record_stats: bool = True
    size_limit: int = 12
    pocket_budget: int = POCKET_SEARCH_BUDGET

    def __post_init__(self):
        if self.C < 2:
            raise ValueError("C must be >= 2")
        if self.base_threshold < 1:
            raise ValueError("base_threshold must be >= 1")

    def base_case_size(self, genus: int) -> int:
        return max(self.C * genus, self.base_threshold)


@dataclass
class LevelStats:
    level: int
    n_before: int
    deleted: int
    pockets_found: int
    shrink_ratio: Fraction
    fallback_used: str
    wall_time: float
    target_met: bool
    classes_used: int = 0
    c_used: int = 0
    base_case: bool = False

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "n_before": self.n_before,
            "deleted": self.deleted,
            "pockets_found": self.pockets_found,
            "shrink_ratio": str(self.shrink_ratio),
            "fallback_used": self.fallback_used,
            "wall_time": self.wall_time,
            "target_met": self.target_met,
            "classes_used": self.classes_used,
            "c_used": self.c_used,
            "base_case": self.base_case,
        }


class _CertificateHook:
    """Test hook: lets the suite corrupt a pocket before extension."""

    def __init__(self):
        self.fn = None

    def apply(self, pockets, level):
        if self.fn is not None:
            return self.fn(pockets, level)
        return pockets


certificate_hook = _CertificateHook()


def _search_pockets(Gl: Graph, r: int, C: int, cfg: EngineConfig) -> List[Pocket]:
    pockets = []
    for v in range(Gl.n):
        if Gl.degree(v) > C:
            continue
        p = find_deletable_pocket(Gl, v, C, r, size_limit=max(cfg.size_limit, C),
                                  budget=cfg.pocket_budget)
        if p is not None:
            pockets.append(p)
    return pockets


def _power_csr(Gl: Graph, members: Sequence[int], k: int):
    """CSR of H^k on local indices 0..len(members)-1, H = G[members]."""
    mask = np.zeros(Gl.n, dtype=np.int8)
    for v in members:
        mask[v] = 1
    indptr, indices = Gl.csr()
    dist = np.full(Gl.n, -1, dtype=np.int32)
    queue = np.empty(max(Gl.n, 1), dtype=np.int32)
    cap = max(64, len(members) * 8)
    while True:
        out_u = np.empty(cap, dtype=np.int32)
        out_v = np.empty(cap, dtype=np.int32)
        cnt = K.power_edges_masked(indptr, indices, mask, k, dist, queue, out_u, out_v)
        if cnt <= cap:
            break
        cap = max(cap * 4, cnt)
        dist[:] = -1
    local = {v: i for i, v in enumerate(members)}
    adj = [[] for _ in members]
    maxdeg = 0
    for t in range(cnt):
        a, b = local[int(out_u[t])], local[int(out_v[t])]
        adj[a].append(b)
        adj[b].append(a)
    pindptr = np.zeros(len(members) + 1, dtype=np.int64)
    for i, lst in enumerate(adj):
        lst.sort()
        pindptr[i + 1] = pindptr[i] + len(lst)
        maxdeg = max(maxdeg, len(lst))
    pindices = np.empty(int(pindptr[-1]), dtype=np.int32)
    pos = 0
    for lst in adj:
        for x in lst:
            pindices[pos] = x
            pos += 1
    return pindptr, pindices, maxdeg


def extend_stage(Gl: Graph, pockets_in_class: List[Pocket], psi: dict,
                 L: ListAssignment, stage: int = 0) -> dict:
    """Recolor one class of pockets on top of psi (modified copy returned).

    psi maps vertices of Gl to colors; pockets are uncolored wholesale, then
    each pocket is solved independently, anchor id order.  A pocket with no
    solution means its deletability certificate was wrong: ExtensionFailed.
    """
    out = dict(psi)
    members = sorted({v for p in pockets_in_class for v in p.vertices})
    for v in members:
        out.pop(v, None)
    for p in sorted(pockets_in_class, key=lambda q: (q.anchor if q.anchor is not None else -1,
                                                     q.vertices)):
        unsolved = [v for v in p.vertices if v not in out]
        if not unsolved:
            continue
        sub, ids = induced_subgraph(Gl, unsolved)
        idx = {old: new for new, old in enumerate(ids)}
        lists = {}
        for v in unsolved:
            taken = {out[w] for w in Gl.adjacency[v] if w in out}
            lists[idx[v]] = frozenset(L.lists[v] - taken)
        sol = backtrack_color(sub, ListAssignment(lists, L.girth_class), Coloring({}))
        if sol is None:
            raise ExtensionFailed(
                f"pocket {p.vertices} (anchor {p.anchor}) has no recoloring; "
                "its deletability certificate was violated",
                pocket=p.vertices, lists={v: sorted(lists[idx[v]]) for v in unsolved},
                stage=stage)
        for v in unsolved:
            out[v] = sol.assignment[idx[v]]
    return out


def _solve_level(Gl: Graph, L: ListAssignment, cfg: EngineConfig, level: int,
                 stats: List[LevelStats]) -> Optional[dict]:
    t0 = time.perf_counter()
    n = Gl.n
    r = L.k
    g = L.girth_class

    def push(deleted, pockets_found, fallback, classes_used, c_used, base=False):
        if not cfg.record_stats:
            return
        shrink = Fraction(n - deleted, n) if n else Fraction(0)
        stats.append(LevelStats(
            level=level, n_before=n, deleted=deleted, pockets_found=pockets_found,
            shrink_ratio=shrink, fallback_used=fallback,
            wall_time=time.perf_counter() - t0,
            target_met=2 * cfg.C * deleted >= n if n else True,
            classes_used=classes_used, c_used=c_used, base_case=base))

    # Step 1: exhaustive base case
    if n <= cfg.base_case_size(Gl.genus):
        sol = backtrack_color(Gl, L, Coloring({}))
        push(0, 0, "none", 0, cfg.C, base=True)
        return None if sol is None else dict(sol.assignment)

    # Step 2: pocket search
    C_used = cfg.C
    pockets = _search_pockets(Gl, r, C_used, cfg)
    fallback_used = "none"
    if not pockets:
        for mode in cfg.fallback:
            if mode == "raise_c":
                C_used = cfg.C * cfg.raise_c_factor
                pockets = _search_pockets(Gl, r, C_used, cfg)
                if pockets:
                    fallback_used = "raise_c"
                    break
            elif mode == "structural":
                if g in (3, 4) and Gl.genus == 0:
                    try:
                        assign = {}
                        from .graphs import connected_components
                        for comp in connected_components(Gl):
                            sub, ids = induced_subgraph(Gl, comp)
                            subL = ListAssignment({i: L.lists[ids[i]] for i in range(sub.n)}, g)
                            col = extend_precolored_path(sub, subL, [], Coloring({}))
                            for i in range(sub.n):
                                assign[ids[i]] = col.assignment[i]
                        push(n, 0, "structural", 0, C_used)
                        return assign
                    except GirthViolation:
                        push(0, 0, "structural", 0, C_used)
                        return None
            elif mode == "exhaustive":
                sol = backtrack_color(Gl, L, Coloring({}))
                push(n if sol is not None else 0, 0, "exhaustive", 0, C_used)
                return None if sol is None else dict(sol.assignment)
        if not pockets and fallback_used == "none":
            # chain exhausted without an exhaustive step; be total anyway
            sol = backtrack_color(Gl, L, Coloring({}))
            push(n if sol is not None else 0, 0, "exhaustive", 0, C_used)
            return None if sol is None else dict(sol.assignment)

    pockets = certificate_hook.apply(pockets, level)

    members = sorted({v for p in pockets for v in p.vertices})
    deleted = len(members)

    # Step 3: recurse on G - V(H)
    residual = [v for v in range(Gl.n) if v not in set(members)]
    sub, ids = induced_subgraph(Gl, residual)
    subL = ListAssignment({i: L.lists[ids[i]] for i in range(sub.n)}, g)
    psi0_local = _solve_level(sub, subL, cfg, level + 1, stats)
    if psi0_local is None:
        push(0, len(pockets), fallback_used, 0, C_used)
        return None
    psi = {ids[i]: c for i, c in psi0_local.items()}

    # Step 4: greedy coloring of H^(2C); H is induced on the deleted union
    mset = set(members)
    hdeg = max((sum(1 for w in Gl.adjacency[v] if w in mset) for v in members), default=0)
    assert hdeg <= C_used, "pocket union exceeded degree bound"
    pindptr, pindices, pmaxdeg = _power_csr(Gl, members, 2 * C_used)
    assert pmaxdeg < C_used ** (2 * C_used), "power graph degree bound violated"
    colors = np.full(len(members), -1, dtype=np.int32)
    seen = np.full(pmaxdeg + 2, -1, dtype=np.int32)
    K.greedy_color(pindptr, pindices,
                   np.arange(len(members), dtype=np.int32), colors, seen)
    assert int(colors.max(initial=0)) <= pmaxdeg, "greedy exceeded degree bound"
    local = {v: i for i, v in enumerate(members)}
    phi = {v: int(colors[local[v]]) for v in members}

    # Step 5: class-by-class extension, classes keyed by anchor color
    by_class: dict = {}
    for p in pockets:
        by_class.setdefault(phi[p.anchor], []).append(p)
    for cls in sorted(by_class):
        psi = extend_stage(Gl, by_class[cls], psi, L, stage=cls)

    push(deleted, len(pockets), fallback_used, len(by_class), C_used)
    return psi


def color_graph(G: Graph, L: ListAssignment,
                cfg: Optional[EngineConfig] = None) -> Tuple[Optional[Coloring], List[LevelStats]]:
    """Run the full recursive engine; returns (coloring or None, stats).

    None means an exhaustive search proved no L-coloring exists; for planar
    type-345 inputs this never happens.
    """
    cfg = cfg or EngineConfig()
    if set(L.lists) != set(range(G.n)):
        raise ValueError("list assignment must cover exactly the vertex set")
    if any(len(L.lists[v]) < L.k for v in range(G.n)):
        raise ValueError(f"every list must have at least {L.k} colors")
    if not L.is_type345_for(G):
        raise GirthViolation(f"girth below {L.girth_class}; not a type-345 instance")
    stats: List[LevelStats] = []
    assign = _solve_level(G, L, cfg, 0, stats)
    if assign is None:
        return None, stats
    col = Coloring(assign)
    report = validate_coloring(G, L, col)
    assert report.valid, f"engine produced an invalid coloring: {report}"
    return col, stats


@dataclass
class ScalingReport:
    family: str
    sizes: List[int]
    n_actual: List[int]
    wall_times: List[float]
    fitted_exponent: Optional[float]
    insufficient_data: bool
    shrink_tables: List[list] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "family": self.family,
            "sizes": self.sizes,
            "n_actual": self.n_actual,
            "wall_times": self.wall_times,
            "fitted_exponent": self.fitted_exponent,
            "insufficient_data": self.insufficient_data,
            "shrink_tables": self.shrink_tables,
        }


def bench_scaling(family: str, sizes: Sequence[int],
                  cfg: Optional[EngineConfig] = None, seed: int = 0,
                  list_mode: str = "random") -> ScalingReport:
    """Time color_graph over a size sweep and fit the time-vs-n exponent."""
    from .generators import family_girth_class, generate, make_lists

    cfg = cfg or EngineConfig()
    sizes = list(sizes)
    if not sizes:
        return ScalingReport(family, [], [], [], None, True)
    g = family_girth_class(family)
    n_actual, times, shrinks = [], [], []
    K.warmup()
    for size in sizes:
        G = generate(family, size, seed=seed)
        L = make_lists(G, g, seed=seed, mode=list_mode)
        t0 = time.perf_counter()
        col, stats = color_graph(G, L, cfg)
        dt = time.perf_counter() - t0
        assert col is not None, "planar family instance must be colorable"
        n_actual.append(G.n)
        times.append(dt)
        shrinks.append([s.to_json_dict() for s in stats])
    if len(sizes) < 2:
        return ScalingReport(family, sizes, n_actual, times, None, True, shrinks)
    logn = np.log(np.array(n_actual, dtype=float))
    logt = np.log(np.maximum(np.array(times, dtype=float), 1e-9))
    slope, _ = np.polyfit(logn, logt, 1)
    return ScalingReport(family, sizes, n_actual, times, float(slope), False, shrinks)
