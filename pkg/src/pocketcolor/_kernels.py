"""Hot graph kernels over CSR adjacency.

Every kernel has two implementations: a numba ``@njit`` version and a pure
numpy/python twin.  The active set is chosen at import time; set
``POCKETCOLOR_PURE=1`` to force the pure path (useful for debugging and for
the kernel benchmark, which times both).
"""

import os

import numpy as np

PURE = os.environ.get("POCKETCOLOR_PURE", "") not in ("", "0")

try:
    if PURE:
        raise ImportError("pure mode forced")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


def _bfs_capped(indptr, indices, src, cap, dist, queue):
    """Single source BFS, stopping at depth cap (cap < 0 means unbounded).

    dist must be preset to -1; visited entries are reset before returning
    the number of reached vertices (their ids are left in queue[:count]).
    """
    head = 0
    tail = 0
    queue[tail] = src
    tail += 1
    dist[src] = 0
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        if cap >= 0 and du >= cap:
            continue
        for j in range(indptr[u], indptr[u + 1]):
            w = indices[j]
            if dist[w] < 0:
                dist[w] = du + 1
                queue[tail] = w
                tail += 1
    return tail


def _shortest_cycle_at(indptr, indices, src, cap, dist, parent, queue):
    """Length of the shortest cycle found by BFS from src, or a huge value.

    Scans non-tree edges; exact for the minimum over all sources.  BFS is
    cut off at depth cap (pass a large cap for exact search).
    """
    best = 1 << 30
    head = 0
    tail = 0
    queue[tail] = src
    tail += 1
    dist[src] = 0
    parent[src] = -1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u]
        if du >= cap:
            break
        for j in range(indptr[u], indptr[u + 1]):
            w = indices[j]
            if dist[w] < 0:
                dist[w] = du + 1
                parent[w] = u
                queue[tail] = w
                tail += 1
            elif w != parent[u]:
                cand = du + dist[w] + 1
                if cand < best:
                    best = cand
    for i in range(tail):
        dist[queue[i]] = -1
    return best


def _greedy_color(indptr, indices, order, colors, seen):
    """Greedy proper coloring along order; least color absent among colored
    neighbors.  colors preset to -1, seen preset to -1 (scratch)."""
    maxc = 0
    for t in range(order.shape[0]):
        v = order[t]
        for j in range(indptr[v], indptr[v + 1]):
            c = colors[indices[j]]
            if c >= 0:
                seen[c] = v
        c = 0
        while seen[c] == v:
            c += 1
        colors[v] = c
        if c > maxc:
            maxc = c
    return maxc


def _components(indptr, indices, labels, queue):
    """Connected component labels (0-based, by smallest contained id)."""
    n = labels.shape[0]
    comp = 0
    for s in range(n):
        if labels[s] >= 0:
            continue
        head = 0
        tail = 0
        queue[tail] = s
        tail += 1
        labels[s] = comp
        while head < tail:
            u = queue[head]
            head += 1
            for j in range(indptr[u], indptr[u + 1]):
                w = indices[j]
                if labels[w] < 0:
                    labels[w] = comp
                    queue[tail] = w
                    tail += 1
        comp += 1
    return comp


def _conflict_edges(indptr, indices, colors, out_u, out_v):
    """Collect monochromatic edges (u < v); returns count (capped by out)."""
    n = indptr.shape[0] - 1
    k = 0
    cap = out_u.shape[0]
    for u in range(n):
        cu = colors[u]
        if cu < 0:
            continue
        for j in range(indptr[u], indptr[u + 1]):
            w = indices[j]
            if w > u and colors[w] == cu:
                if k < cap:
                    out_u[k] = u
                    out_v[k] = w
                k += 1
    return k


def _power_edges_masked(indptr, indices, member, k, dist, queue, out_u, out_v):
    """Edges of H^k where H is the subgraph induced on member==1 vertices.

    Distances are measured inside H.  Emits each edge once (u < v).
    Returns the true count; entries beyond the buffer are dropped, so the
    caller must retry with bigger buffers when count exceeds capacity.
    """
    n = indptr.shape[0] - 1
    cap = out_u.shape[0]
    cnt = 0
    for s in range(n):
        if member[s] == 0:
            continue
        head = 0
        tail = 0
        queue[tail] = s
        tail += 1
        dist[s] = 0
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            if du >= k:
                continue
            for j in range(indptr[u], indptr[u + 1]):
                w = indices[j]
                if member[w] == 1 and dist[w] < 0:
                    dist[w] = du + 1
                    queue[tail] = w
                    tail += 1
        for i in range(tail):
            w = queue[i]
            if w > s:
                if cnt < cap:
                    out_u[cnt] = s
                    out_v[cnt] = w
                cnt += 1
            dist[w] = -1
    return cnt


def _bfs_all_levels(indptr, indices, root, dist, queue):
    """BFS levels from root; dist preset to -1.  Returns count reached."""
    return _bfs_capped(indptr, indices, root, -1, dist, queue)


if HAVE_NUMBA:
    bfs_capped = njit(cache=True)(_bfs_capped)
    shortest_cycle_at = njit(cache=True)(_shortest_cycle_at)
    greedy_color = njit(cache=True)(_greedy_color)
    components = njit(cache=True)(_components)
    conflict_edges = njit(cache=True)(_conflict_edges)
    power_edges_masked = njit(cache=True)(_power_edges_masked)
    bfs_all_levels = njit(cache=True)(_bfs_all_levels)
else:
    bfs_capped = _bfs_capped
    shortest_cycle_at = _shortest_cycle_at
    greedy_color = _greedy_color
    components = _components
    conflict_edges = _conflict_edges
    power_edges_masked = _power_edges_masked
    bfs_all_levels = _bfs_all_levels


def active_backend():
    return "numba" if HAVE_NUMBA else "pure"


def warmup():
    """Trigger JIT compilation on a toy graph so benchmarks stay honest."""
    indptr = np.array([0, 1, 2], dtype=np.int64)
    indices = np.array([1, 0], dtype=np.int32)
    n = 2
    dist = np.full(n, -1, dtype=np.int32)
    queue = np.empty(n, dtype=np.int32)
    bfs_capped(indptr, indices, 0, -1, dist, queue)
    dist[:] = -1
    parent = np.full(n, -1, dtype=np.int32)
    shortest_cycle_at(indptr, indices, 0, 4, dist, parent, queue)
    colors = np.full(n, -1, dtype=np.int32)
    seen = np.full(8, -1, dtype=np.int32)
    greedy_color(indptr, indices, np.arange(n, dtype=np.int32), colors, seen)
    labels = np.full(n, -1, dtype=np.int32)
    components(indptr, indices, labels, queue)
    out_u = np.empty(4, dtype=np.int32)
    out_v = np.empty(4, dtype=np.int32)
    conflict_edges(indptr, indices, colors, out_u, out_v)
    member = np.ones(n, dtype=np.int8)
    dist[:] = -1
    power_edges_masked(indptr, indices, member, 2, dist, queue, out_u, out_v)
