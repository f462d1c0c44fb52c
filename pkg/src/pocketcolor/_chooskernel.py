"""Inner loop of the f-choosability oracle.

Enumerates list assignments in canonical lexicographic order (colors drawn
from a universe of sum(f) ids; unused-so-far colors are interchangeable, so
fresh ids must enter as a contiguous block) and tracks the set of proper
colorings of the prefix, projected to vertices that still have uncolored
neighbors.  An empty projection set means no completion of the prefix is
colorable, so enumeration stops with a witness.

Like the other hot kernels this compiles under numba unless
``POCKETCOLOR_PURE`` is set.
"""

import numpy as np

from ._kernels import HAVE_NUMBA, njit

CAP = 512  # feasible-profile capacity before falling back to backtracking

CHOOSABLE = 1
NOT_CHOOSABLE = 0
UNDECIDED = -1  # enumeration budget exhausted


def _next_combination(c, k, limit):
    """Advance ascending index combination c[0..k-1] below limit; False at end."""
    i = k - 1
    while i >= 0:
        if c[i] < limit - (k - i):
            c[i] += 1
            for j in range(i + 1, k):
                c[j] = c[j - 1] + 1
            return True
        i -= 1
    return False


def _fresh_contiguous(c, k, used):
    """Candidate lists may only introduce fresh colors as used, used+1, ..."""
    t = 0
    for i in range(k):
        if c[i] >= used:
            if c[i] != used + t:
                return False
            t += 1
    return True


def _backtrack_ok(nv, nbr, lists, list_len):
    """Plain exhaustive search: is there a proper coloring from these lists?"""
    choice = np.full(nv, -1, dtype=np.int8)
    idx = np.zeros(nv, dtype=np.int8)
    v = 0
    while True:
        if v == nv:
            return True
        found = False
        i = idx[v]
        while i < list_len[v]:
            col = lists[v, i]
            ok = True
            for u in range(v):
                if (nbr[v] >> u) & 1 == 1 and choice[u] == col:
                    ok = False
                    break
            if ok:
                choice[v] = col
                idx[v] = i + 1
                found = True
                break
            i += 1
        if found:
            v += 1
            if v < nv:
                idx[v] = 0
        else:
            idx[v] = 0
            choice[v] = -1
            v -= 1
            if v < 0:
                return False


def choosable_core(nv, nbr, f, active_after, max_checked):
    """Decide f-choosability of a graph on nv <= 16 vertices.

    nbr[v]: bitmask of neighbors of v.  f[v] >= 1.  active_after[i]: bitmask
    of vertices <= i that have a neighbor > i (the DP projection).
    max_checked <= 0 means unlimited; otherwise enumeration aborts with
    UNDECIDED once that many assignments were checked.

    Returns (verdict, checked, witness, witness_len) where witness rows are
    color ids (-1 padded) per vertex; meaningful when NOT_CHOOSABLE.
    """
    maxf = 0
    for v in range(nv):
        if f[v] > maxf:
            maxf = f[v]

    comb = np.zeros((nv, maxf), dtype=np.int8)
    used = np.zeros(nv + 1, dtype=np.int16)

    feas = np.zeros((nv + 1, CAP, nv), dtype=np.int8)
    feas_n = np.zeros(nv + 1, dtype=np.int32)
    overflow = np.zeros(nv + 1, dtype=np.int8)
    feas_n[0] = 1

    witness = np.full((nv, maxf), -1, dtype=np.int8)
    wit_len = np.zeros(nv, dtype=np.int8)

    lists = np.full((nv, maxf), -1, dtype=np.int8)
    list_len = np.zeros(nv, dtype=np.int8)

    checked = 0
    depth = 0
    fresh_state = np.zeros(nv, dtype=np.int8)  # 0 = need init, 1 = advancing

    while True:
        k = f[depth]
        lim = used[depth] + k
        if fresh_state[depth] == 0:
            for i in range(k):
                comb[depth, i] = i
            fresh_state[depth] = 1
            have = True
        else:
            have = _next_combination(comb[depth], k, lim)
        while have and not _fresh_contiguous(comb[depth], k, used[depth]):
            have = _next_combination(comb[depth], k, lim)
        if not have:
            fresh_state[depth] = 0
            depth -= 1
            if depth < 0:
                return CHOOSABLE, checked, witness, wit_len
            continue

        nf = 0
        for i in range(k):
            if comb[depth, i] >= used[depth]:
                nf += 1
        used[depth + 1] = used[depth] + nf

        # extend feasible profiles with this list choice
        if overflow[depth] == 1:
            overflow[depth + 1] = 1
            empty = False
        else:
            cnt = 0
            over = False
            amask = active_after[depth]
            for p in range(feas_n[depth]):
                for i in range(k):
                    col = comb[depth, i]
                    clash = False
                    for u in range(depth):
                        if (nbr[depth] >> u) & 1 == 1 and feas[depth, p, u] == col:
                            clash = True
                            break
                    if clash:
                        continue
                    dup = False
                    for q in range(cnt):
                        same = True
                        if (amask >> depth) & 1 == 1 and feas[depth + 1, q, depth] != col:
                            same = False
                        if same:
                            for u in range(depth):
                                if (amask >> u) & 1 == 1 and \
                                        feas[depth + 1, q, u] != feas[depth, p, u]:
                                    same = False
                                    break
                        if same:
                            dup = True
                            break
                    if dup:
                        continue
                    if cnt >= CAP:
                        over = True
                        break
                    for u in range(depth):
                        feas[depth + 1, cnt, u] = feas[depth, p, u]
                    feas[depth + 1, cnt, depth] = col
                    cnt += 1
                if over:
                    break
            if over:
                overflow[depth + 1] = 1
                empty = False
            else:
                overflow[depth + 1] = 0
                feas_n[depth + 1] = cnt
                empty = cnt == 0

        if empty:
            checked += 1
            for v in range(nv):
                wit_len[v] = f[v]
                for i in range(maxf):
                    witness[v, i] = -1
            nxt = used[depth + 1]
            for v in range(nv):
                if v <= depth:
                    for i in range(f[v]):
                        witness[v, i] = comb[v, i]
                else:
                    for i in range(f[v]):
                        witness[v, i] = nxt
                        nxt += 1
            return NOT_CHOOSABLE, checked, witness, wit_len

        if depth + 1 == nv:
            checked += 1
            if max_checked > 0 and checked > max_checked:
                return UNDECIDED, checked, witness, wit_len
            if overflow[depth + 1] == 1:
                for v in range(nv):
                    list_len[v] = f[v]
                    for i in range(f[v]):
                        lists[v, i] = comb[v, i]
                if not _backtrack_ok(nv, nbr, lists, list_len):
                    for v in range(nv):
                        wit_len[v] = f[v]
                        for i in range(maxf):
                            witness[v, i] = comb[v, i] if i < f[v] else -1
                    return NOT_CHOOSABLE, checked, witness, wit_len
            continue

        depth += 1
        fresh_state[depth] = 0


if HAVE_NUMBA:
    _next_combination = njit(cache=True)(_next_combination)
    _fresh_contiguous = njit(cache=True)(_fresh_contiguous)
    _backtrack_ok = njit(cache=True)(_backtrack_ok)
    choosable_core = njit(cache=True)(choosable_core)


def warmup():
    nbr = np.array([2, 1], dtype=np.int64)  # an edge
    f = np.array([1, 2], dtype=np.int8)
    active = np.array([1, 0], dtype=np.int64)
    choosable_core(2, nbr, f, active, 0)
