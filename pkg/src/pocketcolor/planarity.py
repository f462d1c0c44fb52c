"""Exact planarity testing.

Euler-bound pre-check followed by incremental face embedding in the
Demoucron-Malgrange-Pertuiset style, run per biconnected block.  Correct at
every size; tuned for the pocket-sized graphs the purse test feeds it.
"""

from __future__ import annotations

from .graphs import Graph, connected_components


def _blocks(G: Graph, component):
    """Biconnected blocks (vertex sets) of one component, via DFS lowpoints."""
    comp = set(component)
    visited = {}
    low = {}
    parent = {}
    stack = []
    blocks = []
    counter = [0]

    def dfs(root):
        work = [(root, iter(G.adjacency[root]))]
        visited[root] = low[root] = counter[0]
        counter[0] += 1
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in comp:
                    continue
                if w not in visited:
                    stack.append((v, w))
                    parent[w] = v
                    visited[w] = low[w] = counter[0]
                    counter[0] += 1
                    work.append((w, iter(G.adjacency[w])))
                    advanced = True
                    break
                elif w != parent.get(v) and visited[w] < visited[v]:
                    stack.append((v, w))
                    low[v] = min(low[v], visited[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
                if low[v] >= visited[u]:
                    block = set()
                    while stack:
                        e = stack.pop()
                        block.update(e)
                        if e == (u, v):
                            break
                    if block:
                        blocks.append(block)

    for v in component:
        if v not in visited:
            dfs(v)
    return blocks


def _find_cycle(adj, vertices):
    """Any cycle in the subgraph on vertices (assumed to contain one)."""
    start = min(vertices)
    parent = {start: None}
    order = [start]
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in vertices:
                continue
            if w not in parent:
                parent[w] = v
                order.append(w)
                stack.append(w)
            elif parent[v] != w:
                # close the cycle through the tree paths of v and w
                pv, pw = [], []
                x = v
                while x is not None:
                    pv.append(x)
                    x = parent[x]
                x = w
                seen = set(pv)
                while x not in seen:
                    pw.append(x)
                    x = parent[x]
                meet = x
                cyc = []
                for y in pv:
                    cyc.append(y)
                    if y == meet:
                        break
                cyc.extend(reversed(pw))
                if len(cyc) >= 3:
                    return cyc
    return None


def _embed_block(G: Graph, block) -> bool:
    """DMP embedding loop for one biconnected block; True iff planar."""
    vs = sorted(block)
    n = len(vs)
    if n <= 4:
        return True
    edges = {(u, w) for u in vs for w in G.adjacency[u] if w in block and w > u}
    m = len(edges)
    if m > 3 * n - 6:
        return False
    cycle = _find_cycle(G.adjacency, block)
    if cycle is None:
        return True  # a tree slipped through; trivially planar
    embedded_v = set(cycle)
    embedded_e = set()
    for i in range(len(cycle)):
        a, b = cycle[i], cycle[(i + 1) % len(cycle)]
        embedded_e.add((min(a, b), max(a, b)))
    faces = [list(cycle), list(reversed(cycle))]

    while len(embedded_e) < m:
        fragments = []
        # single unembedded edges between embedded vertices
        for (u, w) in sorted(edges - embedded_e):
            if u in embedded_v and w in embedded_v:
                fragments.append(({u, w}, [u, w], None))
        # components of block minus embedded vertices, with attachments
        remaining = block - embedded_v
        seen = set()
        for s in sorted(remaining):
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            seen.add(s)
            att = set()
            while stack:
                v = stack.pop()
                for w in G.adjacency[v]:
                    if w not in block:
                        continue
                    if w in embedded_v:
                        att.add(w)
                    elif w not in seen:
                        seen.add(w)
                        comp.add(w)
                        stack.append(w)
            fragments.append((comp | att, sorted(att), comp))
        if not fragments:
            return True
        # admissible faces per fragment
        chosen = None
        for frag in fragments:
            _, att, _ = frag
            admissible = [fi for fi, f in enumerate(faces) if set(att) <= set(f)]
            if not admissible:
                return False
            if len(admissible) == 1:
                chosen = (frag, admissible[0])
                break
        if chosen is None:
            frag = fragments[0]
            admissible = [fi for fi, f in enumerate(faces) if set(frag[1]) <= set(f)]
            chosen = (frag, admissible[0])
        (fragset, att, interior), fi = chosen
        # alpha path between two attachments through the fragment
        if interior is None:
            path = list(att[:2])
        else:
            a = att[0]
            goal = set(att[1:])
            prev = {a: None}
            queue = [a]
            end = None
            while queue and end is None:
                nxt = []
                for v in queue:
                    for w in sorted(G.adjacency[v]):
                        if w not in fragset or w in prev:
                            continue
                        if v == a and w in embedded_v:
                            continue
                        if w in goal:
                            prev[w] = v
                            end = w
                            break
                        if w in interior:
                            prev[w] = v
                            nxt.append(w)
                    if end is not None:
                        break
                queue = nxt
            path = []
            x = end
            while x is not None:
                path.append(x)
                x = prev[x]
            path.reverse()
        # split face fi along path
        face = faces[fi]
        a, b = path[0], path[-1]
        i, j = face.index(a), face.index(b)
        if i > j:
            i, j = j, i
            path = list(reversed(path))
        inner = path[1:-1]
        f1 = face[i:j + 1] + list(reversed(inner))
        f2 = face[j:] + face[:i + 1] + inner
        faces[fi] = f1
        faces.append(f2)
        for v in inner:
            embedded_v.add(v)
        for t in range(len(path) - 1):
            u, w = path[t], path[t + 1]
            embedded_e.add((min(u, w), max(u, w)))
    return True


def is_planar(G: Graph) -> bool:
    """True iff G embeds in the sphere."""
    if G.n <= 4:
        return True
    if G.n >= 3 and G.m > 3 * G.n - 6:
        return False
    for comp in connected_components(G):
        for block in _blocks(G, comp):
            if len(block) >= 5 and not _embed_block(G, block):
                return False
    return True
