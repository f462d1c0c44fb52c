"""Instance generators: graph families with pinned girth classes, plus
seeded list-assignment generation.

Planar families carry coordinates, so a rotation system (counterclockwise
neighbor order) is attached; the 5-list structural route needs it.
"""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np

from .choosability import ListAssignment
from .errors import UnknownFamily
from .graphs import Graph, make_graph

FAMILIES = ("tri_grid", "square_grid", "hex_grid", "random_triangulation",
            "icosahedron", "dodecahedron", "disjoint_union")

# girth class per family: the g with lists of size 8-g
FAMILY_GIRTH_CLASS = {
    "tri_grid": 3,
    "square_grid": 4,
    "hex_grid": 5,
    "random_triangulation": 3,
    "icosahedron": 3,
    "dodecahedron": 5,
    "disjoint_union": 3,
}


def _rotation_from_coords(n, adjacency, coords):
    rot = []
    for v in range(n):
        x0, y0 = coords[v]
        rot.append(tuple(sorted(adjacency[v],
                                key=lambda w: math.atan2(coords[w][1] - y0,
                                                         coords[w][0] - x0))))
    return rot


def _with_rotation(n, edges, coords, genus=0):
    G = make_graph(n, edges, genus=genus)
    rot = _rotation_from_coords(n, G.adjacency, coords)
    return make_graph(n, edges, genus=genus, rotation=rot)


def tri_grid(size: int) -> Graph:
    """Triangulated grid with bounded degree: square lattice plus a NE
    diagonal in every even-row cell (triangle strips alternating with square
    strips).  Girth 3, max degree 5."""
    w = max(2, round(math.sqrt(max(1, size))))
    n = w * w

    def vid(x, y):
        return y * w + x

    edges = []
    coords = {}
    for y in range(w):
        for x in range(w):
            coords[vid(x, y)] = (float(x), float(y))
            if x + 1 < w:
                edges.append((vid(x, y), vid(x + 1, y)))
            if y + 1 < w:
                edges.append((vid(x, y), vid(x, y + 1)))
            if x + 1 < w and y + 1 < w and y % 2 == 0:
                edges.append((vid(x, y), vid(x + 1, y + 1)))
    return _with_rotation(n, edges, coords)


def square_grid(size: int) -> Graph:
    """w x w square lattice; girth 4 for w >= 2."""
    w = max(2, round(math.sqrt(max(1, size))))
    n = w * w

    def vid(x, y):
        return y * w + x

    edges = []
    coords = {}
    for y in range(w):
        for x in range(w):
            coords[vid(x, y)] = (float(x), float(y))
            if x + 1 < w:
                edges.append((vid(x, y), vid(x + 1, y)))
            if y + 1 < w:
                edges.append((vid(x, y), vid(x, y + 1)))
    return _with_rotation(n, edges, coords)


def hex_grid(size: int) -> Graph:
    """Honeycomb patch (brick-wall construction); girth 6."""
    rows = max(2, round(math.sqrt(max(1, size) / 2)))
    cols = max(2, (max(4, size) // rows) // 2 * 2)
    n = rows * cols

    def vid(r, c):
        return r * cols + c

    edges = []
    coords = {}
    for r in range(rows):
        for c in range(cols):
            coords[vid(r, c)] = (c + 0.3 * ((r + c) % 2), float(r))
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows and (r + c) % 2 == 0:
                edges.append((vid(r, c), vid(r + 1, c)))
    return _with_rotation(n, edges, coords)


def random_triangulation(size: int, seed: int = 0) -> Graph:
    """Delaunay triangulation of seeded uniform points; girth 3, planar."""
    n = max(4, size)
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    from scipy.spatial import Delaunay
    tri = Delaunay(pts)
    edges = set()
    for simplex in tri.simplices:
        a, b, c = int(simplex[0]), int(simplex[1]), int(simplex[2])
        edges.add((min(a, b), max(a, b)))
        edges.add((min(a, c), max(a, c)))
        edges.add((min(b, c), max(b, c)))
    coords = {v: (float(pts[v][0]), float(pts[v][1])) for v in range(n)}
    return _with_rotation(n, sorted(edges), coords)


def icosahedron(size: int = 12) -> Graph:
    edges = [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5),
             (1, 2), (2, 3), (3, 4), (4, 5), (5, 1),
             (1, 6), (1, 7), (2, 7), (2, 8), (3, 8), (3, 9),
             (4, 9), (4, 10), (5, 10), (5, 6),
             (6, 7), (7, 8), (8, 9), (9, 10), (10, 6),
             (6, 11), (7, 11), (8, 11), (9, 11), (10, 11)]
    return make_graph(12, edges)


def dodecahedron(size: int = 20) -> Graph:
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
             (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
             (5, 10), (10, 6), (6, 11), (11, 7), (7, 12),
             (12, 8), (8, 13), (13, 9), (9, 14), (14, 5),
             (10, 15), (11, 16), (12, 17), (13, 18), (14, 19),
             (15, 16), (16, 17), (17, 18), (18, 19), (19, 15)]
    return make_graph(20, edges)


def disjoint_union(size: int) -> Graph:
    """size disjoint triangles."""
    count = max(1, size)
    edges = []
    for t in range(count):
        b = 3 * t
        edges += [(b, b + 1), (b + 1, b + 2), (b, b + 2)]
    return make_graph(3 * count, edges)


_GENERATORS = {
    "tri_grid": lambda size, seed: tri_grid(size),
    "square_grid": lambda size, seed: square_grid(size),
    "hex_grid": lambda size, seed: hex_grid(size),
    "random_triangulation": random_triangulation,
    "icosahedron": lambda size, seed: icosahedron(size),
    "dodecahedron": lambda size, seed: dodecahedron(size),
    "disjoint_union": lambda size, seed: disjoint_union(size),
}


def generate(family: str, size: int, seed: int = 0) -> Graph:
    if family not in _GENERATORS:
        raise UnknownFamily(f"unknown family {family!r}; choose from {FAMILIES}")
    if size < 1:
        raise ValueError("size must be >= 1")
    return _GENERATORS[family](size, seed)


def make_lists(G: Graph, g: int, seed: int = 0, mode: str = "random",
               palette_factor: float = 2.0) -> ListAssignment:
    """Seeded type-345 list assignment with lists of exactly 8-g colors.

    Modes: 'random' draws from a shared palette, 'overlap' gives every
    vertex the same list (adversarially heavy overlap), 'distinct' gives
    pairwise disjoint lists.
    """
    k = 8 - g
    rng = np.random.default_rng(seed)
    lists = {}
    if mode == "overlap":
        base = frozenset(range(k))
        lists = {v: base for v in range(G.n)}
    elif mode == "distinct":
        lists = {v: frozenset(range(v * k, (v + 1) * k)) for v in range(G.n)}
    elif mode == "random":
        palette = max(k + 1, int(round(k * palette_factor)))
        for v in range(G.n):
            cols = rng.choice(palette, size=k, replace=False)
            lists[v] = frozenset(int(c) for c in cols)
    else:
        raise ValueError(f"unknown list mode {mode!r}")
    return ListAssignment(lists, g)


def family_girth_class(family: str) -> int:
    if family not in FAMILY_GIRTH_CLASS:
        raise UnknownFamily(family)
    return FAMILY_GIRTH_CLASS[family]
