"""Connected graphs up to isomorphism for exhaustive checks.

Graphs on ``n + 1`` vertices come from every connected graph on ``n``
vertices plus a new vertex with a nonempty neighbourhood (every connected
graph has a non-cut vertex, so nothing is missed).  Duplicates are removed
by bucketing on a strong invariant and backtracking isomorphism tests
inside a bucket.  The n <= 8 result ships as package data.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources
from typing import Iterable, Iterator

from .graph import Graph, from_graph6, is_connected, to_graph6
from .spectral import _charpoly_int

# number of connected graphs on n unlabeled vertices, n = 0..8
CONNECTED_COUNTS = (1, 1, 1, 2, 6, 21, 112, 853, 11117)
DATA_FILE = "connected_n1_8.g6"


def _refine(g: Graph, cells: list[list[int]]) -> list[list[int]]:
    """Coarsest equitable refinement with an isomorphism-invariant order."""
    while True:
        masks = [sum(1 << v for v in c) for c in cells]
        new_cells: list[list[int]] = []
        for c in cells:
            if len(c) == 1:
                new_cells.append(c)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in c:
                key = tuple((g.rows[v] & m).bit_count() for m in masks)
                groups.setdefault(key, []).append(v)
            for key in sorted(groups):
                new_cells.append(groups[key])
        if len(new_cells) == len(cells):
            return new_cells
        cells = new_cells


def _signature(g: Graph, cells: list[list[int]]) -> tuple:
    masks = [sum(1 << v for v in c) for c in cells]
    return tuple((len(c), tuple((g.rows[c[0]] & m).bit_count() for m in masks)) for c in cells)


def invariant(g: Graph) -> tuple:
    cells = _refine(g, [list(range(g.n))])
    adj = [[(r >> j) & 1 for j in range(g.n)] for r in g.rows]
    poly = tuple(_charpoly_int(adj)) if g.n else ()
    return g.n, g.m, _signature(g, cells), poly


def isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.m != h.m:
        return False
    cg = _refine(g, [list(range(g.n))])
    ch = _refine(h, [list(range(h.n))])
    if _signature(g, cg) != _signature(h, ch):
        return False
    cell_of_g = {v: i for i, c in enumerate(cg) for v in c}
    order = [v for c in cg for v in c]
    mapping: dict[int, int] = {}
    used = 0

    def extend(pos: int) -> bool:
        nonlocal used
        if pos == len(order):
            return True
        v = order[pos]
        for w in ch[cell_of_g[v]]:
            if (used >> w) & 1:
                continue
            if all(g.has_edge(v, x) == h.has_edge(w, y) for x, y in mapping.items()):
                mapping[v] = w
                used |= 1 << w
                if extend(pos + 1):
                    return True
                del mapping[v]
                used &= ~(1 << w)
        return False

    return extend(0)


def _dedupe(candidates: Iterable[Graph]) -> list[Graph]:
    buckets: dict[tuple, list[Graph]] = {}
    out: list[Graph] = []
    for g in candidates:
        key = invariant(g)
        reps = buckets.setdefault(key, [])
        if not any(isomorphic(g, r) for r in reps):
            reps.append(g)
            out.append(g)
    return out


def _extend(graphs: Iterable[Graph]) -> Iterator[Graph]:
    for g in graphs:
        n = g.n
        for nbrs in range(1, 1 << n):
            rows = [r | (((nbrs >> u) & 1) << n) for u, r in enumerate(g.rows)]
            yield Graph(n + 1, tuple(rows) + (nbrs,))


def generate_connected(max_n: int) -> dict[int, list[Graph]]:
    """All connected graphs with ``1 <= n <= max_n``, keyed by order."""
    layers = {1: [Graph(1, (0,))]}
    for n in range(2, max_n + 1):
        graphs = _dedupe(_extend(layers[n - 1]))
        layers[n] = sorted(graphs, key=lambda g: (g.m, to_graph6(g)))
    return layers


def write_corpus(path: str, max_n: int) -> int:
    layers = generate_connected(max_n)
    count = 0
    with open(path, "w", encoding="ascii") as fh:
        for n in sorted(layers):
            for g in layers[n]:
                assert is_connected(g)
                fh.write(to_graph6(g) + "\n")
                count += 1
    return count


@lru_cache(maxsize=None)
def _packaged() -> tuple[str, ...]:
    text = resources.files("specmatch.data").joinpath(DATA_FILE).read_text(encoding="ascii")
    return tuple(line for line in text.splitlines() if line)


def connected_graph6(min_n: int = 1, max_n: int = 8) -> list[str]:
    """graph6 strings of all connected graphs with ``min_n <= n <= max_n``."""
    if max_n > 8:
        raise ValueError("the packaged corpus stops at n = 8; use generate_connected")
    return [s for s in _packaged() if min_n <= from_graph6(s).n <= max_n]


def connected_graphs(min_n: int = 1, max_n: int = 8) -> list[Graph]:
    return [from_graph6(s) for s in connected_graph6(min_n, max_n)]
