"""Exact fractional matchings.

The fractional matching number is half the matching number of the
bipartite double cover, and folding a maximum matching of the cover back
onto the graph gives a half-integral optimum.  A brute-force deficiency
oracle over all vertex subsets serves as an independent check.  Every
value here is an exact ``Fraction`` or an integer count of halves.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import BudgetExceededError, Graph, bipartition, isolated_after_deletion

DEFICIENCY_MAX_ORDER = 22


@dataclass(frozen=True)
class DeficiencyWitness:
    """A vertex set ``S`` (bitmask) maximising ``i(G - S) - |S|``."""

    set_mask: int
    isolated: int

    @property
    def size(self) -> int:
        return self.set_mask.bit_count()

    @property
    def deficiency(self) -> int:
        return self.isolated - self.size

    @property
    def members(self) -> list[int]:
        return [v for v in range(self.set_mask.bit_length()) if (self.set_mask >> v) & 1]


def deficiency_oracle(g: Graph, max_order: int = DEFICIENCY_MAX_ORDER) -> DeficiencyWitness:
    """Exhaustive maximum of ``i(G - S) - |S|`` over all ``S``.

    Ties go to the smallest ``|S|`` and then to the smallest bitmask.
    """
    n = g.n
    if n > max_order:
        raise BudgetExceededError(f"deficiency enumeration limited to n <= {max_order}")
    if n == 0:
        return DeficiencyWitness(0, 0)
    masks = np.arange(1 << n, dtype=np.int64)
    isolated = np.zeros(1 << n, dtype=np.int64)
    for v in range(n):
        outside = ((masks >> v) & 1) == 0
        # v survives and all its neighbours are deleted
        isolated += outside & ((masks & g.rows[v]) == g.rows[v])
    sizes = np.bitwise_count(masks).astype(np.int64)
    score = isolated - sizes
    best = score.max()
    cand = np.flatnonzero(score == best)
    pick = cand[np.lexsort((cand, sizes[cand]))[0]]
    return DeficiencyWitness(int(pick), int(isolated[pick]))


def bipartite_double_cover(g: Graph) -> Graph:
    """Vertices ``u`` -> ``u`` (plus copy) and ``u + n`` (minus copy)."""
    n = g.n
    rows = [row << n for row in g.rows] + list(g.rows)
    return Graph(2 * n, tuple(rows))


class NotBipartiteError(ValueError):
    pass


def bipartite_max_matching(g: Graph, side_a: int | None = None) -> tuple[int, dict[int, int]]:
    """Hopcroft-Karp maximum matching.

    ``side_a`` is a bitmask of one part; it is inferred by 2-colouring when
    omitted.  Returns the size and a map from each matched vertex in
    ``side_a`` to its partner.
    """
    colouring = bipartition(g)
    if colouring is None:
        raise NotBipartiteError("graph has an odd cycle")
    if side_a is None:
        side_a = colouring
    for u in range(g.n):
        if (side_a >> u) & 1 and g.rows[u] & side_a:
            raise NotBipartiteError(f"vertex {u} has a neighbour on its own side")
        if not (side_a >> u) & 1 and g.rows[u] & ~side_a:
            raise NotBipartiteError(f"vertex {u} has a neighbour on its own side")

    left = [u for u in range(g.n) if (side_a >> u) & 1]
    adj = {u: g.neighbors(u) for u in left}
    mate_left: dict[int, int] = {}
    mate_right: dict[int, int] = {}
    inf = g.n + 1

    def bfs() -> tuple[dict[int, int], bool]:
        dist = {}
        queue = deque()
        for u in left:
            if u in mate_left:
                dist[u] = inf
            else:
                dist[u] = 0
                queue.append(u)
        found = False
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                partner = mate_right.get(w)
                if partner is None:
                    found = True
                elif dist[partner] == inf:
                    dist[partner] = dist[u] + 1
                    queue.append(partner)
        return dist, found

    def dfs(u: int, dist: dict[int, int]) -> bool:
        # iterative augmenting-path search along the BFS layers
        stack = [(u, iter(adj[u]))]
        path = []
        while stack:
            x, it = stack[-1]
            advanced = False
            for w in it:
                partner = mate_right.get(w)
                if partner is None:
                    path.append((x, w))
                    for a, b in path:
                        mate_left[a] = b
                        mate_right[b] = a
                    return True
                if dist[partner] == dist[x] + 1:
                    path.append((x, w))
                    stack.append((partner, iter(adj[partner])))
                    advanced = True
                    break
            if not advanced:
                dist[x] = inf
                stack.pop()
                if path:
                    path.pop()
        return False

    size = 0
    while True:
        dist, found = bfs()
        if not found:
            break
        for u in left:
            if u not in mate_left and dfs(u, dist):
                size += 1
    return size, dict(sorted(mate_left.items()))


def _cover_matching(g: Graph) -> dict[int, int]:
    cover = bipartite_double_cover(g)
    _, mates = bipartite_max_matching(cover, (1 << g.n) - 1)
    return mates


def fractional_matching_number(g: Graph) -> Fraction:
    return Fraction(len(_cover_matching(g)), 2)


@dataclass(frozen=True)
class HalfIntegralMatching:
    """Edge weights stored as integer halves: 0, 1 or 2 meaning 0, 1/2, 1."""

    n: int
    halves: dict[tuple[int, int], int]

    @property
    def total(self) -> Fraction:
        return Fraction(sum(self.halves.values()), 2)

    def weight(self, u: int, v: int) -> Fraction:
        return Fraction(self.halves.get((min(u, v), max(u, v)), 0), 2)

    def load(self, v: int) -> Fraction:
        return Fraction(sum(h for e, h in self.halves.items() if v in e), 2)

    def is_feasible_for(self, g: Graph) -> bool:
        for (u, v), h in self.halves.items():
            if h not in (0, 1, 2) or not g.has_edge(u, v) or u >= v:
                return False
        return all(self.load(v) <= 1 for v in range(g.n))

    def to_lines(self) -> list[str]:
        """One ``"u v k/2"`` line per edge with nonzero weight."""
        return [f"{u} {v} {h}/2" for (u, v), h in sorted(self.halves.items()) if h]

    @classmethod
    def from_lines(cls, n: int, lines: list[str]) -> HalfIntegralMatching:
        halves = {}
        for line in lines:
            u, v, w = line.split()
            num, den = w.split("/")
            if den != "2":
                raise ValueError(f"weight {w!r} is not written in halves")
            u, v = int(u), int(v)
            halves[(min(u, v), max(u, v))] = int(num)
        return cls(n, halves)


def half_integral_certificate(g: Graph) -> HalfIntegralMatching:
    """Fold a maximum matching of the double cover onto ``g``.

    Edge ``uv`` receives one half for each of ``u+v-`` and ``v+u-`` that
    the cover matching uses.
    """
    n = g.n
    halves: dict[tuple[int, int], int] = {}
    for plus, minus in _cover_matching(g).items():
        u, v = plus, minus - n
        key = (min(u, v), max(u, v))
        halves[key] = halves.get(key, 0) + 1
    return HalfIntegralMatching(n, halves)


def has_fractional_perfect_matching(g: Graph) -> bool:
    return 2 * fractional_matching_number(g) == g.n


def deficiency_matching_number(g: Graph) -> Fraction:
    """``(n - max deficiency) / 2`` from the exhaustive oracle."""
    return Fraction(g.n - deficiency_oracle(g).deficiency, 2)


def check_witness(g: Graph, w: DeficiencyWitness) -> bool:
    return isolated_after_deletion(g, w.set_mask) == w.isolated
