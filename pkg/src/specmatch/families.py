"""The biregular extremal family H(delta, k) and the join graphs that are
the only non-FPM graphs allowed by the refined complement condition."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, bipartition, empty, is_connected, join


class ParameterError(ValueError):
    pass


class NotConstructibleError(ValueError):
    pass


@dataclass(frozen=True)
class FamilyParams:
    delta: int
    k: int
    m: int  # |V2|

    @property
    def n(self) -> int:
        return 2 * self.m + self.k

    @property
    def v2_degree(self) -> Fraction:
        return Fraction(self.delta * (self.m + self.k), self.m)

    def validate(self) -> None:
        if self.delta < 1 or self.k < 1 or self.m < 1:
            raise ParameterError("delta, k and m must be positive integers")
        if self.delta > self.m:
            raise ParameterError(f"delta={self.delta} exceeds |V2|={self.m}")
        if self.v2_degree.denominator != 1:
            raise ParameterError(f"|V2|={self.m} does not divide delta*|V1|={self.delta * (self.m + self.k)}")
        if self.v2_degree > self.m + self.k:
            raise ParameterError("V2 degree would exceed |V1|")


def construct_H(p: FamilyParams) -> Graph:
    """Round-robin member of H(delta, k) with ``|V2| = m``.

    ``V1 = 0..m+k-1`` and ``V2 = m+k..2m+k-1``; ``u_i`` is joined to the
    ``delta`` consecutive ``V2`` slots starting at ``i*delta mod m``.
    """
    if min(p.delta, p.k, p.m) >= 1 and p.delta * (p.m + p.k) < p.n - 1:
        # too few edges for a spanning tree, whatever the divisibility
        raise NotConstructibleError(
            f"disconnected: {p.delta * (p.m + p.k)} edges cannot connect {p.n} vertices")
    p.validate()
    a = p.m + p.k
    edges = []
    for i in range(a):
        for j in range(p.delta):
            edges.append((i, a + (i * p.delta + j) % p.m))
    g = Graph.from_edges(p.n, edges)
    ok, reason = is_member_H(g, p.delta, p.k)
    if not ok:
        raise NotConstructibleError(f"round-robin construction fails: {reason}")
    return g


def constructible(delta: int, k: int, m: int) -> bool:
    try:
        construct_H(FamilyParams(delta, k, m))
    except (ParameterError, NotConstructibleError):
        return False
    return True


def is_member_H(g: Graph, delta: int, k: int) -> tuple[bool, str]:
    """Membership in H(delta, k) with a diagnosis of the first failed test.

    Both orientations of the bipartition are tried as ``(V1, V2)``.
    """
    if g.n == 0 or not is_connected(g):
        return False, "disconnected"
    side = bipartition(g)
    if side is None:
        return False, "not bipartite"
    other = ((1 << g.n) - 1) & ~side
    reasons = []
    for v1, v2 in ((side, other), (other, side)):
        d1 = {g.degree(u) for u in range(g.n) if (v1 >> u) & 1}
        d2 = {g.degree(u) for u in range(g.n) if (v2 >> u) & 1}
        if d1 != {delta}:
            reasons.append(f"V1 degrees {sorted(d1)} are not all {delta}")
        elif v1.bit_count() != v2.bit_count() + k:
            reasons.append(f"|V1|={v1.bit_count()} is not |V2|+{k}={v2.bit_count() + k}")
        elif len(d2) > 1:
            reasons.append(f"V2 degrees {sorted(d2)} are not equal")
        else:
            return True, "member"
    return False, reasons[0]


def member_parts(g: Graph, delta: int, k: int) -> tuple[list[int], list[int]] | None:
    """``(V1, V2)`` vertex lists of a membership certificate, or None."""
    if not is_member_H(g, delta, k)[0]:
        return None
    side = bipartition(g)
    assert side is not None
    for v1 in (side, ((1 << g.n) - 1) & ~side):
        part1 = [u for u in range(g.n) if (v1 >> u) & 1]
        part2 = [u for u in range(g.n) if not (v1 >> u) & 1]
        if all(g.degree(u) == delta for u in part1) and len(part1) == len(part2) + k:
            return part1, part2
    return None


def predicted_q1(delta: int, k: int, n: int) -> Fraction:
    """``2 delta n / (n - k)``."""
    if n <= k:
        raise ParameterError("n must exceed k")
    return Fraction(2 * delta * n, n - k)


def predicted_lambda1(delta: int, k: int, n: int) -> float:
    """``delta * sqrt(1 + 2k / (n - k))``."""
    if n <= k:
        raise ParameterError("n must exceed k")
    return delta * math.sqrt(1 + 2 * k / (n - k))


def predicted_alpha_star(k: int, n: int) -> Fraction:
    return Fraction(n - k, 2)


def construct_exception(delta: int, h2: Graph) -> Graph:
    """Join of an independent set of size ``delta + 1`` with ``h2``."""
    if h2.n != delta:
        raise ParameterError(f"H2 must have order delta={delta}, got {h2.n}")
    return join(empty(delta + 1), h2)


def exception_split(g: Graph, delta: int) -> int | None:
    """Bitmask of an independent set ``A`` of size ``delta + 1`` whose
    vertices are all adjacent to every vertex of the ``delta`` others."""
    if g.n != 2 * delta + 1:
        return None
    full = (1 << g.n) - 1
    for v in range(g.n):
        if g.degree(v) != delta:
            continue
        rest = g.rows[v]
        a = full & ~rest
        if a.bit_count() != delta + 1:
            continue
        if all(g.rows[u] & a == 0 and g.rows[u] & rest == rest
               for u in range(g.n) if (a >> u) & 1):
            return a
    return None


def is_exception_graph(g: Graph, delta: int) -> bool:
    return exception_split(g, delta) is not None
