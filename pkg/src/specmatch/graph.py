"""Simple undirected graphs stored as bit rows, the graph6 codec, and exact
combinatorial invariants (girth, independence number, connectivity)."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

GRAPH6_HEADER = ">>graph6<<"
MAX_GRAPH6_ORDER = 68719476735  # 2**36 - 1, largest order the format can express
INDEPENDENCE_MAX_ORDER = 40
INDEPENDENCE_MAX_NODES = 10**8


class Graph6Error(ValueError):
    """Malformed graph6 input; ``offset`` is the 0-based byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class UnsupportedSizeError(ValueError):
    pass


class BudgetExceededError(RuntimeError):
    """An exact search would exceed its resource budget."""


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``rows[u]`` is the neighbourhood of ``u`` as a bitmask.
    """

    n: int
    rows: tuple[int, ...]
    m: int = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.rows) != self.n:
            raise ValueError("rows must have one entry per vertex")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.rows):
            if row & ~full or (row >> u) & 1:
                raise ValueError(f"row {u} has an out-of-range bit or a loop")
            for v in _bits(row):
                if not (self.rows[v] >> u) & 1:
                    raise ValueError(f"adjacency is not symmetric at ({u}, {v})")
        object.__setattr__(self, "m", sum(r.bit_count() for r in self.rows) // 2)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def degree(self, u: int) -> int:
        return self.rows[u].bit_count()

    def degrees(self) -> list[int]:
        return [r.bit_count() for r in self.rows]

    def neighbors(self, u: int) -> list[int]:
        return list(_bits(self.rows[u]))

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in _bits(self.rows[u] >> (u + 1) << (u + 1))]

    def is_regular(self) -> bool:
        return len(set(self.degrees())) <= 1

    def __str__(self) -> str:
        return to_graph6(self) if self.n <= MAX_GRAPH6_ORDER else f"Graph(n={self.n})"


# ---------------------------------------------------------------- graph6 codec


def _encode_order(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])


def to_graph6(g: Graph) -> str:
    if g.n > MAX_GRAPH6_ORDER:
        raise UnsupportedSizeError(f"graph6 cannot encode n={g.n}")
    out = bytearray(_encode_order(g.n))
    acc = nbits = 0
    for j in range(1, g.n):
        row = g.rows[j]
        for i in range(j):
            acc = (acc << 1) | ((row >> i) & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return out.decode("ascii")


def from_graph6(text: str) -> Graph:
    line = text.strip("\r\n")
    if line.startswith(GRAPH6_HEADER):
        line = line[len(GRAPH6_HEADER):]
    data = line.encode("ascii", errors="replace")
    if not data:
        raise Graph6Error("empty graph6 string", 0)
    for pos, byte in enumerate(data):
        if not 63 <= byte <= 126:
            raise Graph6Error(f"byte {byte!r} outside the graph6 range 63..126", pos)

    if data[0] != 126:
        n, pos = data[0] - 63, 1
    elif len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise Graph6Error("truncated 8-byte order header", len(data))
        n, pos = 0, 8
        for b in data[2:8]:
            n = (n << 6) | (b - 63)
    else:
        if len(data) < 4:
            raise Graph6Error("truncated 4-byte order header", len(data))
        n, pos = 0, 4
        for b in data[1:4]:
            n = (n << 6) | (b - 63)

    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = data[pos:]
    if len(body) < need:
        raise Graph6Error(f"expected {need} adjacency bytes, found {len(body)}", len(data))
    if len(body) > need:
        raise Graph6Error("trailing bytes after adjacency data", pos + need)

    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[k // 6] - 63
            if (byte >> (5 - k % 6)) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    if need:
        pad = 6 * need - nbits
        if (body[-1] - 63) & ((1 << pad) - 1):
            raise Graph6Error("nonzero padding bits", pos + need - 1)
    return Graph(n, tuple(rows))


def read_graph6_lines(lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    """Yield ``(line_number, text)`` for graph6 payload lines, skipping blanks."""
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if text.startswith(GRAPH6_HEADER):
            text = text[len(GRAPH6_HEADER):]
        if text:
            yield lineno, text


# ---------------------------------------------------------------- constructions


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full & ~row & ~(1 << u) for u, row in enumerate(g.rows)))


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    shift = g1.n
    return Graph(g1.n + g2.n, g1.rows + tuple(r << shift for r in g2.rows))


def join(g1: Graph, g2: Graph) -> Graph:
    left = (1 << g1.n) - 1
    right = ((1 << g2.n) - 1) << g1.n
    rows = tuple(r | right for r in g1.rows) + tuple((r << g1.n) | left for r in g2.rows)
    return Graph(g1.n + g2.n, rows)


def delete_vertices(g: Graph, s: int | Iterable[int]) -> Graph:
    """Induced subgraph on ``V \\ s``; survivors keep their relative order."""
    mask = s if isinstance(s, int) else sum(1 << v for v in set(s))
    keep = [v for v in range(g.n) if not (mask >> v) & 1]
    index = {v: i for i, v in enumerate(keep)}
    rows = []
    for v in keep:
        rows.append(sum(1 << index[w] for w in _bits(g.rows[v] & ~mask)))
    return Graph(len(keep), tuple(rows))


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    keep = set(vertices)
    return delete_vertices(g, [v for v in range(g.n) if v not in keep])


def isolated_after_deletion(g: Graph, s: int | Iterable[int]) -> int:
    """Number of isolated vertices of ``g - s``."""
    mask = s if isinstance(s, int) else sum(1 << v for v in set(s))
    return sum(1 for v in range(g.n) if not (mask >> v) & 1 and not g.rows[v] & ~mask)


# ---------------------------------------------------------------- generators


def empty(n: int) -> Graph:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return Graph(n, (0,) * n)


def complete(n: int) -> Graph:
    if n < 0:
        raise ValueError("n must be nonnegative")
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << u) for u in range(n)))


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("a path needs at least one vertex")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least three vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return join(empty(a), empty(b))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


# ---------------------------------------------------------------- invariants


def min_degree(g: Graph) -> int:
    if g.n == 0:
        raise ValueError("minimum degree of the empty graph is undefined")
    return min(g.degrees())


def components(g: Graph) -> list[int]:
    """Connected components as vertex bitmasks, ordered by smallest vertex."""
    seen = 0
    comps = []
    for start in range(g.n):
        if (seen >> start) & 1:
            continue
        comp = frontier = 1 << start
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= g.rows[v]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        comps.append(comp)
    return comps


def is_connected(g: Graph) -> bool:
    # n = 0 counts as connected so callers filter it explicitly
    return len(components(g)) <= 1


def bipartition(g: Graph) -> int | None:
    """Bitmask of one colour class of a proper 2-colouring, or None.

    Within each component the smallest vertex gets the returned colour.
    """
    colour = [-1] * g.n
    side = 0
    for start in range(g.n):
        if colour[start] >= 0:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in _bits(g.rows[u]):
                if colour[v] < 0:
                    colour[v] = 1 - colour[u]
                    queue.append(v)
                elif colour[v] == colour[u]:
                    return None
    for v in range(g.n):
        if colour[v] == 0:
            side |= 1 << v
    return side


def is_bipartite(g: Graph) -> bool:
    return bipartition(g) is not None


ACYCLIC = None  # girth of a forest


def girth(g: Graph) -> int | None:
    """Length of a shortest cycle, or ``ACYCLIC`` (None) for forests."""
    best = None
    for root in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if best is not None and 2 * dist[u] + 1 >= best:
                break
            for v in _bits(g.rows[u]):
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif v != parent[u]:
                    length = dist[u] + dist[v] + 1
                    if best is None or length < best:
                        best = length
    return best


def girth_at_least(g: Graph, bound: int) -> bool:
    """``g(G) >= bound`` with forests counting as satisfying every bound."""
    value = girth(g)
    return value is ACYCLIC or value >= bound


def _greedy_clique_cover(rows: tuple[int, ...], cand: int) -> int:
    """Number of cliques in a greedy clique partition of ``cand``.

    Any independent set meets each clique at most once, so this bounds
    the independence number of the induced subgraph from above.
    """
    count = 0
    while cand:
        v = (cand & -cand).bit_length() - 1
        clique_ok = rows[v] & cand
        cand &= ~(1 << v)
        while clique_ok:
            w = (clique_ok & -clique_ok).bit_length() - 1
            cand &= ~(1 << w)
            clique_ok &= rows[w]
        count += 1
    return count


def independence_number(g: Graph, *, max_order: int = INDEPENDENCE_MAX_ORDER,
                        max_nodes: int = INDEPENDENCE_MAX_NODES) -> int:
    """Exact independence number by branch and bound over bitsets.

    Raises BudgetExceededError rather than return an approximation.
    """
    if g.n > max_order:
        raise BudgetExceededError(f"n={g.n} exceeds the exact-search limit {max_order}")
    rows = g.rows
    best = 0
    nodes = 0

    def search(cand: int, size: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > max_nodes:
            raise BudgetExceededError(f"independence search exceeded {max_nodes} nodes")
        if not cand:
            best = max(best, size)
            return
        if size + _greedy_clique_cover(rows, cand) <= best:
            return
        # branch on a vertex of maximum degree inside cand
        v = max(_bits(cand), key=lambda u: (rows[u] & cand).bit_count())
        if not rows[v] & cand:
            # every candidate is isolated inside cand
            best = max(best, size + cand.bit_count())
            return
        search(cand & ~rows[v] & ~(1 << v), size + 1)
        search(cand & ~(1 << v), size)

    search((1 << g.n) - 1, 0)
    return best
