"""Cell census and vertex-edge graph of the configuration-space complex.

k-cells are labeled by cyclically ordered admissible partitions of {1..n}
into k+3 nonempty short parts.  Rotation is quotiented exactly once by
anchoring the part containing index 1 at position 0, so enumeration walks
assignments of the remaining n-1 indices.  Exhaustive enumeration is
capped (override with ``force=True`` or the LINKNAV_MAX_N environment
variable); pure counting uses a subset DP and scales further.

The graph built here doubles as the brute-force oracle for the symbolic
planner: BFS distances bound plan lengths from below and certify
reachability.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .linkage import (
    CyclicPartition,
    Linkage,
    LinkageError,
    Path,
    PathStep,
    apply_move,
    edge_endpoints,
    find_move,
)

DEFAULT_MAX_N = 14


class TooLarge(LinkageError):
    def __init__(self, n: int, cap: int):
        super().__init__(
            f"n={n} exceeds the enumeration cap {cap}; pass force=True "
            "(or set LINKNAV_MAX_N) to override"
        )


class UnknownVertex(LinkageError):
    pass


def _enumeration_cap() -> int:
    return int(os.environ.get("LINKNAV_MAX_N", DEFAULT_MAX_N))


def enumerate_cells(L: Linkage, k: int, force: bool = False) -> list[CyclicPartition]:
    """All admissible k-cell labels: partitions into k+3 short parts, sorted.

    Index 1 is pinned to part 0, which picks exactly one representative
    per cyclic rotation class; the remaining indices are assigned
    recursively with short-sum pruning.
    """
    n = L.n
    if not 0 <= k <= n - 3:
        raise LinkageError(f"k must lie in 0..{n - 3}, got {k}")
    if n > _enumeration_cap() and not force:
        raise TooLarge(n, _enumeration_cap())
    p = k + 3
    weights = L._weights
    total = L.total_weight
    parts: list[list[int]] = [[1]] + [[] for _ in range(p - 1)]
    sums = [weights[0]] + [0] * (p - 1)
    out: list[CyclicPartition] = []

    def rec(idx: int, empties: int):
        if idx > n:
            if empties == 0:
                out.append(
                    CyclicPartition(tuple(tuple(part) for part in parts))
                )
            return
        remaining = n - idx + 1
        if empties > remaining:
            return
        w = weights[idx - 1]
        for j in range(p):
            new_sum = sums[j] + w
            if 2 * new_sum >= total:
                continue
            was_empty = not parts[j]
            parts[j].append(idx)
            sums[j] = new_sum
            rec(idx + 1, empties - 1 if was_empty else empties)
            parts[j].pop()
            sums[j] -= w

    rec(2, p - 1)
    out.sort(key=lambda c: c.parts)
    return out


def count_cells(L: Linkage, k: int) -> int:
    """Number of k-cells, by subset DP (no labels materialized)."""
    n = L.n
    if not 0 <= k <= n - 3:
        raise LinkageError(f"k must lie in 0..{n - 3}, got {k}")
    p = k + 3
    weights = L._weights
    total = L.total_weight
    rest = list(range(2, n + 1))
    m = len(rest)
    wt = [weights[i - 1] for i in rest]

    def mask_weight(mask: int) -> int:
        s = 0
        j = 0
        while mask:
            if mask & 1:
                s += wt[j]
            mask >>= 1
            j += 1
        return s

    short = [2 * mask_weight(mask) < total for mask in range(1 << m)]
    # g[mask][j]: ordered partitions of mask into j nonempty short parts
    memo: dict[tuple[int, int], int] = {}

    def g(mask: int, j: int) -> int:
        if j == 0:
            return 1 if mask == 0 else 0
        if mask == 0:
            return 0
        key = (mask, j)
        val = memo.get(key)
        if val is not None:
            return val
        low = mask & -mask
        restmask = mask ^ low
        acc = 0
        sub = restmask
        while True:
            t = sub | low
            if short[t]:
                acc += g(mask ^ t, j - 1)
            if sub == 0:
                break
            sub = (sub - 1) & restmask
        val = j * acc
        memo[key] = val
        return val

    count = 0
    full = (1 << m) - 1
    first_weight = weights[0]
    sub = full
    while True:
        # part 0 = {1} plus the indices in sub
        if 2 * (first_weight + mask_weight(sub)) < total:
            count += _ordered_partitions(sub ^ full, p - 1, g)
        if sub == 0:
            break
        sub = (sub - 1) & full
    return count


def _ordered_partitions(mask: int, j: int, g) -> int:
    # ordered because positions 1..p-1 after the anchored part are distinguishable
    return g(mask, j)


@dataclass(frozen=True)
class CellCensus:
    """Per-dimension cell counts c_0..c_{n-3}."""

    counts: tuple[int, ...]

    def euler(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.counts))


def census(L: Linkage) -> CellCensus:
    return CellCensus(tuple(count_cells(L, k) for k in range(L.n - 2)))


@dataclass(frozen=True)
class Graph:
    """The vertex-edge graph: canonical labels, resolved edges, adjacency."""

    linkage: Linkage
    vertices: tuple[CyclicPartition, ...]
    edges: tuple[tuple[CyclicPartition, int, int], ...]
    adjacency: tuple[tuple[tuple[int, int], ...], ...]  # per vertex: (neighbor, edge index)
    _index: dict = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        if not self._index:
            self._index.update({v: i for i, v in enumerate(self.vertices)})

    def index_of(self, v: CyclicPartition) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise UnknownVertex(str(v)) from None

    def degree(self, v: CyclicPartition) -> int:
        return len(self.adjacency[self.index_of(v)])


def build_graph(L: Linkage, force: bool = False) -> Graph:
    vertices = tuple(enumerate_cells(L, 0, force=force))
    index = {v: i for i, v in enumerate(vertices)}
    edges = []
    adjacency: list[list[tuple[int, int]]] = [[] for _ in vertices]
    for e in enumerate_cells(L, 1, force=force):
        v0, v1 = edge_endpoints(L, e)
        i0, i1 = index[v0], index[v1]
        eidx = len(edges)
        edges.append((e, i0, i1))
        adjacency[i0].append((i1, eidx))
        adjacency[i1].append((i0, eidx))
    return Graph(
        linkage=L,
        vertices=vertices,
        edges=tuple(edges),
        adjacency=tuple(tuple(sorted(a)) for a in adjacency),
    )


def predicted_vertex_count(L: Linkage) -> int:
    """Closed-form vertex count: sum over k of N_k 2^(n-k), minus 2*3^(n-1), plus 2^n.

    N_k is the number of short k-subsets, computed exactly.
    """
    n = L.n
    weights = L._weights
    total = L.total_weight
    nk = [0] * (n + 1)
    for mask in range(1, 1 << n):
        s = 0
        bits = 0
        m = mask
        j = 0
        while m:
            if m & 1:
                s += weights[j]
                bits += 1
            m >>= 1
            j += 1
        if 2 * s < total:
            nk[bits] += 1
    return sum(nk[k] * 2 ** (n - k) for k in range(1, n + 1)) - 2 * 3 ** (n - 1) + 2**n


def valence(L: Linkage, v: CyclicPartition) -> int:
    """Edge count at a vertex with part sizes i,j,k: 2^i + 2^j + 2^k - 6."""
    if len(v.parts) != 3:
        raise LinkageError(f"valence is defined for 3-part labels, got {len(v.parts)}")
    return sum(2 ** len(p) for p in v.parts) - 6


def betti_numbers(L: Linkage) -> tuple[int, ...]:
    """Homology ranks of the configuration space, dimensions 0..n-3.

    rank H_k = a_k + a_{n-3-k}, where a_i counts short sets of cardinality
    i+1 that contain the longest edge.
    """
    n = L.n
    b = L.longest
    a = [0] * n
    others = [i for i in range(1, n + 1) if i != b]
    import itertools

    for size in range(0, n):
        for combo in itertools.combinations(others, size):
            if L.is_short(combo + (b,)):
                a[size] += 1
    top = n - 3

    def a_at(i: int) -> int:
        return a[i] if 0 <= i < n else 0

    return tuple(a_at(k) + a_at(top - k) for k in range(top + 1))


def euler_characteristic(L: Linkage) -> int:
    """Alternating cell-count sum, cross-checked against the homology ranks."""
    chi_census = census(L).euler()
    ranks = betti_numbers(L)
    chi_betti = sum((-1) ** k * r for k, r in enumerate(ranks))
    if chi_census != chi_betti:
        raise LinkageError(
            f"census Euler characteristic {chi_census} disagrees with "
            f"homology ranks {ranks} (sum {chi_betti})"
        )
    return chi_census


def components(g: Graph) -> list[tuple[int, ...]]:
    """Connected components as sorted tuples of vertex indices, largest-first order by min index."""
    seen = [False] * len(g.vertices)
    out = []
    for start in range(len(g.vertices)):
        if seen[start]:
            continue
        comp = []
        queue = deque([start])
        seen[start] = True
        while queue:
            u = queue.popleft()
            comp.append(u)
            for w, _ in g.adjacency[u]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        out.append(tuple(sorted(comp)))
    return out


def shortest_path(g: Graph, v: CyclicPartition, w: CyclicPartition) -> Path | None:
    """BFS shortest path between two vertices, reconstructed as moves.

    Returns None when the vertices lie in different components.
    """
    src = g.index_of(v)
    dst = g.index_of(w)
    if src == dst:
        return Path(v)
    prev: dict[int, int] = {src: -1}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        if u == dst:
            break
        for nbr, _ in g.adjacency[u]:
            if nbr not in prev:
                prev[nbr] = u
                queue.append(nbr)
    if dst not in prev:
        return None
    chain = [dst]
    while chain[-1] != src:
        chain.append(prev[chain[-1]])
    chain.reverse()
    L = g.linkage
    steps = []
    current = v
    for idx in chain[1:]:
        nxt = g.vertices[idx]
        move = find_move(L, current, nxt)
        edge, result = apply_move(L, current, move)
        assert result == nxt
        steps.append(PathStep(move, edge, result))
        current = result
    return Path(v, tuple(steps))


def bfs_distances(g: Graph, src_index: int) -> list[int]:
    dist = [-1] * len(g.vertices)
    dist[src_index] = 0
    queue = deque([src_index])
    while queue:
        u = queue.popleft()
        for w, _ in g.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def diameter(g: Graph) -> int:
    """Largest finite BFS distance over all vertex pairs (per component)."""
    best = 0
    for i in range(len(g.vertices)):
        best = max(best, max(bfs_distances(g, i)))
    return best


def degree_histogram(g: Graph) -> dict[int, int]:
    hist: dict[int, int] = {}
    for adj in g.adjacency:
        hist[len(adj)] = hist.get(len(adj), 0) + 1
    return dict(sorted(hist.items()))
