"""Exact combinatorial model of a planar polygonal linkage.

A linkage is a closed chain of rigid bars given by exact rational edge
lengths.  All short/long decisions are made in exact rational (integer)
arithmetic; floating point never enters this module.  Cells of the
configuration-space complex are named by cyclically ordered partitions of
the edge index set {1..n} into nonempty "short" parts, and single rewrite
moves (shifting a subset of one part into a cyclically adjacent part)
realize the edges of the vertex-edge graph.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

MAX_N = 64
EXHAUSTIVE_GENERICITY_N = 24

RationalLike = Fraction | int | str | float


class LinkageError(Exception):
    """Base class for everything raised by this package's combinatorial core."""


class NonPositiveLength(LinkageError):
    pass


class TriangleInequalityViolated(LinkageError):
    def __init__(self, index: int, length: Fraction):
        self.index = index
        self.length = length
        super().__init__(
            f"edge {index} (length {length}) is at least half the perimeter"
        )


class NonGeneric(LinkageError):
    def __init__(self, witness: tuple[int, ...]):
        self.witness = witness
        super().__init__(f"subset {set(witness)} sums to exactly half the perimeter")


class NotAPartition(LinkageError):
    pass


class IllegalMove(LinkageError):
    pass


class WouldEmptyPart(IllegalMove):
    pass


class DestinationLong(IllegalMove):
    def __init__(self, excess: Fraction):
        self.excess = excess
        super().__init__(f"destination part would exceed half perimeter by {excess}")


class InadmissibleVertex(LinkageError):
    pass


class InadmissibleEdge(LinkageError):
    pass


def as_fraction(x: RationalLike) -> Fraction:
    """Convert a number or a "p"/"p/q" string to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    raise TypeError(f"cannot interpret {x!r} as a rational length")


@dataclass(frozen=True)
class Linkage:
    """A closed chain of n rigid bars with exact positive rational lengths.

    Indices are 1-based throughout.  Construction enforces the triangle
    inequality (every single edge is shorter than the sum of the others)
    and genericity (no subset of edges sums to exactly half the
    perimeter).  For n <= 24 genericity is certified by an exhaustive
    subset-sum check; for larger n only a randomized spot check runs and
    ``generic_certified`` is False.
    """

    lengths: tuple[Fraction, ...]
    generic_certified: bool = True
    # integer weights (lengths * lcm of denominators), cached for fast sums
    _weights: tuple[int, ...] = field(repr=False, compare=False, default=())

    def __post_init__(self):
        if not self._weights:
            denom_lcm = math.lcm(*(l.denominator for l in self.lengths))
            object.__setattr__(
                self,
                "_weights",
                tuple(int(l * denom_lcm) for l in self.lengths),
            )

    @property
    def n(self) -> int:
        return len(self.lengths)

    @property
    def perimeter(self) -> Fraction:
        return sum(self.lengths, Fraction(0))

    @property
    def total_weight(self) -> int:
        return sum(self._weights)

    @property
    def longest(self) -> int:
        """1-based index of the longest edge; ties broken by smallest index."""
        best = max(self.lengths)
        return self.lengths.index(best) + 1

    def ranked_indices(self) -> tuple[int, ...]:
        """All edge indices sorted by decreasing length, ties by index."""
        return tuple(
            sorted(range(1, self.n + 1), key=lambda i: (-self.lengths[i - 1], i))
        )

    def weight(self, indices: Iterable[int]) -> int:
        w = self._weights
        return sum(w[i - 1] for i in indices)

    def subset_sum(self, indices: Iterable[int]) -> Fraction:
        return sum((self.lengths[i - 1] for i in indices), Fraction(0))

    def is_short(self, indices: Iterable[int]) -> bool:
        """True when the indexed edges sum to less than half the perimeter.

        The empty set is short.  Equality cannot occur for a generic
        linkage.
        """
        return 2 * self.weight(indices) < self.total_weight

    def is_long(self, indices: Iterable[int]) -> bool:
        return 2 * self.weight(indices) > self.total_weight

    def is_connected(self) -> bool:
        """Connectivity of the configuration space.

        The space is connected exactly when the second- and third-longest
        edges together are short.
        """
        ranked = self.ranked_indices()
        return self.is_short(ranked[1:3])

    def permuted(self, sigma: Sequence[int]) -> "Linkage":
        """Relabeled copy: old index i becomes sigma[i-1] (a bijection on 1..n)."""
        lengths = [Fraction(0)] * self.n
        for i, s in enumerate(sigma):
            lengths[s - 1] = self.lengths[i]
        return Linkage(tuple(lengths), generic_certified=self.generic_certified)


def _genericity_witness(weights: Sequence[int]) -> tuple[int, ...] | None:
    """Exhaustive meet-in-the-middle search for a subset summing to half."""
    total = sum(weights)
    if total % 2:
        return None
    half = total // 2
    n = len(weights)
    left = list(range(n // 2))
    right = list(range(n // 2, n))
    right_sums: dict[int, int] = {}
    for mask in range(1 << len(right)):
        s = 0
        for j, idx in enumerate(right):
            if mask >> j & 1:
                s += weights[idx]
        right_sums.setdefault(s, mask)
    for mask in range(1 << len(left)):
        s = 0
        for j, idx in enumerate(left):
            if mask >> j & 1:
                s += weights[idx]
        other = right_sums.get(half - s)
        if other is not None:
            witness = [left[j] + 1 for j in range(len(left)) if mask >> j & 1]
            witness += [right[j] + 1 for j in range(len(right)) if other >> j & 1]
            if witness:  # the empty set only shows up when half == 0
                witness = tuple(sorted(witness))
                complement = tuple(i for i in range(1, n + 1) if i not in witness)
                return min(witness, complement, key=lambda t: (len(t), t))
    return None


def _genericity_spot_check(weights: Sequence[int], trials: int) -> tuple[int, ...] | None:
    total = sum(weights)
    if total % 2:
        return None
    half = total // 2
    n = len(weights)
    rng = random.Random(0x1D4B)
    for _ in range(trials):
        size = rng.randint(1, n - 1)
        subset = rng.sample(range(1, n + 1), size)
        if sum(weights[i - 1] for i in subset) * 2 == total:
            return tuple(sorted(subset))
    _ = half
    return None


def new_linkage(lengths: Sequence[RationalLike]) -> Linkage:
    """Validate and build a linkage from a sequence of rational lengths."""
    vals = tuple(as_fraction(x) for x in lengths)
    n = len(vals)
    if not 3 <= n <= MAX_N:
        raise LinkageError(f"need 3 <= n <= {MAX_N}, got n={n}")
    for i, l in enumerate(vals, start=1):
        if l <= 0:
            raise NonPositiveLength(f"edge {i} has non-positive length {l}")
    total = sum(vals)
    for i, l in enumerate(vals, start=1):
        # equality with the half perimeter is a genericity failure, caught below
        if 2 * l > total:
            raise TriangleInequalityViolated(i, l)
    linkage = Linkage(vals)
    if n <= EXHAUSTIVE_GENERICITY_N:
        witness = _genericity_witness(linkage._weights)
        if witness is not None:
            raise NonGeneric(witness)
        return linkage
    witness = _genericity_spot_check(linkage._weights, trials=20000)
    if witness is not None:
        raise NonGeneric(witness)
    return Linkage(vals, generic_certified=False)


@dataclass(frozen=True)
class CyclicPartition:
    """Cyclically ordered partition of {1..n} into nonempty parts.

    Stored in canonical rotation: the part containing index 1 comes first.
    Cyclic order is significant; reflection is not quotiented, so a label
    and its mirror are distinct unless they coincide as cyclic sequences.
    Parts are sorted index tuples.  Vertices of the graph have 3 parts,
    edges 4; a k-cell label has k+3.
    """

    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", _canonical_parts(self.parts))

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def part_index_of(self, item: int) -> int:
        for i, p in enumerate(self.parts):
            if item in p:
                return i
        raise KeyError(item)

    def position_of_part(self, content: frozenset[int] | tuple[int, ...]) -> int:
        target = tuple(sorted(content))
        for i, p in enumerate(self.parts):
            if p == target:
                return i
        raise KeyError(content)

    def mirror(self) -> "CyclicPartition":
        """Reverse the cyclic order of parts (an involution)."""
        return CyclicPartition(tuple(reversed(self.parts)))

    def to_lists(self) -> list[list[int]]:
        return [list(p) for p in self.parts]

    def __str__(self) -> str:
        return "(" + ",".join("{" + ",".join(map(str, p)) + "}" for p in self.parts) + ")"


def _canonical_parts(parts: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    if len(parts) < 3:
        raise NotAPartition(f"need at least 3 parts, got {len(parts)}")
    norm = []
    seen: set[int] = set()
    count = 0
    for p in parts:
        tp = tuple(sorted(p))
        if not tp:
            raise NotAPartition("empty part")
        norm.append(tp)
        seen.update(tp)
        count += len(tp)
    n = count
    if len(seen) != count or seen != set(range(1, n + 1)):
        raise NotAPartition(f"parts do not partition 1..{n}")
    anchor = next(i for i, p in enumerate(norm) if 1 in p)
    return tuple(norm[anchor:] + norm[:anchor])


def partition(*parts: Iterable[int]) -> CyclicPartition:
    """Convenience constructor: partition({3,6},{1,4,7},{2,5})."""
    return CyclicPartition(tuple(tuple(p) for p in parts))


def canonicalize(parts: Sequence[Sequence[int]]) -> CyclicPartition:
    """Rotate a part sequence so the part containing index 1 comes first."""
    return CyclicPartition(tuple(tuple(p) for p in parts))


def mirror(p: CyclicPartition) -> CyclicPartition:
    return p.mirror()


def is_admissible(L: Linkage, p: CyclicPartition) -> bool:
    """True when every part of the partition is short."""
    return p.n == L.n and all(L.is_short(part) for part in p.parts)


def refines(fine: CyclicPartition, coarse: CyclicPartition) -> bool:
    """Whether each coarse part is a union of cyclically consecutive fine parts.

    The cyclic order of the merged blocks must agree with the coarse cyclic
    order.  Reflexive; a partial order on labels of a fixed linkage.
    """
    if fine.n != coarse.n:
        return False
    if len(fine) < len(coarse):
        return False
    owner: dict[int, int] = {}
    for ci, cpart in enumerate(coarse.parts):
        for item in cpart:
            owner[item] = ci
    seq = []
    for fpart in fine.parts:
        owners = {owner[item] for item in fpart}
        if len(owners) != 1:
            return False
        seq.append(owners.pop())
    p = len(seq)
    q = len(coarse)
    boundaries = sum(1 for i in range(p) if seq[i] != seq[(i + 1) % p])
    if q == 1:
        return boundaries == 0
    if boundaries != q:
        return False
    # block values must run 0,1,..,q-1 in cyclic order
    order = [seq[i] for i in range(p) if seq[i] != seq[i - 1]]
    start = order.index(0)
    return order[start:] + order[:start] == list(range(q))


@dataclass(frozen=True)
class Move:
    """Shift ``subset`` out of the part at ``source`` into an adjacent part.

    ``source`` is a 0-based position in the canonical part sequence;
    ``direction`` is "next" (toward position source+1, cyclically) or
    "prev".  The subset must be a nonempty proper subset of the source
    part.
    """

    source: int
    direction: str
    subset: tuple[int, ...]

    def __post_init__(self):
        if self.direction not in ("next", "prev"):
            raise IllegalMove(f"direction must be 'next' or 'prev', got {self.direction!r}")
        object.__setattr__(self, "subset", tuple(sorted(self.subset)))


@dataclass(frozen=True)
class PathStep:
    move: Move
    edge: CyclicPartition
    vertex: CyclicPartition


@dataclass(frozen=True)
class Path:
    """A validated walk in the vertex-edge graph, as (move, edge, vertex) triples."""

    start: CyclicPartition
    steps: tuple[PathStep, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def end(self) -> CyclicPartition:
        return self.steps[-1].vertex if self.steps else self.start

    def vertices(self) -> list[CyclicPartition]:
        return [self.start] + [s.vertex for s in self.steps]


def apply_move(L: Linkage, v: CyclicPartition, m: Move) -> tuple[CyclicPartition, CyclicPartition]:
    """Perform one rewrite move on a label.

    Returns the traversed edge label (source part split in two, with the
    shifted subset placed next to the destination) and the resulting
    label (subset merged into the destination part).  Both are canonical
    and admissible.  Raises WouldEmptyPart or DestinationLong on illegal
    moves.
    """
    p = len(v.parts)
    if not 0 <= m.source < p:
        raise IllegalMove(f"source position {m.source} out of range for {p} parts")
    src_part = v.parts[m.source]
    subset = set(m.subset)
    if not subset:
        raise IllegalMove("empty subset")
    if not subset <= set(src_part):
        raise IllegalMove(f"{sorted(subset)} is not a subset of part {src_part}")
    if len(subset) == len(src_part):
        raise WouldEmptyPart(f"shifting all of {src_part} would empty the part")
    dst_pos = (m.source + 1) % p if m.direction == "next" else (m.source - 1) % p
    dst_part = v.parts[dst_pos]
    merged = set(dst_part) | subset
    if not L.is_short(merged):
        excess = L.subset_sum(merged) - L.perimeter / 2
        raise DestinationLong(excess)
    remainder = tuple(sorted(set(src_part) - subset))
    shifted = tuple(sorted(subset))
    edge_parts = list(v.parts)
    result_parts = list(v.parts)
    if m.direction == "next":
        edge_parts[m.source : m.source + 1] = [remainder, shifted]
    else:
        edge_parts[m.source : m.source + 1] = [shifted, remainder]
    result_parts[m.source] = remainder
    result_parts[dst_pos] = tuple(sorted(merged))
    return CyclicPartition(tuple(edge_parts)), CyclicPartition(tuple(result_parts))


def edge_endpoints(L: Linkage, e: CyclicPartition) -> tuple[CyclicPartition, CyclicPartition]:
    """The two vertices bounding an edge label (A,B,C,D).

    Of the complementary adjacent-merge pairs {A∪B, C∪D} and {B∪C, D∪A},
    genericity makes exactly one member of each short; merging the short
    one gives an endpoint.  Endpoint 0 comes from the first family.
    """
    if len(e.parts) != 4:
        raise InadmissibleEdge(f"edge labels have 4 parts, got {len(e.parts)}")
    if not is_admissible(L, e):
        raise InadmissibleEdge(f"{e} has a long part")
    a, b, c, d = e.parts
    if L.is_short(a + b):
        first = CyclicPartition((tuple(sorted(a + b)), c, d))
    else:
        first = CyclicPartition((a, b, tuple(sorted(c + d))))
    if L.is_short(b + c):
        second = CyclicPartition((a, tuple(sorted(b + c)), d))
    else:
        second = CyclicPartition((tuple(sorted(d + a)), b, c))
    return first, second


def find_move(L: Linkage, v: CyclicPartition, w: CyclicPartition) -> Move:
    """Reconstruct the move turning vertex v into adjacent vertex w.

    Raises IllegalMove when the two labels are not joined by an edge.
    """
    v_only = [set(p) for p in v.parts if p not in w.parts]
    w_only = [set(p) for p in w.parts if p not in v.parts]
    if len(v_only) == 2 and len(w_only) == 2:
        for src, dst in itertools.product(v_only, w_only):
            subset = src & dst
            if subset and subset != src:
                dest_content = dst - subset
                try:
                    move = _move_toward(v, subset, dest_content)
                    edge, result = apply_move(L, v, move)
                    if result == w:
                        return move
                except (KeyError, IllegalMove):
                    continue
    raise IllegalMove(f"{v} and {w} are not adjacent")


def _move_toward(v: CyclicPartition, subset: set[int], dest_content: set[int]) -> Move:
    """Build the positional move shifting ``subset`` into the part equal to ``dest_content``."""
    src = v.part_index_of(min(subset))
    dst = v.position_of_part(tuple(sorted(dest_content)))
    p = len(v.parts)
    if dst == (src + 1) % p:
        direction = "next"
    elif dst == (src - 1) % p:
        direction = "prev"
    else:
        raise IllegalMove(f"parts {src} and {dst} are not adjacent in {v}")
    return Move(src, direction, tuple(sorted(subset)))


def orientation_class(L: Linkage, p: CyclicPartition) -> int | None:
    """Cyclic orientation invariant for disconnected configuration spaces.

    When the second- and third-longest edges are jointly long, the three
    longest edges always occupy three distinct parts of any admissible
    label, and their cyclic order (+1 or -1) is constant on connected
    components.  Returns None when the space is connected.
    """
    ranked = L.ranked_indices()
    b, k, m = ranked[0], ranked[1], ranked[2]
    if L.is_short((k, m)):
        return None
    q = len(p.parts)
    pos_b = p.part_index_of(b)
    pos_k = p.part_index_of(k)
    pos_m = p.part_index_of(m)
    if len({pos_b, pos_k, pos_m}) != 3:
        raise InadmissibleVertex(f"{p} puts two of the three longest edges in one long part")
    return 1 if (pos_k - pos_b) % q < (pos_m - pos_b) % q else -1
