import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linknav.linkage import (
    CyclicPartition,
    DestinationLong,
    IllegalMove,
    Move,
    NonGeneric,
    NonPositiveLength,
    NotAPartition,
    TriangleInequalityViolated,
    WouldEmptyPart,
    apply_move,
    canonicalize,
    edge_endpoints,
    find_move,
    is_admissible,
    mirror,
    new_linkage,
    orientation_class,
    partition,
    refines,
)

from conftest import random_linkage


class TestNewLinkage:
    def test_equilateral_pentagon(self):
        L = new_linkage([1, 1, 1, 1, 1])
        assert L.perimeter == 5
        assert L.longest == 1

    def test_half_perimeter_subset_rejected(self):
        with pytest.raises(NonGeneric) as exc:
            new_linkage([2, 1, 1])
        assert exc.value.witness == (1,)

    def test_heptagon_accepts(self):
        L = new_linkage([10, 1, 9, 4, 9, 2, 4])
        assert L.n == 7
        assert L.perimeter == 39

    def test_non_positive(self):
        with pytest.raises(NonPositiveLength):
            new_linkage([1, 0, 1])
        with pytest.raises(NonPositiveLength):
            new_linkage([1, -2, 1, 1])

    def test_triangle_inequality(self):
        with pytest.raises(TriangleInequalityViolated) as exc:
            new_linkage([5, 1, 1, 1])
        assert exc.value.index == 1

    def test_n_bounds(self):
        from linknav.linkage import LinkageError

        with pytest.raises(LinkageError):
            new_linkage([1, 1])

    def test_longest_tie_breaks_to_smallest_index(self):
        L = new_linkage([1, 1, 1, 1, 1])
        assert L.longest == 1
        L2 = new_linkage([1, 3, 3, 1, Fraction(1, 3)])
        assert L2.longest == 2


class TestIsShort:
    def test_heptagon_examples(self, heptagon):
        assert heptagon.is_short({1, 4, 7})  # 18 < 39/2
        assert not heptagon.is_short({1, 2, 5})  # 20 > 39/2

    def test_empty_set_is_short(self, heptagon, pentagon):
        assert heptagon.is_short(())
        assert pentagon.is_short(())

    def test_complement_duality(self, heptagon):
        rng = random.Random(7)
        universe = list(range(1, 8))
        for _ in range(50):
            size = rng.randint(1, 6)
            subset = set(rng.sample(universe, size))
            complement = set(universe) - subset
            assert heptagon.is_short(subset) != heptagon.is_short(complement)

    def test_subsets_of_short_are_short(self, heptagon):
        rng = random.Random(8)
        for _ in range(50):
            subset = {i for i in range(1, 8) if rng.random() < 0.5}
            if subset and heptagon.is_short(subset):
                inner = set(rng.sample(sorted(subset), rng.randint(0, len(subset))))
                assert heptagon.is_short(inner)


class TestCanonicalize:
    def test_rotates_part_with_one_first(self):
        p = canonicalize([(3,), (1,), (2, 4, 5, 6)])
        assert p.parts == ((1,), (2, 4, 5, 6), (3,))

    def test_idempotent(self):
        p = canonicalize([(1,), (2, 4, 5, 6), (3,)])
        assert canonicalize(p.parts).parts == p.parts

    def test_rotation_by_one(self):
        p = canonicalize([(2,), (3,), (1,)])
        assert p.parts == ((1,), (2,), (3,))

    def test_cyclic_order_significant(self):
        a = partition({1}, {3}, {2, 4, 5, 6})
        b = partition({3}, {1}, {2, 4, 5, 6})
        assert a != b
        # inner order is not significant
        c = CyclicPartition(((3,), (1,), (4, 2, 5, 6)))
        assert b == c

    def test_rejects_non_partition(self):
        with pytest.raises(NotAPartition):
            canonicalize([(1, 2), (2, 3)])
        with pytest.raises(NotAPartition):
            canonicalize([(1,), (), (2, 3)])
        with pytest.raises(NotAPartition):
            canonicalize([(1,), (3,), (5,)])


class TestMirror:
    def test_reverses_cyclic_order(self):
        p = partition({5, 6, 7}, {1, 2}, {3, 4})
        assert mirror(p) == partition({1, 2}, {5, 6, 7}, {3, 4})

    def test_involution(self):
        p = partition({3, 6}, {1, 4, 7}, {2, 5})
        assert mirror(mirror(p)) == p

    def test_hexagon_pair(self):
        assert mirror(partition({1}, {2, 3}, {4})) == partition({1}, {4}, {2, 3})

    def test_preserves_admissibility(self, heptagon):
        p = partition({3, 6}, {1, 4, 7}, {2, 5})
        assert is_admissible(heptagon, p)
        assert is_admissible(heptagon, mirror(p))


class TestRefines:
    def test_merge_of_consecutive_parts(self):
        fine = partition({1, 2}, {5, 6}, {3, 4}, {7, 8})
        assert refines(fine, partition({1, 2, 5, 6}, {3, 4}, {7, 8}))
        assert refines(fine, partition({1, 2}, {3, 4, 5, 6}, {7, 8}))

    def test_reflexive(self):
        p = partition({1, 2}, {5, 6}, {3, 4}, {7, 8})
        assert refines(p, p)

    def test_non_consecutive_merge_rejected(self):
        fine = partition({1, 2}, {5, 6}, {3, 4}, {7, 8})
        # {1,2} and {3,4} are not cyclically adjacent in fine
        assert not refines(fine, partition({1, 2, 3, 4}, {5, 6}, {7, 8}))

    def test_wrong_cyclic_order_rejected(self):
        fine = partition({1}, {2}, {3}, {4})
        assert refines(fine, partition({1}, {2}, {3, 4}))
        assert not refines(partition({1}, {3}, {2}, {4}), partition({1}, {2}, {3, 4}))


class TestApplyMove:
    def test_heptagon_shift(self, heptagon):
        v = partition({3, 6}, {1, 4, 7}, {2, 5})
        # canonical: ({1,4,7},{2,5},{3,6}); move {7} into {2,5}
        assert v.parts == ((1, 4, 7), (2, 5), (3, 6))
        edge, w = apply_move(heptagon, v, Move(0, "next", (7,)))
        assert edge == partition({3, 6}, {1, 4}, {7}, {2, 5})
        assert w == partition({3, 6}, {1, 4}, {2, 5, 7})

    def test_destination_long(self, heptagon):
        v = partition({3, 6}, {1, 4, 7}, {2, 5})
        with pytest.raises(DestinationLong) as exc:
            # {1} into {2,5} gives 20 > 39/2
            apply_move(heptagon, v, Move(0, "next", (1,)))
        assert exc.value.excess == Fraction(1, 2)

    def test_would_empty_part(self, heptagon):
        v = partition({3, 6}, {1, 4, 7}, {2, 5})
        with pytest.raises(WouldEmptyPart):
            apply_move(heptagon, v, Move(1, "next", (2, 5)))

    def test_not_a_subset(self, heptagon):
        v = partition({3, 6}, {1, 4, 7}, {2, 5})
        with pytest.raises(IllegalMove):
            apply_move(heptagon, v, Move(0, "next", (2,)))

    def test_edge_refines_both_endpoints(self, heptagon):
        v = partition({3, 6}, {1, 4, 7}, {2, 5})
        edge, w = apply_move(heptagon, v, Move(0, "next", (7,)))
        assert refines(edge, v)
        assert refines(edge, w)


class TestEdgeEndpoints:
    def test_eight_bar_example(self):
        L = new_linkage([1, 1, 1, 1, 1, 1, Fraction(14, 5), 3])
        e = partition({1, 2}, {5, 6}, {3, 4}, {7, 8})
        v0, v1 = edge_endpoints(L, e)
        assert v0 == partition({1, 2, 5, 6}, {3, 4}, {7, 8})
        assert v1 == partition({1, 2}, {3, 4, 5, 6}, {7, 8})

    def test_hexagon_edge(self, quad_hexagon):
        e = partition({1}, {2}, {3}, {4})
        v0, v1 = edge_endpoints(quad_hexagon, e)
        assert v0 == partition({1}, {2}, {3, 4})
        assert v1 == partition({1}, {2, 3}, {4})

    def test_endpoints_are_refined_by_edge(self, heptagon):
        e = partition({3, 6}, {1, 4}, {7}, {2, 5})
        v0, v1 = edge_endpoints(heptagon, e)
        assert refines(e, v0) and refines(e, v1)
        assert v0 != v1

    def test_move_and_endpoints_agree(self, heptagon):
        v = partition({3, 6}, {1, 4, 7}, {2, 5})
        edge, w = apply_move(heptagon, v, Move(0, "next", (7,)))
        assert set(edge_endpoints(heptagon, edge)) == {v, w}

    def test_inadmissible_edge(self, heptagon):
        with pytest.raises(InadmissibleEdgeError := __import__("linknav.linkage", fromlist=["InadmissibleEdge"]).InadmissibleEdge):
            edge_endpoints(heptagon, partition({1, 2, 5}, {3}, {4, 6}, {7}))
        assert InadmissibleEdgeError


class TestFindMove:
    def test_roundtrip(self, heptagon):
        v = partition({3, 6}, {1, 4, 7}, {2, 5})
        move = Move(0, "next", (7,))
        edge, w = apply_move(heptagon, v, move)
        recovered = find_move(heptagon, v, w)
        assert apply_move(heptagon, v, recovered) == (edge, w)

    def test_rejects_non_adjacent(self, heptagon):
        v = partition({3, 6}, {1, 4, 7}, {2, 5})
        w = partition({5, 6, 7}, {1, 2}, {3, 4})
        with pytest.raises(IllegalMove):
            find_move(heptagon, v, w)


class TestOrientationClass:
    def test_disconnected_quad(self, quad_two_circles):
        assert orientation_class(quad_two_circles, partition({1, 4}, {2}, {3})) == 1
        assert orientation_class(quad_two_circles, partition({1, 4}, {3}, {2})) == -1

    def test_connected_returns_none(self, pentagon):
        assert orientation_class(pentagon, partition({1}, {2, 3}, {4, 5})) is None

    def test_constant_along_edges(self, quad_two_circles):
        L = quad_two_circles
        v = partition({1, 4}, {2}, {3})
        # the only legal moves shift {4} out of {1,4}
        for direction in ("next", "prev"):
            edge, w = apply_move(L, v, Move(0, direction, (4,)))
            assert orientation_class(L, w) == orientation_class(L, v)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=4, max_value=7))
def test_random_move_edge_consistency(seed, n):
    rng = random.Random(seed)
    L = random_linkage(rng, n)
    # random admissible vertex by greedy assignment
    v = _random_vertex(rng, L)
    if v is None:
        return
    moves = _legal_moves(L, v)
    for move in moves:
        edge, w = apply_move(L, v, move)
        assert is_admissible(L, edge) and is_admissible(L, w)
        assert set(edge_endpoints(L, edge)) == {v, w}
        assert refines(edge, v) and refines(edge, w)


def _random_vertex(rng, L, tries=60):
    indices = list(range(1, L.n + 1))
    for _ in range(tries):
        rng.shuffle(indices)
        cut1 = rng.randint(1, L.n - 2)
        cut2 = rng.randint(cut1 + 1, L.n - 1)
        parts = (indices[:cut1], indices[cut1:cut2], indices[cut2:])
        p = CyclicPartition(tuple(tuple(sorted(x)) for x in parts))
        if is_admissible(L, p):
            return p
    return None


def _legal_moves(L, v):
    import itertools

    out = []
    for pos, part in enumerate(v.parts):
        for r in range(1, len(part)):
            for subset in itertools.combinations(part, r):
                for direction in ("next", "prev"):
                    move = Move(pos, direction, subset)
                    try:
                        apply_move(L, v, move)
                    except IllegalMove:
                        continue
                    out.append(move)
    return out
