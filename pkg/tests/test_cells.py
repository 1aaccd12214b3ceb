import random
from fractions import Fraction

import pytest

from linknav.cells import (
    TooLarge,
    bfs_distances,
    betti_numbers,
    build_graph,
    census,
    components,
    count_cells,
    degree_histogram,
    diameter,
    enumerate_cells,
    euler_characteristic,
    predicted_vertex_count,
    shortest_path,
    valence,
)
from linknav.linkage import mirror, new_linkage, orientation_class, partition
from linknav.navigate import validate_path

from conftest import random_linkage

HEXAGON_CYCLE = [
    partition({1}, {2, 3}, {4}),
    partition({1}, {2}, {4, 3}),
    partition({1}, {2, 4}, {3}),
    partition({1}, {4}, {2, 3}),
    partition({1}, {4, 3}, {2}),
    partition({1}, {3}, {4, 2}),
]


class TestEnumeration:
    def test_pentagon_counts(self, pentagon):
        assert len(enumerate_cells(pentagon, 0)) == 30
        assert len(enumerate_cells(pentagon, 1)) == 60
        assert len(enumerate_cells(pentagon, 2)) == 24

    def test_hexagon_vertex_set(self, quad_hexagon):
        assert set(enumerate_cells(quad_hexagon, 0)) == set(HEXAGON_CYCLE)

    def test_count_matches_enumeration(self, pentagon, heptagon, quad_two_circles):
        for L in (pentagon, heptagon, quad_two_circles):
            for k in range(L.n - 2):
                assert count_cells(L, k) == len(enumerate_cells(L, k))

    def test_cap_enforced(self):
        L = new_linkage([1] * 14 + [Fraction(1, 3)])
        with pytest.raises(TooLarge):
            enumerate_cells(L, 0)
        # force bypasses the cap (k = n-3 keeps the space tiny here: no, use k=0 small anyway)


class TestGraph:
    def test_pentagon_graph(self, pentagon):
        g = build_graph(pentagon)
        assert len(g.vertices) == 30
        assert len(g.edges) == 60
        assert all(len(adj) == 4 for adj in g.adjacency)

    def test_quad_two_circles(self, quad_two_circles):
        g = build_graph(quad_two_circles)
        assert len(g.vertices) == 6
        assert len(g.edges) == 6
        comps = components(g)
        assert sorted(len(c) for c in comps) == [3, 3]

    def test_hexagon_cycle_structure(self, quad_hexagon):
        g = build_graph(quad_hexagon)
        assert len(g.vertices) == 6
        assert len(g.edges) == 6
        assert all(len(adj) == 2 for adj in g.adjacency)
        # adjacency follows the listed cyclic order
        for i, v in enumerate(HEXAGON_CYCLE):
            nxt = HEXAGON_CYCLE[(i + 1) % 6]
            neighbors = {g.vertices[j] for j, _ in g.adjacency[g.index_of(v)]}
            assert nxt in neighbors

    def test_edge_endpoints_distinct(self, heptagon):
        g = build_graph(heptagon)
        for _, i0, i1 in g.edges:
            assert i0 != i1


class TestVertexCountFormula:
    def test_pentagon_formula_arithmetic(self, pentagon):
        # N_1 = 5, N_2 = 10: 5*16 + 10*8 - 2*81 + 32 = 30
        assert predicted_vertex_count(pentagon) == 30

    def test_one_long_edge_counts(self):
        for n in range(4, 11):
            L = new_linkage([1] * (n - 1) + [Fraction(2 * n - 3, 2)])
            assert L.longest == n
            assert predicted_vertex_count(L) == 2 ** (n - 1) - 2

    def test_heptagon_formula_vs_enumeration(self, heptagon):
        assert predicted_vertex_count(heptagon) == len(enumerate_cells(heptagon, 0))

    def test_hexagon_formula(self, quad_hexagon):
        assert predicted_vertex_count(quad_hexagon) == 6


class TestValence:
    def test_pentagon_vertex(self, pentagon):
        assert valence(pentagon, partition({1}, {2, 3}, {4, 5})) == 4

    def test_all_singletons(self):
        L = new_linkage([2, 3, 4])
        assert valence(L, partition({1}, {2}, {3})) == 0

    def test_heptagon_degree(self, heptagon):
        v = partition({3, 6}, {1, 4, 7}, {2, 5})
        # part sizes (2,3,2): 4 + 8 + 4 - 6
        assert valence(heptagon, v) == 10
        g = build_graph(heptagon)
        assert g.degree(v) == 10

    def test_formula_matches_graph_degrees(self, heptagon, pentagon):
        for L in (heptagon, pentagon):
            g = build_graph(L)
            for v in g.vertices:
                assert g.degree(v) == valence(L, v)


class TestHomology:
    def test_five_bar_sphere(self, bow5):
        assert betti_numbers(bow5) == (1, 0, 1)

    def test_pentagon(self, pentagon):
        assert betti_numbers(pentagon) == (1, 8, 1)

    def test_quad_two_circles(self, quad_two_circles):
        ranks = betti_numbers(quad_two_circles)
        assert ranks[0] == 2

    def test_euler_values(self, pentagon, bow5, quad_two_circles):
        assert euler_characteristic(pentagon) == -6
        assert euler_characteristic(bow5) == 2
        assert euler_characteristic(quad_two_circles) == 0

    def test_pentagon_census(self, pentagon):
        assert census(pentagon).counts == (30, 60, 24)


class TestComponents:
    def test_connectivity_criterion(self, pentagon, quad_two_circles, quad_hexagon):
        assert len(components(build_graph(pentagon))) == 1
        assert len(components(build_graph(quad_two_circles))) == 2
        assert len(components(build_graph(quad_hexagon))) == 1

    def test_criterion_matches_is_connected(self):
        rng = random.Random(11)
        for _ in range(20):
            L = random_linkage(rng, rng.randint(4, 6))
            g = build_graph(L)
            assert (len(components(g)) == 1) == L.is_connected()

    def test_mirror_swaps_components(self, quad_two_circles):
        g = build_graph(quad_two_circles)
        comps = components(g)
        comp_of = {}
        for ci, comp in enumerate(comps):
            for idx in comp:
                comp_of[g.vertices[idx]] = ci
        for v in g.vertices:
            assert comp_of[mirror(v)] != comp_of[v]

    def test_components_are_orientation_fibers(self, quad_two_circles):
        g = build_graph(quad_two_circles)
        for comp in components(g):
            classes = {orientation_class(quad_two_circles, g.vertices[i]) for i in comp}
            assert len(classes) == 1


class TestShortestPath:
    def test_same_vertex(self, pentagon):
        g = build_graph(pentagon)
        p = shortest_path(g, g.vertices[0], g.vertices[0])
        assert p is not None and len(p) == 0

    def test_disconnected_pair(self, quad_two_circles):
        g = build_graph(quad_two_circles)
        v = partition({1, 4}, {2}, {3})
        w = partition({1, 4}, {3}, {2})
        assert shortest_path(g, v, w) is None

    def test_heptagon_within_nine(self, heptagon):
        g = build_graph(heptagon)
        v = partition({3, 6}, {1, 4, 7}, {2, 5})
        w = partition({5, 6, 7}, {1, 2}, {3, 4})
        p = shortest_path(g, v, w)
        assert p is not None
        assert len(p) <= 9
        validate_path(heptagon, p)
        assert p.end == w

    def test_paths_validate(self, pentagon):
        g = build_graph(pentagon)
        rng = random.Random(3)
        for _ in range(10):
            v, w = rng.sample(g.vertices, 2)
            p = shortest_path(g, v, w)
            assert p is not None
            validate_path(pentagon, p)
            assert p.start == v and p.end == w


class TestRandomInvariants:
    def test_formula_degree_regularity(self):
        rng = random.Random(23)
        for _ in range(12):
            L = random_linkage(rng, rng.randint(4, 7))
            g = build_graph(L)
            assert len(g.vertices) == predicted_vertex_count(L)
            for v in g.vertices:
                assert g.degree(v) == valence(L, v)
            euler_characteristic(L)

    def test_connected_diameter_at_most_13(self):
        rng = random.Random(29)
        for _ in range(8):
            L = random_linkage(rng, rng.randint(4, 6), connected=True)
            g = build_graph(L)
            assert diameter(g) <= 13

    def test_degree_histogram(self, quad_hexagon):
        assert degree_histogram(build_graph(quad_hexagon)) == {2: 6}
