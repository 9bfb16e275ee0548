"""
Tests for the refinement-based automorphism search.
"""

import itertools
from math import factorial, prod

import pytest

from app import aut_engine
from app.aut_engine import (
    AutomorphismSearch,
    automorphism_group,
    enumerate_automorphisms,
    group_elements,
    has_nontrivial_fixing_automorphism,
    is_automorphism,
    is_determining_set_by_definition,
    is_vertex_transitive,
    orbit_partition,
    orbits,
    stabilizer_chain_order,
    transposition,
)
from app.graph_core import Graph, are_twins, boutin_gap_graph, corona_graph, standard_graph, twin_classes
from app.models import ConsistencyError, GraphError, GraphKind, SearchLimitError
from app.zdg_build import omega_partition, vertex_ids, zero_divisor_graph


def K(n):
    return standard_graph(GraphKind.COMPLETE, n)


@pytest.mark.unit
class TestPermutationHelpers:

    def test_orbit_partition(self):
        assert orbit_partition(5, [[1, 0, 2, 3, 4], [0, 1, 3, 4, 2]]) == [[0, 1], [2, 3, 4]]
        assert orbit_partition(3, []) == [[0], [1], [2]]

    def test_stabilizer_chain_order_of_symmetric_group(self):
        assert stabilizer_chain_order(5, [[1, 2, 3, 4, 0], [1, 0, 2, 3, 4]]) == 120
        assert stabilizer_chain_order(4, []) == 1

    def test_is_automorphism(self):
        p4 = standard_graph(GraphKind.PATH, 4)
        assert is_automorphism(p4, [3, 2, 1, 0])
        assert not is_automorphism(p4, [1, 0, 2, 3])

    def test_transposition(self):
        assert transposition(4, 1, 3) == [0, 3, 2, 1]
        with pytest.raises(GraphError):
            transposition(3, 0, 3)


@pytest.mark.unit
class TestAutomorphismGroup:

    def test_k3(self):
        group = automorphism_group(K(3))
        assert group.order == 6
        assert orbits(group) == [[0, 1, 2]]

    def test_p4(self):
        group = automorphism_group(standard_graph(GraphKind.PATH, 4))
        assert group.order == 2
        assert orbits(group) == [[0, 3], [1, 2]]

    def test_empty_graph(self):
        group = automorphism_group(standard_graph(GraphKind.EMPTY, 5))
        assert group.order == 120
        assert orbits(group) == [[0, 1, 2, 3, 4]]

    def test_irregular_graph_matches_brute_force(self):
        g = Graph(7, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 4), (1, 5), (5, 6), (4, 6)])
        assert automorphism_group(g).order == len(enumerate_automorphisms(g))

    @pytest.mark.parametrize("kind, n", [
        (GraphKind.CYCLE, 6), (GraphKind.CYCLE, 7), (GraphKind.PATH, 5), (GraphKind.COMPLETE, 5),
    ])
    def test_matches_brute_force(self, kind, n):
        g = standard_graph(kind, n)
        assert automorphism_group(g).order == len(enumerate_automorphisms(g))

    def test_generators_are_automorphisms(self):
        g = corona_graph(standard_graph(GraphKind.CYCLE, 4), K(2))
        group = automorphism_group(g)
        assert all(is_automorphism(g, gen) for gen in group.generators)
        # Aut(C_4) with an independent swap inside every satellite edge
        assert group.order == 8 * 2 ** 4

    def test_z12(self, zn_graph):
        group = automorphism_group(zn_graph(12))
        assert group.order == 8
        g = zn_graph(12)
        named = [[int(g.label(v)) for v in orbit] for orbit in orbits(group)]
        assert named == [[2, 10], [3, 9], [4, 8], [6]]

    @pytest.mark.parametrize("n", [16, 30, 36, 60])
    def test_zn_order_is_product_of_factorials(self, zn_graph, n):
        expected = prod(factorial(len(m)) for m in omega_partition(n).classes.values())
        assert automorphism_group(zn_graph(n)).order == expected

    def test_gap_graph_reflection(self):
        g = boutin_gap_graph(2)
        group = automorphism_group(g)
        assert group.order == 2
        named = sorted(sorted(g.label(v) for v in orbit) for orbit in orbits(group))
        assert named == [["u"], ["v-1", "v1"], ["v-2", "v2"], ["v0"], ["w"]]

    def test_boolean_group_is_symmetric(self, ring_factory):
        for n in (3, 4):
            assert automorphism_group(zero_divisor_graph(ring_factory(f"bool:{n}"))).order == factorial(n)

    def test_record(self):
        record = automorphism_group(K(3)).to_record()
        assert record.order == "6"
        assert record.orbits == [[0, 1, 2]]

    def test_vertex_transitive(self):
        assert is_vertex_transitive(standard_graph(GraphKind.CYCLE, 5))
        assert not is_vertex_transitive(standard_graph(GraphKind.PATH, 3))

    def test_vertex_limit(self, monkeypatch):
        from app.config import settings
        monkeypatch.setattr(settings, "MAX_AUT_VERTICES", 3)
        with pytest.raises(SearchLimitError):
            AutomorphismSearch(K(4))

    def test_order_disagreement_raises(self, monkeypatch):
        monkeypatch.setattr(aut_engine, "stabilizer_chain_order", lambda degree, generators: 1)
        with pytest.raises(ConsistencyError):
            automorphism_group(K(3))


@pytest.mark.unit
class TestFixing:

    def test_k3(self):
        assert not has_nontrivial_fixing_automorphism(K(3), [0, 1])
        assert has_nontrivial_fixing_automorphism(K(3), [0])

    def test_z12_canonical_set(self, ring_factory, zn_graph):
        ring = ring_factory("zn:12")
        assert not has_nontrivial_fixing_automorphism(zn_graph(12), vertex_ids(ring, [10, 9, 8]))
        assert has_nontrivial_fixing_automorphism(zn_graph(12), vertex_ids(ring, [10, 9]))

    def test_gap_graph_v1(self):
        g = boutin_gap_graph(3)
        assert not has_nontrivial_fixing_automorphism(g, [g.index_of("v1")])
        assert has_nontrivial_fixing_automorphism(g, [g.index_of("v0")])

    def test_rejects_bad_vertices(self):
        with pytest.raises(GraphError):
            has_nontrivial_fixing_automorphism(K(3), [5])

    @pytest.mark.parametrize("subset", [[], [0], [0, 1], [1, 3], [0, 2, 4]])
    def test_agrees_with_definition(self, subset):
        g = standard_graph(GraphKind.CYCLE, 6)
        elements = group_elements(automorphism_group(g))
        assert len(elements) == 12
        by_definition = is_determining_set_by_definition(g, subset, elements)
        assert by_definition == (not has_nontrivial_fixing_automorphism(g, subset))


@pytest.mark.unit
class TestEnumeration:

    def test_group_elements_identity_only(self):
        g = Graph(1)
        assert group_elements(automorphism_group(g)) == [(0,)]

    def test_group_elements_limit(self):
        with pytest.raises(SearchLimitError):
            group_elements(automorphism_group(K(6)), limit=100)

    def test_brute_force_limit(self):
        with pytest.raises(SearchLimitError):
            enumerate_automorphisms(K(11))


TWIN_RING_SPECS = ["zn:8", "zn:9", "zn:10", "zn:12", "zn:14", "zn:15", "zn:16", "zn:21", "zn:25", "zn:27",
                   "bool:3", "prod:f2,f3", "prod:f3,f3", "prod:f2,f4", "prod:f2,f5"]


@pytest.fixture
def twin_corpus(small_graph_corpus, ring_factory):
    """Every corpus graph with at most 10 vertices, by name."""
    graphs = {name: g for name, (g, _, _) in small_graph_corpus.items()}
    for spec in TWIN_RING_SPECS:
        graphs[spec] = zero_divisor_graph(ring_factory(spec))
    graphs["corona"] = corona_graph(K(3), K(1))
    graphs["gap2"] = boutin_gap_graph(2)
    graphs["P6"] = standard_graph(GraphKind.PATH, 6)
    graphs["C5"] = standard_graph(GraphKind.CYCLE, 5)
    return {name: g for name, g in graphs.items() if g.vertex_count <= 10}


@pytest.mark.unit
class TestTwinSymmetry:

    def test_twin_transpositions_are_automorphisms(self, twin_corpus):
        for name, g in twin_corpus.items():
            for u, v in itertools.combinations(range(g.vertex_count), 2):
                if are_twins(g, u, v):
                    assert is_automorphism(g, transposition(g.vertex_count, u, v)), (name, u, v)

    def test_twin_classes_lie_in_one_orbit(self, twin_corpus):
        for name, g in twin_corpus.items():
            orbit_index = {v: i for i, orbit in enumerate(automorphism_group(g).orbits) for v in orbit}
            for cls in twin_classes(g):
                assert len({orbit_index[v] for v in cls}) == 1, (name, cls)
