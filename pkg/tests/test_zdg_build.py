"""
Tests for zero-divisor graphs, divisor classes and join decompositions.
"""

import pytest

from app.graph_core import corona_graph, generalized_join, standard_graph, twin_classes, verify_isomorphism
from app.models import DomainError, GraphKind, OmegaNature
from app.zdg_build import (
    annihilating_ideal_graph,
    compressed_graph,
    ideal_cores,
    omega_class_bijection,
    omega_nature,
    omega_partition,
    semisimple_join_decomposition,
    theta_mask,
    vertex_ids,
    zero_divisor_graph,
    zn_join_decomposition,
    zn_vertex_degree,
)

Z12_EDGES = [(2, 6), (3, 4), (3, 8), (4, 6), (4, 9), (6, 8), (6, 10), (8, 9)]


@pytest.mark.unit
class TestZeroDivisorGraph:

    def test_z12(self, zn_graph):
        g = zn_graph(12)
        labels = [int(g.label(v)) for v in range(g.vertex_count)]
        assert labels == [2, 3, 4, 6, 8, 9, 10]
        edges = sorted((labels[u], labels[v]) for u, v in g.edges())
        assert edges == Z12_EDGES

    def test_z4_is_single_vertex(self, zn_graph):
        g = zn_graph(4)
        assert g.vertex_count == 1
        assert g.label(0) == "2"

    def test_boolean_square_is_k2(self, ring_factory):
        g = zero_divisor_graph(ring_factory("bool:2"))
        assert g.same_as(standard_graph(GraphKind.COMPLETE, 2))

    def test_boolean_cube_is_corona(self, ring_factory):
        g = zero_divisor_graph(ring_factory("bool:3"))
        assert (g.vertex_count, g.edge_count) == (6, 6)
        # weight-1 vectors go to the triangle, each weight-2 vector to its pendant slot
        corona = corona_graph(standard_graph(GraphKind.COMPLETE, 3), standard_graph(GraphKind.COMPLETE, 1))
        assert verify_isomorphism(g, corona, [0, 1, 5, 2, 4, 3])

    @pytest.mark.parametrize("spec", ["zn:30", "prod:f2,f3", "prod:f4,f5"])
    def test_lazy_and_table_paths_agree(self, monkeypatch, spec):
        from app.config import settings
        from app.ring_core import make_ring
        tabled = make_ring(spec)
        assert tabled.has_table
        expected = zero_divisor_graph(tabled)
        monkeypatch.setattr(settings, "VERIFY_TABLE_LIMIT", 4)
        lazy = make_ring(spec)
        assert not lazy.has_table
        assert zero_divisor_graph(lazy).same_as(expected)

    def test_field_has_no_graph(self, ring_factory):
        with pytest.raises(DomainError):
            zero_divisor_graph(ring_factory("gf:7"))

    def test_vertex_ids(self, ring_factory):
        ring = ring_factory("zn:12")
        assert vertex_ids(ring, [10, 9, 8]) == [6, 5, 4]
        with pytest.raises(DomainError):
            vertex_ids(ring, [5])


@pytest.mark.unit
class TestOmegaClasses:

    def test_z12_classes(self):
        omega = omega_partition(12)
        assert omega.classes == {2: [2, 10], 3: [3, 9], 4: [4, 8], 6: [6]}
        assert omega.class_of(9) == 3
        with pytest.raises(DomainError):
            omega.class_of(5)

    def test_z315_class_sizes(self):
        sizes = {d: len(m) for d, m in omega_partition(315).classes.items()}
        assert sizes == {3: 48, 5: 36, 7: 24, 9: 24, 15: 12, 21: 8, 35: 6, 45: 6, 63: 4, 105: 2}

    def test_prime_rejected(self):
        with pytest.raises(DomainError):
            omega_partition(13)

    @pytest.mark.parametrize("n, d, nature", [
        (12, 6, OmegaNature.CLIQUE),
        (12, 2, OmegaNature.INDEPENDENT),
        (16, 4, OmegaNature.CLIQUE),
        (12, 4, OmegaNature.INDEPENDENT),
    ])
    def test_nature(self, n, d, nature):
        assert omega_nature(n, d) == nature

    def test_nature_rejects_non_divisor(self):
        with pytest.raises(DomainError):
            omega_nature(12, 5)

    @pytest.mark.parametrize("n, d, degree", [(12, 6, 4), (12, 2, 1), (16, 4, 2)])
    def test_vertex_degree(self, n, d, degree):
        assert zn_vertex_degree(n, d) == degree

    def test_degrees_match_graph(self, zn_graph):
        g = zn_graph(36)
        for d, members in omega_partition(36).classes.items():
            for x in members:
                assert g.degree(g.index_of(str(x))) == zn_vertex_degree(36, d)

    def test_twin_classes_are_omega_classes(self, zn_graph):
        g = zn_graph(12)
        classes = [[int(g.label(v)) for v in c] for c in twin_classes(g)]
        assert classes == [[2, 10], [3, 9], [4, 8], [6]]


@pytest.mark.unit
class TestCompressedAndIdealGraphs:

    def test_compressed_z12(self, ring_factory):
        graph, class_map = compressed_graph(ring_factory("zn:12"))
        assert graph.vertex_count == 4
        assert class_map == {2: 0, 10: 0, 3: 1, 9: 1, 4: 2, 8: 2, 6: 3}

    def test_compressed_boolean_is_gamma(self, ring_factory):
        ring = ring_factory("bool:4")
        graph, class_map = compressed_graph(ring)
        assert graph.same_as(zero_divisor_graph(ring))
        assert len(set(class_map.values())) == len(class_map)

    def test_compressed_z4(self, ring_factory):
        graph, _ = compressed_graph(ring_factory("zn:4"))
        assert graph.vertex_count == 1

    def test_ann_z12(self, ring_factory):
        g = annihilating_ideal_graph(ring_factory("zn:12"))
        assert [g.label(v) for v in range(4)] == ["<2>", "<3>", "<4>", "<6>"]
        named = {(g.label(u), g.label(v)) for u, v in g.edges()}
        assert named == {("<2>", "<6>"), ("<3>", "<4>"), ("<4>", "<6>")}

    def test_ann_product(self, ring_factory):
        g = annihilating_ideal_graph(ring_factory("prod:f2,f3"))
        assert g.edges() == [(0, 1)]
        assert [g.label(v) for v in range(2)] == ["(F2,0)", "(0,F3)"]

    def test_ann_unsupported(self, ring_factory):
        with pytest.raises(DomainError):
            annihilating_ideal_graph(ring_factory("gf:4"))

    @pytest.mark.parametrize("n", [12, 30, 36, 72, 100])
    def test_compressed_matches_ann(self, ring_factory, n):
        ring = ring_factory(f"zn:{n}")
        compressed, _ = compressed_graph(ring)
        assert verify_isomorphism(compressed, annihilating_ideal_graph(ring), omega_class_bijection(n))


@pytest.mark.unit
class TestThetaAndCores:

    def test_theta_masks(self, ring_factory):
        cube = ring_factory("bool:3")
        assert theta_mask(cube, cube.compose([1, 0, 0])).mask == [2, 3]
        f2f4 = ring_factory("prod:f2,f4")
        assert theta_mask(f2f4, f2f4.compose([0, 2])).mask == [1]

    def test_theta_rejects_units_and_zero(self, ring_factory):
        ring = ring_factory("prod:f2,f3")
        with pytest.raises(DomainError):
            theta_mask(ring, ring.compose([1, 1]))
        with pytest.raises(DomainError):
            theta_mask(ring, 0)

    def test_theta_rejects_zn(self, ring_factory):
        with pytest.raises(DomainError):
            theta_mask(ring_factory("zn:12"), 2)

    def test_cores_f2_f3(self, ring_factory):
        ring = ring_factory("prod:f2,f3")
        cores = ideal_cores(ring)
        assert [c.label for c in cores] == ["(F2,0)", "(0,F3)"]
        assert [c.core for c in cores] == [[3], [1, 2]]
        assert [c.theta for c in cores] == [[2], [1]]

    def test_core_sizes_are_unit_products(self, ring_factory):
        ring = ring_factory("prod:f3,f4,f5")
        for core in ideal_cores(ring):
            expected = 1
            for i in core.support:
                expected *= ring.components[i - 1].order - 1
            assert len(core.core) == expected


@pytest.mark.unit
class TestJoinDecompositions:

    def test_z12_parts(self):
        js = zn_join_decomposition(12)
        assert js.part_sizes == [2, 2, 2, 1]
        assert [p.edge_count for p in js.parts] == [0, 0, 0, 0]

    def test_z12_isomorphism(self, zn_graph):
        js = zn_join_decomposition(12)
        assert verify_isomorphism(zn_graph(12), generalized_join(js), js.bijection)

    def test_prime_square_is_complete(self, zn_graph):
        js = zn_join_decomposition(49)
        assert js.base.vertex_count == 1
        assert generalized_join(js).same_as(standard_graph(GraphKind.COMPLETE, 6))

    def test_z315_parts(self):
        js = zn_join_decomposition(315)
        assert len(js.parts) == 10
        assert [p.edge_count for p in js.parts] == [0] * 9 + [1]
        assert js.parts[-1].same_as(standard_graph(GraphKind.COMPLETE, 2))

    def test_z315_omega_105_is_clique(self):
        assert omega_nature(315, 105) == OmegaNature.CLIQUE
        assert omega_nature(315, 63) == OmegaNature.INDEPENDENT

    @pytest.mark.parametrize("spec, sizes", [
        ("prod:f2,f3", [1, 2]),
        ("prod:f3,f3", [2, 2]),
        ("bool:3", [1, 1, 1, 1, 1, 1]),
    ])
    def test_semisimple_parts(self, ring_factory, spec, sizes):
        js = semisimple_join_decomposition(ring_factory(spec))
        assert js.part_sizes == sizes
        assert all(p.edge_count == 0 for p in js.parts)

    @pytest.mark.parametrize("spec", ["prod:f2,f3", "prod:f3,f3", "prod:f2,f2,f3", "prod:f4,f5"])
    def test_semisimple_isomorphism(self, ring_factory, spec):
        ring = ring_factory(spec)
        js = semisimple_join_decomposition(ring)
        assert verify_isomorphism(zero_divisor_graph(ring), generalized_join(js), js.bijection)

    def test_semisimple_needs_product_of_fields(self, ring_factory):
        with pytest.raises(DomainError):
            semisimple_join_decomposition(ring_factory("zn:12"))
