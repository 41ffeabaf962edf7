"""Matroid classes, combinators, and their exchange-format round trips."""

import random
from fractions import Fraction

import pytest

from basepack.core import GroundSet, check_independence_axioms, rank
from basepack.constructions import (
    HyperplaneFamily,
    PartitionOfGroundSet,
    direct_sum,
    dual,
    free_matroid,
    graphic_matroid,
    linear_matroid,
    matroid_from_descriptor,
    parallel_copies,
    partition_matroid,
    paving_matroid,
    relabel,
    transversal_linear_representation,
    transversal_matroid,
    truncate,
    uniform_matroid,
)
from basepack.fields import Matrix, gf, incidence_matrix_gf2
from basepack.graphs import BipartiteGraph, MultiGraph

from helpers import oracle_equal, random_bipartite, random_matroid, random_multigraph

K4 = MultiGraph.build(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


class TestBasicClasses:
    def test_free_everything_independent(self):
        m = free_matroid(GroundSet(3))
        assert all(m.indep_mask(mask) for mask in range(8))

    def test_uniform_equals_free_at_full_rank(self):
        assert oracle_equal(uniform_matroid(GroundSet(4), 4), free_matroid(GroundSet(4)))

    def test_uniform_range_check(self):
        with pytest.raises(ValueError):
            uniform_matroid(GroundSet(3), 4)

    def test_partition_matroid(self):
        g = GroundSet(4)
        part = PartitionOfGroundSet.build(g, [[0, 1], [2, 3]])
        m = partition_matroid(part, [1, 1])
        assert m.indep_mask(0b0101)
        assert not m.indep_mask(0b0011)
        assert rank(m) == 2

    def test_partition_cap_out_of_range(self):
        g = GroundSet(2)
        part = PartitionOfGroundSet.build(g, [[0, 1]])
        with pytest.raises(ValueError):
            partition_matroid(part, [3])

    def test_partition_blocks_must_cover(self):
        g = GroundSet(3)
        with pytest.raises(ValueError):
            PartitionOfGroundSet.build(g, [[0, 1]])


class TestGraphic:
    def test_self_loop_dependent(self):
        m = graphic_matroid(MultiGraph.build(2, [(0, 0), (0, 1)]))
        assert not m.indep_mask(0b01)
        assert m.indep_mask(0b10)

    def test_parallel_pair_dependent(self):
        m = graphic_matroid(MultiGraph.build(2, [(0, 1), (0, 1)]))
        assert m.indep_mask(0b01) and m.indep_mask(0b10)
        assert not m.indep_mask(0b11)

    def test_rank_is_vertices_minus_components(self):
        rng = random.Random(31)
        for _ in range(25):
            graph = random_multigraph(rng, rng.randint(1, 9))
            m = graphic_matroid(graph)
            expected = graph.vertex_count - graph.component_count()
            assert rank(m) == expected

    def test_agrees_with_gf2_incidence(self):
        rng = random.Random(13)
        for _ in range(15):
            graph = random_multigraph(rng, rng.randint(1, 10))
            graphic = graphic_matroid(graph)
            linear = linear_matroid(incidence_matrix_gf2(graph.vertex_count, graph.endpoints()))
            assert oracle_equal(graphic, linear)


class TestTransversal:
    def test_star_rank_one(self):
        g = BipartiteGraph.build(3, 1, [(0, 0), (1, 0), (2, 0)])
        m = transversal_matroid(g)
        assert all(m.indep_mask(1 << s) for s in range(3))
        assert not m.indep_mask(0b011)

    def test_perfect_matching_full_rank(self):
        g = BipartiteGraph.build(3, 3, [(i, i) for i in range(3)])
        m = transversal_matroid(g)
        assert m.indep_mask(0b111)

    def test_isolated_left_vertex_is_loop(self):
        g = BipartiteGraph.build(2, 1, [(0, 0)])
        m = transversal_matroid(g)
        assert not m.indep_mask(0b10)


class TestPaving:
    def test_two_excluded_pairs(self):
        g = GroundSet(4)
        fam = HyperplaneFamily.build(g, 2, [[0, 1], [2, 3]])
        m = paving_matroid(fam)
        assert not m.indep_mask(0b0011)  # inside a family set
        assert m.indep_mask(0b0101)
        assert m.indep_mask(0b0001)

    def test_empty_family_is_uniform(self):
        g = GroundSet(5)
        m = paving_matroid(HyperplaneFamily.build(g, 3, []))
        assert oracle_equal(m, uniform_matroid(g, 3))

    def test_every_small_set_independent(self):
        rng = random.Random(41)
        from helpers import random_paving_family

        for _ in range(20):
            n = rng.randint(3, 8)
            r = rng.randint(2, n)
            g = GroundSet(n)
            m = paving_matroid(random_paving_family(rng, g, r))
            for mask in range(1 << n):
                if mask.bit_count() <= r - 1:
                    assert m.indep_mask(mask)

    def test_intersection_invariant_rejected(self):
        g = GroundSet(5)
        with pytest.raises(ValueError, match="intersect"):
            HyperplaneFamily.build(g, 2, [[0, 1, 2], [1, 2, 3]])

    def test_small_set_rejected(self):
        g = GroundSet(5)
        with pytest.raises(ValueError, match="fewer"):
            HyperplaneFamily.build(g, 3, [[0, 1]])

    def test_improper_subset_rejected(self):
        g = GroundSet(3)
        with pytest.raises(ValueError, match="proper"):
            HyperplaneFamily.build(g, 2, [[0, 1, 2]])


class TestLinear:
    def test_identity_is_free(self):
        m = linear_matroid(Matrix.build(gf(2), [[1, 0], [0, 1]]))
        assert oracle_equal(m, free_matroid(GroundSet(2)))

    def test_repeated_column_dependent(self):
        m = linear_matroid(Matrix.build(gf(3), [[1, 1], [2, 2]]))
        assert m.indep_mask(0b01) and m.indep_mask(0b10)
        assert not m.indep_mask(0b11)

    def test_rational_field(self):
        m = linear_matroid(
            Matrix.build("q", [[Fraction(1, 2), 1], [0, Fraction(3)]])
        )
        assert m.indep_mask(0b11)

    def test_zero_column_is_loop(self):
        m = linear_matroid(Matrix.build(gf(2), [[0, 1]]))
        assert not m.indep_mask(0b01)


class TestCombinators:
    def test_direct_sum_of_frees_is_free(self):
        m = direct_sum(free_matroid(GroundSet(2)), free_matroid(GroundSet(3)))
        assert oracle_equal(m, free_matroid(GroundSet(5)))

    def test_direct_sum_blocks(self):
        m = direct_sum(uniform_matroid(GroundSet(2), 1), uniform_matroid(GroundSet(2), 1))
        assert m.indep_mask(0b0101)
        assert not m.indep_mask(0b0011)

    def test_direct_sum_rank_additive(self):
        rng = random.Random(9)
        for _ in range(15):
            m1 = random_matroid(rng, rng.randint(0, 5))
            m2 = random_matroid(rng, rng.randint(0, 5))
            assert rank(direct_sum(m1, m2)) == rank(m1) + rank(m2)

    def test_truncate_free_is_uniform(self):
        m = truncate(free_matroid(GroundSet(5)), 2)
        assert oracle_equal(m, uniform_matroid(GroundSet(5), 2))

    def test_truncate_at_rank_is_identity(self):
        rng = random.Random(19)
        for _ in range(10):
            m = random_matroid(rng, rng.randint(0, 6))
            assert oracle_equal(truncate(m, rank(m)), m)

    def test_truncate_rank_formula(self):
        rng = random.Random(29)
        for _ in range(15):
            m = random_matroid(rng, rng.randint(0, 6))
            k = rng.randint(0, 7)
            assert rank(truncate(m, k)) == min(k, rank(m))

    def test_dual_of_uniform(self):
        assert oracle_equal(
            dual(uniform_matroid(GroundSet(5), 2)), uniform_matroid(GroundSet(5), 3)
        )

    def test_dual_involution(self):
        rng = random.Random(37)
        for _ in range(12):
            m = random_matroid(rng, rng.randint(0, 6))
            assert oracle_equal(dual(dual(m)), m)

    def test_dual_of_k4_rank(self):
        m = dual(graphic_matroid(K4))
        assert rank(m) == 3  # six edges minus spanning-tree rank

    def test_parallel_copies_identity_at_one(self):
        rng = random.Random(43)
        for _ in range(8):
            m = random_matroid(rng, rng.randint(0, 5))
            assert oracle_equal(parallel_copies(m, 1), m)

    def test_parallel_copies_pair_dependent(self):
        m = parallel_copies(free_matroid(GroundSet(1)), 2)
        assert not m.indep_mask(0b11)
        assert m.indep_mask(0b01) and m.indep_mask(0b10)

    def test_parallel_copies_preserves_rank(self):
        rng = random.Random(47)
        for _ in range(10):
            m = random_matroid(rng, rng.randint(0, 4))
            k = rng.randint(1, 3)
            assert rank(parallel_copies(m, k)) == rank(m)

    def test_parallel_copy_labels(self):
        m = parallel_copies(uniform_matroid(GroundSet(2), 1), 2)
        assert m.ground.labels == ("0#1", "0#2", "1#1", "1#2")

    def test_relabel_permutes_oracle(self):
        m = uniform_matroid(GroundSet(3), 1)
        shifted = relabel(direct_sum(m, free_matroid(GroundSet(1))), [3, 0, 1, 2])
        assert shifted.indep_mask(0b0001)  # new 0 is the free element
        assert shifted.indep_mask(0b0011)
        assert not shifted.indep_mask(0b0110)  # two uniform elements

    def test_relabel_requires_permutation(self):
        with pytest.raises(ValueError):
            relabel(free_matroid(GroundSet(2)), [0, 0])


class TestAxiomsAcrossConstructions:
    def test_constructions_pass_axioms(self):
        rng = random.Random(53)
        for _ in range(30):
            m = random_matroid(rng, rng.randint(0, 8))
            report = check_independence_axioms(m)
            assert report.ok, f"{m.kind}: {report}"


class TestTransversalRepresentation:
    def test_small_prime_rejected(self):
        g = random_bipartite(random.Random(1), 3, 3)
        with pytest.raises(ValueError, match="small"):
            transversal_linear_representation(g, p=101, seed=0)

    def test_composite_rejected(self):
        g = random_bipartite(random.Random(1), 3, 3)
        with pytest.raises(ValueError, match="prime"):
            transversal_linear_representation(g, p=2**30, seed=0)

    def test_deterministic_for_seed(self):
        g = random_bipartite(random.Random(2), 4, 4)
        a = transversal_linear_representation(g, seed=5)
        b = transversal_linear_representation(g, seed=5)
        assert a == b

    def test_perfect_matching_graph_has_full_rank(self):
        g = BipartiteGraph.build(4, 4, [(i, i) for i in range(4)])
        m = linear_matroid(transversal_linear_representation(g, seed=1))
        assert m.indep_mask(0b1111)

    def test_isolated_left_vertex_gives_zero_column(self):
        g = BipartiteGraph.build(2, 2, [(0, 0), (0, 1)])
        matrix = transversal_linear_representation(g, seed=1)
        assert all(matrix.entries[t][1] == 0 for t in range(2))
        assert not linear_matroid(matrix).indep_mask(0b10)

    def test_matches_matching_oracle_on_most_seeds(self):
        rng = random.Random(71)
        good = 0
        trials = 100
        for seed in range(trials):
            n = rng.randint(2, 6)
            g = random_bipartite(rng, n, rng.randint(1, n + 1))
            matrix = transversal_linear_representation(g, seed=seed)
            if oracle_equal(linear_matroid(matrix), transversal_matroid(g)):
                good += 1
        assert good >= 99, f"only {good}/{trials} seeds agreed"


class TestDescriptorRoundTrip:
    def test_random_matroids_rebuild(self):
        rng = random.Random(61)
        for _ in range(25):
            m = random_matroid(rng, rng.randint(0, 6))
            rebuilt = matroid_from_descriptor(m.descriptor)
            assert oracle_equal(m, rebuilt), m.descriptor

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            matroid_from_descriptor({"kind": "mystery"})
