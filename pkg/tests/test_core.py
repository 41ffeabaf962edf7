"""Ground sets, element sets, oracle queries, axiom checks, query logging."""

import random

import pytest

from basepack.core import (
    ElementSet,
    GroundSet,
    ResourceCapExceeded,
    UniverseMismatch,
    check_basis_axioms,
    check_independence_axioms,
    enumerate_bases,
    is_basis,
    is_independent,
    memoized,
    rank,
    with_query_log,
    Matroid,
)
from basepack.constructions import (
    free_matroid,
    graphic_matroid,
    uniform_matroid,
)
from basepack.graphs import MultiGraph

from helpers import naive_bases, naive_rank, random_matroid

TRIANGLE = MultiGraph.build(3, [(0, 1), (1, 2), (2, 0)])


class TestGroundSet:
    def test_labels_must_be_unique(self):
        with pytest.raises(ValueError):
            GroundSet(2, ("a", "a"))

    def test_labels_must_match_size(self):
        with pytest.raises(ValueError):
            GroundSet(3, ("a", "b"))

    def test_default_labels_are_indices(self):
        g = GroundSet(3)
        assert g.label(2) == "2"

    def test_index_of(self):
        g = GroundSet(2, ("x", "y"))
        assert g.index_of("y") == 1


class TestElementSet:
    def test_set_algebra_stays_in_universe(self):
        g = GroundSet(5)
        a = ElementSet(g, [0, 1, 2])
        b = ElementSet(g, [2, 3])
        assert sorted(a | b) == [0, 1, 2, 3]
        assert sorted(a & b) == [2]
        assert sorted(a - b) == [0, 1]
        assert sorted(a.complement()) == [3, 4]

    def test_out_of_range_rejected(self):
        g = GroundSet(3)
        with pytest.raises(ValueError):
            ElementSet(g, [3])

    def test_universe_mismatch(self):
        a = ElementSet(GroundSet(3), [0])
        b = ElementSet(GroundSet(4), [0])
        with pytest.raises(UniverseMismatch):
            a | b

    def test_membership_iteration(self):
        g = GroundSet(4)
        s = ElementSet(g, [3, 1])
        assert list(s) == [1, 3]
        assert 1 in s and 0 not in s
        assert len(s) == 2

    def test_add_remove_issubset(self):
        g = GroundSet(4)
        s = ElementSet(g, [1])
        grown = s.add(3)
        assert sorted(grown) == [1, 3]
        assert sorted(grown.remove(1)) == [3]
        assert s.issubset(grown) and not grown.issubset(s)
        with pytest.raises(ValueError):
            s.add(9)

    def test_submask_enumeration(self):
        from basepack.core import submasks

        got = list(submasks(0b101))
        assert got == [0b101, 0b100, 0b001, 0b000]
        assert list(submasks(0)) == [0]


class TestOracleQueries:
    def test_empty_set_always_independent(self):
        for m in (uniform_matroid(GroundSet(4), 2), graphic_matroid(TRIANGLE)):
            assert is_independent(m, m.subset())

    def test_uniform_over_rank_dependent(self):
        m = uniform_matroid(GroundSet(4), 2)
        assert not is_independent(m, m.subset([0, 1, 2]))

    def test_triangle_cycle_dependent(self):
        m = graphic_matroid(TRIANGLE)
        assert not is_independent(m, m.subset([0, 1, 2]))

    def test_is_independent_checks_universe(self):
        m = uniform_matroid(GroundSet(4), 2)
        with pytest.raises(UniverseMismatch):
            is_independent(m, ElementSet(GroundSet(5), [0]))

    def test_rank_uniform(self):
        m = uniform_matroid(GroundSet(4), 2)
        assert rank(m) == 2

    def test_rank_free_is_size(self):
        m = free_matroid(GroundSet(5))
        assert rank(m, m.subset([0, 2, 4])) == 3

    def test_greedy_rank_matches_enumeration(self):
        rng = random.Random(7)
        for _ in range(30):
            n = rng.randint(0, 7)
            m = random_matroid(rng, n)
            for _ in range(10):
                mask = rng.randrange(1 << n) if n else 0
                assert m.rank_mask(mask) == naive_rank(m, mask)

    def test_is_basis(self):
        m = uniform_matroid(GroundSet(4), 2)
        assert is_basis(m, m.subset([0, 1]))
        assert not is_basis(m, m.subset([0]))

    def test_enumerate_bases_uniform(self):
        m = uniform_matroid(GroundSet(3), 1)
        assert [sorted(b) for b in enumerate_bases(m)] == [[0], [1], [2]]

    def test_enumerate_bases_triangle(self):
        m = graphic_matroid(TRIANGLE)
        assert [sorted(b) for b in enumerate_bases(m)] == [[0, 1], [0, 2], [1, 2]]

    def test_enumerate_bases_matches_filter(self):
        rng = random.Random(11)
        for _ in range(20):
            m = random_matroid(rng, rng.randint(0, 7))
            assert [b.mask for b in enumerate_bases(m)] == naive_bases(m)

    def test_enumerate_bases_cap(self):
        m = free_matroid(GroundSet(25))
        with pytest.raises(ResourceCapExceeded):
            enumerate_bases(m)


class TestIndependenceAxioms:
    def test_free_matroid_passes(self):
        report = check_independence_axioms(free_matroid(GroundSet(5)))
        assert report.ok

    def test_downward_closure_failure_with_witness(self):
        g = GroundSet(2)
        family = {0b00, 0b11}
        bogus = Matroid(g, "custom", lambda m: m in family)
        report = check_independence_axioms(bogus)
        i2 = report.checks[1]
        assert not i2.passed
        x, y = i2.witness
        assert x.mask & ~y.mask == 0 and len(y) == len(x) + 1

    def test_exchange_failure_with_witness(self):
        g = GroundSet(3)
        # Downward closed but sizes 1 and 2 cannot exchange into {0}.
        family = {0b000, 0b001, 0b010, 0b100, 0b110}
        bogus = Matroid(g, "custom", lambda m: m in family)
        report = check_independence_axioms(bogus)
        assert report.checks[1].passed
        assert not report.checks[2].passed

    def test_cap(self):
        with pytest.raises(ResourceCapExceeded):
            check_independence_axioms(free_matroid(GroundSet(30)))

    def test_random_constructions_pass(self):
        rng = random.Random(23)
        for _ in range(40):
            m = random_matroid(rng, rng.randint(0, 8))
            assert check_independence_axioms(m).ok, m.kind

    def test_twelve_element_constructions_pass(self):
        ring = MultiGraph.build(
            7, [(i, (i + 1) % 7) for i in range(7)] + [(0, 2), (1, 4), (3, 6), (2, 5)]
        )
        assert ring.edge_count == 11
        assert check_independence_axioms(graphic_matroid(ring)).ok
        assert check_independence_axioms(uniform_matroid(GroundSet(12), 5)).ok


class TestBasisAxioms:
    def test_simple_family_passes(self):
        g = GroundSet(3)
        fam = [ElementSet(g, [0, 1]), ElementSet(g, [1, 2])]
        assert check_basis_axioms(fam).ok

    def test_empty_family_fails_b1(self):
        report = check_basis_axioms([])
        assert not report.checks[0].passed

    def test_exchange_failure(self):
        g = GroundSet(4)
        fam = [ElementSet(g, [0, 1]), ElementSet(g, [2, 3])]
        report = check_basis_axioms(fam)
        assert not report.checks[1].passed

    def test_all_bases_of_random_matroids_pass(self):
        rng = random.Random(5)
        for _ in range(15):
            m = random_matroid(rng, rng.randint(1, 6))
            fam = enumerate_bases(m)
            assert check_basis_axioms(fam).ok


class TestRankProperties:
    def test_monotone_and_submodular_exhaustive(self):
        rng = random.Random(3)
        for _ in range(6):
            n = 6
            m = random_matroid(rng, n)
            table = [m.rank_mask(mask) for mask in range(1 << n)]
            for x in range(1 << n):
                for y in range(1 << n):
                    if x & ~y == 0:
                        assert table[x] <= table[y]
                    assert table[x] + table[y] >= table[x | y] + table[x & y]


class TestQueryLog:
    def test_dedup(self):
        m = uniform_matroid(GroundSet(4), 2)
        wrapped, log = with_query_log(m)
        empty = wrapped.subset()
        wrapped.is_independent(empty)
        wrapped.is_independent(empty)
        assert log.count == 1

    def test_two_distinct(self):
        m = uniform_matroid(GroundSet(4), 2)
        wrapped, log = with_query_log(m)
        wrapped.is_independent(wrapped.subset([0]))
        wrapped.is_independent(wrapped.subset([0, 1]))
        assert log.count == 2

    def test_greedy_rank_queries_one_per_element(self):
        m = uniform_matroid(GroundSet(4), 2)
        wrapped, log = with_query_log(m)
        assert rank(wrapped) == 2
        assert log.count == 4
        assert [sorted(s) for s in log.queried_sets()] == [
            [0],
            [0, 1],
            [0, 1, 2],
            [0, 1, 3],
        ]

    def test_wrapping_never_changes_answers(self):
        rng = random.Random(17)
        for _ in range(10):
            n = rng.randint(1, 7)
            m = random_matroid(rng, n)
            wrapped, _ = with_query_log(m)
            for mask in range(1 << n):
                assert wrapped.indep_mask(mask) == m.indep_mask(mask)

    def test_first_query_order(self):
        m = free_matroid(GroundSet(3))
        wrapped, log = with_query_log(m)
        for mask in (0b101, 0b001, 0b101, 0b111):
            wrapped.indep_mask(mask)
        assert log.masks() == (0b101, 0b001, 0b111)


def test_memoized_preserves_answers():
    rng = random.Random(2)
    m = random_matroid(rng, 6)
    fast = memoized(m)
    for mask in range(1 << 6):
        assert fast.indep_mask(mask) == m.indep_mask(mask)
    for mask in range(1 << 6):  # cached second pass
        assert fast.indep_mask(mask) == m.indep_mask(mask)
