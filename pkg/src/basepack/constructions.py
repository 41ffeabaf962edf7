"""Concrete matroid classes and combinators.

Free, uniform, partition, graphic, transversal, paving, and linear
matroids, plus direct sum, truncation, dual, parallel copies, and index
relabeling.  Every constructor returns an immutable oracle
:class:`~basepack.core.Matroid` carrying a serializable descriptor tree.

All combinators work at the oracle level.  In particular truncation is an
oracle filter, not a representation-level operation: behaviorally the two
agree, and no field extensions are needed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import ElementSet, GroundSet, Matroid, bits_of
from .fields import Matrix, gf, is_prime
from .graphs import BipartiteGraph, MultiGraph, saturates

MIN_REPRESENTATION_PRIME = 10**6
DEFAULT_REPRESENTATION_PRIME = 2147483647  # 2^31 - 1


@dataclass(frozen=True)
class PartitionOfGroundSet:
    """A partition of a ground set into non-empty, disjoint, covering blocks."""

    universe: GroundSet
    blocks: tuple[ElementSet, ...]

    @staticmethod
    def build(universe: GroundSet, blocks: Iterable[Iterable[int]]) -> "PartitionOfGroundSet":
        return PartitionOfGroundSet(universe, tuple(ElementSet(universe, b) for b in blocks))

    def __post_init__(self) -> None:
        seen = 0
        for block in self.blocks:
            if block.mask == 0:
                raise ValueError("partition blocks must be non-empty")
            if block.mask & seen:
                raise ValueError("partition blocks must be disjoint")
            seen |= block.mask
        if seen != self.universe.full_mask:
            raise ValueError("partition blocks must cover the universe")

    def block_masks(self) -> tuple[int, ...]:
        return tuple(b.mask for b in self.blocks)

    def block_of(self, e: int) -> int:
        for i, b in enumerate(self.blocks):
            if e in b:
                return i
        raise ValueError(f"element {e} not in any block")

    def to_json(self) -> list[list[int]]:
        return [sorted(b) for b in self.blocks]


@dataclass(frozen=True)
class HyperplaneFamily:
    """Rank-r exclusion family: proper subsets of size >= r with pairwise
    intersections of size <= r - 2.  Avoiding these sets defines the bases
    of a paving matroid."""

    universe: GroundSet
    r: int
    sets: tuple[ElementSet, ...]

    @staticmethod
    def build(universe: GroundSet, r: int, sets: Iterable[Iterable[int]]) -> "HyperplaneFamily":
        return HyperplaneFamily(universe, r, tuple(ElementSet(universe, s) for s in sets))

    def __post_init__(self) -> None:
        if self.r < 2:
            raise ValueError("rank must be at least 2")
        if self.universe.size < self.r:
            raise ValueError("ground set smaller than rank")
        full = self.universe.full_mask
        for i, h in enumerate(self.sets):
            if len(h) < self.r:
                raise ValueError(f"family set {i} has fewer than r={self.r} elements")
            if h.mask == full:
                raise ValueError(f"family set {i} is not a proper subset")
        for i in range(len(self.sets)):
            for j in range(i + 1, len(self.sets)):
                inter = self.sets[i].mask & self.sets[j].mask
                if inter.bit_count() > self.r - 2:
                    raise ValueError(
                        f"family sets {i} and {j} intersect in more than r-2 elements"
                    )


def free_matroid(ground: GroundSet) -> Matroid:
    """Every subset independent."""
    desc = {"kind": "free", "size": ground.size}
    return Matroid(ground, "free", lambda mask: True, desc)


def uniform_matroid(ground: GroundSet, r: int) -> Matroid:
    """Independent iff at most ``r`` elements."""
    if not 0 <= r <= ground.size:
        raise ValueError(f"uniform rank {r} out of range for size {ground.size}")
    desc = {"kind": "uniform", "size": ground.size, "r": r}
    return Matroid(ground, "uniform", lambda mask: mask.bit_count() <= r, desc)


def partition_matroid(partition: PartitionOfGroundSet, caps: Sequence[int]) -> Matroid:
    """Independent iff each block contributes at most its cap."""
    blocks = partition.block_masks()
    if len(caps) != len(blocks):
        raise ValueError("one cap per block required")
    for cap, block in zip(caps, blocks):
        if not 0 <= cap <= block.bit_count():
            raise ValueError(f"cap {cap} out of range for block of size {block.bit_count()}")
    caps = tuple(int(c) for c in caps)

    def indep(mask: int) -> bool:
        for block, cap in zip(blocks, caps):
            if (mask & block).bit_count() > cap:
                return False
        return True

    desc = {"kind": "partition", "size": partition.universe.size,
            "blocks": partition.to_json(), "caps": list(caps)}
    return Matroid(partition.universe, "partition", indep, desc)


def graphic_matroid(graph: MultiGraph) -> Matroid:
    """Edge sets independent iff they form a forest.

    Self-loops are dependent singletons; two parallel edges form a
    two-element circuit.
    """
    desc = {"kind": "graphic", "graph": graph.to_json()}
    return Matroid(graph.ground_set(), "graphic", graph.is_forest_mask, desc)


def transversal_matroid(graph: BipartiteGraph) -> Matroid:
    """Left-side sets independent iff a matching saturates them."""
    adj = graph.adjacency()

    def indep(mask: int) -> bool:
        return saturates(adj, list(bits_of(mask)))

    desc = {"kind": "transversal", "graph": graph.to_json()}
    return Matroid(graph.left, "transversal", indep, desc)


def paving_matroid(family: HyperplaneFamily) -> Matroid:
    """Bases are the r-sets contained in no family set.

    Every set smaller than r is independent, so the result is paving by
    construction; the family invariants guarantee the basis axioms.
    """
    r = family.r
    exclusions = tuple(h.mask for h in family.sets)

    def indep(mask: int) -> bool:
        size = mask.bit_count()
        if size < r:
            return True
        if size > r:
            return False
        for h in exclusions:
            if mask & ~h == 0:
                return False
        return True

    desc = {"kind": "paving", "size": family.universe.size, "r": r,
            "hyperplanes": [sorted(h) for h in family.sets]}
    return Matroid(family.universe, "paving", indep, desc)


def linear_matroid(matrix: Matrix, labels: Optional[Sequence[str]] = None) -> Matroid:
    """Column sets independent iff linearly independent over the exact field."""
    ground = GroundSet(matrix.cols, tuple(labels) if labels else None)

    def indep(mask: int) -> bool:
        cols = list(bits_of(mask))
        return matrix.columns_independent(cols)

    desc = {"kind": "linear", "matrix": matrix.to_json()}
    return Matroid(ground, "linear", indep, desc)


def direct_sum(m1: Matroid, m2: Matroid) -> Matroid:
    """Disjoint union: independent iff both projections are independent.

    The second ground set is shifted past the first.  Labels are merged
    when both sides have them and stay unique, otherwise dropped.
    """
    n1 = m1.ground.size
    n2 = m2.ground.size
    labels = None
    if m1.ground.labels is not None and m2.ground.labels is not None:
        merged = m1.ground.labels + m2.ground.labels
        if len(set(merged)) == len(merged):
            labels = merged
    ground = GroundSet(n1 + n2, labels)
    low = (1 << n1) - 1
    i1, i2 = m1.indep_mask, m2.indep_mask

    def indep(mask: int) -> bool:
        return i1(mask & low) and i2(mask >> n1)

    desc = {"kind": "direct-sum", "parts": [m1.descriptor, m2.descriptor]}
    return Matroid(ground, "direct-sum", indep, desc)


def direct_sum_all(parts: Sequence[Matroid]) -> Matroid:
    if not parts:
        return free_matroid(GroundSet(0))
    out = parts[0]
    for m in parts[1:]:
        out = direct_sum(out, m)
    return out


def truncate(matroid: Matroid, k: int) -> Matroid:
    """Keep independent sets of size at most ``k``."""
    if k < 0:
        raise ValueError("truncation bound must be non-negative")
    inner = matroid.indep_mask

    def indep(mask: int) -> bool:
        return mask.bit_count() <= k and inner(mask)

    desc = {"kind": "truncation", "k": k, "inner": matroid.descriptor}
    return Matroid(matroid.ground, "truncation", indep, desc)


def dual(matroid: Matroid) -> Matroid:
    """Independent iff the complement spans the original matroid."""
    full = matroid.ground.full_mask
    inner = matroid.indep_mask

    def indep(mask: int) -> bool:
        # Greedy scan of the complement, stopping at full rank.
        need = matroid.full_rank
        if need == 0:
            return True
        kept = 0
        count = 0
        rest = full & ~mask
        while rest:
            low = rest & -rest
            rest ^= low
            if inner(kept | low):
                kept |= low
                count += 1
                if count == need:
                    return True
        return False

    desc = {"kind": "dual", "inner": matroid.descriptor}
    return Matroid(matroid.ground, "dual", indep, desc)


def parallel_copies(matroid: Matroid, k: int) -> Matroid:
    """Replace each element by ``k`` parallel copies.

    Copy j of element e sits at index e*k + j and is labeled "<e>#<j+1>".
    Independent iff at most one copy of each element is used and the
    projection is independent in the original.
    """
    if k < 1:
        raise ValueError("need at least one copy")
    n = matroid.ground.size
    labels = tuple(
        f"{matroid.ground.label(e)}#{j + 1}" for e in range(n) for j in range(k)
    )
    ground = GroundSet(n * k, labels)
    inner = matroid.indep_mask
    copy_masks = [((1 << k) - 1) << (e * k) for e in range(n)]

    def indep(mask: int) -> bool:
        projected = 0
        for e in range(n):
            hit = mask & copy_masks[e]
            if hit:
                if hit.bit_count() > 1:
                    return False
                projected |= 1 << e
        return inner(projected)

    desc = {"kind": "parallel-copies", "k": k, "inner": matroid.descriptor}
    return Matroid(ground, "parallel-copies", indep, desc)


def relabel(matroid: Matroid, perm: Sequence[int], labels: Optional[Sequence[str]] = None) -> Matroid:
    """Reindex the ground set: new element i is old element perm[i]."""
    n = matroid.ground.size
    if sorted(perm) != list(range(n)):
        raise ValueError("perm must be a permutation of the ground set")
    perm = tuple(int(p) for p in perm)
    if labels is None and matroid.ground.labels is not None:
        labels = tuple(matroid.ground.labels[p] for p in perm)
    ground = GroundSet(n, tuple(labels) if labels else None)
    inner = matroid.indep_mask

    def indep(mask: int) -> bool:
        inner_mask = 0
        m = mask
        while m:
            low = m & -m
            m ^= low
            inner_mask |= 1 << perm[low.bit_length() - 1]
        return inner(inner_mask)

    desc = {"kind": "relabel", "perm": list(perm), "inner": matroid.descriptor}
    return Matroid(ground, "relabel", indep, desc)


def transversal_linear_representation(
    graph: BipartiteGraph, p: int = DEFAULT_REPRESENTATION_PRIME, seed: int = 0
) -> Matrix:
    """Randomized GF(p) representation of the transversal matroid of ``graph``.

    Entry (t, s) is a uniformly random nonzero field element when (s, t)
    is an edge, else zero.  By a union bound over subset determinants the
    linear matroid of the result differs from the transversal matroid
    with probability at most |S| * 2^|S| / p, so p must be large; primes
    below 10^6 are rejected.  Deterministic for a fixed seed.
    """
    if p < MIN_REPRESENTATION_PRIME:
        raise ValueError(f"prime {p} too small for a trustworthy representation")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    rng = random.Random(seed)
    edges = graph.edges
    entries = [[0] * graph.left.size for _ in range(graph.right.size)]
    for s in range(graph.left.size):
        for t in range(graph.right.size):
            if (s, t) in edges:
                entries[t][s] = rng.randrange(1, p)
    if graph.right.size == 0:
        return Matrix(gf(p), 0, graph.left.size, ())
    return Matrix.build(gf(p), entries)


def matroid_from_descriptor(desc: dict) -> Matroid:
    """Rebuild a matroid from its serialized construction tree."""
    kind = desc["kind"]
    if kind == "free":
        return free_matroid(GroundSet(desc["size"]))
    if kind == "uniform":
        return uniform_matroid(GroundSet(desc["size"]), desc["r"])
    if kind == "partition":
        universe = GroundSet(desc["size"])
        part = PartitionOfGroundSet.build(universe, desc["blocks"])
        return partition_matroid(part, desc["caps"])
    if kind == "graphic":
        return graphic_matroid(MultiGraph.from_json(desc["graph"]))
    if kind == "transversal":
        return transversal_matroid(BipartiteGraph.from_json(desc["graph"]))
    if kind == "paving":
        universe = GroundSet(desc["size"])
        family = HyperplaneFamily.build(universe, desc["r"], desc["hyperplanes"])
        return paving_matroid(family)
    if kind == "linear":
        return linear_matroid(Matrix.from_json(desc["matrix"]))
    if kind == "direct-sum":
        parts = [matroid_from_descriptor(d) for d in desc["parts"]]
        return direct_sum_all(parts)
    if kind == "truncation":
        return truncate(matroid_from_descriptor(desc["inner"]), desc["k"])
    if kind == "dual":
        return dual(matroid_from_descriptor(desc["inner"]))
    if kind == "parallel-copies":
        return parallel_copies(matroid_from_descriptor(desc["inner"]), desc["k"])
    if kind == "relabel":
        return relabel(matroid_from_descriptor(desc["inner"]), desc["perm"])
    raise ValueError(f"unknown matroid descriptor kind {kind!r}")
