"""Ground sets, independence oracles, and derived matroid queries.

A matroid here is a ground set of dense integer indices together with an
independence oracle over subsets.  Subsets are carried as bitmasks so that
exhaustive sweeps, set algebra, and oracle dispatch stay cheap at desk
scale.  Every derived notion (rank, bases, axiom checks) is computed
through the oracle alone.

Matroids are immutable after construction and safe to query concurrently.
The only mutable object in this module is :class:`QueryLog`, which is
explicitly single-threaded: wrap a matroid per experiment, do not share
the wrapper across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Sequence

DEFAULT_EXHAUSTIVE_CAP = 24


class ResourceCapExceeded(RuntimeError):
    """An exhaustive operation was asked to sweep more elements than its cap."""


class UniverseMismatch(ValueError):
    """An element set was used against a ground set of a different size."""


@dataclass(frozen=True)
class GroundSet:
    """A dense ground set 0..size-1 with optional unique display labels."""

    size: int
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if self.size < 0:
            raise ValueError("ground set size must be non-negative")
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.size:
                raise ValueError("label count must equal ground set size")
            if len(set(self.labels)) != self.size:
                raise ValueError("labels must be unique")

    def label(self, i: int) -> str:
        if self.labels is None:
            return str(i)
        return self.labels[i]

    def index_of(self, label: str) -> int:
        if self.labels is None:
            return int(label)
        return self.labels.index(label)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def subset(self, members: Iterable[int] = ()) -> "ElementSet":
        return ElementSet(self, members)

    def full(self) -> "ElementSet":
        return ElementSet.from_mask(self, self.full_mask)

    def empty(self) -> "ElementSet":
        return ElementSet.from_mask(self, 0)


def bits_of(mask: int) -> Iterator[int]:
    """Yield set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(members: Iterable[int]) -> int:
    m = 0
    for e in members:
        m |= 1 << e
    return m


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, descending, ending with 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


class ElementSet:
    """A subset of a ground set with bitset semantics.

    Set algebra never leaves the universe; combining sets over ground sets
    of different sizes raises :class:`UniverseMismatch`.  Ground sets of
    equal size are treated as the same universe (labels are display-only).
    """

    __slots__ = ("universe", "mask")

    def __init__(self, universe: GroundSet, members: Iterable[int] = ()):
        mask = 0
        for e in members:
            if not 0 <= e < universe.size:
                raise ValueError(f"element {e} outside ground set of size {universe.size}")
            mask |= 1 << e
        self.universe = universe
        self.mask = mask

    @classmethod
    def from_mask(cls, universe: GroundSet, mask: int) -> "ElementSet":
        if mask < 0 or mask >> universe.size:
            raise ValueError("mask has bits outside the universe")
        out = cls.__new__(cls)
        out.universe = universe
        out.mask = mask
        return out

    def _check(self, other: "ElementSet") -> None:
        if self.universe.size != other.universe.size:
            raise UniverseMismatch(
                f"universe sizes differ: {self.universe.size} vs {other.universe.size}"
            )

    def __or__(self, other: "ElementSet") -> "ElementSet":
        self._check(other)
        return ElementSet.from_mask(self.universe, self.mask | other.mask)

    def __and__(self, other: "ElementSet") -> "ElementSet":
        self._check(other)
        return ElementSet.from_mask(self.universe, self.mask & other.mask)

    def __sub__(self, other: "ElementSet") -> "ElementSet":
        self._check(other)
        return ElementSet.from_mask(self.universe, self.mask & ~other.mask)

    def complement(self) -> "ElementSet":
        return ElementSet.from_mask(self.universe, self.universe.full_mask & ~self.mask)

    def add(self, e: int) -> "ElementSet":
        if not 0 <= e < self.universe.size:
            raise ValueError(f"element {e} outside universe")
        return ElementSet.from_mask(self.universe, self.mask | (1 << e))

    def remove(self, e: int) -> "ElementSet":
        return ElementSet.from_mask(self.universe, self.mask & ~(1 << e))

    def issubset(self, other: "ElementSet") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def __contains__(self, e: int) -> bool:
        return bool(self.mask >> e & 1) if 0 <= e < self.universe.size else False

    def __iter__(self) -> Iterator[int]:
        return bits_of(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ElementSet)
            and self.universe.size == other.universe.size
            and self.mask == other.mask
        )

    def __hash__(self) -> int:
        return hash((self.universe.size, self.mask))

    def labels(self) -> tuple[str, ...]:
        return tuple(self.universe.label(e) for e in self)

    def __repr__(self) -> str:
        return "{" + ",".join(self.labels()) + "}"


class Matroid:
    """An independence oracle over a ground set.

    ``indep`` answers "is this subset independent?" for bitmask-encoded
    subsets.  The oracle must be deterministic and is assumed (and, for
    everything built in :mod:`basepack.constructions`, machine-checked at
    small sizes) to satisfy the independence axioms: the empty set is
    independent, independence is closed downward, and independent sets of
    unequal size admit an exchange element.

    ``descriptor`` is a JSON-friendly construction tree used for
    serialization; oracles built ad hoc may leave it as a bare kind tag.
    """

    __slots__ = ("ground", "kind", "_indep", "descriptor", "_rank_full")

    def __init__(
        self,
        ground: GroundSet,
        kind: str,
        indep: Callable[[int], bool],
        descriptor: Optional[dict] = None,
    ):
        self.ground = ground
        self.kind = kind
        self._indep = indep
        self.descriptor = descriptor if descriptor is not None else {"kind": kind}
        self._rank_full: Optional[int] = None

    def indep_mask(self, mask: int) -> bool:
        return self._indep(mask)

    def is_independent(self, subset: ElementSet) -> bool:
        if subset.universe.size != self.ground.size:
            raise UniverseMismatch(
                f"subset over {subset.universe.size} elements, matroid over {self.ground.size}"
            )
        return self._indep(subset.mask)

    def rank_mask(self, mask: int) -> int:
        """Greedy rank: scan elements in ascending index order, keep what stays independent."""
        kept = 0
        rest = mask
        while rest:
            low = rest & -rest
            if self._indep(kept | low):
                kept |= low
            rest ^= low
        return kept.bit_count()

    @property
    def full_rank(self) -> int:
        if self._rank_full is None:
            self._rank_full = self.rank_mask(self.ground.full_mask)
        return self._rank_full

    def subset(self, members: Iterable[int] = ()) -> ElementSet:
        return ElementSet(self.ground, members)

    def __repr__(self) -> str:
        return f"Matroid(kind={self.kind!r}, n={self.ground.size})"


def is_independent(matroid: Matroid, subset: ElementSet) -> bool:
    """Oracle dispatch: true iff ``subset`` is independent in ``matroid``."""
    return matroid.is_independent(subset)


def rank(matroid: Matroid, subset: Optional[ElementSet] = None) -> int:
    """Rank of ``subset`` (default: whole ground set), computed greedily."""
    if subset is None:
        return matroid.full_rank
    if subset.universe.size != matroid.ground.size:
        raise UniverseMismatch("subset universe does not match matroid ground set")
    return matroid.rank_mask(subset.mask)


def is_basis(matroid: Matroid, subset: ElementSet) -> bool:
    """True iff ``subset`` is independent and as large as the matroid's rank."""
    if subset.universe.size != matroid.ground.size:
        raise UniverseMismatch("subset universe does not match matroid ground set")
    return len(subset) == matroid.full_rank and matroid.indep_mask(subset.mask)


def enumerate_bases(
    matroid: Matroid, cap: int = DEFAULT_EXHAUSTIVE_CAP
) -> list[ElementSet]:
    """All bases, in ascending order of their bitmask encoding.

    Sweeps all 2^n subsets; refuses ground sets larger than ``cap``.
    """
    n = matroid.ground.size
    if n > cap:
        raise ResourceCapExceeded(f"enumerate_bases over {n} elements exceeds cap {cap}")
    r = matroid.full_rank
    out = []
    for m in range(1 << n):
        if m.bit_count() == r and matroid.indep_mask(m):
            out.append(ElementSet.from_mask(matroid.ground, m))
    return out


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: bool
    witness: Optional[tuple] = None

    def __str__(self) -> str:
        if self.passed:
            return f"{self.name}: pass"
        return f"{self.name}: FAIL witness={self.witness}"


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __str__(self) -> str:
        return "; ".join(str(c) for c in self.checks)


def check_independence_axioms(
    matroid: Matroid, cap: int = DEFAULT_EXHAUSTIVE_CAP
) -> AxiomReport:
    """Exhaustively check the three independence axioms.

    Downward closure is checked by single-element removals and the
    exchange axiom only for |Y| = |X| + 1; together with downward closure
    these imply the general statements.  Failures carry concrete
    witnesses: (X, Y) pairs as element sets.
    """
    n = matroid.ground.size
    if n > cap:
        raise ResourceCapExceeded(f"axiom check over {n} elements exceeds cap {cap}")
    ground = matroid.ground
    total = 1 << n
    indep = [matroid.indep_mask(m) for m in range(total)]

    i1 = AxiomCheck("I1", indep[0], None if indep[0] else (ElementSet.from_mask(ground, 0),))

    i2_witness = None
    for m in range(total):
        if not indep[m]:
            continue
        rest = m
        while rest:
            low = rest & -rest
            rest ^= low
            if not indep[m ^ low]:
                i2_witness = (
                    ElementSet.from_mask(ground, m ^ low),
                    ElementSet.from_mask(ground, m),
                )
                break
        if i2_witness:
            break
    i2 = AxiomCheck("I2", i2_witness is None, i2_witness)

    # ext[m]: elements outside m whose addition keeps m independent.
    by_size: list[list[int]] = [[] for _ in range(n + 1)]
    ext = {}
    for m in range(total):
        if indep[m]:
            by_size[m.bit_count()].append(m)
            e = 0
            rest = ground.full_mask & ~m
            while rest:
                low = rest & -rest
                rest ^= low
                if indep[m | low]:
                    e |= low
            ext[m] = e
    i3_witness = None
    for k in range(n):
        if i3_witness:
            break
        for x in by_size[k]:
            if i3_witness:
                break
            ex = ext[x]
            for y in by_size[k + 1]:
                if (y & ~x) & ex == 0:
                    i3_witness = (
                        ElementSet.from_mask(ground, x),
                        ElementSet.from_mask(ground, y),
                    )
                    break
    i3 = AxiomCheck("I3", i3_witness is None, i3_witness)

    return AxiomReport((i1, i2, i3))


def check_basis_axioms(family: Sequence[ElementSet]) -> AxiomReport:
    """Check the basis axioms on an explicit family of sets.

    B1: the family is non-empty.  B2: for bases B1, B2 and u in B1 - B2
    there is v in B2 - B1 with B1 - u + v in the family.  The failure
    witness for B2 is (B1, B2, u).
    """
    b1 = AxiomCheck("B1", len(family) > 0)
    if not family:
        return AxiomReport((b1, AxiomCheck("B2", True)))
    universe = family[0].universe
    masks = set()
    for s in family:
        if s.universe.size != universe.size:
            raise UniverseMismatch("basis family mixes universes")
        masks.add(s.mask)

    b2_witness = None
    for m1 in masks:
        for m2 in masks:
            only1 = m1 & ~m2
            only2 = m2 & ~m1
            rest = only1
            while rest:
                u = rest & -rest
                rest ^= u
                swap = only2
                found = False
                while swap:
                    v = swap & -swap
                    swap ^= v
                    if (m1 ^ u) | v in masks:
                        found = True
                        break
                if not found:
                    b2_witness = (
                        ElementSet.from_mask(universe, m1),
                        ElementSet.from_mask(universe, m2),
                        ElementSet.from_mask(universe, u),
                    )
                    break
            if b2_witness:
                break
        if b2_witness:
            break
    return AxiomReport((b1, AxiomCheck("B2", b2_witness is None, b2_witness)))


class QueryLog:
    """Distinct independence queries, in first-query order.

    Repeated queries of the same subset are recorded once, so ``count``
    measures the information actually extracted from the oracle.  Not
    thread-safe: use one logged wrapper per experiment thread.
    """

    __slots__ = ("universe", "_seen", "_order")

    def __init__(self, universe: GroundSet):
        self.universe = universe
        self._seen: set[int] = set()
        self._order: list[int] = []

    def record(self, mask: int) -> None:
        if mask not in self._seen:
            self._seen.add(mask)
            self._order.append(mask)

    @property
    def count(self) -> int:
        return len(self._order)

    def masks(self) -> tuple[int, ...]:
        return tuple(self._order)

    def queried_sets(self) -> list[ElementSet]:
        return [ElementSet.from_mask(self.universe, m) for m in self._order]

    def __contains__(self, subset: ElementSet) -> bool:
        return subset.mask in self._seen


def with_query_log(matroid: Matroid) -> tuple[Matroid, QueryLog]:
    """Wrap a matroid so every distinct oracle query is recorded.

    The wrapper answers exactly as the original; only the log is new.
    """
    log = QueryLog(matroid.ground)
    inner = matroid.indep_mask

    def logged(mask: int) -> bool:
        log.record(mask)
        return inner(mask)

    wrapped = Matroid(matroid.ground, matroid.kind, logged, matroid.descriptor)
    return wrapped, log


def memoized(matroid: Matroid) -> Matroid:
    """A clone whose oracle caches answers by mask (unbounded; desk scale only)."""
    cache: dict[int, bool] = {}
    inner = matroid.indep_mask

    def cached(mask: int) -> bool:
        hit = cache.get(mask)
        if hit is None:
            hit = cache[mask] = inner(mask)
        return hit

    return Matroid(matroid.ground, matroid.kind, cached, matroid.descriptor)
