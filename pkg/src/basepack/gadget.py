"""The certified two-matroid gadget used by the common-bases reduction.

One gadget block carries nine elements labeled a..i, realized as edges of
two edge-labeled multigraphs:

* first graph: edges a..f form a K4 on four vertices ({a,b,c} and
  {d,e,f} are complementary Hamiltonian paths), g and h are pendant
  edges, and i runs parallel to h;
* second graph: edges a,b,c,d,g,h form a K4 ({a,b,c} and {d,g,h} are
  complementary Hamiltonian paths), e and f are pendant edges, and block
  j's i edge runs parallel to the next block's f edge (cyclically, so
  the last block chains back to the first).

Per block each graph contributes rank 5, so an ell-block pair has rank
5*ell on 9*ell elements.  The certified property pair: (a) the ground
set splits into two common independent sets of sizes 5*ell and 4*ell,
and (b) every split into two common independent sets has exactly those
sizes.  The defining property is recovered by search: only the two K4
label orderings matter (a pendant edge is a coloop of its graph and the
i edges only ever pair with their parallel partner, so attachment
vertices cannot change either matroid), and each candidate ordering is
certified by exhaustive sweep at ell = 1 and 2 before being accepted.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import ElementSet, GroundSet, Matroid, ResourceCapExceeded
from .constructions import graphic_matroid
from .graphs import MultiGraph

LETTERS = "abcdefghi"

# K4 on vertices 0..3: the fixed Hamiltonian path 0-1-2-3 and its
# complementary path 2-0-3-1.  Vertex relabeling freedom lets every
# conforming block be written on these two edge tracks.
PATH_EDGES = ((0, 1), (1, 2), (2, 3))
COPATH_EDGES = ((2, 0), (0, 3), (3, 1))

# Pendant attachment vertices (matroid-irrelevant; fixed for emission).
FIRST_PENDANTS = {"g": (0, 4), "h": (0, 5)}
SECOND_PENDANTS = {"e": (0, 4), "f": (0, 5)}

VERIFY_ELL_CAP = 3


@dataclass(frozen=True)
class BlockLabeling:
    """Label-to-edge assignment for one gadget block.

    ``first_path`` orders a,b,c along the first graph's K4 path and
    ``first_copath`` orders d,e,f along the complementary path;
    ``second_path`` and ``second_copath`` do the same for a,b,c and
    d,g,h in the second graph.
    """

    first_path: tuple[str, str, str]
    first_copath: tuple[str, str, str]
    second_path: tuple[str, str, str]
    second_copath: tuple[str, str, str]

    def __post_init__(self) -> None:
        if sorted(self.first_path) != ["a", "b", "c"]:
            raise ValueError("first graph path must carry labels a,b,c")
        if sorted(self.first_copath) != ["d", "e", "f"]:
            raise ValueError("first graph co-path must carry labels d,e,f")
        if sorted(self.second_path) != ["a", "b", "c"]:
            raise ValueError("second graph path must carry labels a,b,c")
        if sorted(self.second_copath) != ["d", "g", "h"]:
            raise ValueError("second graph co-path must carry labels d,g,h")

    def first_k4(self) -> dict[str, tuple[int, int]]:
        out = dict(zip(self.first_path, PATH_EDGES))
        out.update(zip(self.first_copath, COPATH_EDGES))
        return out

    def second_k4(self) -> dict[str, tuple[int, int]]:
        out = dict(zip(self.second_path, PATH_EDGES))
        out.update(zip(self.second_copath, COPATH_EDGES))
        return out

    def to_json(self) -> dict:
        first = {**self.first_k4(), **FIRST_PENDANTS, "i": FIRST_PENDANTS["h"]}
        second = {**self.second_k4(), **SECOND_PENDANTS}
        return {
            "schema": "gadget-labeling/1",
            "first_path": list(self.first_path),
            "first_copath": list(self.first_copath),
            "second_path": list(self.second_path),
            "second_copath": list(self.second_copath),
            "first_graph_edges": [[u, v, t] for t, (u, v) in sorted(first.items())],
            "second_graph_edges": [[u, v, t] for t, (u, v) in sorted(second.items())],
            "chain_rule": "block j's i edge copies the endpoints of block j+1's f edge, wrapping at the last block",
        }

    @staticmethod
    def from_json(data: dict) -> "BlockLabeling":
        return BlockLabeling(
            tuple(data["first_path"]),
            tuple(data["first_copath"]),
            tuple(data["second_path"]),
            tuple(data["second_copath"]),
        )


@dataclass(frozen=True)
class GadgetPair:
    """An ell-block instantiation of a certified block labeling."""

    ell: int
    labeling: BlockLabeling
    ground: GroundSet
    first_graph: MultiGraph
    second_graph: MultiGraph
    first_matroid: Matroid
    second_matroid: Matroid

    def element(self, block: int, letter: str) -> int:
        return 9 * block + LETTERS.index(letter)

    def letters_mask(self, letters: str) -> int:
        """Union over all blocks of the named per-block elements."""
        mask = 0
        for j in range(self.ell):
            for letter in letters:
                mask |= 1 << self.element(j, letter)
        return mask

    def canonical_split(self) -> tuple[ElementSet, ElementSet]:
        """The size-(5*ell, 4*ell) witness pair: d,e,f,g,h vs a,b,c,i per block."""
        five = self.letters_mask("defgh")
        four = self.letters_mask("abci")
        return (
            ElementSet.from_mask(self.ground, five),
            ElementSet.from_mask(self.ground, four),
        )


def build_gadget(labeling: BlockLabeling, ell: int) -> GadgetPair:
    """Instantiate ``ell`` chained blocks of the labeling.

    Elements are indexed block-major in label order (block j's letter t
    is element 9*j + index(t)) and labeled "<letter><j+1>".  Both graphs
    put block j's K4 on vertices 6*j..6*j+3 with pendant vertices 6*j+4
    and 6*j+5; the second graph's i edge of block j copies the f edge of
    block j+1 (wrapping at the last block).
    """
    if ell < 1:
        raise ValueError("need at least one block")
    first_k4 = labeling.first_k4()
    second_k4 = labeling.second_k4()
    first_edges = []
    second_edges = []
    for j in range(ell):
        base = 6 * j
        nxt = 6 * ((j + 1) % ell)
        for letter in LETTERS:
            label = f"{letter}{j + 1}"
            if letter == "i":
                u, v = FIRST_PENDANTS["h"]
                first_edges.append((base + u, base + v, label))
                u, v = SECOND_PENDANTS["f"]
                second_edges.append((nxt + u, nxt + v, label))
            elif letter in "gh":
                u, v = FIRST_PENDANTS[letter]
                first_edges.append((base + u, base + v, label))
                u, v = second_k4[letter]
                second_edges.append((base + u, base + v, label))
            elif letter in "ef":
                u, v = first_k4[letter]
                first_edges.append((base + u, base + v, label))
                u, v = SECOND_PENDANTS[letter]
                second_edges.append((base + u, base + v, label))
            else:
                u, v = first_k4[letter]
                first_edges.append((base + u, base + v, label))
                u, v = second_k4[letter]
                second_edges.append((base + u, base + v, label))
    first = MultiGraph(6 * ell, tuple(first_edges))
    second = MultiGraph(6 * ell, tuple(second_edges))
    return GadgetPair(
        ell,
        labeling,
        first.ground_set(),
        first,
        second,
        graphic_matroid(first),
        graphic_matroid(second),
    )


@dataclass(frozen=True)
class GadgetCertificate:
    """Outcome of the exhaustive bipartition sweep over a gadget pair."""

    ell: int
    ok_a: bool
    witness_large: Optional[ElementSet]
    witness_small: Optional[ElementSet]
    ok_b: bool
    counterexample: Optional[tuple[ElementSet, ElementSet]]
    feasible_bipartitions: int
    efgh_always_together: bool
    i_always_opposite: bool
    blocks_always_split_53: bool
    elapsed_seconds: float

    @property
    def ok(self) -> bool:
        return self.ok_a and self.ok_b

    @property
    def structure_ok(self) -> bool:
        return self.efgh_always_together and self.i_always_opposite and self.blocks_always_split_53

    def to_json(self) -> dict:
        return {
            "schema": "gadget-certificate/1",
            "ell": self.ell,
            "ok": self.ok,
            "condition_a": {
                "holds": self.ok_a,
                "witness_large": sorted(self.witness_large.labels()) if self.witness_large else None,
                "witness_small": sorted(self.witness_small.labels()) if self.witness_small else None,
            },
            "condition_b": {
                "holds": self.ok_b,
                "counterexample": [sorted(c.labels()) for c in self.counterexample]
                if self.counterexample
                else None,
            },
            "feasible_bipartitions": self.feasible_bipartitions,
            "structure": {
                "efgh_always_together": self.efgh_always_together,
                "i_always_opposite": self.i_always_opposite,
                "blocks_always_split_53": self.blocks_always_split_53,
            },
            "elapsed_seconds": round(self.elapsed_seconds, 3),
        }


def _sweep(
    labeling: BlockLabeling,
    ell: int,
    start: int,
    stop: int,
    stop_on_violation: bool,
) -> dict:
    """Sweep bipartitions S1/S2 (element 0 fixed in S1) for masks in [start, stop).

    Returns feasible count, the first size violation, structure flags,
    and the first size-(5ell, 4ell) witness encountered.
    """
    pair = build_gadget(labeling, ell)
    n = 9 * ell
    full = (1 << n) - 1
    first_ends = pair.first_graph.endpoints()
    second_ends = pair.second_graph.endpoints()
    vcount = 6 * ell

    def forest(ends, mask: int) -> bool:
        parent = list(range(vcount))
        while mask:
            low = mask & -mask
            mask ^= low
            u, v = ends[low.bit_length() - 1]
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            if u == v:
                return False
            parent[u] = v
        return True

    block_masks = [sum(1 << (9 * j + t) for t in range(9)) for j in range(ell)]
    efgh_masks = [sum(1 << (9 * j + LETTERS.index(t)) for t in "efgh") for j in range(ell)]
    i_bits = [1 << (9 * j + 8) for j in range(ell)]
    hat_masks = [block_masks[j] & ~i_bits[j] for j in range(ell)]
    target_sizes = {5 * ell, 4 * ell}

    feasible = 0
    witness = None
    violation = None
    efgh_ok = True
    i_ok = True
    split53_ok = True

    for half in range(start, stop):
        s1 = (half << 1) | 1
        if not forest(first_ends, s1):
            continue
        s2 = full ^ s1
        if not forest(first_ends, s2):
            continue
        if not forest(second_ends, s1):
            continue
        if not forest(second_ends, s2):
            continue
        feasible += 1
        size1 = s1.bit_count()
        if {size1, n - size1} != target_sizes:
            if violation is None:
                violation = (s1, s2)
            if stop_on_violation:
                break
        elif witness is None:
            witness = (s1, s2) if size1 == 5 * ell else (s2, s1)
        agreed_class = None
        for j in range(ell):
            inside = s1 & efgh_masks[j]
            if inside != 0 and inside != efgh_masks[j]:
                efgh_ok = False
                break
            cls = 1 if inside else 2
            if agreed_class is None:
                agreed_class = cls
            elif cls != agreed_class:
                i_ok = False
            i_in_s1 = bool(s1 & i_bits[j])
            if (cls == 1) == i_in_s1:
                i_ok = False
            hat1 = (s1 & hat_masks[j]).bit_count()
            if {hat1, 8 - hat1} != {5, 3}:
                split53_ok = False

    return {
        "feasible": feasible,
        "witness": witness,
        "violation": violation,
        "efgh_ok": efgh_ok,
        "i_ok": i_ok,
        "split53_ok": split53_ok,
    }


def _sweep_json(args: tuple) -> dict:
    labeling_json, ell, start, stop, stop_on_violation = args
    return _sweep(BlockLabeling.from_json(labeling_json), ell, start, stop, stop_on_violation)


def verify_gadget(
    pair: GadgetPair,
    workers: int = 1,
    stop_on_violation: bool = False,
) -> GadgetCertificate:
    """Exhaustively certify conditions (a) and (b) for a gadget pair.

    Sweeps all 2^(9*ell - 1) bipartitions, fixing the first element's
    side (conditions (a) and (b) are symmetric under swapping the
    classes).  Refuses ell > 3.  With ``workers`` > 1 the mask range is
    split across processes and results merged (AND for (b), first-found
    for (a)); each worker rebuilds the immutable gadget locally.
    """
    ell = pair.ell
    if ell > VERIFY_ELL_CAP:
        raise ResourceCapExceeded(f"gadget sweep capped at ell <= {VERIFY_ELL_CAP}")
    started = time.monotonic()
    n = 9 * ell
    total = 1 << (n - 1)
    if total < 1 << 12:
        workers = 1  # process fan-out costs more than the sweep itself

    if workers > 1:
        import multiprocessing

        chunk = (total + workers - 1) // workers
        jobs = [
            (pair.labeling.to_json(), ell, lo, min(lo + chunk, total), stop_on_violation)
            for lo in range(0, total, chunk)
        ]
        with multiprocessing.Pool(workers) as pool:
            parts = pool.map(_sweep_json, jobs)
    else:
        parts = [_sweep(pair.labeling, ell, 0, total, stop_on_violation)]

    feasible = sum(p["feasible"] for p in parts)
    witness = next((p["witness"] for p in parts if p["witness"]), None)
    violation = next((p["violation"] for p in parts if p["violation"]), None)
    efgh_ok = all(p["efgh_ok"] for p in parts)
    i_ok = all(p["i_ok"] for p in parts)
    split53_ok = all(p["split53_ok"] for p in parts)

    # Report the canonical witness whenever the oracles confirm it; the
    # sweep's first find is kept only as a fallback.
    canon_large, canon_small = pair.canonical_split()
    if (
        len(canon_large) == 5 * ell
        and pair.first_matroid.indep_mask(canon_large.mask)
        and pair.second_matroid.indep_mask(canon_large.mask)
        and pair.first_matroid.indep_mask(canon_small.mask)
        and pair.second_matroid.indep_mask(canon_small.mask)
    ):
        witness = (canon_large.mask, canon_small.mask)
    large = ElementSet.from_mask(pair.ground, witness[0]) if witness else None
    small = ElementSet.from_mask(pair.ground, witness[1]) if witness else None
    counter = (
        (
            ElementSet.from_mask(pair.ground, violation[0]),
            ElementSet.from_mask(pair.ground, violation[1]),
        )
        if violation
        else None
    )
    return GadgetCertificate(
        ell=ell,
        ok_a=witness is not None,
        witness_large=large,
        witness_small=small,
        ok_b=violation is None,
        counterexample=counter,
        feasible_bipartitions=feasible,
        efgh_always_together=efgh_ok,
        i_always_opposite=i_ok,
        blocks_always_split_53=split53_ok,
        elapsed_seconds=time.monotonic() - started,
    )


def _is_k4_path(edges: Sequence[tuple[int, int]]) -> bool:
    """True iff three K4 edges form a Hamiltonian path on vertices 0..3."""
    if len(edges) != 3:
        return False
    deg = [0, 0, 0, 0]
    seen = set()
    for u, v in edges:
        key = (min(u, v), max(u, v))
        if key in seen:
            return False
        seen.add(key)
        deg[u] += 1
        deg[v] += 1
    return sorted(deg) == [1, 1, 2, 2]


def local_block_forcing(labeling: BlockLabeling) -> bool:
    """Single-block forcing table: in every joint split of one block's
    a..h into two classes whose K4 edges form two Hamiltonian paths in
    both graphs, the labels e,f,g,h land in one class.

    This is the per-block fact the chained parallel edges propagate: it
    is what makes condition (b) hold for every block count, not just the
    exhaustively swept ones.
    """
    first = labeling.first_k4()
    second = labeling.second_k4()
    letters = "abcdefgh"
    for bits in range(1 << 7):  # label a's class fixed by symmetry
        cls = {"a": 0}
        for idx, letter in enumerate(letters[1:]):
            cls[letter] = bits >> idx & 1
        first_side = [[first[t] for t in "abcdef" if cls[t] == c] for c in (0, 1)]
        if not (_is_k4_path(first_side[0]) and _is_k4_path(first_side[1])):
            continue
        second_side = [[second[t] for t in "abcdgh" if cls[t] == c] for c in (0, 1)]
        if not (_is_k4_path(second_side[0]) and _is_k4_path(second_side[1])):
            continue
        if len({cls[t] for t in "efgh"}) != 1:
            return False
    return True


def search_block_labeling(certify_ell2: bool = True) -> BlockLabeling:
    """Recover a certified block labeling by constrained search.

    Enumerates, in lexicographic order, the orders of a,b,c and d,e,f
    along the first graph's two K4 paths and of a,b,c and d,g,h along the
    second graph's, then keeps the first candidate that passes the
    single-block forcing table and the exhaustive certificate
    (conditions (a), (b) and the per-block structure facts) at ell = 1
    and ell = 2.  Exhausting the space without a hit raises: that would
    mean the block constraints were misread.
    """
    for first_path in itertools.permutations("abc"):
        for first_copath in itertools.permutations("def"):
            for second_path in itertools.permutations("abc"):
                for second_copath in itertools.permutations("dgh"):
                    candidate = BlockLabeling(
                        first_path, first_copath, second_path, second_copath
                    )
                    if not local_block_forcing(candidate):
                        continue
                    cert1 = verify_gadget(build_gadget(candidate, 1), stop_on_violation=True)
                    if not (cert1.ok and cert1.structure_ok):
                        continue
                    if not certify_ell2:
                        return candidate
                    cert2 = verify_gadget(build_gadget(candidate, 2), stop_on_violation=True)
                    if cert2.ok and cert2.structure_ok:
                        return candidate
    raise RuntimeError("no block labeling satisfies the gadget constraints")


# Lexicographically first labeling certified by search_block_labeling();
# the regression test re-runs the search and asserts it still lands here.
DEFAULT_LABELING = BlockLabeling(
    first_path=("a", "b", "c"),
    first_copath=("e", "d", "f"),
    second_path=("a", "c", "b"),
    second_copath=("g", "d", "h"),
)


def default_gadget(ell: int) -> GadgetPair:
    return build_gadget(DEFAULT_LABELING, ell)
