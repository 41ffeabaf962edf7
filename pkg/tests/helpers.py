"""Shared test utilities: naive reference oracles and instance generators.

The naive functions here deliberately avoid the library's algorithmic
paths (no greedy rank, no exchange graphs, no pruned sweeps): they
enumerate, so the fast implementations have something independent to be
checked against.
"""

from __future__ import annotations

import itertools
import random

from basepack.core import GroundSet, Matroid, bits_of, mask_of
from basepack.constructions import (
    HyperplaneFamily,
    PartitionOfGroundSet,
    direct_sum,
    dual,
    free_matroid,
    graphic_matroid,
    linear_matroid,
    partition_matroid,
    paving_matroid,
    transversal_matroid,
    truncate,
    uniform_matroid,
)
from basepack.fields import Matrix, gf
from basepack.graphs import BipartiteGraph, Digraph, MultiGraph
from basepack.instances import CommonBasesInstance, ModularInstance


def naive_rank(matroid: Matroid, mask: int) -> int:
    """Max size of an independent submask, by full submask enumeration."""
    best = 0
    sub = mask
    while True:
        if matroid.indep_mask(sub):
            best = max(best, sub.bit_count())
        if sub == 0:
            break
        sub = (sub - 1) & mask
    return best


def naive_bases(matroid: Matroid) -> list[int]:
    n = matroid.ground.size
    r = naive_rank(matroid, (1 << n) - 1)
    return [
        m for m in range(1 << n) if m.bit_count() == r and matroid.indep_mask(m)
    ]


def naive_max_common(m1: Matroid, m2: Matroid) -> int:
    n = m1.ground.size
    best = 0
    for mask in range(1 << n):
        if m1.indep_mask(mask) and m2.indep_mask(mask):
            best = max(best, mask.bit_count())
    return best


def naive_partition_feasible(matroid: Matroid, k: int) -> bool:
    """Can the ground set be split into k independent sets?  Plain DFS."""
    n = matroid.ground.size
    classes = [0] * k

    def place(e: int) -> bool:
        if e == n:
            return True
        for c in range(k):
            grown = classes[c] | (1 << e)
            if matroid.indep_mask(grown):
                classes[c] = grown
                if place(e + 1):
                    return True
                classes[c] ^= 1 << e
            if classes[c] == 0:
                break  # later empty classes are symmetric
        return False

    return place(0)


def naive_common_bases_feasible(inst: CommonBasesInstance) -> bool:
    """All k-colorings of the ground set, no symmetry break."""
    n = inst.ground.size
    r1 = naive_rank(inst.m1, (1 << n) - 1)
    r2 = naive_rank(inst.m2, (1 << n) - 1)
    if r1 != r2 or n != inst.k * r1:
        return False
    if n == 0:
        return True
    for coloring in itertools.product(range(inst.k), repeat=n):
        ok = True
        masks = [0] * inst.k
        for e, c in enumerate(coloring):
            masks[c] |= 1 << e
        for m in masks:
            if m.bit_count() != r1 or not (inst.m1.indep_mask(m) and inst.m2.indep_mask(m)):
                ok = False
                break
        if ok:
            return True
    return False


def naive_modular_bases_feasible(inst: ModularInstance) -> bool:
    """All subsets of modules, no symmetry break."""
    blocks = [b.mask for b in inst.modules.blocks]
    n = inst.matroid.ground.size
    full = (1 << n) - 1
    r = naive_rank(inst.matroid, full)
    if n != 2 * r:
        return False
    for choose in range(1 << len(blocks)):
        mask = 0
        for i in range(len(blocks)):
            if choose >> i & 1:
                mask |= blocks[i]
        other = full ^ mask
        if (
            mask.bit_count() == r
            and other.bit_count() == r
            and inst.matroid.indep_mask(mask)
            and inst.matroid.indep_mask(other)
        ):
            return True
    return False


def naive_nae_satisfiable(formula) -> bool:
    """All assignments, literal-by-literal check."""
    n = formula.num_vars
    for bits in range(1 << n):
        assignment = [bool(bits >> v & 1) for v in range(n)]
        good = True
        for clause in formula.clauses:
            values = [assignment[v] == positive for v, positive in clause]
            if all(values) or not any(values):
                good = False
                break
        if good:
            return True
    return False


def naive_even_factor_feasible(digraph: Digraph) -> bool:
    """Try every vertex permutation supported by the arcs."""
    n = digraph.vertex_count
    if n == 0:
        return True
    arcs = digraph.arc_set()
    for perm in itertools.permutations(range(n)):
        if any((v, perm[v]) not in arcs for v in range(n)):
            continue
        seen = set()
        ok = True
        for start in range(n):
            if start in seen:
                continue
            length = 0
            v = start
            while v not in seen:
                seen.add(v)
                v = perm[v]
                length += 1
            if length % 2:
                ok = False
                break
        if ok:
            return True
    return False


def cycle_lengths(n_left: int, n_right: int, edges) -> list[int]:
    """Independent cycle-length computation for a 2-factor edge set."""
    adj: dict[tuple[str, int], list[tuple[str, int]]] = {}
    for s, t in edges:
        adj.setdefault(("s", s), []).append(("t", t))
        adj.setdefault(("t", t), []).append(("s", s))
    seen = set()
    lengths = []
    for node in sorted(adj):
        if node in seen:
            continue
        length = 0
        prev = None
        cur = node
        while cur not in seen:
            seen.add(cur)
            nxt = [x for x in adj[cur] if x != prev]
            step = nxt[0] if nxt else prev
            prev, cur = cur, step
            length += 1
        lengths.append(length)
    return lengths


def naive_mod4_two_factor_feasible(graph: BipartiteGraph) -> bool:
    """Sweep all edge subsets at tiny sizes; degree filter then cycle check."""
    if graph.left.size != graph.right.size:
        return False
    if graph.left.size == 0:
        return True
    edges = sorted(graph.edges)
    m = len(edges)
    need = 2 * graph.left.size
    for mask in range(1 << m):
        if mask.bit_count() != need:
            continue
        chosen = [edges[i] for i in bits_of(mask)]
        sdeg = [0] * graph.left.size
        tdeg = [0] * graph.right.size
        for s, t in chosen:
            sdeg[s] += 1
            tdeg[t] += 1
        if any(d != 2 for d in sdeg) or any(d != 2 for d in tdeg):
            continue
        if all(l % 4 == 0 for l in cycle_lengths(graph.left.size, graph.right.size, chosen)):
            return True
    return False


# ---------------------------------------------------------------------------
# Random instance generators (all seeded by the caller)


def random_multigraph(rng: random.Random, n_edges: int) -> MultiGraph:
    n_vertices = rng.randint(max(2, n_edges // 2), n_edges + 1)
    edges = []
    for _ in range(n_edges):
        u = rng.randrange(n_vertices)
        v = rng.randrange(n_vertices)
        edges.append((u, v))
    return MultiGraph.build(n_vertices, edges)


def random_bipartite(rng: random.Random, n_left: int, n_right: int, p: float = 0.5) -> BipartiteGraph:
    edges = [
        (s, t)
        for s in range(n_left)
        for t in range(n_right)
        if rng.random() < p
    ]
    return BipartiteGraph.build(n_left, n_right, edges)


def random_digraph(rng: random.Random, n: int, p: float = 0.4) -> Digraph:
    arcs = [
        (u, v)
        for u in range(n)
        for v in range(n)
        if u != v and rng.random() < p
    ]
    return Digraph.build(n, arcs)


def random_paving_family(rng: random.Random, ground: GroundSet, r: int) -> HyperplaneFamily:
    sets: list[int] = []
    for _ in range(rng.randint(0, 3)):
        size = rng.randint(r, max(r, ground.size - 1))
        candidate = mask_of(rng.sample(range(ground.size), size))
        if candidate == ground.full_mask:
            continue
        if all((candidate & h).bit_count() <= r - 2 for h in sets):
            sets.append(candidate)
    return HyperplaneFamily.build(
        ground, r, [list(bits_of(m)) for m in sets]
    )


def random_matroid(rng: random.Random, n: int) -> Matroid:
    """A random small matroid drawn across the construction classes."""
    kind = rng.choice(
        ["uniform", "free", "graphic", "transversal", "partition", "paving", "linear", "combined"]
    )
    ground = GroundSet(n)
    if n == 0:
        return free_matroid(ground)
    if kind == "free":
        return free_matroid(ground)
    if kind == "uniform":
        return uniform_matroid(ground, rng.randint(0, n))
    if kind == "graphic":
        return graphic_matroid(random_multigraph(rng, n))
    if kind == "transversal":
        return transversal_matroid(random_bipartite(rng, n, rng.randint(1, n)))
    if kind == "partition":
        cuts = sorted(rng.sample(range(1, n), rng.randint(0, min(2, n - 1))) if n > 1 else [])
        bounds = [0] + cuts + [n]
        blocks = [list(range(bounds[i], bounds[i + 1])) for i in range(len(bounds) - 1)]
        caps = [rng.randint(0, len(b)) for b in blocks]
        return partition_matroid(PartitionOfGroundSet.build(ground, blocks), caps)
    if kind == "paving" and n >= 2:
        r = rng.randint(2, n)
        return paving_matroid(random_paving_family(rng, ground, r))
    if kind == "linear":
        rows = rng.randint(1, max(1, n))
        p = rng.choice([2, 3, 5])
        entries = [[rng.randrange(p) for _ in range(n)] for _ in range(rows)]
        return linear_matroid(Matrix.build(gf(p), entries))
    # combined: a combinator over two smaller matroids
    if n >= 2:
        left = random_matroid(rng, n // 2)
        right = random_matroid(rng, n - n // 2)
        out = direct_sum(left, right)
        choice = rng.random()
        if choice < 0.33:
            out = truncate(out, rng.randint(0, n))
        elif choice < 0.5:
            out = dual(out)
        return out
    return uniform_matroid(ground, rng.randint(0, n))


def random_matroid_of_rank(rng: random.Random, n: int, r: int) -> Matroid:
    """A random matroid on n elements with rank exactly r (via truncation)."""
    for _ in range(200):
        m = random_matroid(rng, n)
        if m.full_rank >= r:
            return truncate(m, r) if m.full_rank > r else m
    # Fallback: uniform always works.
    return uniform_matroid(GroundSet(n), r)


def random_partition(rng: random.Random, ground: GroundSet, max_block: int = 3) -> PartitionOfGroundSet:
    elements = list(range(ground.size))
    rng.shuffle(elements)
    blocks = []
    i = 0
    while i < len(elements):
        size = rng.randint(1, min(max_block, len(elements) - i))
        blocks.append(sorted(elements[i : i + size]))
        i += size
    blocks.sort()
    return PartitionOfGroundSet.build(ground, blocks)


def random_modular_instance(rng: random.Random, n: int) -> ModularInstance:
    assert n % 2 == 0 and n >= 2
    matroid = random_matroid_of_rank(rng, n, n // 2)
    modules = random_partition(rng, matroid.ground)
    return ModularInstance(matroid, modules)


def random_common_bases_instance(rng: random.Random, n: int) -> CommonBasesInstance:
    assert n % 2 == 0 and n >= 2
    m1 = random_matroid_of_rank(rng, n, n // 2)
    m2 = random_matroid_of_rank(rng, n, n // 2)
    return CommonBasesInstance(m1, m2, 2)


def oracle_equal(m1: Matroid, m2: Matroid) -> bool:
    """Exhaustive oracle agreement on every subset."""
    if m1.ground.size != m2.ground.size:
        return False
    for mask in range(1 << m1.ground.size):
        if m1.indep_mask(mask) != m2.indep_mask(mask):
            return False
    return True
