"""Graph carriers: edge-labeled multigraphs, bipartite graphs, digraphs.

These are the raw materials for graphic and transversal matroids, for the
spanning-tree and 2-factor problems, and for the reduction outputs.  All
are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .core import GroundSet, bits_of


@dataclass(frozen=True)
class MultiGraph:
    """An undirected multigraph with labeled edges.

    Parallel edges and self-loops are permitted; edge labels are unique
    and double as the ground-set labels of the graphic matroid.
    """

    vertex_count: int
    edges: tuple[tuple[int, int, str], ...]

    @staticmethod
    def build(vertex_count: int, edges: Iterable) -> "MultiGraph":
        """Accept (u, v) or (u, v, label) items; unlabeled edges get e{i}."""
        norm = []
        for i, e in enumerate(edges):
            if len(e) == 2:
                u, v = e
                label = f"e{i}"
            else:
                u, v, label = e
            norm.append((int(u), int(v), str(label)))
        return MultiGraph(vertex_count, tuple(norm))

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise ValueError("vertex count must be non-negative")
        for u, v, label in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge {label} endpoint out of range")
        labels = [label for _, _, label in self.edges]
        if len(set(labels)) != len(labels):
            raise ValueError("edge labels must be unique")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def ground_set(self) -> GroundSet:
        return GroundSet(len(self.edges), tuple(label for _, _, label in self.edges))

    def endpoints(self) -> tuple[tuple[int, int], ...]:
        return tuple((u, v) for u, v, _ in self.edges)

    def is_forest_mask(self, mask: int) -> bool:
        """Union-find cycle detection over the edges selected by ``mask``."""
        parent = list(range(self.vertex_count))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        edges = self.edges
        while mask:
            low = mask & -mask
            mask ^= low
            u, v, _ = edges[low.bit_length() - 1]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    def component_count(self, mask: Optional[int] = None) -> int:
        """Connected components of the subgraph on all vertices, given edge mask."""
        if mask is None:
            mask = (1 << len(self.edges)) - 1
        parent = list(range(self.vertex_count))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        comps = self.vertex_count
        for idx in bits_of(mask):
            u, v, _ = self.edges[idx]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                comps -= 1
        return comps

    def is_connected(self) -> bool:
        return self.vertex_count <= 1 or self.component_count() == 1

    def to_json(self) -> dict:
        return {
            "vertices": self.vertex_count,
            "edges": [[u, v, label] for u, v, label in self.edges],
        }

    @staticmethod
    def from_json(data: dict) -> "MultiGraph":
        return MultiGraph.build(data["vertices"], data["edges"])

    def to_dot(self, name: str = "G", highlight: Iterable[int] = ()) -> str:
        hot = set(highlight)
        lines = [f"graph {name} {{"]
        for i, (u, v, label) in enumerate(self.edges):
            style = ', style=bold, color=blue' if i in hot else ""
            lines.append(f'  {u} -- {v} [label="{label}"{style}];')
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class BipartiteGraph:
    """A bipartite graph (S, T; E) with E as (left, right) index pairs."""

    left: GroundSet
    right: GroundSet
    edges: frozenset[tuple[int, int]]

    @staticmethod
    def build(
        n_left: int,
        n_right: int,
        edges: Iterable[tuple[int, int]],
        left_labels: Optional[Sequence[str]] = None,
        right_labels: Optional[Sequence[str]] = None,
    ) -> "BipartiteGraph":
        return BipartiteGraph(
            GroundSet(n_left, tuple(left_labels) if left_labels else None),
            GroundSet(n_right, tuple(right_labels) if right_labels else None),
            frozenset((int(s), int(t)) for s, t in edges),
        )

    def __post_init__(self) -> None:
        for s, t in self.edges:
            if not (0 <= s < self.left.size and 0 <= t < self.right.size):
                raise ValueError(f"edge ({s},{t}) out of range")

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.left.size)]
        for s, t in sorted(self.edges):
            adj[s].append(t)
        return adj

    def left_degrees(self) -> list[int]:
        deg = [0] * self.left.size
        for s, _ in self.edges:
            deg[s] += 1
        return deg

    def right_degrees(self) -> list[int]:
        deg = [0] * self.right.size
        for _, t in self.edges:
            deg[t] += 1
        return deg

    def to_json(self) -> dict:
        return {
            "left": self.left.size,
            "right": self.right.size,
            "edges": sorted([s, t] for s, t in self.edges),
        }

    @staticmethod
    def from_json(data: dict) -> "BipartiteGraph":
        return BipartiteGraph.build(data["left"], data["right"], data["edges"])

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{", "  rankdir=LR;"]
        for s in range(self.left.size):
            lines.append(f'  s{s} [label="{self.left.label(s)}", shape=box];')
        for t in range(self.right.size):
            lines.append(f'  t{t} [label="{self.right.label(t)}"];')
        for s, t in sorted(self.edges):
            lines.append(f"  s{s} -- t{t};")
        lines.append("}")
        return "\n".join(lines)


def maximum_matching(adj: Sequence[Sequence[int]], lefts: Iterable[int]) -> dict[int, int]:
    """Augmenting-path matching covering as many of ``lefts`` as possible.

    Returns right -> left assignments.  Deterministic: lefts and their
    adjacency are scanned in the given order.
    """
    match_right: dict[int, int] = {}
    match_left: dict[int, int] = {}

    def augment(s: int, seen: set[int]) -> bool:
        for t in adj[s]:
            if t in seen:
                continue
            seen.add(t)
            if t not in match_right or augment(match_right[t], seen):
                match_right[t] = s
                match_left[s] = t
                return True
        return False

    for s in lefts:
        augment(s, set())
    return match_right


def saturates(adj: Sequence[Sequence[int]], lefts: Sequence[int]) -> bool:
    """True iff some matching covers every left vertex in ``lefts``."""
    match_right: dict[int, int] = {}

    def augment(s: int, seen: set[int]) -> bool:
        for t in adj[s]:
            if t in seen:
                continue
            seen.add(t)
            if t not in match_right or augment(match_right[t], seen):
                match_right[t] = s
                return True
        return False

    for s in lefts:
        if not augment(s, set()):
            return False
    return True


@dataclass(frozen=True)
class Digraph:
    """A loopless directed graph; arcs are (tail, head) pairs."""

    vertex_count: int
    arcs: tuple[tuple[int, int], ...]

    @staticmethod
    def build(vertex_count: int, arcs: Iterable[tuple[int, int]]) -> "Digraph":
        return Digraph(vertex_count, tuple((int(u), int(v)) for u, v in arcs))

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise ValueError("vertex count must be non-negative")
        for u, v in self.arcs:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"arc ({u},{v}) out of range")
            if u == v:
                # A self-loop can never lie on an even dicycle.
                raise ValueError(f"self-loop at {u} rejected")

    def arc_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.arcs)

    def out_neighbors(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in sorted(set(self.arcs)):
            out[u].append(v)
        return out

    def to_json(self) -> dict:
        return {"vertices": self.vertex_count, "arcs": sorted([u, v] for u, v in set(self.arcs))}

    @staticmethod
    def from_json(data: dict) -> "Digraph":
        return Digraph.build(data["vertices"], data["arcs"])

    def to_dot(self, name: str = "D") -> str:
        lines = [f"digraph {name} {{"]
        for u, v in sorted(set(self.arcs)):
            lines.append(f"  {u} -> {v};")
        lines.append("}")
        return "\n".join(lines)


def two_factor_cycles(
    n_left: int, n_right: int, edges: Iterable[tuple[int, int]]
) -> list[list[tuple[int, int]]]:
    """Decompose a bipartite 2-factor into cycles of edges.

    Every vertex must have degree exactly 2.  Each cycle is returned as an
    edge list; walks start at the smallest left vertex of the cycle and
    move toward its smaller-indexed right neighbor, so the decomposition
    is deterministic.
    """
    adj_l: list[list[int]] = [[] for _ in range(n_left)]
    adj_r: list[list[int]] = [[] for _ in range(n_right)]
    for s, t in sorted(edges):
        adj_l[s].append(t)
        adj_r[t].append(s)
    for s in range(n_left):
        if len(adj_l[s]) != 2:
            raise ValueError(f"left vertex {s} has degree {len(adj_l[s])}, not 2")
    for t in range(n_right):
        if len(adj_r[t]) != 2:
            raise ValueError(f"right vertex {t} has degree {len(adj_r[t])}, not 2")

    used: set[tuple[int, int]] = set()
    cycles = []
    for s0 in range(n_left):
        t0 = min(adj_l[s0])
        if (s0, t0) in used:
            continue
        cycle = []
        s, t = s0, t0
        while True:
            cycle.append((s, t))
            used.add((s, t))
            s2 = adj_r[t][0] if adj_r[t][1] == s else adj_r[t][1]
            cycle.append((s2, t))
            used.add((s2, t))
            t2 = adj_l[s2][0] if adj_l[s2][1] == t else adj_l[s2][1]
            s, t = s2, t2
            if s == s0 and t == t0:
                break
        cycles.append(cycle)
    return cycles
