"""First-class solution certificates.

Solvers never answer with a bare boolean: a YES comes with a certificate
that a polynomial-time verifier can check against the instance, and the
round-trip tests lean on that.  All certificates serialize to JSON with
element labels alongside indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from .core import ElementSet, GroundSet


def _class_json(subset: ElementSet) -> dict:
    return {"indices": sorted(subset), "labels": list(subset.labels())}


@dataclass(frozen=True)
class PartitionCertificate:
    """A partition of a ground set into classes (common bases, usually two)."""

    classes: tuple[ElementSet, ...]

    def to_json(self) -> dict:
        return {
            "schema": "certificate/common-bases/1",
            "classes": [_class_json(c) for c in self.classes],
        }

    @staticmethod
    def from_json(data: dict, ground: GroundSet) -> "PartitionCertificate":
        return PartitionCertificate(
            tuple(ElementSet(ground, c["indices"]) for c in data["classes"])
        )


@dataclass(frozen=True)
class ModularCertificate:
    """A bipartition of a ground set into two module-respecting classes.

    ``first_modules`` lists the module indices whose union is the first
    class; the explicit element sets are carried for verification.
    """

    first_modules: tuple[int, ...]
    classes: tuple[ElementSet, ElementSet]

    def to_json(self) -> dict:
        return {
            "schema": "certificate/modular-bases/1",
            "first_modules": list(self.first_modules),
            "classes": [_class_json(c) for c in self.classes],
        }

    @staticmethod
    def from_json(data: dict, ground: GroundSet) -> "ModularCertificate":
        return ModularCertificate(
            tuple(data["first_modules"]),
            tuple(ElementSet(ground, c["indices"]) for c in data["classes"]),
        )


@dataclass(frozen=True)
class AssignmentCertificate:
    """A truth assignment, indexed by variable."""

    values: tuple[bool, ...]

    def to_json(self) -> dict:
        return {
            "schema": "certificate/naesat/1",
            "assignment": {f"x{i + 1}": v for i, v in enumerate(self.values)},
        }

    @staticmethod
    def from_json(data: dict) -> "AssignmentCertificate":
        raw = data["assignment"]
        values = [False] * len(raw)
        for key, v in raw.items():
            values[int(key.lstrip("x")) - 1] = bool(v)
        return AssignmentCertificate(tuple(values))


@dataclass(frozen=True)
class ArcSetCertificate:
    """A set of arcs of a digraph (a perfect even factor)."""

    arcs: frozenset[tuple[int, int]]

    def to_json(self) -> dict:
        return {
            "schema": "certificate/even-factor/1",
            "arcs": sorted([u, v] for u, v in self.arcs),
        }

    @staticmethod
    def from_json(data: dict) -> "ArcSetCertificate":
        return ArcSetCertificate(frozenset((u, v) for u, v in data["arcs"]))


@dataclass(frozen=True)
class EdgeSetCertificate:
    """A set of edges of a bipartite graph (a 2-factor)."""

    edges: frozenset[tuple[int, int]]

    def to_json(self) -> dict:
        return {
            "schema": "certificate/mod4-2factor/1",
            "edges": sorted([s, t] for s, t in self.edges),
        }

    @staticmethod
    def from_json(data: dict) -> "EdgeSetCertificate":
        return EdgeSetCertificate(frozenset((s, t) for s, t in data["edges"]))
