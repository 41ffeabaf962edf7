"""Exact linear algebra over GF(p) and the rationals.

Column-subset rank is the only operation the linear matroid oracle
needs; everything is done with exact arithmetic (machine ints mod p, or
:class:`fractions.Fraction`), never floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

Entry = Union[int, Fraction]

RATIONALS = "q"


def gf(p: int) -> str:
    return f"gf:{p}"


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def parse_field(descriptor: str) -> tuple[str, int]:
    """Return ("gf", p) or ("q", 0)."""
    if descriptor == RATIONALS:
        return ("q", 0)
    if descriptor.startswith("gf:"):
        p = int(descriptor[3:])
        if not is_prime(p):
            raise ValueError(f"GF({p}): modulus must be prime")
        return ("gf", p)
    raise ValueError(f"unknown field descriptor {descriptor!r}")


@dataclass(frozen=True)
class Matrix:
    """A dense matrix over GF(p) (field="gf:p") or the rationals (field="q")."""

    field: str
    rows: int
    cols: int
    entries: tuple[tuple[Entry, ...], ...]

    def __post_init__(self) -> None:
        kind, p = parse_field(self.field)
        if len(self.entries) != self.rows:
            raise ValueError("row count mismatch")
        for row in self.entries:
            if len(row) != self.cols:
                raise ValueError("column count mismatch")
            for x in row:
                if kind == "gf":
                    if not isinstance(x, int) or not 0 <= x < p:
                        raise ValueError(f"entry {x!r} not a GF({p}) element")
                else:
                    if not isinstance(x, (int, Fraction)):
                        raise ValueError(f"entry {x!r} not rational")

    @staticmethod
    def build(field: str, entries: Sequence[Sequence[Entry]]) -> "Matrix":
        kind, p = parse_field(field)
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        if kind == "gf":
            norm = tuple(tuple(int(x) % p for x in row) for row in entries)
        else:
            norm = tuple(tuple(Fraction(x) for x in row) for row in entries)
        return Matrix(field, rows, cols, norm)

    def column_rank(self, cols: Sequence[int]) -> int:
        """Rank of the submatrix given by ``cols``, by Gaussian elimination."""
        kind, p = parse_field(self.field)
        if not cols:
            return 0
        work = [[self.entries[r][c] for c in cols] for r in range(self.rows)]
        m, n = self.rows, len(cols)
        rank = 0
        for col in range(n):
            pivot = -1
            for r in range(rank, m):
                if work[r][col] != 0:
                    pivot = r
                    break
            if pivot < 0:
                continue
            work[rank], work[pivot] = work[pivot], work[rank]
            head = work[rank][col]
            inv = pow(head, p - 2, p) if kind == "gf" else Fraction(1) / head
            for r in range(rank + 1, m):
                factor = work[r][col]
                if factor == 0:
                    continue
                if kind == "gf":
                    scale = factor * inv % p
                    work[r] = [
                        (work[r][j] - scale * work[rank][j]) % p for j in range(n)
                    ]
                else:
                    scale = factor * inv
                    work[r] = [work[r][j] - scale * work[rank][j] for j in range(n)]
            rank += 1
            if rank == m:
                break
        return rank

    def columns_independent(self, cols: Sequence[int]) -> bool:
        return self.column_rank(cols) == len(cols)

    def to_json(self) -> dict:
        kind, _ = parse_field(self.field)
        if kind == "gf":
            data = [list(row) for row in self.entries]
        else:
            data = [
                [f"{Fraction(x).numerator}/{Fraction(x).denominator}" for x in row]
                for row in self.entries
            ]
        return {"field": self.field, "rows": self.rows, "cols": self.cols, "entries": data}

    @staticmethod
    def from_json(data: dict) -> "Matrix":
        kind, _ = parse_field(data["field"])
        if kind == "gf":
            entries = data["entries"]
        else:
            entries = [[Fraction(x) for x in row] for row in data["entries"]]
        mat = Matrix.build(data["field"], entries) if entries else Matrix(data["field"], 0, data.get("cols", 0), ())
        if mat.rows != data["rows"] or (mat.rows and mat.cols != data["cols"]):
            raise ValueError("matrix dimensions do not match entries")
        return mat


def incidence_matrix_gf2(vertex_count: int, endpoints: Sequence[tuple[int, int]]) -> Matrix:
    """Vertex-edge incidence matrix over GF(2); a self-loop gives a zero column."""
    entries = [[0] * len(endpoints) for _ in range(vertex_count)]
    for j, (u, v) in enumerate(endpoints):
        if u != v:
            entries[u][j] = 1
            entries[v][j] = 1
    return Matrix.build(gf(2), entries) if vertex_count else Matrix(gf(2), 0, len(endpoints), ())
