"""Young diagrams, cell statistics and fixed-point enumeration."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .errors import CellOutOfDiagram


@dataclass(frozen=True)
class YoungDiagram:
    """Weakly decreasing positive row lengths; cells are 1-indexed (row, column)."""

    rows: tuple = ()

    def __post_init__(self):
        rows = tuple(int(x) for x in self.rows)
        if any(x <= 0 for x in rows) or any(a < b for a, b in zip(rows, rows[1:])):
            raise ValueError(f"rows must be weakly decreasing positive integers: {rows}")
        object.__setattr__(self, "rows", rows)

    @property
    def size(self) -> int:
        return sum(self.rows)

    def __len__(self):
        return len(self.rows)

    def row_length(self, i: int) -> int:
        return self.rows[i - 1] if 1 <= i <= len(self.rows) else 0

    def column_length(self, j: int) -> int:
        return sum(1 for x in self.rows if x >= j)

    def transpose(self) -> "YoungDiagram":
        if not self.rows:
            return self
        return YoungDiagram(tuple(self.column_length(j) for j in range(1, self.rows[0] + 1)))

    def cells(self) -> Iterator[tuple]:
        for i, row in enumerate(self.rows, start=1):
            for j in range(1, row + 1):
                yield (i, j)

    def __contains__(self, cell) -> bool:
        i, j = cell
        return i >= 1 and j >= 1 and j <= self.row_length(i)

    def to_text(self) -> str:
        return ",".join(str(x) for x in self.rows) if self.rows else "-"

    @classmethod
    def from_text(cls, s: str) -> "YoungDiagram":
        s = s.strip()
        if s in ("", "-"):
            return cls(())
        return cls(tuple(int(x) for x in s.split(",")))


def arm(Y: YoungDiagram, cell) -> int:
    i, j = cell
    return Y.row_length(i) - j


def leg(Y: YoungDiagram, cell) -> int:
    i, j = cell
    return Y.column_length(j) - i


def cell_stats(Y: YoungDiagram, cell, relative_to: YoungDiagram | None = None) -> tuple:
    """Return ``(a, l, a', l')`` for ``cell``.

    With ``relative_to`` the arm and leg are measured against that diagram
    and may be negative; the cell then need not lie in ``Y``.
    """
    i, j = cell
    if relative_to is None:
        if cell not in Y:
            raise CellOutOfDiagram(f"cell {cell} is not in {Y.rows}")
        ref = Y
    else:
        ref = relative_to
    return arm(ref, cell), leg(ref, cell), j - 1, i - 1


@dataclass(frozen=True)
class YoungTuple:
    diagrams: tuple

    def __post_init__(self):
        ds = tuple(d if isinstance(d, YoungDiagram) else YoungDiagram(tuple(d)) for d in self.diagrams)
        object.__setattr__(self, "diagrams", ds)

    @property
    def rank(self) -> int:
        return len(self.diagrams)

    @property
    def total(self) -> int:
        return sum(d.size for d in self.diagrams)

    def __iter__(self):
        return iter(self.diagrams)

    def __getitem__(self, i):
        return self.diagrams[i]

    def transpose(self) -> "YoungTuple":
        return YoungTuple(tuple(d.transpose() for d in self.diagrams))

    def to_text(self) -> str:
        return ";".join(d.to_text() for d in self.diagrams)

    @classmethod
    def from_text(cls, s: str) -> "YoungTuple":
        return cls(tuple(YoungDiagram.from_text(p) for p in s.split(";")))


@lru_cache(maxsize=None)
def partitions(n: int) -> tuple:
    """Partitions of ``n`` in lexicographic order of their row tuples."""
    out = []

    def rec(rem, maxpart, prefix):
        if rem == 0:
            out.append(tuple(prefix))
            return
        for k in range(1, min(rem, maxpart) + 1):
            rec(rem - k, k, prefix + [k])

    rec(n, n, [])
    return tuple(sorted(out))


def compositions(n: int, r: int) -> Iterator[tuple]:
    """Weak compositions of ``n`` into ``r`` parts, lexicographic."""
    for comp in itertools.product(range(n + 1), repeat=r):
        if sum(comp) == n:
            yield comp


def enumerate_tuples(r: int, n: int) -> Iterator[YoungTuple]:
    """All r-tuples of diagrams with total size n, in a fixed order."""
    if r < 1 or n < 0:
        raise ValueError("need r >= 1 and n >= 0")
    for comp in compositions(n, r):
        for parts in itertools.product(*(partitions(c) for c in comp)):
            yield YoungTuple(tuple(YoungDiagram(p) for p in parts))


def colored_partition_count(r: int, n: int) -> int:
    """Coefficient of q^n in prod_k (1 - q^k)^(-r)."""
    coeffs = [1] + [0] * n
    for _ in range(r):
        for k in range(1, n + 1):
            for m in range(k, n + 1):
                coeffs[m] += coeffs[m - k]
    return coeffs[n]
