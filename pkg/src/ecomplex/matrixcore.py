"""Labeled sparse bipartite matrices shared by every other module.

Axes carry string entity identifiers (SOC codes, 4-digit NAICS, 5-digit
FIPS, HS codes); cells carry nonnegative weights or booleans. Ids are
opaque strings on purpose: numeric parsing would corrupt leading zeros.
Storage is dictionary-of-keys with sorted deterministic iteration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

AXIS_KINDS = ("skill", "job", "industry", "county", "country", "product")


class MatrixError(ValueError):
    """Raised on structural violations (bad axis, empty result, non-permutation)."""


@dataclass(frozen=True)
class AxisLabels:
    """An ordered set of unique entity ids of one kind."""

    kind: str
    ids: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in AXIS_KINDS:
            raise MatrixError(f"unknown axis kind {self.kind!r}")
        if len(set(self.ids)) != len(self.ids):
            dupes = sorted({i for i in self.ids if list(self.ids).count(i) > 1})
            raise MatrixError(f"duplicate ids on {self.kind} axis: {dupes[:5]}")
        object.__setattr__(self, "ids", tuple(self.ids))

    @classmethod
    def from_iterable(cls, kind: str, ids: Iterable[str]) -> "AxisLabels":
        """Build an axis with lexicographic (deterministic) order."""
        return cls(kind, tuple(sorted(set(ids))))

    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.ids)}

    def __len__(self) -> int:
        return len(self.ids)


def _check_cells(rows: AxisLabels, cols: AxisLabels, cells: Mapping[tuple[str, str], float]):
    rowset, colset = set(rows.ids), set(cols.ids)
    for (r, c), w in cells.items():
        if r not in rowset or c not in colset:
            raise MatrixError(f"cell ({r!r}, {c!r}) outside axes")
        if not np.isfinite(w) or w < 0:
            raise MatrixError(f"cell ({r!r}, {c!r}) has invalid weight {w!r}")


@dataclass(frozen=True)
class WeightedBipartite:
    """Sparse nonnegative matrix: wage bills, export values, employment counts.

    Absent cell means weight 0; zero-weight cells are not stored.
    """

    rows: AxisLabels
    cols: AxisLabels
    cells: dict[tuple[str, str], float] = field(default_factory=dict)

    def __post_init__(self):
        _check_cells(self.rows, self.cols, self.cells)
        object.__setattr__(
            self, "cells", {k: float(v) for k, v in self.cells.items() if v > 0}
        )

    @classmethod
    def from_entries(cls, row_kind, col_kind, entries: Iterable[tuple[str, str, float]]):
        """Build from (row_id, col_id, weight) triples; duplicates are summed."""
        cells: dict[tuple[str, str], float] = {}
        for r, c, w in entries:
            cells[(r, c)] = cells.get((r, c), 0.0) + float(w)
        rows = AxisLabels.from_iterable(row_kind, (r for r, _ in cells))
        cols = AxisLabels.from_iterable(col_kind, (c for _, c in cells))
        return cls(rows, cols, cells)

    def weight(self, r: str, c: str) -> float:
        return self.cells.get((r, c), 0.0)

    def sorted_cells(self) -> list[tuple[str, str, float]]:
        return [(r, c, self.cells[(r, c)]) for r, c in sorted(self.cells)]

    def total(self) -> float:
        return float(sum(w for _, _, w in self.sorted_cells()))

    def to_dense(self) -> np.ndarray:
        ri, ci = self.rows.index(), self.cols.index()
        a = np.zeros((len(self.rows), len(self.cols)))
        for (r, c), w in self.cells.items():
            a[ri[r], ci[c]] = w
        return a


@dataclass(frozen=True)
class BinaryBipartite:
    """Sparse 0/1 matrix: membership only, no weights."""

    rows: AxisLabels
    cols: AxisLabels
    cells: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    def __post_init__(self):
        rowset, colset = set(self.rows.ids), set(self.cols.ids)
        for r, c in self.cells:
            if r not in rowset or c not in colset:
                raise MatrixError(f"cell ({r!r}, {c!r}) outside axes")
        object.__setattr__(self, "cells", frozenset(self.cells))

    @classmethod
    def from_pairs(cls, row_kind, col_kind, pairs: Iterable[tuple[str, str]]):
        pairs = frozenset(pairs)
        rows = AxisLabels.from_iterable(row_kind, (r for r, _ in pairs))
        cols = AxisLabels.from_iterable(col_kind, (c for _, c in pairs))
        return cls(rows, cols, pairs)

    def has(self, r: str, c: str) -> bool:
        return (r, c) in self.cells

    def sorted_cells(self) -> list[tuple[str, str]]:
        return sorted(self.cells)

    def row_degree(self, r: str) -> int:
        return sum(1 for rr, _ in self.cells if rr == r)

    def transpose(self) -> "BinaryBipartite":
        return BinaryBipartite(self.cols, self.rows, frozenset((c, r) for r, c in self.cells))


@dataclass(frozen=True)
class QuotientMatrix:
    """Dimensionless Balassa-style quotients; defined only where weight > 0."""

    rows: AxisLabels
    cols: AxisLabels
    cells: dict[tuple[str, str], float] = field(default_factory=dict)

    def __post_init__(self):
        _check_cells(self.rows, self.cols, self.cells)

    def value(self, r: str, c: str) -> float | None:
        return self.cells.get((r, c))

    def sorted_cells(self) -> list[tuple[str, str, float]]:
        return [(r, c, self.cells[(r, c)]) for r, c in sorted(self.cells)]


def row_sums(m: WeightedBipartite) -> dict[str, float]:
    """Per-row weight totals; zero for empty rows."""
    out = {r: 0.0 for r in m.rows.ids}
    for r, _, w in m.sorted_cells():
        out[r] += w
    return out


def col_sums(m: WeightedBipartite) -> dict[str, float]:
    """Per-column weight totals; zero for empty columns."""
    out = {c: 0.0 for c in m.cols.ids}
    for _, c, w in m.sorted_cells():
        out[c] += w
    return out


@dataclass(frozen=True)
class DropReport:
    removed_rows: tuple[str, ...]
    removed_cols: tuple[str, ...]


def drop_empty(m: BinaryBipartite) -> tuple[BinaryBipartite, DropReport]:
    """Remove empty rows and columns; error if nothing is left.

    Required before fixed-point iteration to avoid division by zero.
    Idempotent: one pass suffices because removing an empty row cannot
    empty a column (it held no cells).
    """
    live_rows = sorted({r for r, _ in m.cells})
    live_cols = sorted({c for _, c in m.cells})
    if not live_rows:
        raise MatrixError("drop_empty would produce an empty matrix")
    report = DropReport(
        tuple(r for r in sorted(m.rows.ids) if r not in set(live_rows)),
        tuple(c for c in sorted(m.cols.ids) if c not in set(live_cols)),
    )
    out = BinaryBipartite(
        AxisLabels(m.rows.kind, tuple(live_rows)),
        AxisLabels(m.cols.kind, tuple(live_cols)),
        m.cells,
    )
    return out, report


def permute(m: BinaryBipartite, row_order: Iterable[str], col_order: Iterable[str]) -> BinaryBipartite:
    """Reorder axes; incidence structure (id-keyed cells) is unchanged."""
    row_order, col_order = tuple(row_order), tuple(col_order)
    if sorted(row_order) != sorted(m.rows.ids):
        raise MatrixError("row_order is not a permutation of the row ids")
    if sorted(col_order) != sorted(m.cols.ids):
        raise MatrixError("col_order is not a permutation of the column ids")
    return BinaryBipartite(
        AxisLabels(m.rows.kind, row_order), AxisLabels(m.cols.kind, col_order), m.cells
    )
