"""Balassa-family quotients and binarization.

RCA, the industry wage quotient, and the wage location quotient share
one formula: the share of the row entity within a column entity,
relative to the row entity's global share. Thresholding at 1 (strict)
yields the binary networks. The skill-job network instead uses the
per-skill mean-importance threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrixcore import (
    BinaryBipartite,
    MatrixError,
    QuotientMatrix,
    WeightedBipartite,
    col_sums,
    row_sums,
)


@dataclass(frozen=True)
class QuotientSpec:
    threshold: float = 1.0

    def __post_init__(self):
        if self.threshold <= 0:
            raise ValueError("threshold must be > 0")


def balassa_quotient(w: WeightedBipartite) -> QuotientMatrix:
    """Quotient (w_rc / colsum_c) / (rowsum_r / total) on positive cells.

    Zero-weight cells never receive a quotient (absent, not 0.0), which
    keeps sparsity and avoids 0/0.
    """
    rs = row_sums(w)
    cs = col_sums(w)
    total = sum(rs.values())
    if total <= 0:
        raise MatrixError("total weight is 0; quotient undefined")
    cells = {
        (r, c): (v / cs[c]) / (rs[r] / total) for (r, c), v in w.cells.items()
    }
    return QuotientMatrix(w.rows, w.cols, cells)


def binarize(q: QuotientMatrix, spec: QuotientSpec | None = None) -> BinaryBipartite:
    """Link present iff the quotient strictly exceeds the threshold.

    Ties at exactly the threshold are excluded (strict > 1 comparison).
    """
    spec = spec or QuotientSpec()
    pairs = frozenset(k for k, v in q.cells.items() if v > spec.threshold)
    return BinaryBipartite(q.rows, q.cols, pairs)


def binarize_skills(
    importances: WeightedBipartite, unrated_as_zero: bool = False
) -> BinaryBipartite:
    """Skill-job link present iff importance strictly exceeds the skill's mean.

    By default the mean is taken over the occupations for which the
    skill has a recorded importance. With unrated_as_zero=True every
    occupation on the job axis enters the mean with importance 0 where
    unrated (the alternative reading of "considering all occupations").
    """
    if not importances.cells:
        raise MatrixError("empty skill importance table")
    sums = row_sums(importances)
    if unrated_as_zero:
        counts = {s: len(importances.cols) for s in importances.rows.ids}
    else:
        counts = {s: 0 for s in importances.rows.ids}
        for (s, _), _v in importances.cells.items():
            counts[s] += 1
    pairs = frozenset(
        (s, j)
        for (s, j), v in importances.cells.items()
        if counts[s] > 0 and v > sums[s] / counts[s]
    )
    return BinaryBipartite(importances.rows, importances.cols, pairs)


def quotient_to_rows(q: QuotientMatrix) -> list[tuple[str, str, float]]:
    """Rows for the optional CSV dump: row_id, col_id, quotient."""
    return q.sorted_cells()
