"""Fitness-complexity fixed-point solver.

Applies to any binary bipartite network: jobs x skills for job fitness
and skill complexity, counties x industries for endogenous county
fitness and industry complexity. Row entities receive fitness (sum of
the complexities they are linked to), column entities receive
complexity (reciprocal of the summed reciprocal fitness of their
holders); both vectors are mean-normalized after every iteration.

Values that sink below the underflow floor are frozen and flagged:
some fitness values legitimately converge toward zero on sparse
networks, and freezing keeps the 1/F terms bounded while preserving
that phenomenology.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import iteration_step
from .matrixcore import BinaryBipartite, MatrixError

# hard positive clamp well below any sensible underflow floor; frozen
# values keep shrinking under mean normalization and must never reach
# exactly 0.0, which would poison the 1/F terms
_VALUE_CLAMP = 1e-280

STATUS_CONVERGED = "converged"
STATUS_UNDERFLOW = "underflow"
STATUS_MAX_ITER = "max_iter"


@dataclass(frozen=True)
class SolverConfig:
    max_iterations: int = 1000
    rel_tolerance: float = 1e-10
    underflow_floor: float = 1e-14
    initial_value: float = 1.0
    # ranking stability window used for the non-convergence diagnostic
    rank_window: int = 50

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.rel_tolerance <= 0 or self.underflow_floor <= 0:
            raise ValueError("tolerances must be > 0")
        if self.initial_value <= 0:
            raise ValueError("initial_value must be > 0")


@dataclass(frozen=True)
class FitnessResult:
    """Paired fitness/complexity vectors with per-iteration diagnostics."""

    fitness: dict[str, float]
    complexity: dict[str, float]
    iterations_used: int
    stop_reason: str  # one of converged / underflow / max_iter
    underflowed_fitness_ids: frozenset[str]
    underflowed_complexity_ids: frozenset[str]
    trajectory_summary: tuple[float, ...]
    rank_stable_at_stop: bool = False

    @property
    def underflowed_ids(self) -> frozenset[str]:
        return self.underflowed_fitness_ids | self.underflowed_complexity_ids

    @property
    def converged_ids(self) -> frozenset[str]:
        if self.stop_reason == STATUS_MAX_ITER:
            return frozenset()
        keys = set(self.fitness) | set(self.complexity)
        return frozenset(keys - self.underflowed_ids)

    def status(self, entity_id: str, side: str) -> str:
        under = (
            self.underflowed_fitness_ids if side == "fitness" else self.underflowed_complexity_ids
        )
        if entity_id in under:
            return STATUS_UNDERFLOW
        if self.stop_reason == STATUS_MAX_ITER:
            return STATUS_MAX_ITER
        return STATUS_CONVERGED

    def to_rows(self) -> list[tuple[str, str, float, str]]:
        """CSV-dump rows: entity_id, side, value, status."""
        rows = [
            (i, "fitness", self.fitness[i], self.status(i, "fitness"))
            for i in sorted(self.fitness)
        ]
        rows += [
            (i, "complexity", self.complexity[i], self.status(i, "complexity"))
            for i in sorted(self.complexity)
        ]
        return rows


def _as_vector(ids, init, default):
    if init is None:
        return np.full(len(ids), float(default))
    vec = np.array([float(init[i]) for i in ids])
    if not np.all(vec > 0):
        raise ValueError("initial values must be strictly positive")
    return vec


def solve_fitness(
    m: BinaryBipartite,
    cfg: SolverConfig | None = None,
    initial_fitness=None,
    initial_complexity=None,
) -> FitnessResult:
    """Iterate the coupled fitness/complexity map to its fixed point.

    The matrix must have no empty rows or columns (apply drop_empty
    first). Non-convergence within max_iterations is not an error; the
    result records which stopping rule fired and whether the ranking
    was stable over the final iterations.
    """
    cfg = cfg or SolverConfig()
    if not m.cells:
        raise MatrixError("cannot solve on an empty matrix")
    row_ids = tuple(sorted(m.rows.ids))
    col_ids = tuple(sorted(m.cols.ids))
    ri = {v: i for i, v in enumerate(row_ids)}
    ci = {v: i for i, v in enumerate(col_ids)}
    links = m.sorted_cells()
    link_rows = np.array([ri[r] for r, _ in links], dtype=np.int64)
    link_cols = np.array([ci[c] for _, c in links], dtype=np.int64)
    if len(set(link_rows)) != len(row_ids):
        empty = sorted(set(row_ids) - {r for r, _ in links})
        raise MatrixError(f"empty rows present (drop_empty first): {empty[:5]}")
    if len(set(link_cols)) != len(col_ids):
        empty = sorted(set(col_ids) - {c for _, c in links})
        raise MatrixError(f"empty columns present (drop_empty first): {empty[:5]}")

    f = _as_vector(row_ids, initial_fitness, cfg.initial_value)
    q = _as_vector(col_ids, initial_complexity, cfg.initial_value)
    frozen_f = np.zeros(len(row_ids), dtype=np.bool_)
    frozen_q = np.zeros(len(col_ids), dtype=np.bool_)

    trajectory: list[float] = []
    stop_reason = STATUS_MAX_ITER
    iterations = 0
    prev_rank: tuple | None = None
    rank_streak = 0

    for iterations in range(1, cfg.max_iterations + 1):
        f_prev, q_prev = f, q
        f, q, delta = iteration_step(link_rows, link_cols, f, q, frozen_f, frozen_q)
        np.maximum(f, _VALUE_CLAMP, out=f)
        np.maximum(q, _VALUE_CLAMP, out=q)
        trajectory.append(delta)

        # entries that just sank below the floor stop being updated
        new_under_f = (~frozen_f) & (f < cfg.underflow_floor)
        new_under_q = (~frozen_q) & (q < cfg.underflow_floor)

        if delta < cfg.rel_tolerance:
            stop_reason = STATUS_CONVERGED
            frozen_f |= new_under_f
            frozen_q |= new_under_q
            break

        # did only sub-floor values still change this iteration?
        live_f = ~frozen_f
        live_q = ~frozen_q
        moved_f = live_f & (np.abs(f - f_prev) >= cfg.rel_tolerance * f_prev)
        moved_q = live_q & (np.abs(q - q_prev) >= cfg.rel_tolerance * q_prev)
        frozen_f |= new_under_f
        frozen_q |= new_under_q
        if (moved_f.any() or moved_q.any()) and np.all(
            f[moved_f] < cfg.underflow_floor
        ) and np.all(q[moved_q] < cfg.underflow_floor):
            stop_reason = STATUS_UNDERFLOW
            break

        rank = (_rank_signature(f, frozen_f), _rank_signature(q, frozen_q))
        rank_streak = rank_streak + 1 if rank == prev_rank else 0
        prev_rank = rank

    frozen_f |= f <= cfg.underflow_floor
    frozen_q |= q <= cfg.underflow_floor

    return FitnessResult(
        fitness={row_ids[i]: float(f[i]) for i in range(len(row_ids))},
        complexity={col_ids[i]: float(q[i]) for i in range(len(col_ids))},
        iterations_used=iterations,
        stop_reason=stop_reason,
        underflowed_fitness_ids=frozenset(row_ids[i] for i in np.nonzero(frozen_f)[0]),
        underflowed_complexity_ids=frozenset(col_ids[i] for i in np.nonzero(frozen_q)[0]),
        trajectory_summary=tuple(trajectory),
        rank_stable_at_stop=rank_streak >= cfg.rank_window,
    )


def _rank_signature(values: np.ndarray, frozen: np.ndarray) -> tuple[int, ...]:
    live = np.nonzero(~frozen)[0]
    return tuple(live[np.argsort(-values[live], kind="stable")])


def rank_of(result: FitnessResult, side: str) -> list[str]:
    """Ids sorted by value descending, ties lexicographic; underflowed last."""
    if side == "fitness":
        values, under = result.fitness, result.underflowed_fitness_ids
    elif side == "complexity":
        values, under = result.complexity, result.underflowed_complexity_ids
    else:
        raise ValueError(f"side must be fitness or complexity, got {side!r}")
    ranked = sorted((i for i in values if i not in under), key=lambda i: (-values[i], i))
    return ranked + sorted(i for i in values if i in under)
