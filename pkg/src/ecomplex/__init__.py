"""Hidden (job-based) and revealed economic complexity indicators over
skill-job-industry-county networks, with regression validation."""

from .efc import FitnessResult, SolverConfig, rank_of, solve_fitness
from .matrixcore import (
    AxisLabels,
    BinaryBipartite,
    QuotientMatrix,
    WeightedBipartite,
    drop_empty,
    permute,
)
from .quotient import QuotientSpec, balassa_quotient, binarize, binarize_skills

__all__ = [
    "AxisLabels",
    "BinaryBipartite",
    "FitnessResult",
    "QuotientMatrix",
    "QuotientSpec",
    "SolverConfig",
    "WeightedBipartite",
    "balassa_quotient",
    "binarize",
    "binarize_skills",
    "drop_empty",
    "permute",
    "rank_of",
    "solve_fitness",
]

__version__ = "0.1.0"
