"""Cross-layer aggregations.

Hidden industry complexity (employment-weighted average of job
fitness), hidden county fitness (sum of industry complexities over the
county's network links), exogenous measures imported from the export
computation through the HS-to-NAICS concordance, multi-year product
complexity averaging, and diversification counts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .efc import FitnessResult
from .ingest import ConcordanceMap
from .matrixcore import BinaryBipartite, WeightedBipartite, col_sums


class AggregationError(ValueError):
    """Raised when an aggregation input is incomplete (missing coverage)."""


@dataclass(frozen=True)
class IndustryComplexity:
    values: dict[str, float]
    provenance: str  # hidden / revealed_export / endogenous

    @property
    def coverage(self) -> frozenset[str]:
        return frozenset(self.values)


@dataclass(frozen=True)
class CountyFitness:
    values: dict[str, float]  # mean-normalized over covered counties
    provenance: str  # job_based / endogenous / exogenous_export

    @property
    def coverage(self) -> frozenset[str]:
        return frozenset(self.values)


@dataclass(frozen=True)
class DiversificationIndex:
    values: dict[str, int]
    restricted: bool


def hidden_industry_complexity(
    employment: WeightedBipartite, job_fitness: FitnessResult
) -> IndustryComplexity:
    """Employment-weighted average of job fitness per industry."""
    totals = col_sums(employment)
    zero = sorted(i for i, t in totals.items() if t <= 0)
    if zero:
        raise AggregationError(f"industries with zero total employment: {zero[:10]}")
    missing = sorted(
        {j for j, _ in employment.cells} - set(job_fitness.fitness)
    )
    if missing:
        raise AggregationError(f"jobs missing from fitness result: {missing[:10]}")
    sums = {i: 0.0 for i in employment.cols.ids}
    for j, i, n in employment.sorted_cells():
        sums[i] += n * job_fitness.fitness[j]
    return IndustryComplexity(
        {i: sums[i] / totals[i] for i in employment.cols.ids}, "hidden"
    )


def hidden_county_fitness(
    m3: BinaryBipartite, q: IndustryComplexity
) -> CountyFitness:
    """Sum of industry complexities per county, mean-normalized.

    Counties with no industries are excluded from coverage; every
    industry appearing in the network must carry a complexity value.
    """
    uncovered = sorted({i for _, i in m3.cells} - q.coverage)
    if uncovered:
        raise AggregationError(f"industries without complexity values: {uncovered[:10]}")
    sums: dict[str, float] = {}
    for c, i in m3.sorted_cells():
        sums[c] = sums.get(c, 0.0) + q.values[i]
    return CountyFitness(_mean_normalize(sums), "job_based")


def _mean_normalize(values: dict[str, float]) -> dict[str, float]:
    if not values:
        raise AggregationError("no covered counties to normalize over")
    mean = sum(values[k] for k in sorted(values)) / len(values)
    return {k: v / mean for k, v in values.items()}


def average_yearly_complexity(per_year: dict[int, FitnessResult]) -> dict[str, float]:
    """Per-product mean of yearly complexity over the years it appears.

    Yearly values are already mean-normalized by the solver, which is
    what makes cross-year averaging well defined.
    """
    if not per_year:
        raise AggregationError("no yearly results to average")
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    for year in sorted(per_year):
        for hs, v in per_year[year].complexity.items():
            sums[hs] = sums.get(hs, 0.0) + v
            counts[hs] = counts.get(hs, 0) + 1
    return {hs: sums[hs] / counts[hs] for hs in sums}


def exogenous_industry_complexity(
    q_hs: dict[str, float], conc: ConcordanceMap, us_exports: dict[str, float]
) -> IndustryComplexity:
    """Export-based industry complexity through the HS-NAICS concordance.

    Weight of each mapped HS code = concordance weight times the U.S.
    worldwide export value. Industries with no mapped, exported,
    complexity-scored HS code are excluded from coverage.
    """
    if not conc.entries:
        raise AggregationError("empty concordance")
    values = {}
    for naics in conc.industries():
        num = den = 0.0
        for hs, cw in conc.for_industry(naics):
            w = cw * us_exports.get(hs, 0.0)
            if w > 0 and hs in q_hs:
                num += w * q_hs[hs]
                den += w
        if den > 0:
            values[naics] = num / den
    return IndustryComplexity(values, "revealed_export")


def exogenous_county_fitness(
    m3: BinaryBipartite, q_exp: IndustryComplexity
) -> CountyFitness:
    """Sum of export-based complexities over covered industries only.

    Counties whose industries all lack export complexity drop out of
    coverage; the rest are mean-normalized.
    """
    sums: dict[str, float] = {}
    for c, i in m3.sorted_cells():
        if i in q_exp.values:
            sums[c] = sums.get(c, 0.0) + q_exp.values[i]
    if not sums:
        raise AggregationError("no county has any export-covered industry")
    return CountyFitness(_mean_normalize(sums), "exogenous_export")


def endogenous_county_fitness(result: FitnessResult) -> CountyFitness:
    """Repackage a county-industry solver run as a county fitness measure."""
    return CountyFitness(dict(result.fitness), "endogenous")


def diversification(
    m3: BinaryBipartite, restrict_to: frozenset[str] | None = None
) -> DiversificationIndex:
    """Count of linked industries per county, optionally restricted."""
    counts = {c: 0 for c in m3.rows.ids}
    for c, i in m3.cells:
        if restrict_to is None or i in restrict_to:
            counts[c] += 1
    return DiversificationIndex(counts, restricted=restrict_to is not None)
