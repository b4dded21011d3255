"""Report emission: scatter data and SVG, fitness-distribution
diagnostics, and choropleth-shaped CSV output."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .aggregate import CountyFitness, IndustryComplexity


class ReportError(ValueError):
    """Raised on empty or disjoint report inputs."""


@dataclass(frozen=True)
class ScatterPoint:
    entity_id: str
    x: float
    y: float
    is_outlier: bool


def low_outlier_threshold(values) -> float:
    """Extreme-low rule: first quartile minus three interquartile ranges."""
    q1, q3 = np.percentile(np.asarray(values, dtype=float), [25, 75])
    return float(q1 - 3 * (q3 - q1))


def scatter_points(
    x: IndustryComplexity, y: IndustryComplexity
) -> list[ScatterPoint]:
    """Paired values on the coverage intersection, extreme-low y flagged."""
    shared = sorted(x.coverage & y.coverage)
    if not shared:
        raise ReportError("the two complexity measures share no industries")
    cut = low_outlier_threshold([y.values[i] for i in shared])
    return [
        ScatterPoint(i, x.values[i], y.values[i], y.values[i] < cut) for i in shared
    ]


def scatter_svg(points: list[ScatterPoint], width: int = 640, height: int = 480) -> str:
    """Minimal deterministic SVG scatter; flagged outliers are excluded."""
    shown = [p for p in points if not p.is_outlier]
    if not shown:
        raise ReportError("no points left to plot after outlier exclusion")
    xs = [p.x for p in shown]
    ys = [p.y for p in shown]
    pad = 40
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    xr = (x1 - x0) or 1.0
    yr = (y1 - y0) or 1.0

    def sx(v):
        return pad + (v - x0) / xr * (width - 2 * pad)

    def sy(v):
        return height - pad - (v - y0) / yr * (height - 2 * pad)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
    ]
    for p in shown:
        parts.append(
            f'<circle cx="{sx(p.x):.2f}" cy="{sy(p.y):.2f}" r="3" '
            f'fill="steelblue" fill-opacity="0.7"><title>{p.entity_id}</title></circle>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


@dataclass(frozen=True)
class DistributionReport:
    bin_edges: tuple[float, ...]  # on the log10 scale
    counts: tuple[int, ...]
    n_modes: int
    near_zero_fraction: float  # share of values at or below the floor


def report_distribution(
    f: CountyFitness, bins: int = 20, underflow_floor: float = 1e-14
) -> DistributionReport:
    """Histogram of log10 fitness with a prominence-based mode count.

    Counts are smoothed with a 3-bin moving average so single-bin
    sampling noise does not register; a mode is then a peak whose
    prominence exceeds 5% of the tallest smoothed bin (at least 1
    count). Values at or below the underflow floor are clipped into
    the lowest bin and reported as the near-zero fraction.
    """
    values = np.array([f.values[k] for k in sorted(f.values)], dtype=float)
    near_zero = float(np.mean(values <= underflow_floor)) if len(values) else 0.0
    logs = np.log10(np.clip(values, underflow_floor, None))
    if logs.max() - logs.min() < 1e-12:
        return DistributionReport(
            (float(logs.min()), float(logs.min()) + 1e-12),
            (len(values),),
            1,
            near_zero,
        )
    counts, edges = np.histogram(logs, bins=bins)
    smoothed = np.convolve(counts.astype(float), np.ones(3) / 3, mode="same")
    padded = np.concatenate([[0.0], smoothed, [0.0]])
    prominence = max(1.0, 0.05 * smoothed.max())
    peaks, _ = find_peaks(padded, prominence=prominence)
    return DistributionReport(
        tuple(float(e) for e in edges),
        tuple(int(c) for c in counts),
        int(len(peaks)),
        near_zero,
    )


def choropleth_rows(
    f: CountyFitness, county_universe
) -> list[tuple[str, float | None, bool]]:
    """One row per county in the universe; uncovered counties flagged."""
    return [
        (fips, f.values.get(fips), fips in f.coverage)
        for fips in sorted(set(county_universe))
    ]
