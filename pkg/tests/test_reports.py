import numpy as np
import pytest

from ecomplex.aggregate import CountyFitness, IndustryComplexity
from ecomplex.reports import (
    DistributionReport,
    ReportError,
    choropleth_rows,
    low_outlier_threshold,
    report_distribution,
    scatter_points,
    scatter_svg,
)


class TestOutlierRule:
    def test_hand_worked(self):
        # quartiles of 1..8 are 2.75 and 6.25; cut = 2.75 - 3*3.5 = -7.75
        vals = list(range(1, 9))
        assert low_outlier_threshold(vals) == pytest.approx(-7.75)

    def test_degenerate_iqr(self):
        # all mass at 1.0: IQR is 0, so the cut sits at the quartile
        vals = [1.0] * 20 + [1e-12]
        assert low_outlier_threshold(vals) == pytest.approx(1.0)


class TestScatter:
    def make(self, n=30, with_outlier=True):
        rng = np.random.default_rng(0)
        ids = [f"i{k:02d}" for k in range(n)]
        xv = {i: float(v) for i, v in zip(ids, rng.normal(1.0, 0.05, n))}
        yv = {i: xv[i] * 1.1 for i in ids}
        if with_outlier:
            yv["i00"] = 1e-13
        return (
            IndustryComplexity(xv, "hidden"),
            IndustryComplexity(yv, "revealed_export"),
        )

    def test_intersection_and_flag(self):
        x, y = self.make()
        pts = scatter_points(x, y)
        assert len(pts) == 30
        flagged = [p.entity_id for p in pts if p.is_outlier]
        assert flagged == ["i00"]

    def test_partial_coverage(self):
        x, y = self.make(with_outlier=False)
        y = IndustryComplexity(
            {i: v for i, v in y.values.items() if i != "i05"}, y.provenance
        )
        pts = scatter_points(x, y)
        assert len(pts) == 29
        assert all(p.entity_id != "i05" for p in pts)

    def test_disjoint_rejected(self):
        x = IndustryComplexity({"a": 1.0}, "hidden")
        y = IndustryComplexity({"b": 1.0}, "revealed_export")
        with pytest.raises(ReportError, match="share no"):
            scatter_points(x, y)

    def test_svg_excludes_outliers(self):
        x, y = self.make()
        svg = scatter_svg(scatter_points(x, y))
        assert svg.startswith("<svg")
        assert svg.count("<circle") == 29
        assert "i00" not in svg

    def test_svg_deterministic(self):
        x, y = self.make()
        assert scatter_svg(scatter_points(x, y)) == scatter_svg(scatter_points(x, y))


class TestDistribution:
    def test_unimodal(self):
        rng = np.random.default_rng(1)
        f = CountyFitness(
            {f"c{k:03d}": float(v) for k, v in enumerate(rng.lognormal(0, 0.3, 400))},
            "job_based",
        )
        rep = report_distribution(f)
        assert rep.n_modes == 1
        assert rep.near_zero_fraction == 0.0
        assert sum(rep.counts) == 400

    def test_bimodal_with_underflow_mass(self):
        rng = np.random.default_rng(2)
        high = rng.lognormal(0, 0.2, 300)
        vals = {f"h{k:03d}": float(v) for k, v in enumerate(high)}
        vals |= {f"z{k:03d}": 1e-16 for k in range(80)}
        rep = report_distribution(CountyFitness(vals, "endogenous"))
        assert rep.n_modes >= 2
        assert rep.near_zero_fraction == pytest.approx(80 / 380)

    def test_constant_values_single_mode(self):
        f = CountyFitness({f"c{k}": 1.0 for k in range(10)}, "job_based")
        rep = report_distribution(f)
        assert rep == DistributionReport(rep.bin_edges, (10,), 1, 0.0)

    def test_floor_clipping(self):
        f = CountyFitness({"a": 1e-20, "b": 1.0}, "endogenous")
        rep = report_distribution(f, underflow_floor=1e-14)
        assert rep.bin_edges[0] >= -14.0 - 1e-9
        assert rep.near_zero_fraction == pytest.approx(0.5)


class TestChoropleth:
    def test_universe_row_per_county(self):
        f = CountyFitness({"01001": 1.2, "02002": 0.8}, "exogenous_export")
        rows = choropleth_rows(f, ["01001", "02002", "03003"])
        assert rows == [
            ("01001", 1.2, True),
            ("02002", 0.8, True),
            ("03003", None, False),
        ]
