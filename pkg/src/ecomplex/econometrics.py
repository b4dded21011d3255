"""Derived macro variables and the regression program.

Wage-level and labor-productivity-growth regressions over industries
(five models each: revealed complexity, hidden complexity on goods /
services / all, and a services-interaction model with a Chow test),
and county GDP-per-capita growth regressions with state fixed effects
and cluster-robust standard errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, stats

from .ingest import CountyPanel, IndustryPanel


class RegressionError(ValueError):
    """Raised on rank deficiency, insufficient observations, or missing columns."""


# ---------------------------------------------------------------------------
# derived macro variables


@dataclass(frozen=True)
class MacroSeries:
    """Named per-entity series plus the entities excluded with a reason."""

    industry: dict[str, dict[str, float]]
    county: dict[str, dict[str, float]]
    is_service: dict[str, bool]
    excluded: dict[str, str]


def derive_macro_variables(
    ind: IndustryPanel,
    cty: CountyPanel,
    base_year: int = 2017,
    horizon_year: int = 2022,
) -> MacroSeries:
    """Build log compensation, productivity growth, and GDP growth series.

    Entities missing a required year, or feeding a nonpositive argument
    to a log, are excluded with a reason rather than silently dropped.
    PPI is rebased so the base year equals 1 before deflating.
    """
    log_wl: dict[str, float] = {}
    lp_growth: dict[str, float] = {}
    log_rev: dict[str, float] = {}
    log_emp: dict[str, float] = {}
    cr4: dict[str, float] = {}
    is_service: dict[str, bool] = {}
    excluded: dict[str, str] = {}

    for naics in ind.industries():
        base = ind.get(naics, base_year)
        is_service[naics] = ind.is_service(naics)
        if base is None:
            excluded[naics] = f"no year {base_year}"
            continue
        if base.compensation is None or base.employees is None or base.employees <= 0:
            excluded[naics] = "missing compensation or employees"
        elif base.compensation <= 0:
            excluded[naics] = "nonpositive compensation"
        else:
            log_wl[naics] = math.log(base.compensation / base.employees)
        if base.revenues is not None and base.revenues > 0:
            log_rev[naics] = math.log(base.revenues)
        if base.employees is not None and base.employees > 0:
            log_emp[naics] = math.log(base.employees)
        if base.cr4 is not None:
            cr4[naics] = base.cr4

        hor = ind.get(naics, horizon_year)
        ok = (
            hor is not None
            and base.revenues
            and base.employees
            and hor.revenues
            and hor.employees
            and base.ppi
            and hor.ppi
        )
        if ok:
            ppi_ratio = hor.ppi / base.ppi
            lp_growth[naics] = math.log(
                (hor.revenues / ppi_ratio) / hor.employees
            ) - math.log(base.revenues / base.employees)
        elif naics not in excluded:
            excluded.setdefault(naics, f"incomplete {base_year}-{horizon_year} panel")

    gdppc_growth: dict[str, float] = {}
    log_gdppc: dict[str, float] = {}
    for fips in cty.counties():
        base = cty.get(fips, base_year)
        hor = cty.get(fips, horizon_year)
        if base is None or base.gdp_per_capita is None:
            excluded[fips] = f"no GDP per capita in {base_year}"
            continue
        log_gdppc[fips] = math.log(base.gdp_per_capita)
        if hor is None or hor.gdp_per_capita is None:
            excluded[fips] = f"no GDP per capita in {horizon_year}"
            continue
        gdppc_growth[fips] = math.log(hor.gdp_per_capita) - math.log(base.gdp_per_capita)

    return MacroSeries(
        industry={
            "log_wl": log_wl,
            "lp_growth": lp_growth,
            "log_revenues": log_rev,
            "log_emp": log_emp,
            "cr4": cr4,
        },
        county={"gdppc_growth": gdppc_growth, "log_gdppc": log_gdppc},
        is_service=is_service,
        excluded=excluded,
    )


# ---------------------------------------------------------------------------
# design matrices and OLS


@dataclass(frozen=True)
class DesignMatrix:
    observations: tuple[str, ...]
    column_names: tuple[str, ...]  # intercept first unless suppressed
    X: np.ndarray
    response_name: str
    y: np.ndarray
    cluster_ids: tuple[str, ...] | None = None
    n_dropped: int = 0

    def __post_init__(self):
        if len(set(self.column_names)) != len(self.column_names):
            raise RegressionError("duplicate column names")
        if self.X.shape != (len(self.observations), len(self.column_names)):
            raise RegressionError("X shape does not match labels")


def build_design(
    observations,
    columns: dict[str, np.ndarray],
    response_name: str,
    y,
    cluster_ids=None,
    n_dropped: int = 0,
    intercept: bool = True,
) -> DesignMatrix:
    names = (["intercept"] if intercept else []) + list(columns)
    cols = ([np.ones(len(observations))] if intercept else []) + [
        np.asarray(columns[c], dtype=float) for c in columns
    ]
    return DesignMatrix(
        tuple(observations),
        tuple(names),
        np.column_stack(cols),
        response_name,
        np.asarray(y, dtype=float),
        tuple(cluster_ids) if cluster_ids is not None else None,
        n_dropped,
    )


@dataclass(frozen=True)
class RegressionResult:
    model_id: str
    column_names: tuple[str, ...]
    beta: np.ndarray
    covariance: np.ndarray
    cov_variant: str  # classical / hc_robust / cluster
    std_errors: np.ndarray
    p_values: np.ndarray
    r2: float
    adj_r2: float
    aic: float
    bic: float
    aic_core: float  # without the Gaussian constant term
    bic_core: float
    f_stat: float
    f_pvalue: float
    n_obs: int
    df_resid: int
    df_inference: int
    n_clusters: int | None = None

    def coef(self, name: str) -> float:
        return float(self.beta[self.column_names.index(name)])

    def se(self, name: str) -> float:
        return float(self.std_errors[self.column_names.index(name)])

    def pvalue(self, name: str) -> float:
        return float(self.p_values[self.column_names.index(name)])

    def conf_int(self, name: str, level: float = 0.95) -> tuple[float, float]:
        tcrit = stats.t.ppf(0.5 + level / 2, self.df_inference)
        j = self.column_names.index(name)
        return (
            float(self.beta[j] - tcrit * self.std_errors[j]),
            float(self.beta[j] + tcrit * self.std_errors[j]),
        )


def stars(p: float) -> str:
    """Significance notation: + 10%, * 5%, ** 1%, *** 1 per mille."""
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    if p < 0.10:
        return "+"
    return ""


def ols_fit(
    d: DesignMatrix, se: str = "hc_robust", model_id: str = ""
) -> RegressionResult:
    """Least squares via QR with classical, HC1, or cluster-robust covariance."""
    X, y = d.X, d.y
    n, k = X.shape
    if n <= k:
        raise RegressionError(f"n={n} observations for k={k} columns")
    Q, R = np.linalg.qr(X)
    diag = np.abs(np.diag(R))
    bad = diag <= np.finfo(float).eps * n * diag.max()
    if bad.any():
        names = [d.column_names[i] for i in np.nonzero(bad)[0]]
        raise RegressionError(f"design matrix rank deficient; collinear: {names}")
    beta = linalg.solve_triangular(R, Q.T @ y)
    resid = y - X @ beta
    rss = float(resid @ resid)
    has_intercept = "intercept" in d.column_names
    tss = float(((y - y.mean()) @ (y - y.mean())) if has_intercept else y @ y)

    r_inv = linalg.solve_triangular(R, np.eye(k))
    bread = r_inv @ r_inv.T  # (X'X)^-1

    df_resid = n - k
    n_clusters = None
    if se == "classical":
        cov = rss / df_resid * bread
        df_inf = df_resid
    elif se == "hc_robust":
        meat = (X * resid[:, None] ** 2).T @ X
        cov = bread @ meat @ bread * (n / df_resid)  # HC1 scaling
        df_inf = df_resid
    elif se == "cluster":
        if d.cluster_ids is None:
            raise RegressionError("cluster covariance requested without cluster ids")
        groups = sorted(set(d.cluster_ids))
        n_clusters = len(groups)
        if n_clusters < 2:
            raise RegressionError("cluster covariance needs at least 2 clusters")
        labels = np.asarray(d.cluster_ids)
        meat = np.zeros((k, k))
        for g in groups:
            s = X[labels == g].T @ resid[labels == g]
            meat += np.outer(s, s)
        scale = n_clusters / (n_clusters - 1) * (n - 1) / df_resid
        cov = bread @ meat @ bread * scale
        df_inf = n_clusters - 1
    else:
        raise RegressionError(f"unknown se variant {se!r}")
    cov = (cov + cov.T) / 2

    std = np.sqrt(np.diag(cov))
    pvals = 2 * stats.t.sf(np.abs(beta / std), df_inf)

    r2 = 1 - rss / tss if tss > 0 else 1.0
    adj_r2 = 1 - (1 - r2) * (n - 1) / df_resid
    # Gaussian log-likelihood with variance RSS/n, with and without constants
    aic_core = n * math.log(rss / n) + 2 * k
    bic_core = n * math.log(rss / n) + k * math.log(n)
    const = n * (1 + math.log(2 * math.pi))
    if has_intercept and k > 1 and tss > rss:
        f_stat = (tss - rss) / (k - 1) / (rss / df_resid)
        f_pvalue = float(stats.f.sf(f_stat, k - 1, df_resid))
    else:
        f_stat, f_pvalue = float("nan"), float("nan")

    return RegressionResult(
        model_id=model_id,
        column_names=d.column_names,
        beta=beta,
        covariance=cov,
        cov_variant=se,
        std_errors=std,
        p_values=pvals,
        r2=r2,
        adj_r2=adj_r2,
        aic=aic_core + const,
        bic=bic_core + const,
        aic_core=aic_core,
        bic_core=bic_core,
        f_stat=float(f_stat),
        f_pvalue=f_pvalue,
        n_obs=n,
        df_resid=df_resid,
        df_inference=df_inf,
        n_clusters=n_clusters,
    )


# ---------------------------------------------------------------------------
# the published model battery


_CONTROLS = ["log_revenues", "log_emp", "cr4"]

INDUSTRY_MODELS = {
    "m1": {"focus": "q_revealed", "sample": "all"},
    "m2": {"focus": "q_hidden", "sample": "goods"},
    "m3": {"focus": "q_hidden", "sample": "services"},
    "m4": {"focus": "q_hidden", "sample": "all"},
    "m5": {"focus": "q_hidden", "sample": "all", "interactions": True},
}

COUNTY_MODELS = {
    "m1": ["log_gdppc", "divers", "f_job_based"],
    "m2": ["log_gdppc", "divers", "f_endogenous"],
    "m3": ["log_gdppc", "divers_res", "f_exogenous"],
}

MODEL_IDS = (
    [f"T1.{m}" for m in INDUSTRY_MODELS]
    + [f"T2.{m}" for m in INDUSTRY_MODELS]
    + [f"T4.{m}" for m in COUNTY_MODELS]
)


@dataclass(frozen=True)
class ModelData:
    """All computed series the model battery can draw on, keyed by entity id."""

    series: dict[str, dict[str, float]]
    is_service: dict[str, bool] = field(default_factory=dict)
    state_of: dict[str, str] = field(default_factory=dict)


def build_model(model_id: str, data: ModelData) -> DesignMatrix:
    """Assemble the design matrix of one named published model.

    Listwise deletion: an observation enters only if every required
    series covers it. The services-interaction model adds the dummy and
    all five interaction columns; the county models add one state dummy
    per FIPS prefix (first state as reference) and carry state cluster
    ids for the covariance.
    """
    table, _, model = model_id.partition(".")
    if table in ("T1", "T2"):
        if model not in INDUSTRY_MODELS:
            raise RegressionError(f"unknown model {model_id!r}")
        spec = INDUSTRY_MODELS[model]
        response = "log_wl" if table == "T1" else "lp_growth"
        regressors = [spec["focus"]] + _CONTROLS
        needed = [response] + regressors
        missing = [s for s in needed if s not in data.series]
        if missing:
            raise RegressionError(f"{model_id}: missing input series {missing}")
        obs = sorted(
            set.intersection(*(set(data.series[s]) for s in needed))
            & set(data.is_service)
        )
        if spec["sample"] == "goods":
            obs = [i for i in obs if not data.is_service[i]]
        elif spec["sample"] == "services":
            obs = [i for i in obs if data.is_service[i]]
        columns = {s: np.array([data.series[s][i] for i in obs]) for s in regressors}
        if spec.get("interactions"):
            serv = np.array([1.0 if data.is_service[i] else 0.0 for i in obs])
            columns["service"] = serv
            for s in regressors:
                columns[f"service_x_{s}"] = serv * columns[s]
        universe = set.intersection(*(set(data.series[s]) for s in [response]))
        y = [data.series[response][i] for i in obs]
        return build_design(
            obs,
            columns,
            response,
            y,
            n_dropped=len(universe) - len(obs),
        )

    if table == "T4":
        if model not in COUNTY_MODELS:
            raise RegressionError(f"unknown model {model_id!r}")
        regressors = COUNTY_MODELS[model]
        response = "gdppc_growth"
        needed = [response] + regressors
        missing = [s for s in needed if s not in data.series]
        if missing:
            raise RegressionError(f"{model_id}: missing input series {missing}")
        obs = sorted(set.intersection(*(set(data.series[s]) for s in needed)))
        states = sorted({data.state_of.get(c, c[:2]) for c in obs})
        columns = {s: np.array([data.series[s][c] for c in obs]) for s in regressors}
        for st in states[1:]:  # first state is the reference category
            columns[f"state_{st}"] = np.array(
                [1.0 if data.state_of.get(c, c[:2]) == st else 0.0 for c in obs]
            )
        y = [data.series[response][c] for c in obs]
        return build_design(
            obs,
            columns,
            response,
            y,
            cluster_ids=[data.state_of.get(c, c[:2]) for c in obs],
            n_dropped=len(data.series[response]) - len(obs),
        )

    raise RegressionError(f"unknown model {model_id!r}")


DEFAULT_SE = {"T1": "hc_robust", "T2": "hc_robust", "T4": "cluster"}


def run_model(model_id: str, data: ModelData) -> RegressionResult:
    d = build_model(model_id, data)
    return ols_fit(d, se=DEFAULT_SE[model_id.partition(".")[0]], model_id=model_id)


# ---------------------------------------------------------------------------
# Chow test


@dataclass(frozen=True)
class ChowTestResult:
    f_stat: float
    df_num: int
    df_den: int
    p_value: float
    variant: str  # all_deltas / deltas_excluding_intercept


def chow_test(full: RegressionResult, variant: str = "all_deltas") -> ChowTestResult:
    """Joint test that the group-interaction (delta) coefficients are zero.

    Wald statistic on the fitted covariance, divided by the number of
    restrictions, referred to an F distribution with the model's
    residual degrees of freedom.
    """
    if variant not in ("all_deltas", "deltas_excluding_intercept"):
        raise RegressionError(f"unknown Chow variant {variant!r}")
    delta_cols = [
        j
        for j, name in enumerate(full.column_names)
        if name.startswith("service_x_")
        or (name == "service" and variant == "all_deltas")
    ]
    if not any(n.startswith("service_x_") for n in full.column_names):
        raise RegressionError("model carries no interaction (delta) columns")
    if not delta_cols:
        raise RegressionError("zero restrictions requested")
    d = full.beta[delta_cols]
    v = full.covariance[np.ix_(delta_cols, delta_cols)]
    wald = float(d @ np.linalg.solve(v, d))
    q = len(delta_cols)
    f = wald / q
    return ChowTestResult(
        f_stat=f,
        df_num=q,
        df_den=full.df_inference,
        p_value=float(stats.f.sf(f, q, full.df_inference)),
        variant=variant,
    )


# ---------------------------------------------------------------------------
# reporting


def result_rows(result: RegressionResult) -> list[tuple]:
    """Per-term rows: model_id, term, coefficient, std_error, p_value, stars."""
    return [
        (
            result.model_id,
            name,
            float(result.beta[j]),
            float(result.std_errors[j]),
            float(result.p_values[j]),
            stars(float(result.p_values[j])),
        )
        for j, name in enumerate(result.column_names)
    ]


def summary_row(result: RegressionResult) -> tuple:
    return (
        result.model_id,
        result.r2,
        result.adj_r2,
        result.aic,
        result.bic,
        result.f_stat,
        result.f_pvalue,
        result.n_obs,
    )


def render_table(results: list[RegressionResult], title: str = "") -> str:
    """Plain-text table with coefficients over bracketed standard errors."""
    terms: list[str] = []
    for r in results:
        for name in r.column_names:
            if name not in terms and not name.startswith("state_"):
                terms.append(name)
    terms = [t for t in terms if t != "intercept"] + ["intercept"]
    width = max(len(t) for t in terms) + 2
    lines = []
    if title:
        lines.append(title)
    lines.append(" " * width + "".join(f"[{i + 1}]".rjust(14) for i in range(len(results))))
    for t in terms:
        coefs, ses = [], []
        for r in results:
            if t in r.column_names:
                coefs.append(f"{r.coef(t):.3f}{stars(r.pvalue(t))}".rjust(14))
                ses.append(f"({r.se(t):.3f})".rjust(14))
            else:
                coefs.append(" " * 14)
                ses.append(" " * 14)
        lines.append(t.ljust(width) + "".join(coefs))
        lines.append(" " * width + "".join(ses))
    for label, attr in [
        ("R2", "r2"),
        ("Adj. R2", "adj_r2"),
        ("AIC", "aic"),
        ("BIC", "bic"),
        ("F-statistic", "f_stat"),
        ("p-value (F)", "f_pvalue"),
        ("Observations", "n_obs"),
    ]:
        vals = []
        for r in results:
            v = getattr(r, attr)
            vals.append((f"{v}" if isinstance(v, int) else f"{v:.3f}").rjust(14))
        lines.append(label.ljust(width) + "".join(vals))
    return "\n".join(lines) + "\n"
