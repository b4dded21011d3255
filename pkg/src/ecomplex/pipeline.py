"""Config-driven pipeline: stage execution and CSV artifact I/O.

Stages run in dependency order (ingest -> binarize -> job fitness ->
industry complexity -> county fitness -> revealed measures ->
regressions -> reports); every intermediate is written as a CSV
artifact, and a run manifest records the config hash and row counts.
Stage commands read the artifacts of earlier stages, so each stage is
independently testable on disk.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from . import aggregate, econometrics, ingest, quotient, reports
from .efc import FitnessResult, SolverConfig, rank_of, solve_fitness
from .ingest import fmt
from .matrixcore import AxisLabels, BinaryBipartite, drop_empty

log = logging.getLogger("ecomplex")


class ConfigError(ValueError):
    """Bad or missing configuration (exit code 2)."""


class DataError(ValueError):
    """Invalid or insufficient input data (exit code 3)."""


class StageFailure(RuntimeError):
    """A pipeline stage failed (exit code 4)."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


CONFIG_SCHEMA = """\
# ecomplex pipeline configuration (TOML)

[inputs]                      # paths, relative to this file's directory
skills = "skills.csv"                         # skill_id,soc_code,importance
wages_job_industry = "wages_job_industry.csv" # soc_code,naics4,year,wage_bill_usd
employment = "employment.csv"                 # soc_code,naics4,year,employees
wages_industry_county = "wages_industry_county.csv" # fips,naics4,year,wage_bill_usd
industry_panel = "industry_panel.csv"
county_panel = "county_panel.csv"
exports = "exports.csv"        # optional; omit to skip revealed measures
concordance = "concordance.csv"  # optional; required with exports

[years]
base_year = 2017
horizon_year = 2022
export_years = [2012, 2013, 2014, 2015, 2016, 2017, 2018, 2019, 2020, 2021]

[solver]
max_iterations = 1000
rel_tolerance = 1e-10
underflow_floor = 1e-14

[output]
directory = "out"

[models]                      # any of T1.m1..m5, T2.m1..m5, T4.m1..m3
run = []                      # empty list means every model with inputs
"""

REQUIRED_INPUTS = (
    "skills",
    "wages_job_industry",
    "employment",
    "wages_industry_county",
    "industry_panel",
    "county_panel",
)
OPTIONAL_INPUTS = ("exports", "concordance")


@dataclass(frozen=True)
class PipelineConfig:
    inputs: dict[str, Path]
    base_year: int = 2017
    horizon_year: int = 2022
    export_years: tuple[int, ...] = tuple(range(2012, 2022))
    solver: SolverConfig = field(default_factory=SolverConfig)
    out_dir: Path = Path("out")
    models: tuple[str, ...] = ()

    def __post_init__(self):
        if self.base_year >= self.horizon_year:
            raise ConfigError("base_year must be earlier than horizon_year")
        missing = [k for k in REQUIRED_INPUTS if k not in self.inputs]
        if missing:
            raise ConfigError(f"missing required inputs: {missing}")
        for key, path in self.inputs.items():
            if key not in REQUIRED_INPUTS + OPTIONAL_INPUTS:
                raise ConfigError(f"unknown input key {key!r}")
            if not Path(path).is_file():
                raise ConfigError(f"input {key} not found: {path}")
        for m in self.models:
            if m not in econometrics.MODEL_IDS:
                raise ConfigError(f"unknown model id {m!r}")

    @property
    def has_exports(self) -> bool:
        return "exports" in self.inputs and "concordance" in self.inputs


def load_config(path, out_dir=None, models=None) -> PipelineConfig:
    try:
        import tomllib
    except ImportError:  # Python 3.10
        import tomli as tomllib
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    base = path.parent
    inputs = {
        k: base / v for k, v in raw.get("inputs", {}).items() if v
    }
    years = raw.get("years", {})
    solver_raw = raw.get("solver", {})
    try:
        solver = SolverConfig(
            max_iterations=int(solver_raw.get("max_iterations", 1000)),
            rel_tolerance=float(solver_raw.get("rel_tolerance", 1e-10)),
            underflow_floor=float(solver_raw.get("underflow_floor", 1e-14)),
        )
    except ValueError as exc:
        raise ConfigError(f"bad solver settings: {exc}") from exc
    out = Path(out_dir) if out_dir else base / raw.get("output", {}).get("directory", "out")
    return PipelineConfig(
        inputs=inputs,
        base_year=int(years.get("base_year", 2017)),
        horizon_year=int(years.get("horizon_year", 2022)),
        export_years=tuple(int(y) for y in years.get("export_years", range(2012, 2022))),
        solver=solver,
        out_dir=out,
        models=tuple(models if models is not None else raw.get("models", {}).get("run", [])),
    )


# ---------------------------------------------------------------------------
# artifact I/O


def _write(out_dir: Path, name: str, header, rows) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / name, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return len(rows)


def write_network(out_dir, name, m: BinaryBipartite) -> int:
    return _write(out_dir, name, ["row_id", "col_id"], m.sorted_cells())


def read_network(path, row_kind, col_kind) -> BinaryBipartite:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["row_id", "col_id"]:
            raise DataError(f"{path}: not a network artifact")
        pairs = [(r, c) for r, c in reader]
    return BinaryBipartite(
        AxisLabels.from_iterable(row_kind, (r for r, _ in pairs)),
        AxisLabels.from_iterable(col_kind, (c for _, c in pairs)),
        frozenset(pairs),
    )


def write_fitness(out_dir, name, result: FitnessResult) -> int:
    rows = [(i, s, fmt(v), st) for i, s, v, st in result.to_rows()]
    return _write(out_dir, name, ["entity_id", "side", "value", "status"], rows)


def read_fitness(path) -> FitnessResult:
    """Rehydrate a solver artifact (values and statuses only)."""
    fitness, complexity = {}, {}
    under_f, under_q = set(), set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        for entity, side, value, status in reader:
            target = fitness if side == "fitness" else complexity
            target[entity] = float(value)
            if status == "underflow":
                (under_f if side == "fitness" else under_q).add(entity)
    return FitnessResult(
        fitness,
        complexity,
        iterations_used=0,
        stop_reason="converged",
        underflowed_fitness_ids=frozenset(under_f),
        underflowed_complexity_ids=frozenset(under_q),
        trajectory_summary=(),
    )


def write_industry_complexity(out_dir, name, *measures) -> int:
    rows = []
    for q in measures:
        rows += [(i, fmt(q.values[i]), q.provenance) for i in sorted(q.values)]
    return _write(out_dir, name, ["naics4", "complexity", "provenance"], rows)


def read_industry_complexity(path, provenance) -> aggregate.IndustryComplexity:
    values = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        for naics, value, prov in reader:
            if prov == provenance:
                values[naics] = float(value)
    return aggregate.IndustryComplexity(values, provenance)


def write_county_fitness(out_dir, name, universe, *measures) -> int:
    rows = []
    for f in measures:
        for fips in sorted(set(universe) | f.coverage):
            covered = fips in f.coverage
            rows.append(
                (fips, fmt(f.values[fips]) if covered else "", f.provenance,
                 "true" if covered else "false")
            )
    return _write(out_dir, name, ["fips", "fitness", "provenance", "covered"], rows)


def read_county_fitness(path, provenance) -> aggregate.CountyFitness:
    values = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        for fips, value, prov, covered in reader:
            if prov == provenance and covered == "true":
                values[fips] = float(value)
    return aggregate.CountyFitness(values, provenance)


def write_diversification(out_dir, name, *indices) -> int:
    rows = []
    for d in indices:
        flag = "true" if d.restricted else "false"
        rows += [(fips, d.values[fips], flag) for fips in sorted(d.values)]
    return _write(out_dir, name, ["fips", "diversification", "restricted"], rows)


def read_diversification(path, restricted: bool):
    flag = "true" if restricted else "false"
    values = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)
        for fips, count, r in reader:
            if r == flag:
                values[fips] = int(count)
    return aggregate.DiversificationIndex(values, restricted)


# ---------------------------------------------------------------------------
# staged computations


def load_inputs(cfg: PipelineConfig):
    """Ingest stage: every configured table, validated."""
    data = {}
    data["skills"] = ingest.load_skill_job(cfg.inputs["skills"])
    data["wages_ji"] = ingest.load_wage_bipartite(
        cfg.inputs["wages_job_industry"], "job", "industry", cfg.base_year
    )
    data["employment"] = ingest.load_wage_bipartite(
        cfg.inputs["employment"], "job", "industry", cfg.base_year, value_col="employees"
    )
    data["county_wages"] = ingest.load_county_wages(
        cfg.inputs["wages_industry_county"], cfg.base_year
    )
    data["industry_panel"] = ingest.load_industry_panel(cfg.inputs["industry_panel"])
    data["county_panel"] = ingest.load_county_panel(cfg.inputs["county_panel"])
    if cfg.has_exports:
        data["exports"] = ingest.load_exports(cfg.inputs["exports"])
        data["concordance"] = ingest.load_concordance(cfg.inputs["concordance"])
    return data


def binarize_stage(cfg: PipelineConfig, data, out_dir: Path, counts: dict):
    """Quotients and the four binary networks."""
    m1 = quotient.binarize_skills(data["skills"].table)
    iwq = quotient.balassa_quotient(data["wages_ji"])
    m2 = quotient.binarize(iwq)
    wlq = quotient.balassa_quotient(data["county_wages"])
    m3 = quotient.binarize(wlq)
    counts["iwq.csv"] = _write(
        out_dir, "iwq.csv", ["row_id", "col_id", "quotient"],
        [(r, c, fmt(v)) for r, c, v in quotient.quotient_to_rows(iwq)],
    )
    counts["wlq.csv"] = _write(
        out_dir, "wlq.csv", ["row_id", "col_id", "quotient"],
        [(r, c, fmt(v)) for r, c, v in quotient.quotient_to_rows(wlq)],
    )
    counts["m1.csv"] = write_network(out_dir, "m1.csv", m1)
    counts["m2.csv"] = write_network(out_dir, "m2.csv", m2)
    counts["m3.csv"] = write_network(out_dir, "m3.csv", m3)
    nets = {"m1": m1, "m2": m2, "m3": m3}
    if "exports" in data:
        nets["m_exp"] = {}
        for year in cfg.export_years:
            if year not in data["exports"]:
                raise DataError(f"export year {year} missing from export data")
            mexp = quotient.binarize(quotient.balassa_quotient(data["exports"][year]))
            nets["m_exp"][year] = mexp
            counts[f"m_exp_{year}.csv"] = write_network(out_dir, f"m_exp_{year}.csv", mexp)
    return nets


def fitness_stage(cfg: PipelineConfig, nets, out_dir: Path, counts: dict):
    """Solver runs: job fitness, endogenous county fitness, yearly exports."""
    m1_clean, m1_report = drop_empty(nets["m1"].transpose())  # jobs x skills
    job_fitness = solve_fitness(m1_clean, cfg.solver)
    counts["job_fitness.csv"] = write_fitness(out_dir, "job_fitness.csv", job_fitness)
    m3_clean, m3_report = drop_empty(nets["m3"])
    endog = solve_fitness(m3_clean, cfg.solver)
    counts["endogenous_fitness.csv"] = write_fitness(
        out_dir, "endogenous_fitness.csv", endog
    )
    out = {
        "job_fitness": job_fitness,
        "endogenous": endog,
        "dropped": {
            "jobs_without_skills": list(m1_report.removed_rows),
            "skills_without_jobs": list(m1_report.removed_cols),
            "counties_without_links": list(m3_report.removed_rows),
        },
    }
    if "m_exp" in nets:
        out["export_yearly"] = {}
        for year, mexp in sorted(nets["m_exp"].items()):
            clean, _ = drop_empty(mexp)
            res = solve_fitness(clean, cfg.solver)
            out["export_yearly"][year] = res
            counts[f"export_fitness_{year}.csv"] = write_fitness(
                out_dir, f"export_fitness_{year}.csv", res
            )
    return out


def aggregate_stage(cfg, data, nets, fits, out_dir: Path, counts: dict):
    """Cross-layer aggregations and their CSV artifacts."""
    job_fitness = fits["job_fitness"]
    employment = data["employment"]
    # jobs present in employment but absent from the skill network cannot
    # carry a fitness value; they are excluded here and reported
    known = set(job_fitness.fitness)
    cells = {k: v for k, v in employment.cells.items() if k[0] in known}
    jobs_dropped = sorted({j for j, _ in employment.cells} - known)
    employment_used = type(employment)(
        AxisLabels.from_iterable("job", (j for j, _ in cells)),
        AxisLabels.from_iterable("industry", (i for _, i in cells)),
        cells,
    )
    q_hidden = aggregate.hidden_industry_complexity(employment_used, job_fitness)
    m3 = nets["m3"]
    f_jb = aggregate.hidden_county_fitness(m3, q_hidden)
    f_endog = aggregate.endogenous_county_fitness(fits["endogenous"])
    divers = aggregate.diversification(m3)
    universe = sorted(data["county_wages"].rows.ids)

    out = {
        "q_hidden": q_hidden,
        "f_jb": f_jb,
        "f_endog": f_endog,
        "divers": divers,
        "universe": universe,
        "jobs_without_fitness": jobs_dropped,
    }
    complexity_measures = [q_hidden]
    fitness_measures = [f_jb, f_endog]
    divers_indices = [divers]

    if "export_yearly" in fits:
        q_hs = aggregate.average_yearly_complexity(fits["export_yearly"])
        us_exports = {}
        for year in cfg.export_years:
            mat = data["exports"][year]
            for (c, p), v in mat.cells.items():
                if c == "USA":
                    us_exports[p] = us_exports.get(p, 0.0) + v / len(cfg.export_years)
        q_exp = aggregate.exogenous_industry_complexity(
            q_hs, data["concordance"], us_exports
        )
        f_exog = aggregate.exogenous_county_fitness(m3, q_exp)
        divers_res = aggregate.diversification(m3, restrict_to=q_exp.coverage)
        counts["product_complexity.csv"] = _write(
            out_dir, "product_complexity.csv", ["hs_code", "complexity"],
            [(p, fmt(v)) for p, v in sorted(q_hs.items())],
        )
        out.update(q_exp=q_exp, f_exog=f_exog, divers_res=divers_res)
        complexity_measures.append(q_exp)
        fitness_measures.append(f_exog)
        divers_indices.append(divers_res)

    counts["industry_complexity.csv"] = write_industry_complexity(
        out_dir, "industry_complexity.csv", *complexity_measures
    )
    counts["county_fitness.csv"] = write_county_fitness(
        out_dir, "county_fitness.csv", universe, *fitness_measures
    )
    counts["diversification.csv"] = write_diversification(
        out_dir, "diversification.csv", *divers_indices
    )
    return out


def model_data_from(cfg, data, aggs) -> econometrics.ModelData:
    macro = econometrics.derive_macro_variables(
        data["industry_panel"], data["county_panel"], cfg.base_year, cfg.horizon_year
    )
    series = dict(macro.industry)
    series.update(macro.county)
    series["q_hidden"] = aggs["q_hidden"].values
    series["f_job_based"] = aggs["f_jb"].values
    series["f_endogenous"] = aggs["f_endog"].values
    series["divers"] = {k: float(v) for k, v in aggs["divers"].values.items()}
    if "q_exp" in aggs:
        series["q_revealed"] = aggs["q_exp"].values
        series["f_exogenous"] = aggs["f_exog"].values
        series["divers_res"] = {
            k: float(v) for k, v in aggs["divers_res"].values.items()
        }
    return econometrics.ModelData(
        series=series,
        is_service=macro.is_service,
        state_of={c: c[:2] for c in series.get("gdppc_growth", {})},
    )


def regress_stage(cfg, model_data, out_dir: Path, counts: dict):
    """The model battery plus Chow tests on the interaction models."""
    wanted = list(cfg.models) if cfg.models else list(econometrics.MODEL_IDS)
    results, skipped = [], []
    for model_id in wanted:
        try:
            results.append(econometrics.run_model(model_id, model_data))
        except econometrics.RegressionError as exc:
            skipped.append((model_id, str(exc)))
            log.warning("skipping %s: %s", model_id, exc)
    term_rows, summary_rows, chow_rows = [], [], []
    for r in results:
        term_rows += [
            (m, t, fmt(c), fmt(s), fmt(p), st)
            for m, t, c, s, p, st in econometrics.result_rows(r)
        ]
        m, r2, ar2, aic, bic, f, fp, n = econometrics.summary_row(r)
        summary_rows.append((m, fmt(r2), fmt(ar2), fmt(aic), fmt(bic), fmt(f), fmt(fp), n))
        if any(name.startswith("service_x_") for name in r.column_names):
            for variant in ("all_deltas", "deltas_excluding_intercept"):
                ch = econometrics.chow_test(r, variant)
                chow_rows.append(
                    (r.model_id, variant, fmt(ch.f_stat), ch.df_num, ch.df_den,
                     fmt(ch.p_value))
                )
    counts["regressions.csv"] = _write(
        out_dir, "regressions.csv",
        ["model_id", "term", "coefficient", "std_error", "p_value", "stars"], term_rows,
    )
    counts["regression_summary.csv"] = _write(
        out_dir, "regression_summary.csv",
        ["model_id", "r2", "adj_r2", "aic", "bic", "f_stat", "f_pvalue", "n"],
        summary_rows,
    )
    counts["chow.csv"] = _write(
        out_dir, "chow.csv",
        ["model_id", "variant", "f_stat", "df_num", "df_den", "p_value"], chow_rows,
    )
    text = ""
    for table in ("T1", "T2", "T4"):
        group = [r for r in results if r.model_id.startswith(table)]
        if group:
            text += econometrics.render_table(group, title=table) + "\n"
    (out_dir / "tables.txt").write_text(text, encoding="utf-8")
    counts["tables.txt"] = len(text.splitlines())
    return results, skipped


def report_stage(cfg, aggs, out_dir: Path, counts: dict):
    """Scatter, distribution diagnostics, choropleth CSVs, rankings."""
    diagnostics = {}
    if "q_exp" in aggs:
        points = reports.scatter_points(aggs["q_hidden"], aggs["q_exp"])
        counts["scatter.csv"] = _write(
            out_dir, "scatter.csv",
            ["naics4", "hidden_complexity", "revealed_complexity", "is_outlier"],
            [(p.entity_id, fmt(p.x), fmt(p.y), "true" if p.is_outlier else "false")
             for p in points],
        )
        outliers = [p for p in points if p.is_outlier]
        counts["scatter_outliers.csv"] = _write(
            out_dir, "scatter_outliers.csv",
            ["naics4", "hidden_complexity", "revealed_complexity"],
            [(p.entity_id, fmt(p.x), fmt(p.y)) for p in outliers],
        )
        (out_dir / "scatter.svg").write_text(reports.scatter_svg(points), encoding="utf-8")
        counts["scatter.svg"] = len(points) - len(outliers)
    dist_rows, summary = [], []
    for name, f in (("job_based", aggs["f_jb"]), ("endogenous", aggs["f_endog"])):
        rep = reports.report_distribution(
            f, underflow_floor=cfg.solver.underflow_floor
        )
        dist_rows += [
            (name, fmt(rep.bin_edges[i]), fmt(rep.bin_edges[i + 1]), c)
            for i, c in enumerate(rep.counts)
        ]
        summary.append((name, rep.n_modes, fmt(rep.near_zero_fraction)))
        diagnostics[name] = {
            "modes": rep.n_modes,
            "near_zero_fraction": rep.near_zero_fraction,
        }
    counts["distribution.csv"] = _write(
        out_dir, "distribution.csv",
        ["measure", "log10_bin_lo", "log10_bin_hi", "count"], dist_rows,
    )
    counts["distribution_summary.csv"] = _write(
        out_dir, "distribution_summary.csv",
        ["measure", "modes", "near_zero_fraction"], summary,
    )
    universe = aggs["universe"]
    for name, key in (("job_based", "f_jb"), ("exogenous", "f_exog")):
        if key not in aggs:
            continue
        rows = [
            (fips, "" if v is None else fmt(v), "true" if cov else "false")
            for fips, v, cov in reports.choropleth_rows(aggs[key], universe)
        ]
        counts[f"choropleth_{name}.csv"] = _write(
            out_dir, f"choropleth_{name}.csv", ["fips", "value", "covered"], rows
        )
    return diagnostics


STAGES = (
    "ingest",
    "binarize",
    "fitness",
    "aggregate",
    "regress",
    "report",
)


def run_pipeline(cfg: PipelineConfig, strict: bool = False) -> dict:
    """Full end-to-end run; returns the manifest (also written to disk).

    Stage failures abort with the failing stage named; partial outputs
    are retained alongside a FAILED marker file.
    """
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    counts: dict[str, int] = {}
    produced, skipped_stages = [], []
    manifest: dict = {}
    stage = "ingest"
    try:
        log.info("stage ingest")
        data = load_inputs(cfg)
        stage = "binarize"
        log.info("stage binarize")
        nets = binarize_stage(cfg, data, out_dir, counts)
        stage = "fitness"
        log.info("stage fitness")
        fits = fitness_stage(cfg, nets, out_dir, counts)
        stage = "aggregate"
        log.info("stage aggregate")
        aggs = aggregate_stage(cfg, data, nets, fits, out_dir, counts)
        stage = "regress"
        log.info("stage regress")
        model_data = model_data_from(cfg, data, aggs)
        results, skipped_models = regress_stage(cfg, model_data, out_dir, counts)
        stage = "report"
        log.info("stage report")
        diagnostics = report_stage(cfg, aggs, out_dir, counts)
    except Exception as exc:
        (out_dir / "FAILED").write_text(f"{stage}: {exc}\n", encoding="utf-8")
        raise StageFailure(stage, exc) from exc

    produced = STAGES[:]
    if not cfg.has_exports:
        skipped_stages = ["revealed_measures"]

    _matched, unmatched = ingest.match_report(
        data["employment"].cols.ids, data["industry_panel"]
    )
    uncovered_exog = (
        sorted(set(aggs["universe"]) - aggs["f_exog"].coverage)
        if "f_exog" in aggs
        else []
    )
    manifest = {
        "config_sha256": _config_hash(cfg),
        "produced": list(produced),
        "skipped_stages": skipped_stages,
        "skipped_models": [list(s) for s in skipped_models],
        "artifacts": dict(sorted(counts.items())),
        "unmatched_industries": unmatched,
        "jobs_without_fitness": aggs["jobs_without_fitness"],
        "uncovered_exogenous_counties": len(uncovered_exog),
        "distribution_diagnostics": diagnostics,
        "models_run": [r.model_id for r in results],
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if strict and (unmatched or uncovered_exog or skipped_stages or aggs["jobs_without_fitness"]):
        raise DataError(
            "strict mode: coverage gaps present "
            f"(unmatched industries: {len(unmatched)}, "
            f"uncovered exogenous counties: {len(uncovered_exog)}, "
            f"skipped stages: {skipped_stages})"
        )
    return manifest


def _config_hash(cfg: PipelineConfig) -> str:
    h = hashlib.sha256()
    payload = {
        "inputs": {k: str(v) for k, v in sorted(cfg.inputs.items())},
        "base_year": cfg.base_year,
        "horizon_year": cfg.horizon_year,
        "export_years": list(cfg.export_years),
        "solver": [
            cfg.solver.max_iterations,
            cfg.solver.rel_tolerance,
            cfg.solver.underflow_floor,
        ],
        "models": list(cfg.models),
    }
    h.update(json.dumps(payload, sort_keys=True).encode())
    return h.hexdigest()


def ranked_rows(result: FitnessResult, side: str) -> list[tuple[int, str, str]]:
    ids = rank_of(result, side)
    values = result.fitness if side == "fitness" else result.complexity
    return [(i + 1, e, fmt(values[e])) for i, e in enumerate(ids)]
