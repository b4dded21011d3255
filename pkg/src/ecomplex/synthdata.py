"""Deterministic synthetic-world generator with planted ground truth.

Implements the capability model: an actor performs an activity iff it
holds every capability the activity requires. Network topology is a
pure function of the seed through an integer counter-based RNG
(splitmix64 finalizer with fixed constants), so fixtures are
byte-identical across platforms; Gaussian noise enters panel variables
only, never topology.

The generator runs the real quotient / solver / aggregation code on
its own networks, then plants regression effects on top of the
resulting complexity values, so downstream models are exactly linear
in the regressors the pipeline recomputes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from . import aggregate, ingest, quotient
from .efc import FitnessResult, SolverConfig, solve_fitness
from .ingest import (
    ConcordanceMap,
    CountyPanel,
    CountyRecord,
    IndustryPanel,
    IndustryRecord,
    SkillImportanceTable,
)
from .matrixcore import AxisLabels, BinaryBipartite, WeightedBipartite, drop_empty

_MASK = (1 << 64) - 1
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_GOLDEN = 0x9E3779B97F4A7C15
_TWO53 = float(1 << 53)


def mix64(z: int) -> int:
    """splitmix64 finalizer; the sole source of pseudo-randomness."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


class Stream:
    """One independent counter-based random stream."""

    def __init__(self, key: int):
        self.key = key & _MASK
        self.counter = 0

    def u64(self) -> int:
        self.counter += 1
        return mix64((self.key + self.counter * _GOLDEN) & _MASK)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        return lo + (hi - lo) * ((self.u64() >> 11) / _TWO53)

    def randint(self, n: int) -> int:
        """Integer in [0, n); modulo bias is negligible for n << 2^64."""
        return self.u64() % n

    def normal(self, mean: float = 0.0, sd: float = 1.0) -> float:
        u1 = ((self.u64() >> 11) + 1) / (_TWO53 + 1)
        u2 = (self.u64() >> 11) / _TWO53
        return mean + sd * math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def sample(self, n: int, k: int) -> list[int]:
        """k distinct integers from [0, n), partial Fisher-Yates."""
        if k > n:
            raise ValueError(f"cannot sample {k} from {n}")
        pool = list(range(n))
        for i in range(k):
            j = i + self.randint(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]


class CounterRng:
    """Root generator: named substreams derived from the seed."""

    def __init__(self, seed: int):
        self.seed = seed & _MASK

    def stream(self, *labels) -> Stream:
        key = mix64(self.seed ^ _GOLDEN)
        for label in labels:
            if isinstance(label, int):
                key = mix64(key ^ mix64(label ^ _MIX2))
            else:
                h = 0
                for b in str(label).encode():
                    h = mix64((h << 8 | h >> 56) ^ b)
                key = mix64(key ^ h)
        return Stream(key)


# ---------------------------------------------------------------------------
# capability model


@dataclass(frozen=True)
class CapabilityWorld:
    seed: int
    capabilities: tuple[str, ...]
    endowments: dict[str, frozenset[str]]  # actor -> capability set
    requirements: dict[str, frozenset[str]]  # activity -> capability set
    planted_effects: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for name, sets in (("endowments", self.endowments), ("requirements", self.requirements)):
            empty = sorted(k for k, v in sets.items() if not v)
            if empty:
                raise ValueError(f"{name} with empty capability set: {empty[:5]}")


def realize_bipartite(
    w: CapabilityWorld, row_kind: str = "job", col_kind: str = "skill"
) -> BinaryBipartite:
    """Actor-activity cell present iff the actor holds every required capability."""
    pairs = frozenset(
        (actor, activity)
        for actor, held in w.endowments.items()
        for activity, needed in w.requirements.items()
        if needed <= held
    )
    return BinaryBipartite(
        AxisLabels.from_iterable(row_kind, w.endowments),
        AxisLabels.from_iterable(col_kind, w.requirements),
        pairs,
    )


# ---------------------------------------------------------------------------
# quadripartite fixture generation


@dataclass(frozen=True)
class Sizes:
    n_skills: int = 68
    n_jobs: int = 400
    n_industries: int = 220
    n_counties: int = 500
    n_countries: int = 25
    n_products: int = 80
    export_years: tuple[int, ...] = tuple(range(2012, 2022))
    base_year: int = 2017
    horizon_year: int = 2022

    def __post_init__(self):
        for f in fields(self):
            if f.name.startswith("n_") and getattr(self, f.name) < 2:
                raise ValueError(f"{f.name} must be >= 2")


@dataclass(frozen=True)
class PlantedEffects:
    wage_intercept: float = 7.0
    wage_elasticity: float = 0.9  # on hidden industry complexity
    wage_rev_coef: float = 0.2
    wage_emp_coef: float = -0.2
    wage_cr4_coef: float = 0.002
    wage_service_shift: float = -0.5
    wage_noise_sd: float = 0.15
    lp_intercept: float = 0.05
    lp_elasticity: float = 0.2
    lp_noise_sd: float = 0.1
    growth_intercept: float = 0.5
    growth_fitness_coef: float = 0.4
    growth_divers_coef: float = -0.02
    growth_convergence_coef: float = -0.05
    growth_state_sd: float = 0.02
    growth_noise_sd: float = 0.05
    service_only_county_frac: float = 0.35

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class SyntheticWorld:
    seed: int
    sizes: Sizes
    planted: PlantedEffects
    skill_table: SkillImportanceTable
    wages_job_industry: dict[int, WeightedBipartite]
    employment: dict[int, WeightedBipartite]
    county_wages: dict[int, WeightedBipartite]
    exports: dict[int, WeightedBipartite]
    industry_panel: IndustryPanel
    county_panel: CountyPanel
    concordance: ConcordanceMap
    service_only_counties: frozenset[str]
    job_fitness: FitnessResult
    truth: dict[str, dict[str, float]]  # regression-ready planted series


def _goods_code(i: int) -> str:
    prefix = ("21", "31", "32", "33")[i % 4]
    return f"{prefix}{10 + i // 4:02d}"


def _service_code(i: int) -> str:
    prefix = ("42", "44", "48", "51", "52", "54", "61", "62", "71", "72")[i % 10]
    return f"{prefix}{10 + i // 10:02d}"


def _country_code(i: int) -> str:
    if i == 0:
        return "USA"
    i -= 1
    return f"{chr(65 + i // 26)}{chr(65 + i % 26)}X"


def build_capability_world(seed: int, n_skills: int, n_jobs: int) -> CapabilityWorld:
    """Jobs hold capabilities, skills require them; subset rule links them."""
    rng = CounterRng(seed)
    n_caps = max(6, n_skills // 3)
    caps = tuple(f"cap_{i:03d}" for i in range(n_caps))
    endowments = {}
    for j in range(n_jobs):
        s = rng.stream("endowment", j)
        k = 1 + int(s.uniform() ** 2 * (n_caps - 1))
        endowments[f"{11 + j % 40:02d}-{1000 + j:04d}"] = frozenset(
            caps[i] for i in s.sample(n_caps, k)
        )
    requirements = {}
    for i in range(n_skills):
        s = rng.stream("requirement", i)
        k = 1 + s.randint(3)
        requirements[f"skill_{i:03d}"] = frozenset(caps[i] for i in s.sample(n_caps, k))
    return CapabilityWorld(seed, caps, endowments, requirements)


def _skill_importances(rng: CounterRng, m1: BinaryBipartite) -> SkillImportanceTable:
    """Importance scores that reproduce the planted links under the
    per-skill mean threshold: linked pairs score in (4, 5], and each
    skill also rates enough unlinked jobs low in [1, 2] to pull the
    mean strictly between the two bands."""
    links_by_skill: dict[str, list[str]] = {}
    for job, skill in m1.cells:
        links_by_skill.setdefault(skill, []).append(job)
    cells: dict[tuple[str, str], float] = {}
    jobs = sorted(m1.rows.ids)
    for skill in sorted(links_by_skill):
        linked = sorted(links_by_skill[skill])
        s = rng.stream("importance", skill)
        for job in linked:
            cells[(skill, job)] = 4.0 + s.uniform()
        unlinked = [j for j in jobs if j not in set(linked)]
        # strictly more than half as many low ratings as links keeps the
        # per-skill mean strictly inside (2, 4), so thresholding at the
        # mean reproduces the planted links exactly
        n_low = min(len(unlinked), len(linked) // 2 + 1)
        for idx in s.sample(len(unlinked), n_low):
            cells[(skill, unlinked[idx])] = 1.0 + s.uniform()
    rows = AxisLabels.from_iterable("skill", (k for k, _ in cells))
    cols = AxisLabels.from_iterable("job", (j for _, j in cells))
    return SkillImportanceTable(WeightedBipartite(rows, cols, cells))


def generate_quadripartite(
    seed: int,
    sizes: Sizes | None = None,
    planted: PlantedEffects | None = None,
) -> SyntheticWorld:
    """Generate the full self-consistent CSV fixture family."""
    sizes = sizes or Sizes()
    planted = planted or PlantedEffects()
    rng = CounterRng(seed)
    base, horizon = sizes.base_year, sizes.horizon_year

    # --- skill-job layer -------------------------------------------------
    cap_world = build_capability_world(seed, sizes.n_skills, sizes.n_jobs)
    m1_jobs_skills = realize_bipartite(cap_world)  # jobs x skills
    skill_table = _skill_importances(rng, m1_jobs_skills)
    m1b = quotient.binarize_skills(skill_table.table)  # skills x jobs
    m1_clean, _ = drop_empty(m1b.transpose())  # jobs x skills
    job_fitness = solve_fitness(m1_clean, SolverConfig())
    jobs_active = sorted(job_fitness.fitness)

    # --- job-industry layer ----------------------------------------------
    n_goods = max(2, round(sizes.n_industries * 0.34))
    goods = [_goods_code(i) for i in range(n_goods)]
    services = [_service_code(i) for i in range(sizes.n_industries - n_goods)]
    industries = sorted(goods + services)
    employment_cells: dict[tuple[str, str], float] = {}
    wage_cells: dict[tuple[str, str], float] = {}
    wage_rate = {
        j: 3e4 * math.exp(0.3 * job_fitness.fitness[j]) for j in jobs_active
    }
    for naics in industries:
        s = rng.stream("industry_jobs", naics)
        n_ij = min(len(jobs_active), 4 + s.randint(9))
        for idx in s.sample(len(jobs_active), n_ij):
            job = jobs_active[idx]
            emp = 20 + s.randint(4981)
            employment_cells[(job, naics)] = float(emp)
            wage_cells[(job, naics)] = emp * wage_rate[job] * math.exp(s.normal(0, 0.2))
    employment17 = WeightedBipartite(
        AxisLabels.from_iterable("job", (j for j, _ in employment_cells)),
        AxisLabels.from_iterable("industry", industries),
        employment_cells,
    )
    wages17 = WeightedBipartite(employment17.rows, employment17.cols, wage_cells)
    s_grow = rng.stream("wage_growth")
    wages22 = WeightedBipartite(
        wages17.rows,
        wages17.cols,
        {k: v * math.exp(0.05 + 0.02 * s_grow.normal()) for k, v in sorted(wage_cells.items())},
    )

    q_hidden = aggregate.hidden_industry_complexity(employment17, job_fitness)

    # --- county-industry layer -------------------------------------------
    n_states = max(2, min(50, sizes.n_counties // 10 or 2))
    counties = []
    state_of = {}
    for c in range(sizes.n_counties):
        fips = f"{c % n_states + 1:02d}{c // n_states + 1:03d}"
        counties.append(fips)
        state_of[fips] = fips[:2]
    counties.sort()
    n_service_only = int(round(planted.service_only_county_frac * sizes.n_counties))
    pick = rng.stream("service_only").sample(sizes.n_counties, n_service_only)
    service_only = frozenset(counties[i] for i in pick)

    county_cells: dict[tuple[str, str], float] = {}
    mixed_idx = 0
    for ci, fips in enumerate(counties):
        s = rng.stream("county_industries", fips)
        pool = services if fips in service_only else industries
        n_ci = min(len(pool), 3 + s.randint(10))
        chosen = [pool[i] for i in s.sample(len(pool), n_ci)]
        if fips in service_only:
            anchor = chosen[0]
        else:
            # round-robin goods anchor keeps every mixed county's top
            # industry a goods one with a location quotient far above 1
            anchor = goods[mixed_idx % len(goods)]
            mixed_idx += 1
            if anchor not in chosen:
                chosen.append(anchor)
        base_wage = 1e6 * math.exp(s.normal(0, 0.3))
        for naics in chosen:
            share = 0.45 if naics == anchor else 0.55 * s.uniform(0.2, 1.0) / max(1, n_ci - 1)
            county_cells[(fips, naics)] = base_wage * share
    county_wages17 = WeightedBipartite(
        AxisLabels.from_iterable("county", counties),
        AxisLabels.from_iterable("industry", (i for _, i in county_cells)),
        county_cells,
    )
    s_cgrow = rng.stream("county_wage_growth")
    county_wages22 = WeightedBipartite(
        county_wages17.rows,
        county_wages17.cols,
        {k: v * math.exp(0.04 + 0.02 * s_cgrow.normal()) for k, v in sorted(county_cells.items())},
    )
    m3 = quotient.binarize(quotient.balassa_quotient(county_wages17))
    f_jb = aggregate.hidden_county_fitness(m3, q_hidden)
    divers = aggregate.diversification(m3)

    # --- export layer -----------------------------------------------------
    countries = [_country_code(i) for i in range(sizes.n_countries)]
    products = [f"{101 + p:04d}" for p in range(sizes.n_products)]
    cap_rank = {c: sizes.n_products if c == "USA" else None for c in countries}
    s_cap = rng.stream("country_caps")
    for i, c in enumerate(sorted(countries)):
        if cap_rank[c] is None:
            cap_rank[c] = 1 + s_cap.randint(sizes.n_products)
    difficulty = {p: i % sizes.n_products for i, p in enumerate(sorted(products))}
    exports: dict[int, WeightedBipartite] = {}
    for year in sizes.export_years:
        cells = {}
        s = rng.stream("exports", year)
        for c in sorted(countries):
            for p in sorted(products):
                if difficulty[p] < cap_rank[c]:  # nested subset rule
                    cells[(c, p)] = 1e6 * math.exp(s.normal(0, 0.5))
        exports[year] = WeightedBipartite(
            AxisLabels.from_iterable("country", countries),
            AxisLabels.from_iterable("product", products),
            cells,
        )
    yearly: dict[int, FitnessResult] = {}
    for year, mat in exports.items():
        mexp, _ = drop_empty(quotient.binarize(quotient.balassa_quotient(mat)))
        yearly[year] = solve_fitness(mexp, SolverConfig())
    q_hs = aggregate.average_yearly_complexity(yearly)
    us_exports = {
        p: sum(exports[y].weight("USA", p) for y in sizes.export_years)
        / len(sizes.export_years)
        for p in products
    }

    conc_entries = []
    s_conc = rng.stream("concordance")
    scored = sorted(p for p in products if p in q_hs and us_exports[p] > 0)
    for gi, naics in enumerate(sorted(goods)):
        n_hs = 1 + s_conc.randint(3)
        picks = {scored[gi % len(scored)]}
        while len(picks) < min(n_hs, len(scored)):
            picks.add(scored[s_conc.randint(len(scored))])
        for hs in sorted(picks):
            conc_entries.append((hs, naics, round(0.2 + s_conc.uniform(), 6)))
    concordance = ConcordanceMap(tuple(sorted(conc_entries)))
    q_exp = aggregate.exogenous_industry_complexity(q_hs, concordance, us_exports)
    f_exog = aggregate.exogenous_county_fitness(m3, q_exp)
    divers_res = aggregate.diversification(m3, restrict_to=q_exp.coverage)
    endog = solve_fitness(drop_empty(m3)[0], SolverConfig())
    f_endog = aggregate.endogenous_county_fitness(endog)

    # sanity: coverage must equal the planted construction exactly
    if f_exog.coverage != frozenset(counties) - service_only:
        raise AssertionError("export coverage does not match the planted construction")
    if f_jb.coverage != frozenset(counties):
        raise AssertionError("hidden fitness does not cover every county")

    # --- industry panel with planted wage and productivity effects -------
    ind_records: dict[tuple[str, int], IndustryRecord] = {}
    for naics in industries:
        s = rng.stream("industry_panel", naics)
        emp17 = sum(
            v for (j, i), v in employment_cells.items() if i == naics
        )
        rev17 = emp17 * 1.5e5 * math.exp(s.normal(0, 0.4))
        cr4 = round(s.uniform(0, 100), 4)
        is_serv = naics in set(services)
        log_wl = (
            planted.wage_intercept
            + planted.wage_elasticity * q_hidden.values[naics]
            + planted.wage_rev_coef * math.log(rev17)
            + planted.wage_emp_coef * math.log(emp17)
            + planted.wage_cr4_coef * cr4
            + (planted.wage_service_shift if is_serv else 0.0)
            + s.normal(0, planted.wage_noise_sd)
        )
        comp17 = math.exp(log_wl) * emp17
        lp = (
            planted.lp_intercept
            + planted.lp_elasticity * q_hidden.values[naics]
            + s.normal(0, planted.lp_noise_sd)
        )
        ppi17 = 100.0
        ppi22 = 100.0 * math.exp(s.normal(0.15, 0.05))
        emp22 = emp17
        rev22 = rev17 * (ppi22 / ppi17) * math.exp(lp)
        comp22 = comp17 * 1.1
        ind_records[(naics, base)] = IndustryRecord(
            rev17, emp17, comp17, cr4, ppi17, is_serv
        )
        ind_records[(naics, horizon)] = IndustryRecord(
            rev22, emp22, comp22, cr4, ppi22, is_serv
        )
    industry_panel = IndustryPanel(ind_records)

    # --- county panel with planted growth effects ------------------------
    cty_records: dict[tuple[str, int], CountyRecord] = {}
    s_state = rng.stream("state_effects")
    state_effect = {
        st: s_state.normal(0, planted.growth_state_sd)
        for st in sorted({state_of[c] for c in counties})
    }
    for fips in counties:
        s = rng.stream("county_panel", fips)
        gdppc17 = math.exp(10.0 + 0.1 * f_jb.values[fips] + s.normal(0, 0.3))
        growth = (
            planted.growth_intercept
            + planted.growth_fitness_coef * f_jb.values[fips]
            + planted.growth_divers_coef * divers.values[fips]
            + planted.growth_convergence_coef * math.log(gdppc17)
            + state_effect[state_of[fips]]
            + s.normal(0, planted.growth_noise_sd)
        )
        gdppc22 = gdppc17 * math.exp(growth)
        pop = 1000 + s.randint(999000)
        cty_records[(fips, base)] = CountyRecord(gdppc17, float(pop))
        cty_records[(fips, horizon)] = CountyRecord(gdppc22, float(pop))
    county_panel = CountyPanel(cty_records)

    truth = {
        "q_hidden": dict(q_hidden.values),
        "q_revealed": dict(q_exp.values),
        "f_job_based": dict(f_jb.values),
        "f_endogenous": dict(f_endog.values),
        "f_exogenous": dict(f_exog.values),
        "divers": {k: float(v) for k, v in divers.values.items()},
        "divers_res": {k: float(v) for k, v in divers_res.values.items()},
    }

    return SyntheticWorld(
        seed=seed,
        sizes=sizes,
        planted=planted,
        skill_table=skill_table,
        wages_job_industry={base: wages17, horizon: wages22},
        employment={base: employment17, horizon: employment17},
        county_wages={base: county_wages17, horizon: county_wages22},
        exports=exports,
        industry_panel=industry_panel,
        county_panel=county_panel,
        concordance=concordance,
        service_only_counties=service_only,
        job_fitness=job_fitness,
        truth=truth,
    )


def write_fixtures(world: SyntheticWorld, out_dir) -> None:
    """Write the fixture family in the exact ingest CSV schemas."""
    from pathlib import Path

    out = Path(out_dir)
    ingest.write_skill_job(out / "skills.csv", world.skill_table)
    ingest.write_yearly_cells(
        out / "wages_job_industry.csv", "wages_job_industry", world.wages_job_industry
    )
    ingest.write_yearly_cells(out / "employment.csv", "employment", world.employment)
    ingest.write_yearly_cells(
        out / "wages_industry_county.csv", "wages_industry_county", world.county_wages
    )
    ingest.write_yearly_cells(out / "exports.csv", "exports", world.exports)
    ingest.write_industry_panel(out / "industry_panel.csv", world.industry_panel)
    ingest.write_county_panel(out / "county_panel.csv", world.county_panel)
    ingest.write_concordance(out / "concordance.csv", world.concordance)
    rows = [("seed", world.seed)]
    rows += [(f.name, getattr(world.sizes, f.name)) for f in fields(Sizes)]
    rows += sorted(world.planted.as_dict().items())
    rows.append(("service_only_counties", ";".join(sorted(world.service_only_counties))))
    ingest._write_csv(out / "MANIFEST.csv", ["key", "value"], rows)
