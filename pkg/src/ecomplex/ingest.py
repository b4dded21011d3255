"""CSV readers and writers for the five input table families.

All files are UTF-8, comma-separated, with a mandatory header row and
`.` decimal separator. Loaders reject malformed rows instead of
coercing them; error messages carry line numbers. Missing values are
empty fields, never sentinel numbers (QCEW privacy suppression must
not masquerade as zeros).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from .matrixcore import AxisLabels, WeightedBipartite

GOODS_PREFIXES = ("21", "31", "32", "33")

SCHEMAS = {
    "skills": ["skill_id", "soc_code", "importance"],
    "wages_job_industry": ["soc_code", "naics4", "year", "wage_bill_usd"],
    "wages_industry_county": ["fips", "naics4", "year", "wage_bill_usd"],
    "employment": ["soc_code", "naics4", "year", "employees"],
    "exports": ["country_iso3", "hs_code", "year", "export_usd"],
    "industry_panel": [
        "naics4",
        "year",
        "revenues_usd",
        "employees",
        "compensation_usd",
        "cr4_pct",
        "ppi_index",
        "is_service",
    ],
    "county_panel": ["fips", "year", "gdp_per_capita", "population"],
    "concordance": ["hs_code", "naics4", "weight"],
}


class IngestError(ValueError):
    """Raised on schema mismatch, out-of-range values, or duplicate keys."""


def fmt(x: float) -> str:
    """Canonical float rendering: 12 significant digits, '.' decimal."""
    return f"{x:.12g}"


def _read_rows(path, schema_name):
    expected = SCHEMAS[schema_name]
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError(f"{path}: empty file") from None
        if header != expected:
            raise IngestError(
                f"{path}: header {header} does not match schema {expected}"
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(expected):
                raise IngestError(f"{path}:{lineno}: expected {len(expected)} fields")
            rows.append((lineno, row))
    if not rows:
        raise IngestError(f"{path}: no data rows")
    return rows


def _parse_float(path, lineno, name, value, allow_missing=False):
    if value == "":
        if allow_missing:
            return None
        raise IngestError(f"{path}:{lineno}: missing {name}")
    try:
        return float(value)
    except ValueError:
        raise IngestError(f"{path}:{lineno}: bad {name} {value!r}") from None


@dataclass(frozen=True)
class SkillImportanceTable:
    """Skills x jobs importance scores in [1, 5]."""

    table: WeightedBipartite


def load_skill_job(path) -> SkillImportanceTable:
    cells = {}
    for lineno, (skill, soc, imp) in _read_rows(path, "skills"):
        score = _parse_float(path, lineno, "importance", imp)
        if not 1.0 <= score <= 5.0:
            raise IngestError(f"{path}:{lineno}: importance {score} outside [1, 5]")
        key = (skill, soc)
        if key in cells:
            raise IngestError(f"{path}:{lineno}: duplicate (skill, job) pair {key}")
        cells[key] = score
    rows = AxisLabels.from_iterable("skill", (s for s, _ in cells))
    cols = AxisLabels.from_iterable("job", (j for _, j in cells))
    return SkillImportanceTable(WeightedBipartite(rows, cols, cells))


def load_wage_bipartite(path, row_kind, col_kind, year, value_col="wage_bill_usd"):
    """Load one year of a (row, col, year, value) wage or employment file.

    Duplicate (row, col) cells within the year are summed: BLS extracts
    may split cells by ownership class.
    """
    schema = {
        "wage_bill_usd": "wages_job_industry" if row_kind == "job" else "wages_industry_county",
        "employees": "employment",
    }[value_col]
    cells: dict[tuple[str, str], float] = {}
    years_seen = set()
    for lineno, (rid, cid, yr, value) in _read_rows(path, schema):
        years_seen.add(yr)
        v = _parse_float(path, lineno, value_col, value)
        if v < 0:
            raise IngestError(f"{path}:{lineno}: negative {value_col} {v}")
        if yr != str(year):
            continue
        cells[(rid, cid)] = cells.get((rid, cid), 0.0) + v
    if str(year) not in years_seen:
        raise IngestError(f"{path}: year {year} not present (have {sorted(years_seen)})")
    rows = AxisLabels.from_iterable(row_kind, (r for r, _ in cells))
    cols = AxisLabels.from_iterable(col_kind, (c for _, c in cells))
    return WeightedBipartite(rows, cols, cells)


def load_county_wages(path, year) -> WeightedBipartite:
    """Counties x industries wage bills for one year."""
    cells: dict[tuple[str, str], float] = {}
    years_seen = set()
    for lineno, (fips, naics, yr, value) in _read_rows(path, "wages_industry_county"):
        years_seen.add(yr)
        v = _parse_float(path, lineno, "wage_bill_usd", value)
        if v < 0:
            raise IngestError(f"{path}:{lineno}: negative wage_bill_usd {v}")
        if yr != str(year):
            continue
        cells[(fips, naics)] = cells.get((fips, naics), 0.0) + v
    if str(year) not in years_seen:
        raise IngestError(f"{path}: year {year} not present (have {sorted(years_seen)})")
    rows = AxisLabels.from_iterable("county", (r for r, _ in cells))
    cols = AxisLabels.from_iterable("industry", (c for _, c in cells))
    return WeightedBipartite(rows, cols, cells)


def load_exports(path) -> dict[int, WeightedBipartite]:
    """All years of a country-product export file, one matrix per year."""
    per_year: dict[int, dict[tuple[str, str], float]] = {}
    for lineno, (country, hs, yr, value) in _read_rows(path, "exports"):
        v = _parse_float(path, lineno, "export_usd", value)
        if v < 0:
            raise IngestError(f"{path}:{lineno}: negative export_usd {v}")
        try:
            year = int(yr)
        except ValueError:
            raise IngestError(f"{path}:{lineno}: bad year {yr!r}") from None
        cells = per_year.setdefault(year, {})
        cells[(country, hs)] = cells.get((country, hs), 0.0) + v
    out = {}
    for year in sorted(per_year):
        cells = per_year[year]
        rows = AxisLabels.from_iterable("country", (r for r, _ in cells))
        cols = AxisLabels.from_iterable("product", (c for _, c in cells))
        out[year] = WeightedBipartite(rows, cols, cells)
    return out


@dataclass(frozen=True)
class IndustryRecord:
    revenues: float | None
    employees: float | None
    compensation: float | None
    cr4: float | None
    ppi: float | None
    is_service: bool


@dataclass(frozen=True)
class IndustryPanel:
    records: dict[tuple[str, int], IndustryRecord] = field(default_factory=dict)

    def industries(self) -> list[str]:
        return sorted({i for i, _ in self.records})

    def get(self, naics4: str, year: int) -> IndustryRecord | None:
        return self.records.get((naics4, year))

    def is_service(self, naics4: str) -> bool:
        for (i, _y), rec in sorted(self.records.items()):
            if i == naics4:
                return rec.is_service
        raise KeyError(naics4)


@dataclass(frozen=True)
class CountyRecord:
    gdp_per_capita: float | None
    population: float | None


@dataclass(frozen=True)
class CountyPanel:
    records: dict[tuple[str, int], CountyRecord] = field(default_factory=dict)

    def counties(self) -> list[str]:
        return sorted({c for c, _ in self.records})

    def get(self, fips: str, year: int) -> CountyRecord | None:
        return self.records.get((fips, year))

    @staticmethod
    def state_of(fips: str) -> str:
        return fips[:2]


@dataclass(frozen=True)
class ConcordanceMap:
    """Weighted many-to-many HS product to NAICS industry mapping."""

    entries: tuple[tuple[str, str, float], ...]

    def for_industry(self, naics4: str) -> list[tuple[str, float]]:
        return [(hs, w) for hs, i, w in self.entries if i == naics4]

    def industries(self) -> list[str]:
        return sorted({i for _, i, _ in self.entries})


def default_is_service(naics4: str) -> bool:
    """NAICS sector prefix rule: 21 and 31-33 are goods, the rest services."""
    return naics4[:2] not in GOODS_PREFIXES


def load_industry_panel(path) -> IndustryPanel:
    records = {}
    for lineno, row in _read_rows(path, "industry_panel"):
        naics, yr, rev, emp, comp, cr4, ppi, serv = row
        try:
            year = int(yr)
        except ValueError:
            raise IngestError(f"{path}:{lineno}: bad year {yr!r}") from None
        rev_v = _parse_float(path, lineno, "revenues_usd", rev, allow_missing=True)
        emp_v = _parse_float(path, lineno, "employees", emp, allow_missing=True)
        comp_v = _parse_float(path, lineno, "compensation_usd", comp, allow_missing=True)
        cr4_v = _parse_float(path, lineno, "cr4_pct", cr4, allow_missing=True)
        ppi_v = _parse_float(path, lineno, "ppi_index", ppi, allow_missing=True)
        if rev_v is not None and rev_v <= 0:
            raise IngestError(f"{path}:{lineno}: nonpositive revenues {rev_v}")
        if emp_v is not None and emp_v <= 0:
            raise IngestError(f"{path}:{lineno}: nonpositive employees {emp_v}")
        if cr4_v is not None and not 0 <= cr4_v <= 100:
            raise IngestError(f"{path}:{lineno}: cr4_pct {cr4_v} outside [0, 100]")
        if serv == "":
            is_serv = default_is_service(naics)
        elif serv in ("0", "1"):
            is_serv = serv == "1"
        else:
            raise IngestError(f"{path}:{lineno}: is_service must be '', '0' or '1'")
        key = (naics, year)
        if key in records:
            raise IngestError(f"{path}:{lineno}: duplicate industry-year {key}")
        records[key] = IndustryRecord(rev_v, emp_v, comp_v, cr4_v, ppi_v, is_serv)
    return IndustryPanel(records)


def load_county_panel(path) -> CountyPanel:
    records = {}
    for lineno, (fips, yr, gdppc, pop) in _read_rows(path, "county_panel"):
        try:
            year = int(yr)
        except ValueError:
            raise IngestError(f"{path}:{lineno}: bad year {yr!r}") from None
        gdppc_v = _parse_float(path, lineno, "gdp_per_capita", gdppc, allow_missing=True)
        pop_v = _parse_float(path, lineno, "population", pop, allow_missing=True)
        if gdppc_v is not None and gdppc_v <= 0:
            raise IngestError(f"{path}:{lineno}: nonpositive gdp_per_capita {gdppc_v}")
        key = (fips, year)
        if key in records:
            raise IngestError(f"{path}:{lineno}: duplicate county-year {key}")
        records[key] = CountyRecord(gdppc_v, pop_v)
    return CountyPanel(records)


def load_concordance(path) -> ConcordanceMap:
    entries = []
    for lineno, (hs, naics, weight) in _read_rows(path, "concordance"):
        w = _parse_float(path, lineno, "weight", weight)
        if w <= 0:
            raise IngestError(f"{path}:{lineno}: nonpositive weight {w}")
        entries.append((hs, naics, w))
    return ConcordanceMap(tuple(sorted(entries)))


def load_panels(industry_path, county_path, concordance_path):
    """Load the three macro/concordance tables together."""
    return (
        load_industry_panel(industry_path),
        load_county_panel(county_path),
        load_concordance(concordance_path),
    )


def match_report(industry_ids, panel: IndustryPanel) -> tuple[list[str], list[str]]:
    """Split wage-table industries into panel-matched and unmatched."""
    have = set(panel.industries())
    ids = sorted(set(industry_ids))
    return [i for i in ids if i in have], [i for i in ids if i not in have]


# ---------------------------------------------------------------------------
# writers (round-trip counterparts of the loaders; also used by synthdata)


def _write_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_skill_job(path, table: SkillImportanceTable):
    rows = [(s, j, fmt(w)) for s, j, w in table.table.sorted_cells()]
    _write_csv(path, SCHEMAS["skills"], rows)


def write_yearly_cells(path, schema_name, per_year: dict[int, WeightedBipartite], swap=False):
    """Dump {year: matrix} as (id_a, id_b, year, value) rows, sorted."""
    rows = []
    for year in sorted(per_year):
        for r, c, w in per_year[year].sorted_cells():
            a, b = (c, r) if swap else (r, c)
            rows.append((a, b, year, fmt(w)))
    _write_csv(path, SCHEMAS[schema_name], rows)


def write_industry_panel(path, panel: IndustryPanel):
    def cell(v):
        return "" if v is None else fmt(v)

    rows = [
        (
            naics,
            year,
            cell(rec.revenues),
            cell(rec.employees),
            cell(rec.compensation),
            cell(rec.cr4),
            cell(rec.ppi),
            "1" if rec.is_service else "0",
        )
        for (naics, year), rec in sorted(panel.records.items())
    ]
    _write_csv(path, SCHEMAS["industry_panel"], rows)


def write_county_panel(path, panel: CountyPanel):
    def cell(v):
        return "" if v is None else fmt(v)

    rows = [
        (fips, year, cell(rec.gdp_per_capita), cell(rec.population))
        for (fips, year), rec in sorted(panel.records.items())
    ]
    _write_csv(path, SCHEMAS["county_panel"], rows)


def write_concordance(path, conc: ConcordanceMap):
    rows = [(hs, naics, fmt(w)) for hs, naics, w in conc.entries]
    _write_csv(path, SCHEMAS["concordance"], rows)
