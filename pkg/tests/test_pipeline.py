import json
from pathlib import Path

import pytest

from ecomplex import pipeline, synthdata
from ecomplex.aggregate import CountyFitness, DiversificationIndex, IndustryComplexity
from ecomplex.efc import FitnessResult
from ecomplex.ingest import IngestError
from ecomplex.matrixcore import BinaryBipartite
from ecomplex.pipeline import ConfigError, DataError, StageFailure

SMALL = synthdata.Sizes(
    n_skills=20, n_jobs=60, n_industries=40, n_counties=30,
    n_countries=8, n_products=20,
)

CONFIG = """\
[inputs]
skills = "skills.csv"
wages_job_industry = "wages_job_industry.csv"
employment = "employment.csv"
wages_industry_county = "wages_industry_county.csv"
industry_panel = "industry_panel.csv"
county_panel = "county_panel.csv"
{export_lines}
[years]
base_year = 2017
horizon_year = 2022
export_years = [2012, 2013, 2014, 2015, 2016, 2017, 2018, 2019, 2020, 2021]

[output]
directory = "out"
"""

EXPORT_LINES = 'exports = "exports.csv"\nconcordance = "concordance.csv"\n'


@pytest.fixture(scope="module")
def fixture_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("world")
    world = synthdata.generate_quadripartite(11, SMALL)
    synthdata.write_fixtures(world, root)
    (root / "config.toml").write_text(CONFIG.format(export_lines=EXPORT_LINES))
    (root / "config_noexp.toml").write_text(CONFIG.format(export_lines=""))
    return root


class TestConfig:
    def test_paths_relative_to_config(self, fixture_dir):
        cfg = pipeline.load_config(fixture_dir / "config.toml")
        assert cfg.inputs["skills"] == fixture_dir / "skills.csv"
        assert cfg.out_dir == fixture_dir / "out"
        assert cfg.has_exports

    def test_out_dir_and_models_override(self, fixture_dir, tmp_path):
        cfg = pipeline.load_config(
            fixture_dir / "config.toml", out_dir=tmp_path / "o", models=["T1.m4"]
        )
        assert cfg.out_dir == tmp_path / "o"
        assert cfg.models == ("T1.m4",)

    def test_missing_file_rejected(self, tmp_path):
        (tmp_path / "c.toml").write_text(CONFIG.format(export_lines=""))
        with pytest.raises(ConfigError, match="not found"):
            pipeline.load_config(tmp_path / "c.toml")

    def test_bad_toml_rejected(self, tmp_path):
        p = tmp_path / "c.toml"
        p.write_text("inputs = [broken\n")
        with pytest.raises(ConfigError, match="cannot read"):
            pipeline.load_config(p)

    def test_unknown_model_rejected(self, fixture_dir):
        with pytest.raises(ConfigError, match="unknown model"):
            pipeline.load_config(fixture_dir / "config.toml", models=["T7.m1"])

    def test_year_order_enforced(self, fixture_dir):
        text = (fixture_dir / "config.toml").read_text().replace(
            "horizon_year = 2022", "horizon_year = 2016"
        )
        p = fixture_dir / "bad_years.toml"
        p.write_text(text)
        with pytest.raises(ConfigError, match="earlier"):
            pipeline.load_config(p)

    def test_schema_is_valid_toml(self):
        try:
            import tomllib
        except ImportError:
            import tomli as tomllib
        parsed = tomllib.loads(pipeline.CONFIG_SCHEMA)
        assert set(parsed) == {"inputs", "years", "solver", "output", "models"}


class TestArtifactRoundTrips:
    def test_network(self, tmp_path):
        m = BinaryBipartite.from_pairs(
            "county", "industry", [("01001", "3111"), ("02002", "5411")]
        )
        pipeline.write_network(tmp_path, "net.csv", m)
        back = pipeline.read_network(tmp_path / "net.csv", "county", "industry")
        assert back == m

    def test_fitness(self, tmp_path):
        res = FitnessResult(
            fitness={"a": 1.5, "b": 1e-16},
            complexity={"x": 0.5},
            iterations_used=9,
            stop_reason="converged",
            underflowed_fitness_ids=frozenset({"b"}),
            underflowed_complexity_ids=frozenset(),
            trajectory_summary=(0.1,),
        )
        pipeline.write_fitness(tmp_path, "f.csv", res)
        back = pipeline.read_fitness(tmp_path / "f.csv")
        assert back.fitness == pytest.approx(res.fitness)
        assert back.underflowed_fitness_ids == frozenset({"b"})

    def test_industry_complexity(self, tmp_path):
        a = IndustryComplexity({"3111": 1.25}, "hidden")
        b = IndustryComplexity({"3111": 0.75}, "revealed_export")
        pipeline.write_industry_complexity(tmp_path, "q.csv", a, b)
        assert pipeline.read_industry_complexity(tmp_path / "q.csv", "hidden").values == a.values
        assert (
            pipeline.read_industry_complexity(tmp_path / "q.csv", "revealed_export").values
            == b.values
        )

    def test_county_fitness_with_gaps(self, tmp_path):
        f = CountyFitness({"01001": 1.5}, "exogenous_export")
        pipeline.write_county_fitness(tmp_path, "cf.csv", ["01001", "02002"], f)
        back = pipeline.read_county_fitness(tmp_path / "cf.csv", "exogenous_export")
        assert back.values == {"01001": 1.5}

    def test_diversification(self, tmp_path):
        d = DiversificationIndex({"01001": 7}, restricted=True)
        pipeline.write_diversification(tmp_path, "d.csv", d)
        back = pipeline.read_diversification(tmp_path / "d.csv", restricted=True)
        assert back.values == {"01001": 7}
        assert pipeline.read_diversification(tmp_path / "d.csv", restricted=False).values == {}


@pytest.fixture(scope="module")
def manifest(fixture_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    cfg = pipeline.load_config(fixture_dir / "config.toml", out_dir=out)
    return pipeline.run_pipeline(cfg), out


class TestFullRun:
    def test_all_models_run(self, manifest):
        m, _ = manifest
        assert len(m["models_run"]) == 13
        assert m["skipped_models"] == []
        assert m["skipped_stages"] == []

    def test_expected_artifacts_exist(self, manifest):
        m, out = manifest
        for name in (
            "m1.csv", "m2.csv", "m3.csv", "iwq.csv", "wlq.csv",
            "job_fitness.csv", "endogenous_fitness.csv",
            "industry_complexity.csv", "county_fitness.csv",
            "diversification.csv", "product_complexity.csv",
            "regressions.csv", "regression_summary.csv", "chow.csv",
            "scatter.csv", "distribution_summary.csv",
            "choropleth_job_based.csv", "choropleth_exogenous.csv",
        ):
            assert name in m["artifacts"], name
            assert (out / name).is_file()
        assert (out / "manifest.json").is_file()
        assert (out / "tables.txt").is_file()
        assert not (out / "FAILED").exists()

    def test_chow_runs_on_interaction_models(self, manifest):
        _, out = manifest
        lines = (out / "chow.csv").read_text().splitlines()
        models = {line.split(",")[0] for line in lines[1:]}
        assert models == {"T1.m5", "T2.m5"}
        assert len(lines) == 1 + 4  # two models x two variants

    def test_manifest_coverage_fields(self, manifest, fixture_dir):
        m, _ = manifest
        world_counties = 30
        n_service_only = round(0.35 * world_counties)
        assert m["uncovered_exogenous_counties"] == n_service_only
        assert m["unmatched_industries"] == []

    def test_byte_identical_reruns(self, fixture_dir, tmp_path):
        cfg1 = pipeline.load_config(fixture_dir / "config.toml", out_dir=tmp_path / "a")
        cfg2 = pipeline.load_config(fixture_dir / "config.toml", out_dir=tmp_path / "b")
        pipeline.run_pipeline(cfg1)
        pipeline.run_pipeline(cfg2)
        files = sorted(p.name for p in (tmp_path / "a").iterdir())
        assert files == sorted(p.name for p in (tmp_path / "b").iterdir())
        for name in files:
            assert (tmp_path / "a" / name).read_bytes() == (
                tmp_path / "b" / name
            ).read_bytes(), name


class TestNoExports:
    def test_revealed_stage_skipped(self, fixture_dir, tmp_path):
        cfg = pipeline.load_config(fixture_dir / "config_noexp.toml", out_dir=tmp_path)
        m = pipeline.run_pipeline(cfg)
        assert m["skipped_stages"] == ["revealed_measures"]
        skipped = {s[0] for s in m["skipped_models"]}
        assert skipped == {"T1.m1", "T2.m1", "T4.m3"}
        assert len(m["models_run"]) == 10
        assert "scatter.csv" not in m["artifacts"]

    def test_strict_mode_flags_gaps(self, fixture_dir, tmp_path):
        cfg = pipeline.load_config(fixture_dir / "config_noexp.toml", out_dir=tmp_path / "s")
        with pytest.raises(DataError, match="strict"):
            pipeline.run_pipeline(cfg, strict=True)


class TestFailureHandling:
    def test_stage_failure_names_stage_and_writes_marker(self, fixture_dir, tmp_path):
        broken = tmp_path / "broken"
        broken.mkdir()
        for p in fixture_dir.glob("*.csv"):
            (broken / p.name).write_bytes(p.read_bytes())
        (broken / "skills.csv").write_text("skill_id,soc_code,importance\ns1,j1,9\n")
        (broken / "config.toml").write_text(CONFIG.format(export_lines=EXPORT_LINES))
        cfg = pipeline.load_config(broken / "config.toml", out_dir=tmp_path / "o")
        with pytest.raises(StageFailure) as err:
            pipeline.run_pipeline(cfg)
        assert err.value.stage == "ingest"
        assert isinstance(err.value.cause, IngestError)
        assert (tmp_path / "o" / "FAILED").read_text().startswith("ingest:")

    def test_missing_export_year(self, fixture_dir, tmp_path):
        text = (fixture_dir / "config.toml").read_text().replace("2021]", "2021, 2030]")
        p = fixture_dir / "bad_export_years.toml"
        p.write_text(text)
        cfg = pipeline.load_config(p, out_dir=tmp_path)
        with pytest.raises(StageFailure) as err:
            pipeline.run_pipeline(cfg)
        assert err.value.stage == "binarize"
        assert isinstance(err.value.cause, DataError)


def test_manifest_json_is_sorted_and_stable(fixture_dir, tmp_path):
    cfg = pipeline.load_config(fixture_dir / "config.toml", out_dir=tmp_path)
    m = pipeline.run_pipeline(cfg)
    on_disk = json.loads((tmp_path / "manifest.json").read_text())
    assert on_disk == m
    text = (tmp_path / "manifest.json").read_text()
    assert text == json.dumps(m, indent=2, sort_keys=True) + "\n"
