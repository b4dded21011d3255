import pytest

from ecomplex import ingest
from ecomplex.ingest import IngestError


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


class TestSkillJob:
    def test_round_trip(self, tmp_path):
        p = write(
            tmp_path, "skills.csv",
            "skill_id,soc_code,importance\ns1,11-1011,4.5\ns1,11-2021,2\ns2,11-1011,3.25\n",
        )
        table = ingest.load_skill_job(p)
        assert table.table.weight("s1", "11-1011") == 4.5
        out = tmp_path / "rt.csv"
        ingest.write_skill_job(out, table)
        assert ingest.load_skill_job(out).table.cells == table.table.cells

    def test_out_of_range_importance(self, tmp_path):
        p = write(tmp_path, "s.csv", "skill_id,soc_code,importance\ns1,j1,5.5\n")
        with pytest.raises(IngestError, match="outside"):
            ingest.load_skill_job(p)

    def test_duplicate_pair_rejected(self, tmp_path):
        p = write(
            tmp_path, "s.csv",
            "skill_id,soc_code,importance\ns1,j1,4\ns1,j1,3\n",
        )
        with pytest.raises(IngestError, match="duplicate"):
            ingest.load_skill_job(p)

    def test_bad_header(self, tmp_path):
        p = write(tmp_path, "s.csv", "skill,job,score\ns1,j1,4\n")
        with pytest.raises(IngestError, match="header"):
            ingest.load_skill_job(p)

    def test_empty_file(self, tmp_path):
        p = write(tmp_path, "s.csv", "")
        with pytest.raises(IngestError, match="empty"):
            ingest.load_skill_job(p)

    def test_error_message_carries_line_number(self, tmp_path):
        p = write(tmp_path, "s.csv", "skill_id,soc_code,importance\ns1,j1,oops\n")
        with pytest.raises(IngestError, match=r":2:"):
            ingest.load_skill_job(p)


class TestWageBipartite:
    def test_year_filter_and_duplicate_sum(self, tmp_path):
        p = write(
            tmp_path, "w.csv",
            "soc_code,naics4,year,wage_bill_usd\n"
            "j1,1111,2017,100\nj1,1111,2017,50\nj1,1111,2016,999\nj2,2222,2017,30\n",
        )
        m = ingest.load_wage_bipartite(p, "job", "industry", 2017)
        assert m.weight("j1", "1111") == 150.0
        assert m.weight("j2", "2222") == 30.0

    def test_missing_year_rejected(self, tmp_path):
        p = write(
            tmp_path, "w.csv",
            "soc_code,naics4,year,wage_bill_usd\nj1,1111,2016,100\n",
        )
        with pytest.raises(IngestError, match="year 2017 not present"):
            ingest.load_wage_bipartite(p, "job", "industry", 2017)

    def test_negative_value_rejected(self, tmp_path):
        p = write(
            tmp_path, "e.csv",
            "soc_code,naics4,year,employees\nj1,1111,2017,-3\n",
        )
        with pytest.raises(IngestError, match="negative"):
            ingest.load_wage_bipartite(p, "job", "industry", 2017, value_col="employees")

    def test_leading_zero_fips_preserved(self, tmp_path):
        p = write(
            tmp_path, "cw.csv",
            "fips,naics4,year,wage_bill_usd\n01001,1111,2017,10\n",
        )
        m = ingest.load_county_wages(p, 2017)
        assert m.rows.ids == ("01001",)


class TestExports:
    def test_one_matrix_per_year(self, tmp_path):
        p = write(
            tmp_path, "x.csv",
            "country_iso3,hs_code,year,export_usd\n"
            "USA,8542,2012,5\nUSA,8542,2013,6\nDEU,8542,2012,7\n",
        )
        per_year = ingest.load_exports(p)
        assert sorted(per_year) == [2012, 2013]
        assert per_year[2012].weight("DEU", "8542") == 7.0

    def test_bad_year(self, tmp_path):
        p = write(
            tmp_path, "x.csv",
            "country_iso3,hs_code,year,export_usd\nUSA,8542,twelve,5\n",
        )
        with pytest.raises(IngestError, match="bad year"):
            ingest.load_exports(p)


class TestIndustryPanel:
    HEADER = (
        "naics4,year,revenues_usd,employees,compensation_usd,cr4_pct,ppi_index,is_service\n"
    )

    def test_missing_fields_stay_none(self, tmp_path):
        p = write(tmp_path, "ip.csv", self.HEADER + "1111,2017,,50,2000,,110,0\n")
        panel = ingest.load_industry_panel(p)
        rec = panel.get("1111", 2017)
        assert rec.revenues is None and rec.cr4 is None
        assert rec.employees == 50.0

    def test_service_flag_defaults_from_prefix(self, tmp_path):
        p = write(
            tmp_path, "ip.csv",
            self.HEADER + "3111,2017,1,1,1,1,1,\n5411,2017,1,1,1,1,1,\n",
        )
        panel = ingest.load_industry_panel(p)
        assert not panel.is_service("3111")
        assert panel.is_service("5411")

    def test_cr4_range(self, tmp_path):
        p = write(tmp_path, "ip.csv", self.HEADER + "1111,2017,1,1,1,120,1,0\n")
        with pytest.raises(IngestError, match="cr4"):
            ingest.load_industry_panel(p)

    def test_duplicate_industry_year(self, tmp_path):
        p = write(
            tmp_path, "ip.csv",
            self.HEADER + "1111,2017,1,1,1,1,1,0\n1111,2017,2,2,2,2,2,0\n",
        )
        with pytest.raises(IngestError, match="duplicate"):
            ingest.load_industry_panel(p)

    def test_round_trip(self, tmp_path):
        p = write(
            tmp_path, "ip.csv",
            self.HEADER + "1111,2017,10,5,3,40,105.5,0\n5411,2022,,7,,,,1\n",
        )
        panel = ingest.load_industry_panel(p)
        out = tmp_path / "rt.csv"
        ingest.write_industry_panel(out, panel)
        assert ingest.load_industry_panel(out).records == panel.records


class TestCountyPanel:
    def test_load_and_state(self, tmp_path):
        p = write(
            tmp_path, "cp.csv",
            "fips,year,gdp_per_capita,population\n06037,2017,65000,1e7\n06037,2022,70000,1.01e7\n",
        )
        panel = ingest.load_county_panel(p)
        assert panel.get("06037", 2022).gdp_per_capita == 70000.0
        assert panel.state_of("06037") == "06"

    def test_nonpositive_gdppc_rejected(self, tmp_path):
        p = write(
            tmp_path, "cp.csv",
            "fips,year,gdp_per_capita,population\n06037,2017,0,100\n",
        )
        with pytest.raises(IngestError, match="nonpositive"):
            ingest.load_county_panel(p)


class TestConcordance:
    def test_many_to_many(self, tmp_path):
        p = write(
            tmp_path, "c.csv",
            "hs_code,naics4,weight\n8542,3344,0.8\n8542,3345,0.2\n8471,3344,1\n",
        )
        conc = ingest.load_concordance(p)
        assert conc.for_industry("3344") == [("8471", 1.0), ("8542", 0.8)]
        assert conc.industries() == ["3344", "3345"]

    def test_nonpositive_weight(self, tmp_path):
        p = write(tmp_path, "c.csv", "hs_code,naics4,weight\n8542,3344,0\n")
        with pytest.raises(IngestError, match="nonpositive weight"):
            ingest.load_concordance(p)


def test_match_report(tmp_path):
    p = write(
        tmp_path, "ip.csv",
        TestIndustryPanel.HEADER + "1111,2017,1,1,1,1,1,0\n",
    )
    panel = ingest.load_industry_panel(p)
    matched, unmatched = ingest.match_report(["1111", "9999"], panel)
    assert matched == ["1111"]
    assert unmatched == ["9999"]


def test_fmt_is_locale_free():
    assert ingest.fmt(1234.5) == "1234.5"
    assert ingest.fmt(0.1 + 0.2) == "0.3"
    assert ingest.fmt(1e-7) == "1e-07"
