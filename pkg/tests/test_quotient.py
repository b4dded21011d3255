import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecomplex.matrixcore import MatrixError, WeightedBipartite, row_sums
from ecomplex.quotient import (
    QuotientSpec,
    balassa_quotient,
    binarize,
    binarize_skills,
    quotient_to_rows,
)


def wb(entries, row_kind="industry", col_kind="county"):
    return WeightedBipartite.from_entries(row_kind, col_kind, entries)


class TestBalassaQuotient:
    def test_hand_worked_two_by_two(self):
        # weights [[4,1],[1,4]]: Q(a,x) = (4/5)/(5/10) = 1.6
        m = wb([("a", "x", 4), ("a", "y", 1), ("b", "x", 1), ("b", "y", 4)])
        q = balassa_quotient(m)
        assert q.value("a", "x") == pytest.approx(1.6)
        assert q.value("a", "y") == pytest.approx(0.4)
        assert q.value("b", "x") == pytest.approx(0.4)
        assert q.value("b", "y") == pytest.approx(1.6)

    def test_uniform_weights_give_quotient_one(self):
        m = wb([(r, c, 2.5) for r in "abc" for c in "xy"])
        q = balassa_quotient(m)
        for _, _, v in q.sorted_cells():
            assert v == pytest.approx(1.0)

    def test_zero_cells_stay_absent(self):
        m = wb([("a", "x", 4), ("b", "y", 4), ("a", "y", 1)])
        q = balassa_quotient(m)
        assert q.value("b", "x") is None

    def test_zero_total_rejected(self):
        m = WeightedBipartite.from_entries("industry", "county", [("a", "x", 0.0)])
        with pytest.raises(MatrixError):
            balassa_quotient(m)

    def test_specialization_identity(self):
        """Sum over rows of (rowsum_r / total) * Q_rc equals 1 per column."""
        m = wb([("a", "x", 3), ("a", "y", 7), ("b", "x", 2), ("b", "y", 1),
                ("c", "y", 5)])
        q = balassa_quotient(m)
        rs = row_sums(m)
        total = m.total()
        for c in m.cols.ids:
            s = sum(
                (rs[r] / total) * q.value(r, c)
                for r in m.rows.ids
                if q.value(r, c) is not None
            )
            assert s == pytest.approx(1.0)


class TestBinarize:
    def test_strict_threshold_excludes_ties(self):
        m = wb([(r, c, 1.0) for r in "ab" for c in "xy"])
        links = binarize(balassa_quotient(m))
        assert not links.cells

    def test_hand_worked_links(self):
        m = wb([("a", "x", 4), ("a", "y", 1), ("b", "x", 1), ("b", "y", 4)])
        links = binarize(balassa_quotient(m))
        assert links.cells == frozenset({("a", "x"), ("b", "y")})

    def test_custom_threshold(self):
        m = wb([("a", "x", 4), ("a", "y", 1), ("b", "x", 1), ("b", "y", 4)])
        links = binarize(balassa_quotient(m), QuotientSpec(threshold=1.7))
        assert not links.cells

    def test_bad_threshold_rejected(self):
        with pytest.raises(ValueError):
            QuotientSpec(threshold=0.0)


class TestBinarizeSkills:
    def test_mean_over_rated_occupations(self):
        # skill s rated on two jobs: mean 3, only the 5 passes
        m = wb([("s", "j1", 5.0), ("s", "j2", 1.0)], "skill", "job")
        links = binarize_skills(m)
        assert links.cells == frozenset({("s", "j1")})

    def test_tie_with_mean_excluded(self):
        m = wb([("s", "j1", 3.0), ("s", "j2", 3.0)], "skill", "job")
        assert not binarize_skills(m).cells

    def test_unrated_as_zero_lowers_the_mean(self):
        # with j3 unrated, mean over all three jobs is 2, so the 3 links
        m = wb(
            [("s", "j1", 5.0), ("s", "j2", 1.0), ("t", "j3", 3.0), ("s", "j3", 0.0),
             ("t", "j1", 1.0)],
            "skill", "job",
        )
        default = binarize_skills(m)
        loose = binarize_skills(m, unrated_as_zero=True)
        assert ("s", "j1") in default.cells and ("s", "j1") in loose.cells
        assert default.cells <= loose.cells

    def test_empty_table_rejected(self):
        m = WeightedBipartite.from_entries("skill", "job", [])
        with pytest.raises(MatrixError):
            binarize_skills(m)


def test_quotient_to_rows_sorted():
    m = wb([("b", "y", 4), ("a", "x", 4), ("a", "y", 1), ("b", "x", 1)])
    rows = quotient_to_rows(balassa_quotient(m))
    assert [(r, c) for r, c, _ in rows] == sorted((r, c) for r, c in m.cells)


weights_strategy = st.dictionaries(
    st.tuples(
        st.sampled_from([f"r{i}" for i in range(4)]),
        st.sampled_from([f"c{i}" for i in range(4)]),
    ),
    st.floats(min_value=0.01, max_value=1e4),
    min_size=2,
    max_size=16,
)


@given(weights_strategy)
@settings(max_examples=100)
def test_identity_holds_for_random_matrices(cells):
    m = wb([(r, c, v) for (r, c), v in cells.items()])
    q = balassa_quotient(m)
    rs = row_sums(m)
    total = m.total()
    for c in m.cols.ids:
        s = sum(
            (rs[r] / total) * q.value(r, c)
            for r in m.rows.ids
            if q.value(r, c) is not None
        )
        assert math.isclose(s, 1.0, rel_tol=1e-9)


@given(weights_strategy, st.floats(min_value=0.01, max_value=100))
@settings(max_examples=100)
def test_quotient_scale_invariant(cells, scale):
    m1 = wb([(r, c, v) for (r, c), v in cells.items()])
    m2 = wb([(r, c, v * scale) for (r, c), v in cells.items()])
    q1, q2 = balassa_quotient(m1), balassa_quotient(m2)
    for (r, c), v in q1.cells.items():
        assert math.isclose(v, q2.value(r, c), rel_tol=1e-9)
