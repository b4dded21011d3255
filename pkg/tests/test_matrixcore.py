import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecomplex.matrixcore import (
    AxisLabels,
    BinaryBipartite,
    MatrixError,
    WeightedBipartite,
    col_sums,
    drop_empty,
    permute,
    row_sums,
)


def wb(entries):
    return WeightedBipartite.from_entries("job", "industry", entries)


class TestAxisLabels:
    def test_duplicate_ids_rejected(self):
        with pytest.raises(MatrixError):
            AxisLabels("job", ("a", "a"))

    def test_unknown_kind_rejected(self):
        with pytest.raises(MatrixError):
            AxisLabels("planet", ("a",))

    def test_from_iterable_sorts(self):
        ax = AxisLabels.from_iterable("job", ["b", "a", "b"])
        assert ax.ids == ("a", "b")


class TestWeightedBipartite:
    def test_negative_weight_rejected(self):
        with pytest.raises(MatrixError):
            wb([("a", "x", -1.0)])

    def test_nan_rejected(self):
        with pytest.raises(MatrixError):
            wb([("a", "x", float("nan"))])

    def test_duplicates_summed(self):
        m = wb([("a", "x", 1.0), ("a", "x", 2.0)])
        assert m.weight("a", "x") == 3.0

    def test_absent_cell_is_zero(self):
        m = wb([("a", "x", 1.0)])
        assert m.weight("a", "y") == 0.0


class TestRowColSums:
    def test_two_by_two(self):
        m = wb([("a", "x", 1), ("a", "y", 2), ("b", "x", 3), ("b", "y", 4)])
        assert row_sums(m) == {"a": 3.0, "b": 7.0}
        assert col_sums(m) == {"x": 4.0, "y": 6.0}

    def test_empty_rows_are_zero(self):
        m = WeightedBipartite(
            AxisLabels("job", ("a", "b")), AxisLabels("industry", ("x",)),
            {("a", "x"): 1.0},
        )
        assert row_sums(m)["b"] == 0.0

    def test_all_ones(self):
        m = wb([(f"r{i}", f"c{j}", 1.0) for i in range(3) for j in range(4)])
        assert list(row_sums(m).values()) == [4.0, 4.0, 4.0]


class TestDropEmpty:
    def test_removes_empty_column(self):
        m = BinaryBipartite(
            AxisLabels("job", ("a",)), AxisLabels("industry", ("x", "y")),
            frozenset({("a", "x")}),
        )
        out, report = drop_empty(m)
        assert out.cols.ids == ("x",)
        assert report.removed_cols == ("y",)
        assert report.removed_rows == ()

    def test_dense_unchanged(self):
        m = BinaryBipartite.from_pairs("job", "industry", [("a", "x"), ("b", "x")])
        out, report = drop_empty(m)
        assert out == m
        assert report.removed_rows == () and report.removed_cols == ()

    def test_empty_result_errors(self):
        m = BinaryBipartite(
            AxisLabels("job", ("a",)), AxisLabels("industry", ("x",)), frozenset()
        )
        with pytest.raises(MatrixError):
            drop_empty(m)

    def test_idempotent(self):
        m = BinaryBipartite(
            AxisLabels("job", ("a", "b", "c")), AxisLabels("industry", ("x", "y")),
            frozenset({("a", "x")}),
        )
        once, _ = drop_empty(m)
        twice, report = drop_empty(once)
        assert once == twice
        assert report.removed_rows == () and report.removed_cols == ()


class TestPermute:
    def test_identity(self):
        m = BinaryBipartite.from_pairs("job", "industry", [("a", "x"), ("b", "y")])
        assert permute(m, m.rows.ids, m.cols.ids) == m

    def test_swap_rows_keeps_cells(self):
        m = BinaryBipartite.from_pairs("job", "industry", [("a", "x"), ("b", "y")])
        out = permute(m, ("b", "a"), m.cols.ids)
        assert out.rows.ids == ("b", "a")
        assert out.has("a", "x") and out.has("b", "y")

    def test_double_reverse_is_identity(self):
        m = BinaryBipartite.from_pairs("job", "industry", [("a", "x"), ("b", "y")])
        rev = permute(m, m.rows.ids[::-1], m.cols.ids[::-1])
        assert permute(rev, rev.rows.ids[::-1], rev.cols.ids[::-1]) == m

    def test_non_permutation_rejected(self):
        m = BinaryBipartite.from_pairs("job", "industry", [("a", "x")])
        with pytest.raises(MatrixError):
            permute(m, ("a", "b"), ("x",))


weights_strategy = st.dictionaries(
    st.tuples(
        st.sampled_from([f"r{i}" for i in range(5)]),
        st.sampled_from([f"c{i}" for i in range(5)]),
    ),
    st.floats(min_value=0.001, max_value=1e6),
    min_size=1,
    max_size=20,
)


@given(weights_strategy)
@settings(max_examples=100)
def test_total_matches_row_and_col_sums(cells):
    m = wb([(r, c, v) for (r, c), v in cells.items()])
    total = m.total()
    assert abs(sum(row_sums(m).values()) - total) <= 1e-9 * max(total, 1.0)
    assert abs(sum(col_sums(m).values()) - total) <= 1e-9 * max(total, 1.0)


@given(weights_strategy, st.randoms(use_true_random=False))
@settings(max_examples=50)
def test_permute_then_inverse_is_identity(cells, rnd):
    m = BinaryBipartite.from_pairs("job", "industry", list(cells))
    rows = list(m.rows.ids)
    cols = list(m.cols.ids)
    rnd.shuffle(rows)
    rnd.shuffle(cols)
    assert permute(permute(m, rows, cols), m.rows.ids, m.cols.ids) == m
