import numpy as np
import pytest

from mcar_system import data_loader
from mcar_system.data_loader import IncompleteMatrix
from mcar_system.errors import CsvParseError, InvalidInputError

NAN = np.nan


def _two_x_three_y():
    values = np.arange(25, dtype=float).reshape(5, 5)
    values[0, 2] = values[1, 3] = values[3, 4] = NAN
    return IncompleteMatrix.from_array(values)


def test_classify_complete_matrix():
    roles = data_loader.classify_columns(IncompleteMatrix.from_array(np.ones((4, 3))))
    assert roles.p == 3 and roles.q == 0


def test_classify_all_columns_holed():
    values = np.ones((4, 2))
    values[0, 0] = values[1, 1] = NAN
    roles = data_loader.classify_columns(IncompleteMatrix.from_array(values))
    assert roles.p == 0 and roles.y_indices == (0, 1)


def test_classify_two_x_three_y():
    roles = data_loader.classify_columns(_two_x_three_y())
    assert roles.x_indices == (0, 1)
    assert roles.y_indices == (2, 3, 4)


def test_force_y_by_name_and_index():
    m = _two_x_three_y()
    roles = data_loader.classify_columns(m, force_y=["V1"])
    assert roles.x_indices == (1,)
    assert 0 in roles.y_indices
    roles = data_loader.classify_columns(m, force_y=[1])
    assert roles.x_indices == (0,)


def test_indicators_alternating_and_constant():
    values = np.array([[1.0, 1.0], [NAN, 2.0], [3.0, 3.0], [NAN, 4.0]])
    m = IncompleteMatrix.from_array(values)
    roles = data_loader.classify_columns(m, force_y=[1])
    r = data_loader.indicators(m, roles)
    assert r[:, 0].tolist() == [1.0, 0.0, 1.0, 0.0]
    assert r[:, 1].tolist() == [1.0, 1.0, 1.0, 1.0]


def test_zero_fill_replaces_missing_with_zero():
    m = IncompleteMatrix.from_array(np.array([[1.0, 5.0], [2.0, NAN], [3.0, 3.0]]))
    roles = data_loader.classify_columns(m)
    filled = data_loader.zero_fill(m, roles)
    assert filled[:, 1].tolist() == [5.0, 0.0, 3.0]
    assert filled[:, 0].tolist() == [1.0, 2.0, 3.0]


def test_matrix_is_read_only_and_masked_cells_are_nan():
    m = IncompleteMatrix(np.ones((2, 2)), np.array([[True, False], [True, True]]), ("a", "b"))
    assert np.isnan(m.values[0, 1])
    with pytest.raises(ValueError):
        m.values[0, 0] = 5.0


def test_observed_cells_must_be_finite():
    with pytest.raises(InvalidInputError):
        IncompleteMatrix(np.array([[np.inf]]), np.array([[True]]), ("a",))


def test_fully_missing_rows_and_drop():
    m = IncompleteMatrix.from_array(np.array([[1.0, 2.0], [NAN, NAN], [3.0, NAN]]))
    assert m.fully_missing_rows().tolist() == [1]
    kept = m.drop_rows([1])
    assert kept.n == 2 and kept.names == m.names


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    values = rng.standard_normal((6, 3))
    values[2, 1] = values[4, 2] = NAN
    m = IncompleteMatrix.from_array(values, names=["x", "y1", "y2"])
    path = data_loader.write_csv(m, str(tmp_path / "sample.csv"))
    back = data_loader.read_csv(path)
    assert back.names == ("x", "y1", "y2")
    assert np.array_equal(back.mask, m.mask)
    assert np.array_equal(back.values, m.values, equal_nan=True)


def test_csv_custom_marker_and_empty_fields(tmp_path):
    path = tmp_path / "dots.csv"
    path.write_text("a,b\n1,.\n2,\n3,4\n", encoding="utf-8")
    m = data_loader.read_csv(str(path), na_marker=".")
    assert m.mask[:, 1].tolist() == [False, False, True]


def test_csv_ragged_row_reports_row(tmp_path):
    path = tmp_path / "ragged.csv"
    path.write_text("a,b\n1,2\n3\n", encoding="utf-8")
    with pytest.raises(CsvParseError) as err:
        data_loader.read_csv(str(path))
    assert err.value.row == 3
    assert "row 3" in str(err.value)


def test_csv_non_numeric_reports_row_and_column(tmp_path):
    path = tmp_path / "text.csv"
    path.write_text("a,b\n1,2\n1,abc\n", encoding="utf-8")
    with pytest.raises(CsvParseError) as err:
        data_loader.read_csv(str(path))
    assert (err.value.row, err.value.column) == (3, "b")
    assert "row 3, column b" in str(err.value)


def test_csv_header_only_is_rejected(tmp_path):
    path = tmp_path / "header.csv"
    path.write_text("a,b\n", encoding="utf-8")
    with pytest.raises(CsvParseError) as err:
        data_loader.read_csv(str(path))
    assert err.value.row == 2


def test_csv_byte_order_mark_is_stripped(tmp_path):
    path = tmp_path / "bom.csv"
    path.write_text("V1,V2\n1,2\n3,NA\n", encoding="utf-8-sig")
    m = data_loader.read_csv(str(path))
    assert m.names == ("V1", "V2")
    assert m.column_index("V1") == 0


def test_csv_missing_file():
    with pytest.raises(FileNotFoundError):
        data_loader.read_csv("/nonexistent/file.csv")


def test_rank_and_log_transforms():
    m = IncompleteMatrix.from_array(np.array([[10.0, 1.0], [NAN, 2.0], [1.0, 2.0]]))
    ranked = data_loader.transform_columns(m, "rank")
    assert ranked.values[0, 0] == 2.0 and ranked.values[2, 0] == 1.0
    assert ranked.values[:, 1].tolist() == [1.0, 2.5, 2.5]
    assert not ranked.mask[1, 0]
    logged = data_loader.transform_columns(m, "log")
    assert logged.values[2, 0] == 0.0


def test_log_transform_needs_positive_values():
    m = IncompleteMatrix.from_array(np.array([[0.0], [1.0]]))
    with pytest.raises(InvalidInputError):
        data_loader.transform_columns(m, "log")


def test_missingness_summary():
    summary = dict(data_loader.missingness_summary(_two_x_three_y()))
    assert summary["V1"] == 0.0
    assert summary["V3"] == pytest.approx(0.2)
