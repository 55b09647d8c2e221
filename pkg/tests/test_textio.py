import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from swinfer._textio import (InputError, dump_json, format_float,
                             read_matrix_csv, write_text)


def test_format_float_examples():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(1.0) == "1"
    assert format_float(-2.5e-300) == "-2.5e-300"
    for bad in (math.inf, -math.inf, math.nan):
        with pytest.raises(ValueError):
            format_float(bad)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_format_float_round_trips(x):
    assert float(format_float(x)) == x


def test_dump_json_structure():
    doc = {
        "a": 1,
        "b": 0.5,
        "c": True,
        "d": None,
        "e": [1.0, "two", False],
        "f": {"nested": np.array([0.25, 0.75])},
    }
    parsed = json.loads(dump_json(doc))
    assert parsed["a"] == 1
    assert parsed["b"] == 0.5
    assert parsed["c"] is True
    assert parsed["d"] is None
    assert parsed["e"] == [1.0, "two", False]
    assert parsed["f"]["nested"] == [0.25, 0.75]


def test_dump_json_keeps_bool_and_int_apart():
    # bool is an int subclass; the emitter must write true, not 1
    text = dump_json({"flag": True, "count": 1})
    assert "true" in text
    parsed = json.loads(text)
    assert parsed["flag"] is True and parsed["count"] == 1


def test_dump_json_floats_reparse_exactly():
    values = [0.1, 1 / 3, 2 ** -1074, 1e308, -0.0]
    parsed = json.loads(dump_json({"v": values}))
    for got, want in zip(parsed["v"], values):
        assert got == want


def test_read_matrix_csv_happy_path(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1.5,2\n-3,4e-2\n0,0\n")
    got = read_matrix_csv(str(path))
    np.testing.assert_array_equal(
        got, np.array([[1.5, 2.0], [-3.0, 0.04], [0.0, 0.0]]))
    assert got.dtype == np.float64


def test_read_matrix_csv_reports_offending_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2\n3,oops\n")
    with pytest.raises(InputError, match=r":2: "):
        read_matrix_csv(str(path))


def test_read_matrix_csv_rejects_ragged_rows(tmp_path):
    path = tmp_path / "ragged.csv"
    path.write_text("1,2\n3,4,5\n")
    with pytest.raises(InputError, match=r":2: "):
        read_matrix_csv(str(path))


def test_read_matrix_csv_rejects_non_finite(tmp_path):
    path = tmp_path / "inf.csv"
    path.write_text("1,2\ninf,4\n")
    with pytest.raises(InputError):
        read_matrix_csv(str(path))


def test_read_matrix_csv_rejects_empty(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(InputError):
        read_matrix_csv(str(path))


def test_write_text_round_trip(tmp_path):
    path = tmp_path / "out.txt"
    write_text(str(path), "hello\n")
    assert path.read_text() == "hello\n"
