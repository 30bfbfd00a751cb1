import numpy as np
import pytest

from innerseq.coeffio import (CoeffFormatError, fmt_float, format_coeffs, parse_coeffs,
                              read_coeffs, write_coeffs)
from innerseq.inner import blaschke_factor_coeffs
from innerseq.seq import CoeffSeq


def test_round_trip_is_exact(tmp_path, rng):
    s = CoeffSeq.poly(rng.standard_normal(50) + 1j * rng.standard_normal(50))
    path = tmp_path / "c.csv"
    write_coeffs(path, s)
    back = read_coeffs(path)
    np.testing.assert_array_equal(back.coeffs, s.coeffs)
    assert back.finite


def test_format_layout():
    text = format_coeffs(blaschke_factor_coeffs(0.5, 2))
    assert text == "n,re,im\n0,0.5,0\n1,-0.75,0\n2,-0.375,0\n"


def test_negative_zero_dropped():
    assert fmt_float(-0.0) == "0"
    assert fmt_float(0.1) == "0.10000000000000001"


def test_truncated_flag():
    s = parse_coeffs("n,re,im\n0,1,0\n", finite=False)
    assert not s.finite and s.tail_sq() is None


def test_blank_lines_ignored():
    assert len(parse_coeffs("n,re,im\n\n0,1,0\n\n1,2,0\n")) == 2


@pytest.mark.parametrize("text, line, message", [
    ("n,re,im\n0,1,0\n2,1,0\n", 3, "gap"),
    ("n,re,im\n0,1,0\n1,1,0\n1,2,0\n", 4, "duplicate"),
    ("n,re,im\n0,1,0\n1,1,0\n2,1,0\n0,1,0\n", 5, "non-monotone"),
    ("n,real,imag\n0,1,0\n", 1, "header"),
    ("n,re,im\n0,1\n", 2, "3 fields"),
    ("n,re,im\nzero,1,0\n", 2, "integer"),
    ("n,re,im\n0,x,0\n", 2, "non-numeric"),
    ("n,re,im\n1,1,0\n", 2, "gap"),
])
def test_errors_report_line(text, line, message):
    with pytest.raises(CoeffFormatError, match=message) as info:
        parse_coeffs(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_empty_file():
    with pytest.raises(CoeffFormatError, match="empty"):
        parse_coeffs("")
    with pytest.raises(CoeffFormatError, match="no coefficient rows"):
        parse_coeffs("n,re,im\n")


def test_nan_rejected():
    with pytest.raises(CoeffFormatError):
        parse_coeffs("n,re,im\n0,nan,0\n")
