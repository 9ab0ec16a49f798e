import pytest
from hypothesis import given
from hypothesis import strategies as st

from halo.errors import NonIntegralDivision, PrecisionError
from halo.padic import PadicInt
from halo.series import TruncatedSeries


def series(p, coeffs, prec):
    return TruncatedSeries(p, tuple(coeffs), prec)


coeff_lists = st.lists(st.integers(-(10**9), 10**9), min_size=5, max_size=5)


def test_divide_by_one_is_identity():
    s = series(3, [1, 2, 3], 5)
    assert s.divide_by_int(1) == s


def test_divide_by_p_loses_one_digit():
    s = series(3, [1, 2, 3], 5)
    q = s.scale(3).divide_by_int(3)
    assert q.prec == 4
    assert q == s.reduce(4)


def test_divide_reports_non_integrality():
    with pytest.raises(NonIntegralDivision):
        series(2, [1, 2], 5).divide_by_int(2)
    with pytest.raises(PrecisionError):
        series(2, [0, 0], 2).divide_by_int(4)


def test_one_plus_w_times_one_minus_w():
    a = series(5, [1, 1], 4)
    b = series(5, [1, -1], 4)
    assert (a * b).coeffs == (1, 0)


def test_evaluate_caps_precision():
    s = series(3, [1, 1, 1], 10)
    v = s.evaluate(PadicInt(3, 3, 10))
    assert v.prec == 3
    assert v.value == (1 + 3 + 9) % 27


def test_valuations_flags_unknown():
    s = series(2, [4, 0, 1], 5)
    assert s.valuations() == [(2, True), (5, False), (0, True)]


@given(coeff_lists, coeff_lists, coeff_lists)
def test_ring_laws(a, b, c):
    p, M = 3, 8
    A, B, C = (series(p, x, M) for x in (a, b, c))
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    assert A * B == B * A
    assert A + B - B == A
