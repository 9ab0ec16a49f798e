from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halo.classnum import hurwitz, kronecker
from halo.errors import InputError, RamifiedConstantUnsupported, UnsupportedLevel
from halo.fredholm import (
    LevelSpec,
    c_const,
    c_term,
    charpoly,
    s_range,
    trace,
    trace_scalar,
    unit_coefficient_of_one,
    working_precision,
)
from halo.iwasawa import ComponentChar, IwasawaElement, embed
from halo.padic import PadicInt, unit_root, vp
from halo.polygon import invariants


def test_level_validation():
    with pytest.raises(InputError):
        LevelSpec(4, 2)
    with pytest.raises(InputError):
        LevelSpec(1, 9)
    with pytest.raises(UnsupportedLevel):
        c_const(4, 3, 1)
    with pytest.raises(UnsupportedLevel):
        charpoly(9, 2, 0, 1, 10, 4)


def test_s_range():
    assert s_range(2, 1) == [1]
    assert s_range(3, 1) == [1, 2]
    assert s_range(2, 2) == [1, 3]
    assert s_range(5, 2) == [1, 2, 3, 4, 6, 7, 8, 9]


def test_level_one_constants():
    for p in (2, 3, 5, 23):
        for j in (1, 2, 3):
            assert c_const(1, p, j) == 1
            for s in s_range(p, j):
                assert c_term(1, p, s, j) == hurwitz(4 * p**j - s * s)


def test_squarefree_constant_term():
    assert c_const(3, 2, 1) == 2
    assert c_const(3 * 5, 2, 1) == 4
    assert c_const(3 * 5 * 7, 2, 3) == 8


def test_level_three_vanishing_constant():
    assert c_term(3, 2, 1, 1) == 0


def test_prime_level_unramified_constants():
    for p in (2, 3, 5):
        for j in (1, 2, 3):
            for ell in (3, 5, 7, 11, 13):
                if ell == p:
                    continue
                for s in s_range(p, j):
                    delta = s * s - 4 * p**j
                    if delta % ell == 0:
                        continue
                    expected = 2 * hurwitz(-delta) if kronecker(delta, ell) == 1 else 0
                    assert c_term(ell, p, s, j) == expected


def test_ramified_constant_needs_hook():
    # s = 1, j = 2: Delta = -15 is divisible by 3
    with pytest.raises(RamifiedConstantUnsupported) as info:
        c_term(3, 2, 1, 2)
    assert info.value.exit_code == 3
    with pytest.raises(RamifiedConstantUnsupported):
        trace(3, 2, 2, 0, 10)


def test_ramified_hook_is_summed_over_conductor_divisors():
    # with c(s, f) = 1 the divisor sum collapses to the Hurwitz class number
    one = lambda ell, p, s, j, f: 1  # noqa: E731
    assert c_term(3, 2, 1, 2, ramified=one) == hurwitz(15)
    # s = 3, j = 3: Delta = -23, ramified at N = 23
    assert c_term(23, 2, 3, 3, ramified=one) == hurwitz(23)
    half = lambda ell, p, s, j, f: Fraction(1, 2)  # noqa: E731
    assert c_term(3 * 5, 2, 1, 2, ramified=half) == Fraction(1, 4) * hurwitz(15)


def test_trace_level_three():
    M = 30
    t = trace(3, 2, 1, 0, M)
    assert t.value == IwasawaElement(2, {1: -2}, M, M)


def test_trace_level_one_p2():
    M = 30
    rho = unit_root(1, 1, 2, M).rho
    coeff = (rho * rho - 2).inverse()
    expected = IwasawaElement(2, {1: -1}, M, M) - embed(rho, ComponentChar(2, 0), M).scale(coeff)
    assert trace(1, 2, 1, 0, M).value == expected


def test_trace_level_one_p3():
    M = 25
    eta = ComponentChar(3, 0)
    assert hurwitz(11) == 1 and hurwitz(8) == 1
    expected = IwasawaElement(3, {1: -1}, M, M)
    for s in (1, 2):
        rho = unit_root(s, 1, 3, M).rho
        expected = expected - embed(rho, eta, M).scale((rho * rho - 3).inverse())
    assert trace(1, 3, 1, eta, M).value == expected


def test_trace_scalar_matches_group_ring_value():
    for p, m, k in [(3, 0, 10), (5, 2, 6), (7, 4, 10), (2, 0, 8)]:
        for j in (1, 2):
            e = trace(1, p, j, m, 30).value
            assert e.evaluate(k) == trace_scalar(1, p, j, k, 30)


def test_working_precision():
    assert working_precision(2, 250, 56, 10) == 250 + 8 + 53 + 2
    assert working_precision(3, 20, 10, 4) == 20 + 1 + 4 + 1


def test_charpoly_basic_shape():
    f = charpoly(1, 3, 0, 2, 10, 6)
    assert f.i_max == 2
    assert f.iwasawa[0] == IwasawaElement.one(3, f.working_prec)
    assert f.series[0].coeffs == (1, 0, 0, 0, 0, 0)
    assert all(s.prec == 10 and s.W == 6 for s in f.series)
    assert f.ledger[0] == f.working_prec
    assert f.ledger[2] == f.working_prec


def exp_oracle(traces, i_max, p, M):
    """Coefficients of exp(-sum T_j t^j / j) up to t^i_max, as residues mod p^M.

    ``traces[j]`` is an integer lift of T_j at a fixed weight.
    """
    X = [Fraction(0)] + [Fraction(-traces[j], j) for j in range(1, i_max + 1)]
    out = [Fraction(0)] * (i_max + 1)
    power = [Fraction(1)] + [Fraction(0)] * i_max
    fact = 1
    for n in range(i_max + 1):
        if n:
            fact *= n
            power = [sum(power[a] * X[b - a] for a in range(b + 1)) for b in range(i_max + 1)]
        for b in range(i_max + 1):
            out[b] += power[b] / fact
    return [PadicInt.from_rational(c, p, M).value for c in out]


@pytest.mark.parametrize("p, N, m, k", [(3, 1, 0, 4), (5, 1, 2, 6), (2, 1, 0, 6), (7, 1, 4, 16)])
def test_exp_identity_matches_recursion(p, N, m, k):
    i_max, M = 5, 10
    f = charpoly(N, p, m, i_max, M, 2)
    pts = [None] + [trace_scalar(N, p, j, k, 60).value for j in range(1, i_max + 1)]
    expected = exp_oracle(pts, i_max, p, M)
    got = [a.evaluate(k).reduce(M).value for a in f.iwasawa]
    assert got == expected


@pytest.mark.parametrize("p, gamma, i_max, M, W", [(3, 13, 3, 40, 14), (2, 13, 3, 80, 10), (5, 31, 2, 30, 8)])
def test_invariants_independent_of_generator(p, gamma, i_max, M, W):
    base = invariants(charpoly(1, p, 0, i_max, M, W))
    other = invariants(charpoly(1, p, 0, i_max, M, W, gen=gamma))
    assert base == other


def test_level_one_unit_coefficient_small_runs():
    for p, m in [(3, 0), (5, 0), (5, 2), (7, 2), (11, 4)]:
        f = charpoly(1, p, m, 3, 8, 4)
        assert all(unit_coefficient_of_one(a) for a in f.iwasawa)


def test_odd_traces_at_level_three_are_even():
    for j in (1, 3, 5, 7):
        e = trace(3, 2, j, 0, 30).value
        assert all(c % 2 == 0 for _, c in e.items())


def test_level_three_first_coefficient():
    f = charpoly(3, 2, 0, 1, 30, 4)
    assert f.iwasawa[1] == IwasawaElement(2, {1: 2}, f.working_prec, f.working_prec)


def test_level_five_three_component_zero_first_row():
    f = charpoly(3, 5, 0, 1, 20, 8)
    (w,) = invariants(f)[1:]
    assert (w.mu, w.lam) == (0, 5)
    assert w.zero_slopes.entries == (Fraction(1, 5),) * 5
    c = f.series[1].coeffs
    assert [x % 25 for x in c[:5]] == [10, 5, 10, 10, 5]
    assert c[5] % 5 == 1


def test_level_five_three_component_two_first_row():
    f = charpoly(3, 5, 2, 1, 20, 8)
    w = invariants(f)[1]
    assert (w.mu, w.lam) == (0, 0)


@settings(max_examples=12, deadline=None)
@given(st.sampled_from([3, 5, 7, 11, 13]), st.integers(0, 6), st.integers(1, 4))
def test_division_by_index_stays_integral(p, half_m, i_max):
    # NonIntegralDivision would propagate out of charpoly
    m = (2 * half_m) % (p - 1)
    f = charpoly(1, p, m, i_max, 6, 3)
    for i, a in enumerate(f.iwasawa):
        assert a.prec == f.working_prec - sum(vp(n, p) for n in range(1, i + 1))
