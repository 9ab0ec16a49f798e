import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halo.errors import DomainError, KeyCollisionError, PrecisionError
from halo.iwasawa import (
    ComponentChar,
    GeneratorChoice,
    IwasawaElement,
    embed,
    gamma_level,
    mu_lambda_iwasawa,
    to_series,
)
from halo.padic import PadicInt, teichmuller
from halo.series import TruncatedSeries

PRIMES = [2, 3, 5, 7]


def test_component_char_requires_even_exponent():
    with pytest.raises(DomainError):
        ComponentChar(5, 1)
    assert ComponentChar(5, 6).m == 2
    assert ComponentChar(2, 4).m == 0


def test_generator_choice():
    assert GeneratorChoice.default(2).gamma == 5
    assert GeneratorChoice.default(7).gamma == 8
    for bad in [(2, 3), (2, 9), (3, 10), (5, 1)]:
        with pytest.raises(DomainError):
            GeneratorChoice(*bad)


def test_embed_examples():
    M = 10
    assert embed(PadicInt(3, 1, M), ComponentChar(3, 0)) == IwasawaElement.one(3, M)
    e = embed(PadicInt(2, 3, M), ComponentChar(2, 0))
    assert e.items() == [((-3) % 2**M, 1)]
    e = embed(PadicInt(5, 2, 2), ComponentChar(5, 2))
    w = teichmuller(2, 2, 5)
    assert w.value == 7
    key = (2 * pow(7, -1, 25)) % 25
    assert e.items() == [(key, 49 % 25)]


def test_embed_needs_unit():
    with pytest.raises(DomainError):
        embed(PadicInt(3, 3, 5), ComponentChar(3, 0))


def test_divide_by_int():
    e = IwasawaElement(2, {1: 2, 5: 2}, 10)
    q = e.divide_by_int(2)
    assert q == IwasawaElement(2, {1: 1, 5: 1}, 9, key_prec=10)
    assert q.prec == 9


def test_to_series_of_generators():
    for p in PRIMES:
        gen = GeneratorChoice.default(p)
        g = gen.gamma
        M, W = 12, 6
        K = M + 10
        one = to_series(IwasawaElement.one(p, K), gen, W, M)
        assert one.coeffs == (1, 0, 0, 0, 0, 0)
        lin = to_series(IwasawaElement.group(g, p, K), gen, W, M)
        assert lin.coeffs == (1, 1, 0, 0, 0, 0)
        sq = to_series(IwasawaElement.group(g * g, p, K), gen, W, M)
        assert sq.coeffs == (1, 2, 1, 0, 0, 0)


def test_to_series_integer_powers_match_binomial_expansion():
    from math import comb

    p, M, W = 3, 15, 8
    gen = GeneratorChoice.default(p)
    for c in [3, 7, 12]:
        e = IwasawaElement.group(gen.gamma**c, p, M + 12)
        s = to_series(e, gen, W, M)
        assert s.coeffs == tuple(comb(c, n) % p**M for n in range(W))


def test_to_series_refuses_unsupported_precision():
    e = IwasawaElement.one(3, 5)
    with pytest.raises(PrecisionError):
        to_series(e, GeneratorChoice.default(3), 4, 10)


def test_mu_examples():
    assert mu_lambda_iwasawa(IwasawaElement(2, {1: 2}, 20)).mu == 1
    assert mu_lambda_iwasawa(IwasawaElement(2, {1: 1, 5: 4}, 20)).mu == 0
    z = mu_lambda_iwasawa(IwasawaElement.zero(3, 10))
    assert z.mu is None and z.status == "zero element"


def test_mu_reports_key_collision():
    # keys agreeing to more than half the digits
    e = IwasawaElement(3, {1: 1, 1 + 3**9: 1}, 10)
    with pytest.raises(KeyCollisionError):
        mu_lambda_iwasawa(e)


@st.composite
def elements(draw, p, prec, size=4):
    lvl = p ** gamma_level(p)
    terms = {}
    for _ in range(draw(st.integers(1, size))):
        key = 1 + lvl * draw(st.integers(0, p**prec))
        terms[key] = draw(st.integers(0, p**prec - 1))
    return IwasawaElement(p, terms, prec)


@settings(max_examples=40, deadline=None)
@given(st.data(), st.sampled_from(PRIMES))
def test_to_series_is_ring_homomorphism(data, p):
    K, W = 30, 8
    gen = GeneratorChoice.default(p)
    a = data.draw(elements(p, K))
    b = data.draw(elements(p, K))
    M = 12
    sa, sb = to_series(a, gen, W, M), to_series(b, gen, W, M)
    assert to_series(a * b, gen, W, M) == sa * sb
    assert to_series(a + b, gen, W, M) == sa + sb
    assert to_series(a.scale(7), gen, W, M) == sa.scale(7)


@settings(max_examples=30, deadline=None)
@given(st.data(), st.sampled_from(PRIMES), st.integers(1, 40))
def test_to_series_specialises_at_integer_weights(data, p, k):
    # f(gamma^k - 1) equals sum c_g g^k
    K, W = 30, 14
    gen = GeneratorChoice.default(p)
    e = data.draw(elements(p, K))
    s = to_series(e, gen, W, 12)
    w0 = PadicInt(p, gen.gamma**k - 1, K)
    v = s.evaluate(w0)
    assert v.prec >= 6
    assert v.reduce(min(v.prec, 12)) == e.evaluate(k).reduce(min(v.prec, 12))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 5, 7, 11]), st.integers(1, 10**6), st.integers(1, 10**6), st.integers(0, 4))
def test_embed_is_multiplicative(p, x, y, half_m):
    M = 15
    if x % p == 0:
        x += 1
    if y % p == 0:
        y += 1
    eta = ComponentChar(p, 2 * half_m)
    a, b = PadicInt(p, x, M), PadicInt(p, y, M)
    assert embed(a * b, eta) == embed(a, eta) * embed(b, eta)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.integers(1, 10**6), st.integers(0, 2), st.integers(0, 30))
def test_embedding_specialises_to_power(p, x, half_m, i):
    # on the component m, [rho]_eta at z^k is rho^k when k = m mod p - 1
    M = 20
    if x % p == 0:
        x += 1
    m = (2 * half_m) % (p - 1)
    k = m + (p - 1) * i
    rho = PadicInt(p, x, M)
    e = embed(rho, ComponentChar(p, m))
    assert e.evaluate(k) == rho**k


def test_series_evaluation_precision_capped_by_truncation():
    s = TruncatedSeries(3, (1, 1), 10)
    v = s.evaluate(PadicInt(3, 3, 10))
    assert v.prec == 2
