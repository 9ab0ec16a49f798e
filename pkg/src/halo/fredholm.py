"""Trace-formula constants, the trace elements T_j in Z_p[Gamma], and the
Newton recursion for the coefficients a_i of det(1 - t U_p).
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from .classnum import Discriminant, divisors, hhat, hurwitz, kronecker, prime_factors
from .errors import DomainError, InputError, NonIntegralDivision, RamifiedConstantUnsupported, UnsupportedLevel
from .iwasawa import (
    ComponentChar,
    GeneratorChoice,
    IwasawaElement,
    embed,
    gamma_level,
    to_series,
)
from .padic import PadicInt, unit_root, vp_factorial
from .series import TruncatedSeries

# (ell, p, s, j, f) -> local factor c_ell(s, f) at a prime ell | N dividing Delta_{s,j}
RamifiedHook = Callable[[int, int, int, int, int], Fraction | int]


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, isqrt(n) + 1))


@dataclass(frozen=True, slots=True)
class LevelSpec:
    """Tame level N prime to p."""

    N: int
    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise InputError(f"p={self.p} is not prime")
        if self.N < 1:
            raise InputError(f"N must be positive, got {self.N}")
        if gcd(self.N, self.p) != 1:
            raise InputError(f"N={self.N} is not prime to p={self.p}")

    @property
    def primes(self) -> list[int]:
        return prime_factors(self.N)

    @property
    def squarefree(self) -> bool:
        return all((self.N // ell) % ell for ell in self.primes)

    def require_squarefree(self) -> None:
        if not self.squarefree:
            raise UnsupportedLevel(f"N={self.N} is not squarefree; only N = 1 or squarefree N are supported")


def s_range(p: int, j: int) -> list[int]:
    """1 <= s with s^2 < 4 p^j and p not dividing s."""
    bound = 4 * p**j
    out = []
    s = 1
    while s * s < bound:
        if s % p:
            out.append(s)
        s += 1
    return out


def c_const(N: int, p: int, j: int) -> int:
    """c_N(p, j): 1 at level 1, 2 per prime factor of a squarefree level."""
    level = LevelSpec(N, p)
    level.require_squarefree()
    if j < 1:
        raise DomainError(f"j must be >= 1, got {j}")
    return 2 ** len(level.primes)


def c_term(N: int, p: int, s: int, j: int, ramified: RamifiedHook | None = None) -> Fraction:
    """c_N(p, s, j) as an exact rational.

    Unramified primes ell | N contribute 1 + (Delta | ell) to each local
    factor.  A prime dividing Delta = s^2 - 4p^j needs ``ramified``; without
    it RamifiedConstantUnsupported is raised.
    """
    level = LevelSpec(N, p)
    level.require_squarefree()
    if j < 1 or s < 1 or s * s >= 4 * p**j or s % p == 0:
        raise DomainError(f"(s, j) = ({s}, {j}) outside 1 <= s < 2p^(j/2), p not dividing s")
    delta = s * s - 4 * p**j
    H = hurwitz(-delta)
    bad = [ell for ell in level.primes if delta % ell == 0]
    good = [ell for ell in level.primes if delta % ell]
    unram = 1
    for ell in good:
        unram *= 1 + kronecker(delta, ell)
    if not bad:
        return H * unram
    if ramified is None:
        raise RamifiedConstantUnsupported(bad[0], p, s, j)
    t = _conductor(delta)
    total = Fraction(0)
    for f in divisors(t):
        local = Fraction(unram)
        for ell in bad:
            local *= Fraction(ramified(ell, p, s, j, f))
        total += hhat(delta // (f * f)) * local
    return total


def _conductor(D: int) -> int:
    return Discriminant.of(D).conductor


def _embed_rational(x: Fraction, p: int, M: int) -> PadicInt:
    if x.denominator % p == 0:
        raise AssertionError(f"class-number denominator {x.denominator} is divisible by p={p}")
    return PadicInt.from_rational(x, p, M)


@lru_cache(maxsize=None)
def trace_constants(N: int, p: int, j: int, ramified: RamifiedHook | None = None) -> tuple:
    """Exact data of T_j: (c_N(p,j), ((s, c_N(p,s,j)), ...)), zero terms dropped."""
    c0 = c_const(N, p, j)
    terms = []
    for s in s_range(p, j):
        c = c_term(N, p, s, j, ramified)
        if c:
            terms.append((s, c))
    return c0, tuple(terms)


@dataclass(frozen=True)
class TraceElement:
    j: int
    value: IwasawaElement
    component: ComponentChar


@lru_cache(maxsize=None)
def _trace_cached(N: int, p: int, j: int, m: int, M: int, ramified) -> IwasawaElement:
    eta = ComponentChar(p, m)
    c0, terms = trace_constants(N, p, j, ramified)
    acc: dict[int, int] = {1: -c0}
    mod = p**M
    pj = p**j
    for s, c in terms:
        rho = unit_root(s, j, p, M).rho
        coeff = _embed_rational(c, p, M) * (rho * rho - pj).inverse()
        e = embed(rho, eta, M)
        for key, val in e._terms.items():
            acc[key] = (acc.get(key, 0) - coeff.value * val) % mod
    return IwasawaElement(p, acc, M, M)


def trace(
    N: int, p: int, j: int, eta: ComponentChar | int = 0, M: int = 20, ramified: RamifiedHook | None = None
) -> TraceElement:
    """T_j = -c_N(p,j)[1] - sum_s c_N(p,s,j) / (rho_{s,j}^2 - p^j) [rho_{s,j}]_eta, mod p^M."""
    if not isinstance(eta, ComponentChar):
        eta = ComponentChar(p, eta)
    if eta.p != p:
        raise InputError("component character has the wrong prime")
    return TraceElement(j, _trace_cached(N, p, j, eta.m, M, ramified), eta)


def trace_scalar(N: int, p: int, j: int, k: int, M: int, ramified: RamifiedHook | None = None) -> PadicInt:
    """T_j at the integer weight z^k: -c_N(p,j) - sum_s c_N(p,s,j) rho^k / (rho^2 - p^j)."""
    c0, terms = trace_constants(N, p, j, ramified)
    total = PadicInt(p, -c0, M)
    pj = p**j
    for s, c in terms:
        rho = unit_root(s, j, p, M).rho
        total = total - _embed_rational(c, p, M) * rho**k * (rho * rho - pj).inverse()
    return total


def working_precision(p: int, M: int, W: int, i_max: int) -> int:
    """p-precision for the trace inputs so that every a_i, i <= i_max, reaches (p^M, w^W)."""
    return M + vp_factorial(i_max, p) + vp_factorial(W, p) + gamma_level(p)


@dataclass
class FredholmCoefficients:
    p: int
    N: int
    component: ComponentChar
    gamma: GeneratorChoice
    M: int
    W: int
    working_prec: int
    iwasawa: list[IwasawaElement]
    series: list[TruncatedSeries]
    ledger: list[int] = field(default_factory=list)

    @property
    def i_max(self) -> int:
        return len(self.iwasawa) - 1


def charpoly(
    N: int,
    p: int,
    eta: ComponentChar | int = 0,
    i_max: int = 1,
    M: int = 20,
    W: int = 20,
    gen: GeneratorChoice | int | None = None,
    ramified: RamifiedHook | None = None,
) -> FredholmCoefficients:
    """a_0, ..., a_{i_max} in Iwasawa form and as series mod (p^M, w^W).

    a_i = -(1/i) sum_{j=1}^{i} a_{i-j} T_j, computed in the group ring at
    the working precision; ``ledger[i]`` is the coefficient precision left
    after the divisions by 1, ..., i.
    """
    if not isinstance(eta, ComponentChar):
        eta = ComponentChar(p, eta)
    if gen is None:
        gen = GeneratorChoice.default(p)
    elif not isinstance(gen, GeneratorChoice):
        gen = GeneratorChoice(p, gen)
    if i_max < 0 or M < 1 or W < 1:
        raise InputError("need i_max >= 0, M >= 1, W >= 1")
    LevelSpec(N, p).require_squarefree()
    K = working_precision(p, M, W, i_max)
    traces = [None] + [trace(N, p, j, eta, K, ramified).value for j in range(1, i_max + 1)]
    a = [IwasawaElement.one(p, K, K)]
    ledger = [K]
    for i in range(1, i_max + 1):
        acc = IwasawaElement.zero(p, K, K)
        for j in range(1, i + 1):
            acc = acc + a[i - j] * traces[j]
        try:
            ai = (-acc).divide_by_int(i)
        except NonIntegralDivision as exc:
            raise NonIntegralDivision(f"a_{i}: {exc}") from exc
        a.append(ai)
        ledger.append(ai.prec)
    series = [to_series(x, gen, W, M) for x in a]
    return FredholmCoefficients(p, N, eta, gen, M, W, K, a, series, ledger)


def unit_coefficient_of_one(e: IwasawaElement) -> bool:
    return e.coefficient(1).is_unit()


__all__ = [
    "FredholmCoefficients",
    "LevelSpec",
    "TraceElement",
    "c_const",
    "c_term",
    "charpoly",
    "s_range",
    "trace",
    "trace_constants",
    "trace_scalar",
    "working_precision",
]
