"""Class numbers of imaginary quadratic orders, Hurwitz class numbers, Kronecker symbols."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .errors import DomainError


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a | n) for arbitrary integers."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a | n) for odd n > 0
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _check_disc(D: int) -> None:
    if D >= 0 or D % 4 not in (0, 1):
        raise DomainError(f"{D} is not a negative discriminant")


def _squarefree_part(n: int) -> tuple[int, int]:
    """n = f^2 * m with m squarefree; returns (m, f). Trial division."""
    m, f = 1, 1
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            f *= d ** (e // 2)
            if e % 2:
                m *= d
        d += 1 if d == 2 else 2
    return m * n, f


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


@dataclass(frozen=True, slots=True)
class Discriminant:
    """D = t^2 * D_K with D_K fundamental."""

    D: int
    fundamental: int
    conductor: int

    @classmethod
    def of(cls, D: int) -> Discriminant:
        _check_disc(D)
        m, f = _squarefree_part(-D)
        DK = -m
        if DK % 4 != 1:
            DK *= 4
            f //= 2
        return cls(D, DK, f)


@lru_cache(maxsize=None)
def class_number(D: int) -> int:
    """h(O_D): primitive reduced positive definite forms of discriminant D."""
    _check_disc(D)
    amax = isqrt(-D // 3)
    start = -amax if (amax + D) % 2 == 0 else -amax + 1
    # only b = D mod 2 can occur
    a = np.arange(1, amax + 1, dtype=np.int64)[:, None]
    b = np.arange(start, amax + 1, 2, dtype=np.int64)[None, :]
    num = b * b - D
    ok = (np.abs(b) <= a) & (num % (4 * a) == 0)
    ia, ib = np.nonzero(ok)
    a = a[ia, 0]
    b = b[0, ib]
    c = (b * b - D) // (4 * a)
    keep = (c >= a) & ~((b < 0) & ((-b == a) | (a == c)))
    keep &= np.gcd(np.gcd(a, np.abs(b)), c) == 1
    return int(keep.sum())


def _unit_count(D: int) -> int:
    return {-3: 6, -4: 4}.get(D, 2)


@lru_cache(maxsize=None)
def hhat(D: int) -> Fraction:
    """Normalised class number 2 h(O_D) / w(O_D)."""
    return Fraction(2 * class_number(D), _unit_count(D))


@lru_cache(maxsize=None)
def hhat_euler(D: int) -> Fraction:
    """hhat(D) through the fundamental discriminant and the conductor's Euler factors."""
    disc = Discriminant.of(D)
    DK, t = disc.fundamental, disc.conductor
    value = t * hhat(DK)
    for ell in prime_factors(t):
        value *= 1 - Fraction(kronecker(DK, ell), ell)
    return value


@lru_cache(maxsize=None)
def hurwitz(n: int) -> Fraction:
    """Hurwitz class number H(n), with H(0) = -1/12 and H(n) = 0 for n < 0."""
    if n < 0:
        return Fraction(0)
    if n == 0:
        return Fraction(-1, 12)
    if (-n) % 4 not in (0, 1):
        return Fraction(0)
    t = Discriminant.of(-n).conductor
    return sum((hhat_euler(-n // (f * f)) for f in divisors(t)), Fraction(0))


def reduced_forms(D: int, primitive: bool = False):
    """Reduced forms (a, b, c) of discriminant D, by direct enumeration."""
    _check_disc(D)
    amax = isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if primitive and gcd(gcd(a, b), c) != 1:
                continue
            yield a, b, c


__all__ = [
    "Discriminant",
    "class_number",
    "divisors",
    "hhat",
    "hhat_euler",
    "hurwitz",
    "kronecker",
    "prime_factors",
    "reduced_forms",
]
