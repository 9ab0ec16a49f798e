"""p-adic integers known modulo p^M, and the analytic primitives on them.

Everything here is an immutable value; operations return new objects and
never claim more precision than their inputs carry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, NonIntegralDivision, PrecisionError


def vp(n: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_factorial(n: int, p: int) -> int:
    # Legendre's formula
    v, q = 0, p
    while q <= n:
        v += n // q
        q *= p
    return v


def vp_rational(x: Fraction, p: int) -> int | None:
    """Valuation of a rational, None for zero."""
    x = Fraction(x)
    if x == 0:
        return None
    return vp(x.numerator, p) - vp(x.denominator, p)


@dataclass(frozen=True, slots=True)
class PadicInt:
    """An element of Z_p known modulo p^prec.

    ``value`` is the reduced residue.  When the residue is zero the true
    element only has valuation >= prec; ``valuation`` then returns that floor
    and ``valuation_exact`` is False.
    """

    p: int
    value: int
    prec: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be a prime >= 2")
        if self.prec < 1:
            raise PrecisionError(f"precision must be >= 1, got {self.prec}")
        object.__setattr__(self, "value", self.value % self.p**self.prec)

    @classmethod
    def from_rational(cls, x, p: int, prec: int) -> PadicInt:
        x = Fraction(x)
        den = x.denominator
        if den % p == 0:
            raise DomainError(f"{x} is not {p}-integral")
        mod = p**prec
        return cls(p, x.numerator * pow(den, -1, mod), prec)

    @property
    def modulus(self) -> int:
        return self.p**self.prec

    @property
    def valuation(self) -> int:
        if self.value == 0:
            return self.prec
        return vp(self.value, self.p)

    @property
    def valuation_exact(self) -> bool:
        return self.value != 0

    def is_zero(self) -> bool:
        return self.value == 0

    def is_unit(self) -> bool:
        return self.value % self.p != 0

    def reduce(self, prec: int) -> PadicInt:
        if prec > self.prec:
            raise PrecisionError(f"cannot raise precision from {self.prec} to {prec}")
        return PadicInt(self.p, self.value, prec)

    def _coerce(self, other):
        if isinstance(other, PadicInt):
            if other.p != self.p:
                raise ValueError("mismatched primes")
            return other.value, other.prec
        if isinstance(other, int):
            return other, self.prec
        if isinstance(other, Fraction):
            return PadicInt.from_rational(other, self.p, self.prec).value, self.prec
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return PadicInt(self.p, self.value + c[0], min(self.prec, c[1]))

    __radd__ = __add__

    def __neg__(self):
        return PadicInt(self.p, -self.value, self.prec)

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return PadicInt(self.p, self.value - c[0], min(self.prec, c[1]))

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return PadicInt(self.p, c[0] - self.value, min(self.prec, c[1]))

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return PadicInt(self.p, self.value * c[0], min(self.prec, c[1]))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return PadicInt(self.p, pow(self.value, n, self.modulus), self.prec)

    def inverse(self) -> PadicInt:
        if not self.is_unit():
            raise DomainError(f"{self} is not a unit")
        return PadicInt(self.p, pow(self.value, -1, self.modulus), self.prec)

    def __truediv__(self, other):
        if isinstance(other, int):
            return self.divide_by_int(other)
        if isinstance(other, PadicInt):
            return self * other.inverse()
        return NotImplemented

    def divide_by_int(self, i: int) -> PadicInt:
        """Exact division by a nonzero integer, losing v_p(i) digits."""
        v = vp(i, self.p)
        u = abs(i) // self.p**v
        if v >= self.prec:
            raise PrecisionError(f"dividing by {i} exhausts precision {self.prec}")
        if self.value % self.p**v:
            raise NonIntegralDivision(f"{self} is not divisible by {self.p}^{v}")
        new_prec = self.prec - v
        q = (self.value // self.p**v) * pow(u, -1, self.p**new_prec)
        return PadicInt(self.p, q if i > 0 else -q, new_prec)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"PadicInt({self.value} mod {self.p}^{self.prec})"


def _as_padic(x, p: int | None, prec: int | None) -> PadicInt:
    if isinstance(x, PadicInt):
        return x
    if p is None or prec is None:
        raise TypeError("integer input needs p and a precision")
    return PadicInt(p, x, prec)


def teichmuller(u, M: int | None = None, p: int | None = None) -> PadicInt:
    """Teichmuller representative of a unit, to precision M.

    For p = 2 the answer is the sign +-1 with u * omega(u)^-1 = 1 mod 4.
    The value only depends on u mod p (mod 4 when p = 2), so M may exceed
    the precision of u.
    """
    u = _as_padic(u, p, M)
    p = u.p
    M = u.prec if M is None else M
    if not u.is_unit():
        raise DomainError(f"Teichmuller lift of non-unit {u}")
    if p == 2:
        if u.prec < 2 and M > 1:
            raise PrecisionError("the sign of a 2-adic unit needs it mod 4")
        return PadicInt(2, 1 if u.value % 4 == 1 else -1, M)
    mod = p**M
    return PadicInt(p, pow(u.value % p, p ** (M - 1), mod), M)


def _log_term_bound(p: int, a: int, M: int) -> int:
    # least n0 with n*a - log_p(n) >= M for all n >= n0 (n*a - log_p(n) is increasing)
    n = 1
    while True:
        e, q = 0, 1
        while q * p <= n:
            q *= p
            e += 1
        if n * a - (e + 1) >= M:
            return n
        n += 1


def plog(g, M: int | None = None, p: int | None = None) -> PadicInt:
    """p-adic logarithm of g in 1 + pZ_p (1 + 4Z_2 for p = 2), correct mod p^M."""
    g = _as_padic(g, p, M)
    p = g.p
    M = g.prec if M is None else M
    if M > g.prec:
        raise PrecisionError(f"log to precision {M} of an element known mod {p}^{g.prec}")
    x = (g.value - 1) % g.modulus
    need = 2 if p == 2 else 1
    if x % p**need:
        raise DomainError(f"log is only taken on 1 + {p**need}Z_{p}; got {g}")
    if x == 0:
        return PadicInt(p, 0, M)
    a = vp(x, p)
    n0 = _log_term_bound(p, a, M)
    extra = 0
    while p ** (extra + 1) <= n0:
        extra += 1
    big = p ** (M + extra)
    mod = p**M
    total = 0
    xn = 1
    for n in range(1, n0):
        xn = xn * x % big
        v = vp(n, p)
        t = (xn // p**v) * pow(n // p**v, -1, mod)
        total += t if n % 2 else -t
    return PadicInt(p, total, M)


def binomial_row(c: int, p: int, L: int, W: int) -> tuple[list[int], list[int]]:
    """Residues of C(c, n) for n < W from c known mod p^L.

    Returns (values, precisions); C(c, n) is correct mod p^(L - v_p(n!)).
    """
    mod = p**L
    vals = [1 % mod]
    precs = [L]
    falling = 1
    unit_fact_inv = 1
    v_fact = 0
    for n in range(1, W):
        falling = falling * (c - n + 1) % mod
        v = vp(n, p)
        v_fact += v
        unit_fact_inv = unit_fact_inv * pow(n // p**v, -1, mod) % mod
        prec = L - v_fact
        if prec <= 0:
            raise PrecisionError(f"precision {L} exhausted by binomial denominators at n={n}")
        if falling % p**v_fact:
            raise NonIntegralDivision(f"falling factorial of {c} at n={n}")
        vals.append((falling // p**v_fact) * unit_fact_inv % p**prec)
        precs.append(prec)
    return vals, precs


def pbinom(c, n: int, M: int, p: int | None = None) -> PadicInt:
    """Binomial coefficient C(c, n) in Z_p, correct mod p^M."""
    c = _as_padic(c, p, M + vp_factorial(n, p) if p else None)
    if n < 0:
        raise DomainError("n must be >= 0")
    need = M + vp_factorial(n, c.p)
    if c.prec < need:
        raise PrecisionError(f"C(c, {n}) mod {c.p}^{M} needs c mod {c.p}^{need}, have {c.prec}")
    vals, _ = binomial_row(c.value, c.p, c.prec, n + 1)
    return PadicInt(c.p, vals[n], M)


@dataclass(frozen=True, slots=True)
class QuadraticUnitRoot:
    """The unit root rho of X^2 - s X + p^j."""

    s: int
    j: int
    rho: PadicInt

    def __post_init__(self):
        r, p = self.rho, self.rho.p
        if (r.value * r.value - self.s * r.value + p**self.j) % r.modulus:
            raise ArithmeticError(f"rho does not satisfy X^2 - {self.s}X + {p}^{self.j}")
        if not r.is_unit():
            raise ArithmeticError("rho is not a unit")

    @property
    def conjugate(self) -> PadicInt:
        return self.s - self.rho


def check_root_params(s: int, j: int, p: int) -> None:
    if j < 1:
        raise DomainError(f"j must be >= 1, got {j}")
    if s < 1 or s * s >= 4 * p**j:
        raise DomainError(f"need 1 <= s < 2 p^(j/2); got s={s}, j={j}, p={p}")
    if s % p == 0:
        raise DomainError(f"p={p} divides s={s}")


@lru_cache(maxsize=4096)
def unit_root(s: int, j: int, p: int, M: int) -> QuadraticUnitRoot:
    """Hensel-lift the unit root of X^2 - sX + p^j to precision M.

    The root is congruent to s mod p and the derivative 2X - s is a unit
    there for every p (s is odd when p = 2), so Newton iteration converges
    quadratically from the residue mod p.
    """
    check_root_params(s, j, p)
    pj = p**j
    x = s % p
    k = 1
    while k < M:
        k = min(2 * k, M)
        mod = p**k
        fx = x * x - s * x + pj
        x = (x - fx * pow(2 * x - s, -1, mod)) % mod
    return QuadraticUnitRoot(s, j, PadicInt(p, x, M))
