"""Power series in w over Z_p, known modulo (p^M, w^W)."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NonIntegralDivision, PrecisionError
from .padic import PadicInt, vp


@dataclass(frozen=True, slots=True)
class TruncatedSeries:
    """sum c_n w^n for n < W, every coefficient known mod p^prec.

    The p-precision is a single floor shared by all coefficients; exact
    valuations of individual coefficients are still available through
    ``valuations``.
    """

    p: int
    coeffs: tuple[int, ...]
    prec: int

    def __post_init__(self):
        if self.prec < 1:
            raise PrecisionError(f"p-precision must be >= 1, got {self.prec}")
        if not self.coeffs:
            raise ValueError("a truncated series needs at least one coefficient")
        mod = self.p**self.prec
        object.__setattr__(self, "coeffs", tuple(c % mod for c in self.coeffs))

    @classmethod
    def from_padics(cls, coeffs) -> TruncatedSeries:
        coeffs = list(coeffs)
        p = coeffs[0].p
        prec = min(c.prec for c in coeffs)
        return cls(p, tuple(c.value for c in coeffs), prec)

    @classmethod
    def constant(cls, p: int, c: int, W: int, prec: int) -> TruncatedSeries:
        return cls(p, (c,) + (0,) * (W - 1), prec)

    @property
    def W(self) -> int:
        return len(self.coeffs)

    @property
    def modulus(self) -> int:
        return self.p**self.prec

    @property
    def coefficients(self) -> list[PadicInt]:
        return [PadicInt(self.p, c, self.prec) for c in self.coeffs]

    def valuations(self) -> list[tuple[int, bool]]:
        """(valuation, exact) per coefficient; inexact entries are floors."""
        out = []
        for c in self.coeffs:
            if c == 0:
                out.append((self.prec, False))
            else:
                out.append((vp(c, self.p), True))
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def reduce(self, prec: int | None = None, W: int | None = None) -> TruncatedSeries:
        prec = self.prec if prec is None else prec
        W = self.W if W is None else W
        if prec > self.prec or W > self.W:
            raise PrecisionError("reduce can only lower precision")
        return TruncatedSeries(self.p, self.coeffs[:W], prec)

    def _check(self, other: TruncatedSeries):
        if other.p != self.p:
            raise ValueError("mismatched primes")

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        W = min(self.W, other.W)
        return TruncatedSeries(
            self.p, tuple(a + b for a, b in zip(self.coeffs[:W], other.coeffs[:W])), min(self.prec, other.prec)
        )

    def __neg__(self):
        return TruncatedSeries(self.p, tuple(-c for c in self.coeffs), self.prec)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, PadicInt)):
            return self.scale(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        self._check(other)
        W = min(self.W, other.W)
        prec = min(self.prec, other.prec)
        mod = self.p**prec
        a, b = self.coeffs, other.coeffs
        out = [0] * W
        for i in range(W):
            ai = a[i]
            if not ai:
                continue
            for k in range(W - i):
                out[i + k] += ai * b[k]
        return TruncatedSeries(self.p, tuple(c % mod for c in out), prec)

    def __rmul__(self, other):
        if isinstance(other, (int, PadicInt)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> TruncatedSeries:
        if isinstance(c, PadicInt):
            return TruncatedSeries(self.p, tuple(x * c.value for x in self.coeffs), min(self.prec, c.prec))
        return TruncatedSeries(self.p, tuple(x * c for x in self.coeffs), self.prec)

    def divide_by_int(self, i: int) -> TruncatedSeries:
        """Divide every coefficient by i; p-precision drops by exactly v_p(i)."""
        v = vp(i, self.p)
        if v == 0:
            inv = pow(i, -1, self.modulus)
            return TruncatedSeries(self.p, tuple(c * inv for c in self.coeffs), self.prec)
        if v >= self.prec:
            raise PrecisionError(f"dividing by {i} exhausts p-precision {self.prec}")
        pv = self.p**v
        for n, c in enumerate(self.coeffs):
            if c % pv:
                raise NonIntegralDivision(f"coefficient {n} has valuation {vp(c, self.p)} < v_p({i}) = {v}")
        new_prec = self.prec - v
        inv = pow(i // pv, -1, self.p**new_prec)
        return TruncatedSeries(self.p, tuple((c // pv) * inv for c in self.coeffs), new_prec)

    def evaluate(self, w0: PadicInt) -> PadicInt:
        """Value at w0 with v_p(w0) > 0.

        The unknown tail contributes valuation >= W * v_p(w0), which caps the
        precision of the result.
        """
        if w0.p != self.p:
            raise ValueError("mismatched primes")
        if w0.is_unit():
            raise ValueError("evaluation point must lie in the open unit disc")
        prec = min(self.prec, w0.prec, self.W * w0.valuation)
        mod = self.p**prec
        acc = 0
        x = w0.value
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % mod
        return PadicInt(self.p, acc, prec)

    def __repr__(self):
        terms = [f"{c}*w^{n}" for n, c in enumerate(self.coeffs) if c]
        body = " + ".join(terms[:6]) + (" + ..." if len(terms) > 6 else "")
        return f"TruncatedSeries({body or '0'} mod ({self.p}^{self.prec}, w^{self.W}))"
