"""The group ring Z_p[Gamma] at finite precision and its passage to Z_p[[w]].

Gamma = 1 + pZ_p (1 + 4Z_2 when p = 2).  An element is a finite formal sum
of group elements [g]; keys are the residues of g mod p^key_prec.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, KeyCollisionError, NonIntegralDivision, PrecisionError
from .padic import PadicInt, binomial_row, plog, teichmuller, vp, vp_factorial
from .series import TruncatedSeries


def torsion_order(p: int) -> int:
    """|Delta|, the order of the torsion subgroup of Z_p^x."""
    return 2 if p == 2 else p - 1


def gamma_level(p: int) -> int:
    """v_p(g - 1) of a topological generator g of Gamma."""
    return 2 if p == 2 else 1


@dataclass(frozen=True, slots=True)
class ComponentChar:
    """The character eta = omega^m of Delta, labelling an even component of weight space."""

    p: int
    m: int = 0

    def __post_init__(self):
        m = self.m % torsion_order(self.p)
        if m % 2:
            raise DomainError(f"component exponent must be even (level Gamma_0(N)); got m={self.m}")
        object.__setattr__(self, "m", m)

    def __call__(self, rho: PadicInt) -> PadicInt:
        """eta(rho-bar) = omega(rho)^m."""
        return teichmuller(rho, rho.prec) ** self.m


@dataclass(frozen=True, slots=True)
class GeneratorChoice:
    """A topological generator gamma of Gamma, fixing the coordinate w = kappa(gamma) - 1."""

    p: int
    gamma: int

    def __post_init__(self):
        lvl = gamma_level(self.p)
        x = self.gamma - 1
        if x == 0 or vp(x, self.p) != lvl:
            raise DomainError(f"{self.gamma} is not a topological generator of Gamma for p={self.p}")

    @classmethod
    def default(cls, p: int) -> GeneratorChoice:
        return cls(p, 5 if p == 2 else 1 + p)


def is_group_key(k: int, p: int) -> bool:
    return (k - 1) % p ** gamma_level(p) == 0


class IwasawaElement:
    """sum c_g [g] in Z_p[Gamma].

    Coefficients are residues mod p^prec; keys are residues mod p^key_prec.
    Dividing by an integer lowers ``prec`` only.  Distinct group elements
    that agree mod p^key_prec merge, which is a sound reduction of the true
    element but can hide structure; see ``keys_separated``.
    """

    __slots__ = ("p", "prec", "key_prec", "_terms")

    def __init__(self, p: int, terms: dict, prec: int, key_prec: int | None = None):
        if prec < 1:
            raise PrecisionError(f"coefficient precision must be >= 1, got {prec}")
        key_prec = prec if key_prec is None else key_prec
        self.p = p
        self.prec = prec
        self.key_prec = key_prec
        kmod, cmod = p**key_prec, p**prec
        clean: dict[int, int] = {}
        for k, c in terms.items():
            k = int(k) % kmod
            if not is_group_key(k, p):
                raise DomainError(f"key {k} is not in Gamma for p={p}")
            c = (clean.get(k, 0) + int(c)) % cmod
            clean[k] = c
        self._terms = {k: c for k, c in clean.items() if c}

    @classmethod
    def zero(cls, p: int, prec: int, key_prec: int | None = None) -> IwasawaElement:
        return cls(p, {}, prec, key_prec)

    @classmethod
    def one(cls, p: int, prec: int, key_prec: int | None = None) -> IwasawaElement:
        return cls(p, {1: 1}, prec, key_prec)

    @classmethod
    def group(cls, g: int, p: int, prec: int, coeff: int = 1) -> IwasawaElement:
        return cls(p, {g: coeff}, prec)

    @property
    def terms(self) -> dict[int, PadicInt]:
        return {k: PadicInt(self.p, c, self.prec) for k, c in self._terms.items()}

    def items(self):
        """(key, coefficient residue) pairs in ascending key order."""
        return sorted(self._terms.items())

    def coefficient(self, key: int) -> PadicInt:
        return PadicInt(self.p, self._terms.get(key % self.p**self.key_prec, 0), self.prec)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, IwasawaElement):
            return NotImplemented
        return (self.p, self.prec, self.key_prec, self._terms) == (
            other.p,
            other.prec,
            other.key_prec,
            other._terms,
        )

    def __hash__(self):
        return hash((self.p, self.prec, self.key_prec, frozenset(self._terms.items())))

    def __repr__(self):
        shown = ", ".join(f"{c}*[{k}]" for k, c in self.items()[:4])
        more = f", ... ({len(self)} terms)" if len(self) > 4 else ""
        return f"IwasawaElement({shown}{more}; mod {self.p}^{self.prec})"

    def _common(self, other: IwasawaElement):
        if other.p != self.p:
            raise ValueError("mismatched primes")
        return min(self.prec, other.prec), min(self.key_prec, other.key_prec)

    def __add__(self, other):
        if not isinstance(other, IwasawaElement):
            return NotImplemented
        prec, kp = self._common(other)
        kmod = self.p**kp
        out: dict[int, int] = {}
        for src in (self._terms, other._terms):
            for k, c in src.items():
                k %= kmod
                out[k] = out.get(k, 0) + c
        return IwasawaElement(self.p, out, prec, kp)

    def __neg__(self):
        return IwasawaElement(self.p, {k: -c for k, c in self._terms.items()}, self.prec, self.key_prec)

    def __sub__(self, other):
        if not isinstance(other, IwasawaElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, PadicInt)):
            return self.scale(other)
        if not isinstance(other, IwasawaElement):
            return NotImplemented
        prec, kp = self._common(other)
        kmod, cmod = self.p**kp, self.p**prec
        out: dict[int, int] = {}
        get = out.get
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = k1 * k2 % kmod
                out[k] = (get(k, 0) + c1 * c2) % cmod
        return IwasawaElement(self.p, out, prec, kp)

    def __rmul__(self, other):
        if isinstance(other, (int, PadicInt)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> IwasawaElement:
        if isinstance(c, PadicInt):
            return IwasawaElement(
                self.p, {k: x * c.value for k, x in self._terms.items()}, min(self.prec, c.prec), self.key_prec
            )
        return IwasawaElement(self.p, {k: x * c for k, x in self._terms.items()}, self.prec, self.key_prec)

    def divide_by_int(self, i: int) -> IwasawaElement:
        """Divide coefficients by i, losing v_p(i) digits of coefficient precision."""
        p = self.p
        v = vp(i, p)
        if v >= self.prec:
            raise PrecisionError(f"dividing by {i} exhausts coefficient precision {self.prec}")
        pv = p**v
        new_prec = self.prec - v
        inv = pow(i // pv, -1, p**new_prec)
        out = {}
        for k, c in self._terms.items():
            if c % pv:
                raise NonIntegralDivision(f"coefficient of [{k}] has valuation {vp(c, p)} < v_p({i}) = {v}")
            out[k] = (c // pv) * inv
        return IwasawaElement(p, out, new_prec, self.key_prec)

    def evaluate(self, k: int) -> PadicInt:
        """Value at the weight z^k: sum c_g g^k.

        Meaningful on the component eta = omega^m when k = m mod |Delta|.
        """
        prec = min(self.prec, self.key_prec)
        mod = self.p**prec
        total = sum(c * pow(g, k, mod) for g, c in self._terms.items())
        return PadicInt(self.p, total, prec)

    def keys_separated(self) -> bool:
        """True when all keys already differ mod p^(key_prec // 2).

        Keys that only separate in the upper half of the available digits
        suggest other pairs may have merged below the working precision.
        """
        if len(self._terms) < 2:
            return True
        half = self.p ** max(1, self.key_prec // 2)
        return len({k % half for k in self._terms}) == len(self._terms)


def embed(rho: PadicInt, eta: ComponentChar, M: int | None = None) -> IwasawaElement:
    """[rho]_eta = eta(rho-bar) * [rho * omega(rho)^-1]."""
    if rho.p != eta.p:
        raise ValueError("mismatched primes")
    M = rho.prec if M is None else M
    if M > rho.prec:
        raise PrecisionError(f"embedding to precision {M} needs rho mod p^{M}")
    if not rho.is_unit():
        raise DomainError(f"[rho]_eta needs a unit, got {rho}")
    rho = rho.reduce(M)
    w = teichmuller(rho, M)
    key = rho * w.inverse()
    return IwasawaElement(rho.p, {key.value: (w**eta.m).value}, M, M)


@lru_cache(maxsize=1 << 16)
def _key_log_ratio(p: int, key: int, key_prec: int, gamma: int) -> tuple[int, int]:
    """c(g) = log(g) / log(gamma) as (residue, precision)."""
    lg = plog(PadicInt(p, key, key_prec))
    lgam = plog(PadicInt(p, gamma, key_prec))
    e = gamma_level(p)
    prec = key_prec - e
    if prec < 1:
        raise PrecisionError(f"key precision {key_prec} too small for log ratio")
    mod = p**prec
    num = lg.value // p**e
    den = lgam.value // p**e
    return num * pow(den, -1, mod) % mod, prec


@lru_cache(maxsize=1 << 16)
def _key_series(p: int, key: int, key_prec: int, gamma: int, W: int) -> tuple[tuple[int, ...], int]:
    # (1 + w)^c(g) truncated at w^W, with its uniform precision
    c, prec = _key_log_ratio(p, key, key_prec, gamma)
    vals, precs = binomial_row(c, p, prec, W)
    return tuple(vals), precs[-1]


def series_precision(key_prec: int, p: int, W: int) -> int:
    """p-precision of to_series output attainable from keys known mod p^key_prec."""
    return key_prec - gamma_level(p) - vp_factorial(W - 1, p)


def to_series(e: IwasawaElement, gen: GeneratorChoice, W: int, M: int | None = None) -> TruncatedSeries:
    """Image of e under [gamma] -> 1 + w, modulo (p^M, w^W).

    Each [g] maps to (1 + w)^c(g) with c(g) = log(g)/log(gamma), expanded by
    binomial coefficients.  Raises PrecisionError if the coefficient or key
    precision of e cannot support p^M.
    """
    p = e.p
    if gen.p != p:
        raise ValueError("mismatched primes")
    if W < 1:
        raise ValueError("W must be >= 1")
    avail = min(e.prec, series_precision(e.key_prec, p, W))
    M = avail if M is None else M
    if M > avail:
        raise PrecisionError(
            f"series mod {p}^{M} needs coefficient precision {M} and key precision "
            f"{M + gamma_level(p) + vp_factorial(W - 1, p)}; have {e.prec}, {e.key_prec}"
        )
    if M < 1:
        raise PrecisionError("no p-adic precision left for the series")
    mod = p**M
    acc = [0] * W
    for key, coeff in e.items():
        row, _ = _key_series(p, key, e.key_prec, gen.gamma, W)
        for n in range(W):
            acc[n] += coeff * row[n]
    return TruncatedSeries(p, tuple(a % mod for a in acc), M)


@dataclass(frozen=True, slots=True)
class MuLambda:
    """Invariants read off the group-ring form; lambda needs the series and stays None here."""

    mu: int | None
    lam: int | None = None
    status: str = "ok"


def mu_lambda_iwasawa(e: IwasawaElement) -> MuLambda:
    """mu = least valuation among the coefficients of distinct group elements."""
    if e.is_zero():
        return MuLambda(None, None, "zero element")
    if not e.keys_separated():
        raise KeyCollisionError(
            f"keys of a {len(e)}-term element are not separated at {e.p}^{e.key_prec}; raise the precision"
        )
    return MuLambda(min(vp(c, e.p) for c in e._terms.values()), None, "ok")
