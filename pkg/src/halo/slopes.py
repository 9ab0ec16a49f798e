"""Slope multisets, progression families and the boundary-slope predictor."""

from __future__ import annotations

import heapq
import json
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from pathlib import Path

from .classnum import divisors
from .errors import DomainError, InputError
from .padic import vp


def parse_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {x!r}") from exc
    raise InputError(f"not a rational: {x!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, slots=True)
class SlopeMultiset:
    """Finite multiset of non-negative rationals, stored sorted."""

    entries: tuple[Fraction, ...] = ()

    def __init__(self, entries: Iterable = ()):
        vals = sorted(parse_rational(x) for x in entries)
        if vals and vals[0] < 0:
            raise DomainError(f"slopes must be non-negative, got {vals[0]}")
        object.__setattr__(self, "entries", tuple(vals))

    @classmethod
    def repeated(cls, value, count: int) -> SlopeMultiset:
        return cls([parse_rational(value)] * count)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __or__(self, other: SlopeMultiset) -> SlopeMultiset:
        """Multiset union (multiplicities add)."""
        return SlopeMultiset(self.entries + tuple(other))

    def shift(self, x) -> SlopeMultiset:
        x = parse_rational(x)
        return SlopeMultiset(v + x for v in self.entries)

    def scale(self, c) -> SlopeMultiset:
        c = parse_rational(c)
        return SlopeMultiset(v * c for v in self.entries)

    def counts(self) -> Counter:
        return Counter(self.entries)

    def within(self, lo, hi, closed_lo: bool = True, closed_hi: bool = False) -> SlopeMultiset:
        lo, hi = parse_rational(lo), parse_rational(hi)
        return SlopeMultiset(
            v
            for v in self.entries
            if (v > lo or (closed_lo and v == lo)) and (v < hi or (closed_hi and v == hi))
        )

    def to_strings(self) -> list[str]:
        return [format_rational(v) for v in self.entries]

    def __repr__(self):
        return "{" + ", ".join(self.to_strings()) + "}"


@dataclass(frozen=True, slots=True)
class ProgressionFamily:
    """The sequence union_{i >= 0} (seeds + i d)."""

    seeds: SlopeMultiset
    d: Fraction

    def __post_init__(self):
        d = parse_rational(self.d)
        if d <= 0:
            raise DomainError(f"common difference must be positive, got {d}")
        object.__setattr__(self, "d", d)


@dataclass(frozen=True, slots=True)
class ClassicalSlopeRecord:
    """Slopes of U_p on a classical space S_k(Gamma_1(N p^t), chi), supplied as data."""

    p: int
    N: int
    k: int
    conductor_exponent: int
    component: int
    slopes: SlopeMultiset
    dimension: int | None = None

    def __post_init__(self):
        if not isinstance(self.slopes, SlopeMultiset):
            object.__setattr__(self, "slopes", SlopeMultiset(self.slopes))
        if self.dimension is not None and self.dimension != len(self.slopes):
            raise InputError(f"record declares dimension {self.dimension} but lists {len(self.slopes)} slopes")

    @classmethod
    def from_dict(cls, d: dict) -> ClassicalSlopeRecord:
        required = ("p", "N", "k", "conductor_exponent", "component", "slopes")
        missing = [key for key in required if key not in d]
        if missing:
            raise InputError(f"classical record is missing {', '.join(missing)}")
        if not isinstance(d["slopes"], list):
            raise InputError("'slopes' must be a list of rational strings")
        try:
            ints = {key: int(d[key]) for key in required[:-1]}
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad integer field in classical record: {exc}") from exc
        dim = d.get("dimension")
        return cls(**ints, slopes=SlopeMultiset(d["slopes"]), dimension=None if dim is None else int(dim))

    def to_dict(self) -> dict:
        out = {
            "p": self.p,
            "N": self.N,
            "k": self.k,
            "conductor_exponent": self.conductor_exponent,
            "component": self.component,
            "slopes": self.slopes.to_strings(),
        }
        if self.dimension is not None:
            out["dimension"] = self.dimension
        return out


def load_records(source) -> list[ClassicalSlopeRecord]:
    """Records from a JSON file path, a JSON string, or already-parsed data.

    Accepts a single record, a list of records, or {"records": [...]}.
    """
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith(("{", "["))):
        try:
            data = json.loads(Path(source).read_text())
        except OSError as exc:
            raise InputError(f"cannot read seed file {source}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"seed file {source} is not valid JSON: {exc}") from exc
    elif isinstance(source, str):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise InputError(f"not valid JSON: {exc}") from exc
    else:
        data = source
    if isinstance(data, dict) and "records" in data:
        data = data["records"]
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list) or not data:
        raise InputError("no classical slope records found")
    return [ClassicalSlopeRecord.from_dict(r) for r in data]


def _half_delta(p: int) -> int:
    return 1 if p == 2 else (p - 1) // 2


def totient(n: int) -> int:
    out = n
    m = n
    q = 2
    while q * q <= m:
        if m % q == 0:
            while m % q == 0:
                m //= q
            out -= out // q
        q += 1
    if m > 1:
        out -= out // m
    return out


def cusp_count(N: int) -> int:
    """e(N) = sum_{d | N} phi(gcd(d, N/d)), the number of cusps of X_0(N)."""
    if N < 1:
        raise DomainError(f"N must be positive, got {N}")
    return sum(totient(gcd(d, N // d)) for d in divisors(N))


def reflect(nu: SlopeMultiset, k: int) -> SlopeMultiset:
    """{k - 1 - v : v in nu}."""
    top = k - 1
    if any(v > top for v in nu):
        raise DomainError(f"reflection at weight {k} needs all slopes <= {top}")
    return SlopeMultiset(top - v for v in nu)


def _check_records(p: int, N: int, records: list[ClassicalSlopeRecord]) -> None:
    for r in records:
        if (r.p, r.N) != (p, N):
            raise InputError(f"record for (p, N) = ({r.p}, {r.N}) does not match ({p}, {N})")


def order_by_component(records: list[ClassicalSlopeRecord], m0: int) -> list[ClassicalSlopeRecord]:
    """Arrange records so that entry j carries the component m0 - 2j mod |Delta|."""
    if not records:
        raise InputError("no records")
    p = records[0].p
    if p == 2:
        return list(records)
    mod = p - 1
    by_m = {}
    for r in records:
        by_m.setdefault(r.component % mod, r)
    out = []
    for j in range(_half_delta(p)):
        m = (m0 - 2 * j) % mod
        if m not in by_m:
            raise InputError(f"no classical record for component {m}")
        out.append(by_m[m])
    return out


def seed(p: int, N: int, classical: list[ClassicalSlopeRecord]) -> ProgressionFamily:
    """Progression family {1..d}^e(N) union (j + nu_j), difference d = |Delta|/2.

    ``classical[j]`` holds the weight-two slopes on the component m0 - 2j,
    where m0 is the component of ``classical[0]``.
    """
    d = _half_delta(p)
    if len(classical) != d:
        raise InputError(f"p={p} needs exactly {d} classical records, got {len(classical)}")
    _check_records(p, N, classical)
    if p != 2:
        m0 = classical[0].component
        for j, r in enumerate(classical):
            if (r.component - (m0 - 2 * j)) % (p - 1):
                raise InputError(f"record {j} has component {r.component}, expected {(m0 - 2 * j) % (p - 1)}")
    e = cusp_count(N)
    seeds = SlopeMultiset([x for x in range(1, d + 1) for _ in range(e)])
    for j, r in enumerate(classical):
        seeds = seeds | r.slopes.shift(j)
    return ProgressionFamily(seeds, Fraction(d))


def merged_seed(p: int, N: int, classical: list[ClassicalSlopeRecord]) -> ProgressionFamily:
    """Seeds {1}^(|Delta| e(N) / 2) union every component's classical slopes; difference 1."""
    d = _half_delta(p)
    if len(classical) != d:
        raise InputError(f"p={p} needs one record per even component ({d}), got {len(classical)}")
    _check_records(p, N, classical)
    if p != 2 and len({r.component % (p - 1) for r in classical}) != d:
        raise InputError("records must cover each even component once")
    seeds = SlopeMultiset.repeated(1, d * cusp_count(N))
    for r in classical:
        seeds = seeds | r.slopes
    return ProgressionFamily(seeds, Fraction(1))


def generate(f: ProgressionFamily, count: int) -> list[Fraction]:
    """First ``count`` terms of the family in non-decreasing order."""
    if count < 0:
        raise InputError("count must be >= 0")
    if not f.seeds:
        return []
    heap = [(s, idx) for idx, s in enumerate(f.seeds)]
    heapq.heapify(heap)
    out = []
    while len(out) < count:
        v, idx = heapq.heappop(heap)
        out.append(v)
        heapq.heappush(heap, (v + f.d, idx))
    return out


def generate_upto(f: ProgressionFamily, bound) -> list[Fraction]:
    """All terms < bound."""
    bound = parse_rational(bound)
    out = []
    for s in f.seeds:
        v = s
        while v < bound:
            out.append(v)
            v += f.d
    return sorted(out)


def _as_multiset(x) -> SlopeMultiset:
    if isinstance(x, ClassicalSlopeRecord):
        return x.slopes
    if x is None:
        raise InputError("missing classical record")
    return x if isinstance(x, SlopeMultiset) else SlopeMultiset(x)


def interval_oracle(k: int, e: int, zero_source, unit_source) -> SlopeMultiset:
    """Slopes in [k-2, k-1): {k-2}^e, (k-2) minus the slope-0 part of
    ``zero_source``, and (k-1) minus the (0, 1] part of ``unit_source``.

    The two sources are the classical slopes on the reflected components
    chi^-1 omega^(2k-6) and chi^-1 omega^(2k-4).
    """
    if k <= 2:
        raise DomainError(f"interval formula needs k > 2, got {k}")
    zero = _as_multiset(zero_source).within(0, 0, closed_lo=True, closed_hi=True)
    unit = _as_multiset(unit_source).within(0, 1, closed_lo=False, closed_hi=True)
    out = SlopeMultiset.repeated(k - 2, e)
    out = out | SlopeMultiset((k - 2) - v for v in zero)
    out = out | SlopeMultiset((k - 1) - v for v in unit)
    return out


def weight_valuation(p: int, k: int, t: int) -> Fraction:
    """v_p(w(z^k chi)) for chi primitive of conductor p^t (t = 0: chi trivial)."""
    if t < 0:
        raise DomainError("conductor exponent must be >= 0")
    if t == 0:
        if k == 0:
            raise DomainError("w(z^0) = 0 has infinite valuation")
        return Fraction((2 if p == 2 else 1) + vp(k, p))
    if p == 2:
        if t < 3:
            raise DomainError(f"p=2 with conductor 2^{t} is outside the covered cases (t = 0 or t >= 3)")
        return Fraction(1, 2 ** (t - 3))
    if t < 2:
        raise DomainError(f"p={p} with conductor {p}^{t} is outside the covered cases (t = 0 or t >= 2)")
    return Fraction(1, p ** (t - 2) * (p - 1))


__all__ = [
    "ClassicalSlopeRecord",
    "ProgressionFamily",
    "SlopeMultiset",
    "cusp_count",
    "format_rational",
    "generate",
    "generate_upto",
    "interval_oracle",
    "load_records",
    "merged_seed",
    "order_by_component",
    "parse_rational",
    "reflect",
    "seed",
    "weight_valuation",
]
