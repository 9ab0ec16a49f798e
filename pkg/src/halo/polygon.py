"""Newton polygons, Weierstrass data of series, and boundary-slope polygons.

Fractional weights are handled through valuations only: the valuation of
f(w0) for v_p(w0) = v0 is the ultrametric minimum over the terms, which is
exact when that minimum is attained once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import IndeterminateAtPrecision, InputError
from .iwasawa import IwasawaElement
from .padic import vp
from .series import TruncatedSeries
from .slopes import SlopeMultiset, format_rational, parse_rational

INF = math.inf


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull; ``vertices`` is the minimal set of break points."""

    vertices: tuple[tuple[Fraction, Fraction], ...]

    @property
    def segments(self) -> list[tuple[Fraction, Fraction]]:
        """(slope, horizontal length) per edge, slopes strictly increasing."""
        v = self.vertices
        return [((b[1] - a[1]) / (b[0] - a[0]), b[0] - a[0]) for a, b in zip(v, v[1:])]

    def slopes(self) -> list[Fraction]:
        """Edge slopes repeated by horizontal length (lengths must be integral)."""
        out = []
        for s, length in self.segments:
            if length.denominator != 1:
                raise ValueError("slope multiplicities need integral horizontal lengths")
            out.extend([s] * int(length))
        return out

    @property
    def break_points(self) -> list[Fraction]:
        return [x for x, _ in self.vertices]

    def ordinate(self, x) -> Fraction:
        x = Fraction(x)
        v = self.vertices
        if not v[0][0] <= x <= v[-1][0]:
            raise ValueError(f"x={x} outside [{v[0][0]}, {v[-1][0]}]")
        for a, b in zip(v, v[1:]):
            if a[0] <= x <= b[0]:
                return a[1] + (b[1] - a[1]) * (x - a[0]) / (b[0] - a[0])
        return v[0][1]

    def scaled(self, c) -> NewtonPolygon:
        c = Fraction(c)
        return NewtonPolygon(tuple((x, y * c) for x, y in self.vertices))

    def to_dict(self) -> dict:
        return {
            "vertices": [[format_rational(x), format_rational(y)] for x, y in self.vertices],
            "segments": [[format_rational(s), format_rational(n)] for s, n in self.segments],
        }


def lower_hull(points) -> NewtonPolygon:
    """Lower convex hull of (x, y) points; y = +inf (or None) points are ignored."""
    finite: dict[Fraction, Fraction] = {}
    for x, y in points:
        if y is None or y == INF:
            continue
        x, y = Fraction(x), Fraction(y)
        if x not in finite or y < finite[x]:
            finite[x] = y
    if not finite:
        raise InputError("lower hull of an empty point set (no finite points)")
    hull: list[tuple[Fraction, Fraction]] = []
    for pt in sorted(finite.items()):
        # pop on <= 0 so collinear points are absorbed
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return NewtonPolygon(tuple(hull))


@dataclass(frozen=True)
class WeierstrassData:
    """mu, lambda and the valuations of the lambda zeroes in the open unit disc."""

    mu: int
    lam: int
    zero_slopes: SlopeMultiset = field(default_factory=SlopeMultiset)
    certified: bool = True

    def __post_init__(self):
        if not isinstance(self.zero_slopes, SlopeMultiset):
            object.__setattr__(self, "zero_slopes", SlopeMultiset(self.zero_slopes))
        if len(self.zero_slopes) != self.lam:
            raise ValueError(f"lambda={self.lam} but {len(self.zero_slopes)} zero slopes")
        if any(z <= 0 for z in self.zero_slopes):
            raise ValueError("zero slopes must be positive")

    def value_valuation(self, v0) -> tuple[Fraction, bool]:
        """v_p(f(w0)) for v_p(w0) = v0: mu + sum over zeroes of min(v0, slope).

        Uncertified when v0 equals a zero slope (cancellation possible) or
        when the data itself is uncertified.
        """
        v0 = parse_rational(v0)
        if v0 <= 0:
            raise InputError("v0 must be positive")
        val = Fraction(self.mu) + sum((min(v0, z) for z in self.zero_slopes), Fraction(0))
        return val, self.certified and v0 not in self.zero_slopes.entries

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "lambda": self.lam,
            "zero_slopes": self.zero_slopes.to_strings(),
            "certified": self.certified,
        }


def weierstrass(series: TruncatedSeries, mu: int | None = None) -> WeierstrassData:
    """Weierstrass data of a series known mod (p^M, w^W).

    The truncation hides the tail, so a positive minimum valuation among the
    known coefficients is only a candidate for mu; pass ``mu`` (for instance
    from the group-ring form) to certify it.  Unknown coefficients are
    checked to lie on or above the hull, otherwise the slopes are
    indeterminate at this precision.
    """
    vals = series.valuations()
    exact = [(n, v) for n, (v, ok) in enumerate(vals) if ok]
    if not exact:
        raise IndeterminateAtPrecision(
            f"series is zero mod ({series.p}^{series.prec}, w^{series.W}); raise the precision"
        )
    candidate = min(v for _, v in exact)
    certified = True
    if mu is None:
        mu = candidate
        certified = mu == 0
    elif candidate < mu:
        raise ValueError(f"coefficient of valuation {candidate} below the supplied mu={mu}")
    elif candidate > mu:
        raise IndeterminateAtPrecision(
            f"no coefficient of valuation mu={mu} among the first {series.W}; raise the w-precision"
        )
    if series.prec <= mu:
        raise IndeterminateAtPrecision(f"p-precision {series.prec} does not exceed mu={mu}")
    lam = next(n for n, v in exact if v == mu)
    pts = [(n, v) for n, v in exact if n <= lam]
    hull = lower_hull(pts)
    first = hull.vertices[0][0]
    for n in range(lam):
        # an unknown coefficient left of the first known one fixes no segment at all
        if not vals[n][1] and (n < first or hull.ordinate(n) > series.prec):
            raise IndeterminateAtPrecision(
                f"coefficient {n} is unknown mod {series.p}^{series.prec} and may lie below the hull"
            )
    zeros = [-s for s in hull.slopes()]
    return WeierstrassData(mu, lam, SlopeMultiset(zeros), certified)


def value_valuation(series: TruncatedSeries, v0) -> tuple[Fraction, bool]:
    """min_n (v_p(c_n) + n v0), with a flag for whether it is certified.

    Certified means the minimum is attained by a single known coefficient
    and is strictly below every bound for the unknown terms (the unknown
    coefficients inside the truncation and the tail beyond w^W).
    """
    v0 = parse_rational(v0)
    if v0 <= 0:
        raise InputError("v0 must be positive")
    vals = series.valuations()
    terms = [v + n * v0 for n, (v, ok) in enumerate(vals) if ok]
    if not terms:
        raise IndeterminateAtPrecision("series is zero to precision")
    best = min(terms)
    bounds = [v + n * v0 for n, (v, ok) in enumerate(vals) if not ok]
    bounds.append(series.W * v0)
    certified = terms.count(best) == 1 and best < min(bounds)
    return best, certified


def _series_and_mu(coeffs):
    """Normalise input to a list of (series or None, WeierstrassData or None, mu hint)."""
    from .fredholm import FredholmCoefficients

    if isinstance(coeffs, FredholmCoefficients):
        out = []
        for e, s in zip(coeffs.iwasawa, coeffs.series):
            out.append((s, None, _mu_hint(e)))
        return out
    out = []
    for c in coeffs:
        if isinstance(c, WeierstrassData):
            out.append((None, c, c.mu))
        elif isinstance(c, TruncatedSeries):
            out.append((c, None, None))
        else:
            raise InputError(f"cannot read invariants from {type(c).__name__}")
    return out


def _mu_hint(e: IwasawaElement) -> int | None:
    # Keys reduced mod p^K describe the image in a finite quotient Z_p[Gamma/Gamma^(p^n)];
    # mu survives that reduction because lambda < p^n, so no key separation is needed here.
    if e.is_zero():
        return None
    return min(vp(c, e.p) for _, c in e.items())


def invariants(coeffs) -> list[WeierstrassData]:
    """Weierstrass data for a_0, a_1, ... (mu taken from the group-ring form when available)."""
    out = []
    for s, w, mu in _series_and_mu(coeffs):
        out.append(w if w is not None else weierstrass(s, mu))
    return out


@dataclass(frozen=True)
class BoundarySlopes:
    polygon: NewtonPolygon
    slopes: list[Fraction]
    points: list[tuple[int, Fraction, bool]]

    @property
    def uncertified(self) -> list[int]:
        return [i for i, _, ok in self.points if not ok]


def boundary_slopes(coeffs, v0) -> BoundarySlopes:
    """Newton polygon in t of P(w0, t) for v_p(w0) = v0, from the a_i.

    Points whose valuation is not certified are reported and left out of
    the hull.
    """
    v0 = parse_rational(v0)
    rows = _series_and_mu(coeffs)
    points: list[tuple[int, Fraction, bool]] = []
    for i, (s, w, _) in enumerate(rows):
        if w is not None:
            val, ok = w.value_valuation(v0)
        else:
            val, ok = value_valuation(s, v0)
        points.append((i, val, ok))
    if not points:
        points = [(0, Fraction(0), True)]
    hull = lower_hull([(i, v) for i, v, ok in points if ok])
    return BoundarySlopes(hull, hull.slopes(), points)


def wadic_points(coeffs) -> list[tuple[int, float | int]]:
    pts: list[tuple[int, float | int]] = []
    for i, w in enumerate(invariants(coeffs)):
        pts.append((i, w.lam if w.mu == 0 else INF))
    if not pts:
        pts = [(0, 0)]
    return pts


def wadic_polygon(coeffs) -> NewtonPolygon:
    """w-adic Newton polygon of P mod p: points (i, lambda_i), or +inf when mu_i > 0."""
    pts = wadic_points(coeffs)
    return lower_hull(pts)


@dataclass(frozen=True)
class ScalingReport:
    v0: Fraction
    boundary: NewtonPolygon
    wadic_scaled: NewtonPolygon
    agree: list[int]
    disagree: list[int]
    uncertified: list[int]
    first_disagreement: int | None
    segment: tuple[Fraction, Fraction] | None

    @property
    def full_agreement(self) -> bool:
        return not self.disagree

    @property
    def agreement_range(self) -> tuple[int, int]:
        """(0, n): indices 0..n agree with no disagreement before n."""
        last = self.first_disagreement - 1 if self.first_disagreement is not None else max(self.agree, default=0)
        return 0, last

    def to_dict(self) -> dict:
        return {
            "v0": format_rational(self.v0),
            "full_agreement": self.full_agreement,
            "agreement_range": list(self.agreement_range),
            "first_disagreement": self.first_disagreement,
            "wadic_segment": None if self.segment is None else [format_rational(x) for x in self.segment],
            "disagreeing_indices": self.disagree,
            "uncertified_indices": self.uncertified,
            "boundary_polygon": self.boundary.to_dict(),
            "scaled_wadic_polygon": self.wadic_scaled.to_dict(),
        }


def scaling_check(coeffs, v0) -> ScalingReport:
    """Compare the boundary polygon at v0 with the w-adic polygon scaled by v0, index by index."""
    v0 = parse_rational(v0)
    bs = boundary_slopes(coeffs, v0)
    wp = wadic_polygon(coeffs).scaled(v0)
    last = min(bs.polygon.vertices[-1][0], wp.vertices[-1][0])
    agree, disagree = [], []
    for i in range(int(last) + 1):
        if i < wp.vertices[0][0]:
            continue
        (agree if bs.polygon.ordinate(i) == wp.ordinate(i) else disagree).append(i)
    first = disagree[0] if disagree else None
    seg = None
    if first is not None:
        xs = wp.break_points
        for a, b in zip(xs, xs[1:]):
            if a < first <= b:
                seg = (a, b)
                break
    return ScalingReport(v0, bs.polygon, wp, agree, disagree, bs.uncertified, first, seg)


__all__ = [
    "BoundarySlopes",
    "NewtonPolygon",
    "ScalingReport",
    "WeierstrassData",
    "boundary_slopes",
    "invariants",
    "lower_hull",
    "scaling_check",
    "value_valuation",
    "wadic_polygon",
    "weierstrass",
]
