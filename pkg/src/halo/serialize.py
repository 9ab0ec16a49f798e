"""Exact JSON encodings: rationals as "num/den" strings, p-adic residues as decimal strings."""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import InputError
from .iwasawa import IwasawaElement
from .padic import PadicInt
from .polygon import WeierstrassData
from .series import TruncatedSeries
from .slopes import SlopeMultiset, format_rational, parse_rational


def padic_to_json(x: PadicInt) -> dict:
    return {"residue": str(x.value), "precision": x.prec}


def padic_from_json(d: dict, p: int) -> PadicInt:
    return PadicInt(p, int(d["residue"]), int(d["precision"]))


def iwasawa_to_json(e: IwasawaElement) -> dict:
    return {
        "p": e.p,
        "precision": e.prec,
        "key_precision": e.key_prec,
        "terms": [
            {"key": str(k), "coefficient": {"residue": str(c), "precision": e.prec}} for k, c in e.items()
        ],
    }


def iwasawa_from_json(d: dict) -> IwasawaElement:
    p = int(d["p"])
    terms = {int(t["key"]): int(t["coefficient"]["residue"]) for t in d["terms"]}
    return IwasawaElement(p, terms, int(d["precision"]), int(d["key_precision"]))


def series_to_json(s: TruncatedSeries) -> dict:
    return {"p": s.p, "p_precision": s.prec, "w_precision": s.W, "coefficients": [str(c) for c in s.coeffs]}


def series_from_json(d: dict) -> TruncatedSeries:
    coeffs = tuple(int(c) for c in d["coefficients"])
    if len(coeffs) != int(d["w_precision"]):
        raise InputError("series coefficient count does not match its w-precision")
    return TruncatedSeries(int(d["p"]), coeffs, int(d["p_precision"]))


def weierstrass_to_json(w: WeierstrassData) -> dict:
    return w.to_dict()


def weierstrass_from_json(d: dict) -> WeierstrassData:
    return WeierstrassData(
        int(d["mu"]), int(d["lambda"]), SlopeMultiset(d["zero_slopes"]), bool(d.get("certified", True))
    )


def rational_to_json(x: Fraction) -> str:
    return format_rational(x)


def rational_from_json(s: str) -> Fraction:
    return parse_rational(s)


def dumps(obj) -> str:
    """Canonical JSON (sorted keys, fixed separators) so equal payloads give equal bytes."""
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": "))


__all__ = [
    "dumps",
    "iwasawa_from_json",
    "iwasawa_to_json",
    "padic_from_json",
    "padic_to_json",
    "rational_from_json",
    "rational_to_json",
    "series_from_json",
    "series_to_json",
    "weierstrass_from_json",
    "weierstrass_to_json",
]
