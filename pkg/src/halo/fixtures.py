"""Shipped data: classical slope records and a published invariant table."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import InputError
from .polygon import WeierstrassData
from .slopes import ClassicalSlopeRecord, SlopeMultiset, load_records

FIXTURES = {
    "p11_N1": "classical_p11_N1.json",
    "p2_N1_chi8": "classical_p2_N1_chi8.json",
    "p2_N1_chi16": "classical_p2_N1_chi16.json",
    "p2_N3_chi8": "classical_p2_N3_chi8.json",
    "p2_N7_chi8": "classical_p2_N7_chi8.json",
}


def data_path(name: str) -> Path:
    return Path(str(resources.files("halo") / "data" / name))


def classical(name: str) -> list[ClassicalSlopeRecord]:
    """Records of a shipped fixture, by short name (see FIXTURES) or file name."""
    return load_records(data_path(FIXTURES.get(name, name)))


def load_invariant_table(source) -> list[WeierstrassData]:
    """Rows {"i", "mu", "lambda", "zero_slopes"} as WeierstrassData for a_0, a_1, ...

    Indices must run 1..n without gaps; a_0 = 1 is prepended.
    """
    path = Path(source)
    if not path.exists():
        path = data_path(str(source))
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read invariant table {source}: {exc}") from exc
    rows = sorted(data["rows"] if isinstance(data, dict) else data, key=lambda r: int(r["i"]))
    if [int(r["i"]) for r in rows] != list(range(1, len(rows) + 1)):
        raise InputError("invariant table rows must be indexed 1..n")
    out = [WeierstrassData(0, 0, SlopeMultiset())]
    for r in rows:
        out.append(WeierstrassData(int(r["mu"]), int(r["lambda"]), SlopeMultiset(r["zero_slopes"])))
    return out
