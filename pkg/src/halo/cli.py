"""Command-line interface.

Exit codes: 0 success, 2 precision indeterminate, 3 unsupported level or
ramified constant, 4 input error.  Errors are also written to stderr as a
single JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from . import __version__
from .cache import ResultCache
from .classnum import hurwitz, kronecker
from .errors import HaloError, IndeterminateAtPrecision, InputError
from .fixtures import load_invariant_table
from .fredholm import FredholmCoefficients, LevelSpec, charpoly, trace
from .iwasawa import ComponentChar, GeneratorChoice
from .polygon import invariants, scaling_check
from .serialize import dumps, iwasawa_to_json, series_to_json
from .slopes import (
    format_rational,
    generate,
    load_records,
    merged_seed,
    order_by_component,
    parse_rational,
    seed,
    weight_valuation,
)

ESCALATIONS = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


@dataclass(frozen=True)
class JobConfig:
    p: int
    N: int
    m: int
    i_max: int
    M: int
    W: int
    gamma: int | None
    fmt: str
    cache_dir: str | None
    explicit_precision: bool

    def __post_init__(self):
        LevelSpec(self.N, self.p)
        ComponentChar(self.p, self.m)
        if min(self.M, self.W, self.i_max) < 1:
            raise InputError("--max-i, --p-prec and --w-prec must be >= 1")
        if self.gamma is not None:
            GeneratorChoice(self.p, self.gamma)

    def query(self, command: str) -> dict:
        return {
            "command": command,
            "p": self.p,
            "N": self.N,
            "component": self.m,
            "max_i": self.i_max,
            "p_prec": self.M,
            "w_prec": self.W,
            "gamma": self.gamma,
            "version": __version__,
        }


def default_precisions(p: int, i_max: int) -> tuple[int, int]:
    """(M, W) starting guess; invariants escalate from here if indeterminate."""
    if p == 2:
        W = max(56, i_max * (i_max + 1) // 2 + 2)
        return max(250, -(-250 * W // 56)), W
    W = i_max * (i_max + 1) + 2
    return 2 * W + 10, W


def _job(args) -> JobConfig:
    explicit = args.p_prec is not None or args.w_prec is not None
    M0, W0 = default_precisions(args.p, args.max_i)
    return JobConfig(
        p=args.p,
        N=args.N,
        m=args.component if args.component is not None else 0,
        i_max=args.max_i,
        M=args.p_prec if args.p_prec is not None else M0,
        W=args.w_prec if args.w_prec is not None else W0,
        gamma=args.gamma,
        fmt=args.format,
        cache_dir=args.cache_dir,
        explicit_precision=explicit,
    )


def _run_charpoly(job: JobConfig) -> FredholmCoefficients:
    return charpoly(job.N, job.p, job.m, job.i_max, job.M, job.W, job.gamma)


def _charpoly_payload(job: JobConfig, f: FredholmCoefficients) -> dict:
    return {
        "p": f.p,
        "N": f.N,
        "component": f.component.m,
        "gamma": str(f.gamma.gamma),
        "p_precision": f.M,
        "w_precision": f.W,
        "working_precision": f.working_prec,
        "coefficients": [
            {
                "i": i,
                "remaining_precision": f.ledger[i],
                "iwasawa": iwasawa_to_json(e),
                "series": series_to_json(s),
            }
            for i, (e, s) in enumerate(zip(f.iwasawa, f.series))
        ],
    }


def _invariants_payload(job: JobConfig) -> dict:
    M, W = job.M, job.W
    for attempt in range(ESCALATIONS + 1):
        try:
            f = charpoly(job.N, job.p, job.m, job.i_max, M, W, job.gamma)
            rows = invariants(f)
            break
        except IndeterminateAtPrecision:
            if job.explicit_precision or attempt == ESCALATIONS:
                raise
            M, W = 2 * M, 2 * W
    return {
        "p": job.p,
        "N": job.N,
        "component": job.m,
        "gamma": str(f.gamma.gamma),
        "p_precision": M,
        "w_precision": W,
        "rows": [dict(i=i, **w.to_dict()) for i, w in enumerate(rows) if i > 0],
    }


def _cached(job: JobConfig, command: str, compute):
    cache = ResultCache.from_env(job.cache_dir)
    if cache is None:
        return compute()
    q = job.query(command)
    hit = cache.get(q)
    if hit is not None:
        return hit
    result = compute()
    cache.put(q, result)
    return result


def compact_slopes(strings: list[str]) -> str:
    """Descending slopes with multiplicities, e.g. "4, 3_2"."""
    vals = sorted((parse_rational(s) for s in strings), reverse=True)
    out = []
    for v in dict.fromkeys(vals):
        n = vals.count(v)
        out.append(format_rational(v) + (f"_{n}" if n > 1 else ""))
    return ", ".join(out) if out else "-"


def _render_rows(header: list[str], rows: list[list], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    lines = [" | ".join(c.ljust(widths[k]) for k, c in enumerate(r)).rstrip() for r in cells]
    lines.insert(1, "-+-".join("-" * w for w in widths))
    return "\n".join(lines)


def cmd_charpoly(args) -> str:
    job = _job(args)
    payload = _cached(job, "charpoly", lambda: _charpoly_payload(job, _run_charpoly(job)))
    if job.fmt == "json":
        return dumps(payload)
    rows = []
    for c in payload["coefficients"]:
        s = c["series"]
        shown = ", ".join(s["coefficients"][:6]) + (", ..." if len(s["coefficients"]) > 6 else "")
        rows.append([c["i"], len(c["iwasawa"]["terms"]), c["remaining_precision"], shown])
    header = ["i", "group terms", "remaining precision", f"series coefficients mod {job.p}^{payload['p_precision']}"]
    return _render_rows(header, rows, job.fmt)


def cmd_invariants(args) -> str:
    job = _job(args)
    payload = _cached(job, "invariants", lambda: _invariants_payload(job))
    if job.fmt == "json":
        return dumps(payload)
    rows = []
    for r in payload["rows"]:
        slopes = compact_slopes(r["zero_slopes"]) if job.fmt == "table" else " ".join(r["zero_slopes"])
        rows.append([r["i"], r["mu"], r["lambda"], slopes, "yes" if r["certified"] else "no"])
    return _render_rows(["i", "mu", "lambda", "zero slopes", "certified"], rows, job.fmt)


def cmd_trace(args) -> str:
    m = args.component if args.component is not None else 0
    LevelSpec(args.N, args.p)
    prec = args.p_prec if args.p_prec is not None else 20
    t = trace(args.N, args.p, args.j, ComponentChar(args.p, m), prec)
    e = t.value
    if args.format == "json":
        return dumps({"N": args.N, "j": args.j, "component": m, **iwasawa_to_json(e)})
    mod = e.p**e.prec
    rows = []
    for k, c in e.items():
        signed = c - mod if c > mod // 2 else c
        rows.append([k, c, signed])
    if args.format == "csv":
        return _render_rows(["key", "coefficient", "signed"], rows, "csv")
    terms = " + ".join(f"({s})*[{k}]" for k, _, s in rows) or "0"
    return f"T_{args.j} = {terms}  (mod {args.p}^{e.prec})"


def cmd_predict_slopes(args) -> str:
    if not args.seed_file:
        raise InputError("--seed-file is required")
    records = load_records(args.seed_file)
    p = args.p if args.p is not None else records[0].p
    N = args.N if args.N is not None else records[0].N
    if args.merged:
        fam = merged_seed(p, N, records)
    else:
        m0 = args.component if args.component is not None else records[0].component
        fam = seed(p, N, order_by_component(records, m0))
    terms = generate(fam, args.count)
    out = [format_rational(x) for x in terms]
    if args.format == "json":
        return dumps(
            {
                "p": p,
                "N": N,
                "difference": format_rational(fam.d),
                "seeds": fam.seeds.to_strings(),
                "slopes": out,
            }
        )
    if args.format == "csv":
        return "\n".join(["slope"] + out)
    return ", ".join(out)


def cmd_hurwitz(args) -> str:
    v = format_rational(hurwitz(args.n))
    return dumps({"n": args.n, "H": v}) if args.format == "json" else v


def cmd_kronecker(args) -> str:
    v = kronecker(args.a, args.n)
    return dumps({"a": args.a, "n": args.n, "kronecker": v}) if args.format == "json" else str(v)


def cmd_weight_valuation(args) -> str:
    v = format_rational(weight_valuation(args.p, args.k, args.t))
    return dumps({"p": args.p, "k": args.k, "t": args.t, "valuation": v}) if args.format == "json" else v


def cmd_scaling_check(args) -> str:
    if args.v0 is None:
        raise InputError("--v0 is required")
    v0 = parse_rational(args.v0)
    if v0 <= 0:
        raise InputError("--v0 must be positive")
    if args.table_file:
        rows = load_invariant_table(args.table_file)
        report = scaling_check(rows, v0)
    else:
        job = _job(args)
        report = scaling_check(_run_charpoly(job), v0)
    d = report.to_dict()
    if args.format == "json":
        return dumps(d)
    lines = [
        f"v0 = {d['v0']}",
        f"full agreement: {'yes' if d['full_agreement'] else 'no'}",
        f"agreement range: {d['agreement_range'][0]}..{d['agreement_range'][1]}",
    ]
    if d["first_disagreement"] is not None:
        seg = d["wadic_segment"]
        lines.append(f"first disagreement at i = {d['first_disagreement']} (w-adic segment {seg[0]}..{seg[1]})")
        lines.append("disagreeing indices: " + ", ".join(map(str, d["disagreeing_indices"])))
    if d["uncertified_indices"]:
        lines.append("uncertified indices: " + ", ".join(map(str, d["uncertified_indices"])))
    lines.append("boundary vertices: " + " ".join(f"({x},{y})" for x, y in d["boundary_polygon"]["vertices"]))
    lines.append(
        "scaled w-adic vertices: " + " ".join(f"({x},{y})" for x, y in d["scaled_wadic_polygon"]["vertices"])
    )
    return "\n".join(lines)


def _add_job_flags(sp, need_p=True):
    sp.add_argument("--p", type=int, required=need_p)
    sp.add_argument("--N", type=int, default=1)
    sp.add_argument("--component", type=int, default=None, help="even exponent m of eta = omega^m")
    sp.add_argument("--max-i", type=int, default=5)
    sp.add_argument("--p-prec", type=int, default=None)
    sp.add_argument("--w-prec", type=int, default=None)
    sp.add_argument("--gamma", type=int, default=None, help="topological generator (default 1+p, or 5)")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["table", "csv", "json"], default="table")
    common.add_argument("--cache-dir", default=None, help="result cache (default: $HALO_CACHE_DIR)")

    parser = _Parser(prog="halo", description="Fredholm series of U_p via the p-adic trace formula.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("charpoly", parents=[common], help="coefficients a_i in group-ring and series form")
    _add_job_flags(sp)
    sp.set_defaults(func=cmd_charpoly)

    sp = sub.add_parser("invariants", parents=[common], help="mu, lambda and zero slopes of each a_i")
    _add_job_flags(sp)
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("trace", parents=[common], help="trace element T_j")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--N", type=int, default=1)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--component", type=int, default=None)
    sp.add_argument("--p-prec", type=int, default=None)
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("predict-slopes", parents=[common], help="slopes predicted from classical data")
    sp.add_argument("--seed-file", required=False)
    sp.add_argument("--p", type=int, default=None)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--component", type=int, default=None)
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--merged", action="store_true", help="union over all components, difference 1")
    sp.set_defaults(func=cmd_predict_slopes)

    sp = sub.add_parser("hurwitz", parents=[common], help="Hurwitz class number H(n)")
    sp.add_argument("n", type=int)
    sp.set_defaults(func=cmd_hurwitz)

    sp = sub.add_parser("kronecker", parents=[common], help="Kronecker symbol (a | n)")
    sp.add_argument("a", type=int)
    sp.add_argument("n", type=int)
    sp.set_defaults(func=cmd_kronecker)

    sp = sub.add_parser("weight-valuation", parents=[common], help="v_p(w(z^k chi)), chi of conductor p^t")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--t", type=int, default=0)
    sp.set_defaults(func=cmd_weight_valuation)

    sp = sub.add_parser("scaling-check", parents=[common], help="boundary polygon versus scaled w-adic polygon")
    _add_job_flags(sp, need_p=False)
    sp.add_argument("--v0", required=False, help="rational valuation of the weight coordinate")
    sp.add_argument("--table-file", default=None, help="invariant table JSON instead of computing")
    sp.set_defaults(func=cmd_scaling_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "scaling-check" and not args.table_file and args.p is None:
            raise InputError("--p is required unless --table-file is given")
        if args.command == "predict-slopes" and args.count < 0:
            raise InputError("--count must be >= 0")
        out = args.func(args)
    except HaloError as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return exc.exit_code
    except (ValueError, ArithmeticError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "exit_code": 4}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return 4
    sys.stdout.write(out + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
