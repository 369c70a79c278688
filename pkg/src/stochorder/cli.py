"""Command-line interface: ``stochorder <group> <command> [flags]``.

Every command builds a JSON-ready payload plus a text rendering; ``--format``
picks one (or CSV for function dumps). Exit status 2 flags invalid input,
3 an internal invariant breach.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from fractions import Fraction

from . import diagram, families, metrics, orders
from . import dist as D
from .dist import DiscreteDist
from .pwfun import PLF
from .schema import (SchemaError, dist_from_json, dist_to_json, dumps, family_from_json,
                     family_to_json, load_arg, rational, rstr)


class UsageError(ValueError):
    pass


def _num(v):
    """JSON value for a number: rationals as strings, floats as floats, infinities as strings."""
    if isinstance(v, Fraction):
        return rstr(v)
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else "-inf"
    return v


def _g17(v) -> str:
    return "%.17g" % float(v)


def _discrete(arg, flag) -> DiscreteDist:
    if arg is None:
        raise UsageError(f"{flag} is required")
    X = dist_from_json(load_arg(arg))
    if not isinstance(X, DiscreteDist):
        raise UsageError(f"{flag} must be a discrete distribution for this command")
    return X


def _any_dist(arg, flag):
    if arg is None:
        raise UsageError(f"{flag} is required")
    return dist_from_json(load_arg(arg))


def _family(arg):
    if arg is None:
        raise UsageError("--family is required")
    return family_from_json(load_arg(arg))


def _rat(v, default):
    return rational(v) if v is not None else Fraction(default)


# --------------------------------------------------------------------------- #
# Payload builders: each returns (json payload, text, csv rows or None)
# --------------------------------------------------------------------------- #


def _plf_rows(H: PLF):
    rows = [("x", "value", "right_slope")]
    for x, v, s in zip(H.knots, H.knot_values, H.slopes()):
        rows.append((_g17(x), _g17(v), _g17(s)))
    return rows


def cmd_dist_isf(a):
    X = _discrete(a.lhs, "--lhs")
    H = D.isf(X)
    payload = {"knots": [rstr(k) for k in H.knots], "values": [rstr(v) for v in H.knot_values],
               "terminal_slope": rstr(H.terminal_slope)}
    text = "\n".join(f"{k}\t{v}" for k, v in zip(payload["knots"], payload["values"]))
    text += f"\nslope beyond last knot: {payload['terminal_slope']}"
    return payload, text, _plf_rows(H)


def cmd_dist_hl_max(a):
    X = _discrete(a.lhs, "--lhs")
    C = D.hl_maximal(X)
    segs = [{"u_lo": rstr(lo), "u_hi": rstr(hi), "a": rstr(sa), "b": rstr(sb)}
            for lo, hi, (sa, sb) in C.intervals()]
    text = "\n".join(f"({lo}, {hi}]: ({sa} {'-' if sb < 0 else '+'} {abs(sb)} u) / (1 - u)"
                     for lo, hi, (sa, sb) in C.intervals())
    rows = [("u_lo", "u_hi", "a", "b")] + [
        (_g17(lo), _g17(hi), _g17(sa), _g17(sb))
        for lo, hi, (sa, sb) in C.intervals()]
    return {"segments": segs}, text, rows


def cmd_dist_moment(a):
    X = _any_dist(a.lhs, "--lhs")
    p = _rat(a.p, 1)
    if p <= 0:
        raise UsageError("moment order --p must be positive")
    v = D.moment(X, p)
    return {"p": rstr(p), "value": _num(v)}, str(v), [("p", "value"), (_g17(p), _g17(v))]


def cmd_dist_sample(a):
    X = _discrete(a.lhs, "--lhs")
    if a.n < 0:
        raise UsageError("--n must be nonnegative")
    xs = D.sample(X, a.n, a.seed)
    return ({"seed": a.seed, "samples": xs}, "\n".join(repr(x) for x in xs),
            [("value",)] + [(_g17(x),) for x in xs])


def _comparison(res):
    payload = {"holds": bool(res.holds)}
    if res.witness is not None:
        payload["witness"] = rstr(res.witness)
    text = "true" if res.holds else f"false (witness t = {res.witness})"
    return payload, text, None


def cmd_order_st(a):
    return _comparison(orders.st_le(_discrete(a.lhs, "--lhs"), _discrete(a.rhs, "--rhs")))


def cmd_order_icx(a):
    return _comparison(orders.icx_le(_discrete(a.lhs, "--lhs"), _discrete(a.rhs, "--rhs")))


def _bound(fn, a):
    fam = _family(a.family)
    if not isinstance(fam, families.FiniteFamily):
        raise UsageError("least bounds need a finite family")
    Z = fn(list(fam.members))
    payload = dist_to_json(Z)
    text = "\n".join(f"{x}\t{p}" for x, p in Z.atoms)
    rows = [("x", "p")] + [(_g17(x), _g17(p)) for x, p in Z.atoms]
    return payload, text, rows


def cmd_order_st_bound(a):
    return _bound(orders.least_st_upper_bound, a)


def cmd_order_icx_bound(a):
    return _bound(orders.least_icx_upper_bound, a)


def cmd_order_coupling(a):
    cells = orders.comonotone_coupling(_discrete(a.lhs, "--lhs"), _discrete(a.rhs, "--rhs"))
    payload = {"cells": [{"u_lo": rstr(c.lo), "u_hi": rstr(c.hi), "x": rstr(c.x), "y": rstr(c.y)}
                         for c in cells]}
    text = "\n".join(f"({c.lo}, {c.hi}]: ({c.x}, {c.y})" for c in cells)
    rows = [("u_lo", "u_hi", "x", "y")] + [tuple(_g17(v) for v in c) for c in cells]
    return payload, text, rows


def cmd_metric_wasserstein(a):
    p = _rat(a.p, 1)
    v = metrics.wasserstein(_discrete(a.lhs, "--lhs"), _discrete(a.rhs, "--rhs"), p)
    return {"p": rstr(p), "value": v}, repr(v), [("p", "value"), (_g17(p), _g17(v))]


def cmd_metric_prohorov(a):
    tol = _rat(a.tol, Fraction(1, 10**9))
    if tol <= 0:
        raise UsageError("--tol must be positive")
    v = metrics.prohorov(_discrete(a.lhs, "--lhs"), _discrete(a.rhs, "--rhs"), tol)
    return {"tol": rstr(tol), "value": v}, repr(v), [("value",), (_g17(v),)]


def cmd_family_diagnose(a):
    fam = _family(a.family)
    rep = families.diagnose(fam, _rat(a.p, Fraction(1, 2)), _rat(a.q, 2), a.N)
    payload = {"family": family_to_json(fam), **rep.to_json()}
    marks = {"holds": "✓", "fails": "✗", "inconclusive": "?"}
    text = "\n".join(f"{marks[v.status]} {node}: {v.status} ({v.trend})"
                     for node, v in rep.verdicts.items())
    return payload, text, None


def cmd_diagram_verify(a):
    p, q = _rat(a.p, Fraction(1, 2)), _rat(a.q, 2)
    imp = diagram.verify_implications(a.seed, a.trials, p, q)
    cex = diagram.verify_counterexamples(p, q, a.N)
    rep = diagram.DiagramReport({**imp.params, **cex.params}, imp.implications,
                                imp.equivalences, cex.bullets)
    return rep.to_json(), diagram.render_report(rep, "text").rstrip("\n"), None


COMMANDS = {
    "dist": {"isf": cmd_dist_isf, "hl-max": cmd_dist_hl_max, "moment": cmd_dist_moment,
             "sample": cmd_dist_sample},
    "order": {"st": cmd_order_st, "icx": cmd_order_icx, "st-bound": cmd_order_st_bound,
              "icx-bound": cmd_order_icx_bound, "coupling": cmd_order_coupling},
    "metric": {"wasserstein": cmd_metric_wasserstein, "prohorov": cmd_metric_prohorov},
    "family": {"diagnose": cmd_family_diagnose},
    "diagram": {"verify": cmd_diagram_verify},
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lhs", help="distribution: inline JSON or a JSON file")
    common.add_argument("--rhs", help="second distribution: inline JSON or a JSON file")
    common.add_argument("--family", help="family: inline JSON or a JSON file")
    common.add_argument("--p", help="exponent or order (rational, e.g. 1/2)")
    common.add_argument("--q", help="upper exponent for diagnostics (rational)")
    common.add_argument("--N", type=int, help="truncation of builtin families")
    common.add_argument("--n", type=int, default=1000, help="sample size")
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--trials", type=int, default=200)
    common.add_argument("--tol", help="Prohorov bisection tolerance")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", help="write the document to FILE instead of stdout")

    parser = argparse.ArgumentParser(prog="stochorder",
                                     description="Exact stochastic-order and boundedness tools.")
    groups = parser.add_subparsers(dest="group", required=True)
    for group, cmds in COMMANDS.items():
        gp = groups.add_parser(group).add_subparsers(dest="command", required=True)
        for name, fn in cmds.items():
            gp.add_parser(name, parents=[common]).set_defaults(func=fn)
    return parser


def _render(payload, text, rows, fmt: str) -> str:
    if fmt == "json":
        return dumps(payload) + "\n"
    if fmt == "csv":
        if rows is None:
            raise UsageError("this command has no CSV form; use --format text or json")
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue()
    return text + "\n"


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        doc = _render(*args.func(args), args.format)
    except metrics.InternalInvariantError as exc:
        print(f"internal invariant breach: {exc}", file=stderr)
        return 3
    except (ValueError, TypeError, SchemaError, ArithmeticError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc)
    else:
        stdout.write(doc)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
