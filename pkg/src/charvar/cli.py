"""Command-line front end: ``charvar <subcommand> [options]``.

Every subcommand writes one JSON document (or CSV) carrying ``"schema": 1``.
Exit status is 0 when the job succeeds and every checked identity
holds, 2 when an identity fails, and 1 on usage or validation errors.
"""

import argparse
import csv
import io
import json
import sys

from . import config
from ._jsonutil import encode
from .charcount import (
    additive_mu_stack_count,
    stack_count,
    surface_circle_stack_count,
    twisted_count,
    twisted_variety_count,
    untwisted_count,
)
from .errors import CharvarError, EnumerationTooLarge, IdentityFailure
from .exactq import LaurentPoly
from .ffield import field_create
from .plethys import assemble_eseries, numeric_counts, polynomial_counts, verify_exp_identity
from .repscan import dimred_count_check, gtrue_count_check, morita_count_check
from .tileforge import dual_quiver, find_cuts, grading_from, load_tiling, potential_of, shift_audit

SCHEMA = 1
DEFAULT_PRIMES = "3,5,7,11,13,17,19,23,29"

COUNT_KINDS = (
    "untwisted",
    "twisted",
    "twisted-variety",
    "twisted-stack",
    "untwisted-stack",
    "additive-mu",
    "surface-circle",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _name_list(text):
    return [v.strip() for v in text.split(",") if v.strip()]


# -- subcommands -------------------------------------------------------------------------


def _field(args):
    return field_create(args.p, args.k)


def cmd_count(args):
    F = _field(args)
    n, g, w = args.n, args.g, args.workers
    kind = args.kind
    if kind == "untwisted":
        rec = untwisted_count(n, g, F, method=args.method, workers=w)
    elif kind == "twisted":
        rec = twisted_count(n, g, F, args.root, method=args.method, workers=w)
    elif kind == "twisted-variety":
        rec = twisted_variety_count(n, g, F, args.root, method=args.method, workers=w)
    elif kind == "twisted-stack":
        rec = stack_count(twisted_count(n, g, F, args.root, method=args.method, workers=w))
    elif kind == "untwisted-stack":
        rec = stack_count(untwisted_count(n, g, F, method=args.method, workers=w))
    elif kind == "additive-mu":
        rec = additive_mu_stack_count(n, g, F, workers=w)
    else:
        rec = surface_circle_stack_count(n, g, F, workers=w)
    out = rec.to_json()
    if "root" in rec.extra:
        out["root"] = rec.extra["root"]
    return out, True


def cmd_mu_count(args):
    rec = additive_mu_stack_count(args.n, args.g, _field(args), workers=args.workers)
    out = rec.to_json()
    out["raw"] = str(rec.extra["raw"])
    return out, True


def _series_json(es):
    rows = []
    for n, c in enumerate(es.series.coeffs):
        rows.append({"degree": n, "value": c.to_json() if hasattr(c, "to_json") else encode(c), "text": str(c)})
    return rows


def cmd_eseries(args):
    if args.mode == "numeric":
        if args.p is None:
            raise UsageError("numeric mode needs --p")
        counts = numeric_counts(args.side, args.g, args.N, args.p, workers=args.workers)
        es = assemble_eseries(args.side, args.g, args.N, counts, "numeric", args.p)
        params = {"p": args.p}
    else:
        counts = {
            n: polynomial_counts(args.side, n, args.g, args.primes, args.holdout, workers=args.workers)
            for n in range(1, args.N + 1)
        }
        es = assemble_eseries(args.side, args.g, args.N, counts)
        params = {"primes": args.primes, "holdout": args.holdout, "counts": {str(n): str(P) for n, P in counts.items()}}
    return {"side": args.side, "g": args.g, "N": args.N, "mode": args.mode, "parameters": params, "rows": _series_json(es)}, True


def cmd_verify_exp(args):
    if args.mode == "numeric" and args.p is None:
        raise UsageError("numeric mode needs --p")
    rep = verify_exp_identity(
        args.g,
        args.N,
        args.mode,
        p=args.p,
        primes=args.primes,
        holdout=args.holdout,
        root_index=args.root_index,
        workers=args.workers,
    )
    return rep.to_json(), rep.passed


def _tiling(args):
    return load_tiling(args.tiling)


def cmd_tiling_info(args):
    T = _tiling(args)
    Q, W = dual_quiver(T), potential_of(T)
    cuts = find_cuts(Q, W)
    grading = grading_from(Q, W)
    return {
        "tiling": T.label,
        "V": T.V,
        "E": T.E,
        "F": T.F,
        "genus": T.genus,
        "faces": T.faces,
        "arrows": [{"name": Q.names[a], "source": Q.source[a], "target": Q.target[a]} for a in Q.arrows],
        "potential": [[s, [Q.names[a] for a in w]] for s, w in W.terms],
        "grading": {Q.names[a]: encode(grading.weights[a]) for a in Q.arrows},
        "cuts": [c.names(Q) for c in cuts],
        "shift": {str(n): list(shift_audit(T, n, cuts)) for n in (1, 2, 3)},
    }, True


def cmd_cuts(args):
    T = _tiling(args)
    Q, W = dual_quiver(T), potential_of(T)
    return {"tiling": T.label, "cuts": [c.names(Q) for c in find_cuts(Q, W)]}, True


def _cut_arg(Q, W, names):
    if names:
        return names
    cuts = find_cuts(Q, W)
    if not cuts:
        raise UsageError("the tiling admits no cut")
    return cuts[0].names(Q)


def cmd_dimred_check(args):
    T = _tiling(args)
    Q, W = dual_quiver(T), potential_of(T)
    dims = args.dims[0] if len(args.dims) == 1 else tuple(args.dims)
    rep = dimred_count_check(
        Q, W, _cut_arg(Q, W, args.cut), dims, _field(args), invertible=args.invertible, raise_on_fail=False, workers=args.workers
    )
    return rep, rep["pass"]


def cmd_morita_check(args):
    T = _tiling(args)
    rep = morita_count_check(T, args.n, _field(args), cut=args.cut, raise_on_fail=False, workers=args.workers)
    return rep, rep["pass"]


def cmd_gtrue_check(args):
    rep = gtrue_count_check(_tiling(args), args.n, _field(args), raise_on_fail=False, workers=args.workers)
    return rep, rep["pass"]


def cmd_audit(args):
    from .audit import run_audit

    results = run_audit(args.criteria)
    for r in results:
        print(r.line(), file=sys.stderr)
    ok = all(r.passed for r in results)
    return {"check": "audit", "rows": [r.to_json() for r in results], "pass": ok}, ok


# -- parser ------------------------------------------------------------------------------


def _common(p):
    p.add_argument("--max-iterations", type=_positive, default=None, help="cap on every enumeration")
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def _field_args(p, need_p=True):
    p.add_argument("--p", type=int, required=need_p, default=None)
    p.add_argument("--k", type=_positive, default=1)


def build_parser():
    parser = _Parser(prog="charvar", description="Exact point counts for character varieties and quivers.")
    sub = parser.add_subparsers(dest="command", metavar="subcommand", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("count", help="solution, variety or stack counts")
    p.add_argument("--kind", choices=COUNT_KINDS, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--g", type=_positive, required=True)
    _field_args(p)
    p.add_argument("--root", type=int, default=None, help="code of the root of unity (twisted kinds)")
    p.add_argument("--method", choices=("auto", "enumerate", "types"), default="auto")
    _common(p)
    p.set_defaults(func=cmd_count)

    for name, helptext, func in (
        ("eseries", "assemble an E-series", cmd_eseries),
        ("verify-exp", "check the plethystic identity", cmd_verify_exp),
    ):
        p = sub.add_parser(name, help=helptext)
        if name == "eseries":
            p.add_argument("--side", choices=("twisted", "untwisted"), required=True)
        p.add_argument("--g", type=_positive, required=True)
        p.add_argument("--N", type=_positive, required=True)
        p.add_argument("--mode", choices=("polynomial", "numeric"), default="polynomial")
        p.add_argument("--p", type=int, default=None)
        p.add_argument("--primes", type=_int_list, default=_int_list(DEFAULT_PRIMES))
        p.add_argument("--holdout", type=int, default=31)
        if name == "verify-exp":
            p.add_argument("--root-index", type=int, default=0)
        _common(p)
        p.set_defaults(func=func)

    for name, func, helptext in (
        ("tiling-info", cmd_tiling_info, "shape, quiver, potential and shift audit of a tiling"),
        ("cuts", cmd_cuts, "list the cuts of a tiling's potential"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--tiling", required=True, help="JSON file or corpus name")
        _common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("dimred-check", help="linear-fiber count identity for a cut")
    p.add_argument("--tiling", required=True)
    p.add_argument("--cut", type=_name_list, default=None, help="comma-separated arrow names")
    p.add_argument("--dims", type=_int_list, default=[1])
    p.add_argument("--invertible", type=_name_list, default=None)
    _field_args(p)
    _common(p)
    p.set_defaults(func=cmd_dimred_check)

    for name, func, helptext in (
        ("morita-check", cmd_morita_check, "2d Jacobi count against the surface stack count"),
        ("gtrue-check", cmd_gtrue_check, "Jacobi count against the surface x circle count"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--tiling", required=True)
        p.add_argument("--n", type=_positive, required=True)
        if name == "morita-check":
            p.add_argument("--cut", type=_name_list, default=None)
        _field_args(p)
        _common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("mu-count", help="additive moment-map stack count")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--g", type=_positive, required=True)
    _field_args(p)
    _common(p)
    p.set_defaults(func=cmd_mu_count)

    p = sub.add_parser("audit", help="run the acceptance audit")
    p.add_argument("--criteria", type=_int_list, default=None)
    _common(p)
    p.set_defaults(func=cmd_audit)
    return parser


# -- output ------------------------------------------------------------------------------


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        if set(obj) == {"num", "den"}:
            return {prefix: f"{obj['num']}/{obj['den']}"}
        out = {}
        for k, v in obj.items():
            out.update(_flatten(v, f"{prefix}.{k}" if prefix else str(k)))
        return out
    if isinstance(obj, list):
        return {prefix: json.dumps(obj, separators=(",", ":"))}
    return {prefix: obj}


def to_csv(payload):
    rows = payload.get("rows")
    if isinstance(rows, list) and rows and all(isinstance(r, dict) for r in rows):
        flat = [_flatten(r) for r in rows]
    else:
        flat = [_flatten(payload)]
    fields = []
    for r in flat:
        fields += [k for k in r if k not in fields]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(flat)
    return buf.getvalue()


def render(payload, fmt):
    if fmt == "csv":
        return to_csv(payload)
    return json.dumps(payload, indent=2) + "\n"


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with config.max_iterations(args.max_iterations):
            payload, ok = args.func(args)
    except IdentityFailure as exc:
        report = exc.report or {"message": str(exc)}
        _emit(render({"schema": SCHEMA, **report, "pass": False}, args.format), args.out)
        return 2
    except (UsageError, CharvarError, EnumerationTooLarge, ValueError, FileNotFoundError) as exc:
        print(f"charvar {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    _emit(render({"schema": SCHEMA, **payload}, args.format), args.out)
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
