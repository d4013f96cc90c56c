"""Command-line front end.

Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 numerical failure.
"""
import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import asymptotics, bispherical, core
from ._parallel import default_jobs
from .errors import DomainError, NumericalError
from .report import CSV_COLUMNS, evaluate

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0 or math.isinf(v):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return v


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return v


def _lmax_list(text):
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad l_max list: {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("l_max list is empty")
    if len(set(vals)) != len(vals):
        raise argparse.ArgumentTypeError(f"duplicate l_max entries in {text!r}")
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise argparse.ArgumentTypeError(f"l_max list must be ascending: {text!r}")
    if vals[0] < 1:
        raise argparse.ArgumentTypeError("l_max entries must be >= 1")
    return vals


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        return obj if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _dump_json(obj, out):
    json.dump(_jsonable(obj), out, indent=2)
    out.write("\n")


def _dump_text(obj, out):
    width = max(len(k) for k in obj)
    for k, v in obj.items():
        out.write(f"{k:<{width}}  {v!r}\n" if not isinstance(v, str) else f"{k:<{width}}  {v}\n")


def _policy(args):
    return bispherical.TruncationPolicy(rel_tol=args.tol, method=args.method, jobs=args.jobs)


def cmd_eval(args, out):
    rep = evaluate(args.x, _policy(args))
    if args.format == "json":
        _dump_json(rep.as_dict(), out)
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        w.writerow(rep.csv_row())
    else:
        d = rep.as_dict()
        methods = d.pop("methods")
        _dump_text({k: (f"{v!r}  [{methods[k]}]" if k in methods else v)
                    for k, v in d.items()}, out)
    return EXIT_OK


def sweep_grid(x_min, x_max, points, log):
    if log:
        return np.geomspace(x_min, x_max, points)
    return np.linspace(x_min, x_max, points)


def cmd_sweep(args, out):
    if not args.x_min < args.x_max:
        raise UsageError("--x-min must be smaller than --x-max")
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    policy = _policy(args)
    rows = [evaluate(float(x), policy).csv_row() for x in sweep_grid(args.x_min, args.x_max,
                                                                    args.points, args.log)]
    target = os.path.abspath(args.out)
    fd, tmp = tempfile.mkstemp(prefix=".sweep-", suffix=".csv", dir=os.path.dirname(target))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            w.writerows(rows)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    out.write(f"wrote {len(rows)} rows to {args.out}\n")
    return EXIT_OK


def converge_report(x, l_max_list, policy):
    pairs = []
    for L in l_max_list:
        value, _ = bispherical.delta_phi_numeric(x, policy, l_max=L)
        pairs.append((L, value))
    achieved = (abs(pairs[-1][1] - pairs[-2][1]) / abs(pairs[-1][1])
                if len(pairs) > 1 else math.nan)
    return {"x": float(x), "history": [list(p) for p in pairs],
            "converged": bool(achieved <= policy.rel_tol), "tolerance_achieved": achieved}


def cmd_converge(args, out):
    rep = converge_report(args.x, args.lmax, _policy(args))
    if args.format == "json":
        _dump_json(rep, out)
    else:
        for L, v in rep["history"]:
            out.write(f"{L}\t{v!r}\n")
        out.write(f"# converged={rep['converged']} tolerance_achieved={rep['tolerance_achieved']!r}\n")
    return EXIT_OK


def compare_report(x, policy):
    geom = core.geometry_from_aspect_ratio(x)
    dphi, conv = bispherical.delta_phi_numeric(geom, policy)
    dshort = asymptotics.delta_phi_short(geom.x, jobs=policy.jobs)
    das = asymptotics.delta_phi_as(geom.x)
    lead = asymptotics.leading_correction(geom.x)
    phi_d = core.phi_dirichlet(geom)
    phi_dr = core.phi_drude(geom)

    def pct(approx, exact):
        return 100.0 * abs(approx - exact) / abs(exact)

    rep = {
        "x": geom.x,
        "delta_phi": dphi,
        "delta_phi_short": dshort,
        "delta_phi_as": das,
        "leading_correction": lead,
        "delta_phi_short_deviation_pct": pct(dshort, dphi),
        "leading_correction_deviation_pct": pct(lead, dphi),
        "phi_D": phi_d,
        "phi_D_short": asymptotics.phi_dirichlet_short(geom.x),
        "phi_Dr": phi_dr,
        "l_max_used": conv.l_max_used,
    }
    rep["phi_D_short_deviation_pct"] = pct(rep["phi_D_short"], phi_d)
    try:
        rep["phi_Dr_short"] = asymptotics.phi_drude_short(geom.x)
        rep["phi_Dr_short_deviation_pct"] = pct(rep["phi_Dr_short"], phi_dr)
        rep["phi_Dr_short_status"] = "ok"
    except DomainError as exc:
        rep["phi_Dr_short"] = None
        rep["phi_Dr_short_deviation_pct"] = None
        rep["phi_Dr_short_status"] = f"out-of-domain: {exc}"
    return rep


def cmd_compare(args, out):
    rep = compare_report(args.x, _policy(args))
    if args.format == "json":
        _dump_json(rep, out)
    else:
        _dump_text(rep, out)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="casimir-ht",
                                description="High-temperature sphere-plate Casimir energies.")
    p.add_argument("--jobs", type=_positive_int, default=default_jobs(),
                   help="worker threads for block evaluation (default: CPU count)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats):
        sp.add_argument("--tol", type=_positive_float, default=1e-9,
                        help="relative tolerance of the truncation ladder (default 1e-9)")
        sp.add_argument("--method", choices=bispherical.METHODS, default="dense",
                        help="block determinant route (default dense)")
        sp.add_argument("--format", choices=formats, default=formats[0])

    sp = sub.add_parser("eval", help="all channels at one aspect ratio")
    sp.add_argument("--x", type=_positive_float, required=True)
    common(sp, ("json", "csv", "text"))
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("sweep", help="CSV table over a range of aspect ratios")
    sp.add_argument("--x-min", type=_positive_float, required=True)
    sp.add_argument("--x-max", type=_positive_float, required=True)
    sp.add_argument("--points", type=int, required=True)
    sp.add_argument("--log", action="store_true", help="logarithmic spacing")
    sp.add_argument("--out", required=True)
    common(sp, ("csv",))
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("converge", help="delta_phi at forced truncations")
    sp.add_argument("--x", type=_positive_float, required=True)
    sp.add_argument("--lmax", type=_lmax_list, required=True, help="ascending comma list")
    common(sp, ("json", "text"))
    sp.set_defaults(func=cmd_converge)

    sp = sub.add_parser("compare", help="numeric vs short-distance channels")
    sp.add_argument("--x", type=_positive_float, required=True)
    common(sp, ("json", "text"))
    sp.set_defaults(func=cmd_compare)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except (UsageError, DomainError) as exc:
        print(f"casimir-ht: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"casimir-ht: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"casimir-ht: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    out.write(buf.getvalue())
    return code


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
