"""Command-line entry point.

    confmax verify --suite pairing --k-max 3
    confmax gram --side L --sign 1 --k-max 3
    confmax character --order 40
    confmax export-field --label L+0 --points 5 --output field.csv
    confmax planewave --u 0 0 1 --freq 1 --E0 1 0 0

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage errors.
"""
import argparse
import csv
import io
import json
import re
import sys

import numpy as np

from . import _kernels
from .suites import DEFAULT_TOLS, SUITE_NAMES, SuiteConfig, run_suite

CSV_SCHEMA = "confmax.field/1"
FIELD_COLUMNS = ["x1", "x2", "x3", "t"] + [
    f"{part}_{v}{i}" for v in "EH" for i in (1, 2, 3) for part in ("re", "im")]


class UsageError(Exception):
    pass


def parse_label(text):
    """'L+0', 'R-3' -> MaxwellBasisLabel."""
    from .fields import MaxwellBasisLabel
    m = re.fullmatch(r"([LR])([+-])(\d+)", text.strip())
    if not m:
        raise UsageError(f"bad label {text!r}; expected e.g. L+0 or R-3")
    return MaxwellBasisLabel(int(m.group(3)), m.group(1), 1 if m.group(2) == "+" else -1)


def _parse_tols(items):
    out = {}
    for item in items or []:
        name, sep, val = item.partition("=")
        if not sep or name not in DEFAULT_TOLS:
            raise UsageError(f"bad --tol {item!r}; known names: {', '.join(sorted(DEFAULT_TOLS))}")
        try:
            out[name] = float(val)
        except ValueError as exc:
            raise UsageError(f"bad --tol value {val!r}") from exc
    return out


def _order(text):
    if text == "auto":
        return "auto"
    try:
        n = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("order must be an integer or 'auto'") from exc
    if n < 1:
        raise argparse.ArgumentTypeError("order must be positive")
    return n


def _config(args):
    return SuiteConfig(suite=getattr(args, "suite", None), k_max=args.k_max,
                       samples=args.samples, seed=args.seed, order=args.order,
                       tolerances=_parse_tols(args.tol), output=args.output, format=args.format)


def _dump(text, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=_default) + "\n"


def _default(o):
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(type(o).__name__)


def _checks_csv(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "criterion", "passed", "measured", "expected", "tolerance", "description"])
    for c in report["checks"]:
        w.writerow([c["id"], c["criterion"], c["passed"], json.dumps(c["measured"], default=_default),
                    json.dumps(c["expected"], default=_default), c["tolerance"], c["description"]])
    return buf.getvalue()


def cmd_verify(args):
    cfg = _config(args)
    report, passed = run_suite(cfg)
    _dump(_json(report) if cfg.format == "json" else _checks_csv(report), cfg.output)
    for c in report["checks"]:
        if not c["passed"]:
            print(f"FAIL {c['id']}: measured {c['measured']}, expected {c['expected']}",
                  file=sys.stderr)
    return 0 if passed else 1


def cmd_gram(args):
    from .pairing import PI2, expected_norm, gram_matrix
    from .fields import MaxwellBasisLabel
    cfg = _config(args)
    kmax = cfg.kmax(3)
    labels = [MaxwellBasisLabel(k, args.side, args.sign) for k in range(kmax + 1)]
    rep = gram_matrix(labels, order=cfg.quad_order())
    out = rep.to_dict()
    tol = cfg.tol("norm")
    diag = [rep.matrix[i, i] for i in range(len(labels))]
    exp = [expected_norm(l) for l in labels]
    ok = all(abs(d - e) <= tol * abs(e) for d, e in zip(diag, exp))
    out.update({"config": cfg.echo(), "expectedDiagonal_pi2": [e / PI2 for e in exp], "passed": ok})
    _dump(_json(out), cfg.output)
    return 0 if ok else 1


def cmd_character(args):
    from .branching import dual_pair_decomposition_check, maxw_character_series, rational_side_series
    cfg = _config(args)
    order = 40 if cfg.order == "auto" else int(cfg.order)
    if order < 4:
        raise UsageError("character order must be >= 4")
    out = {"config": cfg.echo(), "families": {}}
    ok = True
    for sign in (1, -1):
        rep = dual_pair_decomposition_check(order, sign)
        fam = "+" if sign > 0 else "-"
        out["families"][fam] = {
            "report": rep.to_dict(),
            "sumSeries": maxw_character_series(order, sign).to_table(),
            "rationalSeries": rational_side_series(order, sign).to_table(),
        }
        ok = ok and rep.success
    out["passed"] = ok
    _dump(_json(out), cfg.output)
    return 0 if ok else 1


def field_grid(lo, hi, points):
    """Row-major grid over the box [lo, hi]^4 with x1 varying slowest and t fastest."""
    axis = np.linspace(lo, hi, points)
    g = np.meshgrid(axis, axis, axis, axis, indexing="ij")
    return np.stack([a.ravel() for a in g], axis=-1)


def export_field(label, x, path=None):
    """Write E and H of a basis solution at Minkowski points ``x`` as CSV; returns the text."""
    from .conformal import extract_EH
    from .fields import maxwell_basis
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(x)):
        raise UsageError("grid must be finite")
    E, H = extract_EH(maxwell_basis(label), x)
    buf = io.StringIO()
    buf.write(f"# schema: {CSV_SCHEMA}\n# label: {label}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELD_COLUMNS)
    for xi, e, h in zip(x, E, H):
        vals = [repr(float(v)) for v in xi]
        for comp in (e, h):
            for z in comp:
                vals += [repr(float(z.real)), repr(float(z.imag))]
        w.writerow(vals)
    text = buf.getvalue()
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def read_field_csv(path):
    """(label string, points (N,4), E (N,3), H (N,3)) from an exported file."""
    label = None
    with open(path) as fh:
        lines = fh.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("# schema:") and line.split(":", 1)[1].strip() != CSV_SCHEMA:
            raise ValueError("unsupported field schema")
        if line.startswith("# label:"):
            label = line.split(":", 1)[1].strip()
        elif not line.startswith("#"):
            body.append(line)
    rows = list(csv.reader(body))
    if rows[0] != FIELD_COLUMNS:
        raise ValueError("unexpected columns")
    a = np.array(rows[1:], dtype=float).reshape(-1, len(FIELD_COLUMNS))
    E = a[:, 4:10:2] + 1j * a[:, 5:10:2]
    H = a[:, 10:16:2] + 1j * a[:, 11:16:2]
    return label, a[:, :4], E, H


def cmd_export(args):
    label = parse_label(args.label)
    if not (np.isfinite(args.lo) and np.isfinite(args.hi)) or args.hi <= args.lo:
        raise UsageError("need a finite box with lo < hi")
    if args.points < 2:
        raise UsageError("need at least 2 points per axis")
    text = export_field(label, field_grid(args.lo, args.hi, args.points), args.output)
    if not args.output:
        sys.stdout.write(text)
    return 0


def cmd_planewave(args):
    from .conformal import ConstraintError, light_cone_functional, plane_wave
    cfg = _config(args)
    E0 = np.array(args.E0[0::2]) + 1j * np.array(args.E0[1::2]) if len(args.E0) == 6 else np.array(args.E0)
    try:
        pw = plane_wave(args.u, args.freq, E0)
    except ConstraintError as exc:
        raise UsageError(str(exc)) from exc
    res = pw.constraint_residuals()
    tol = cfg.tol("planewave")
    ok = max(res.values()) <= tol * max(1.0, float(np.linalg.norm(args.u))) * max(1.0, float(np.linalg.norm(E0)))
    out = {
        "config": cfg.echo(),
        "z": list(pw.z),
        "E0": [[float(c.real), float(c.imag)] for c in pw.E0],
        "H0": [[float(c.real), float(c.imag)] for c in pw.H0],
        "constraintResiduals": {k: float(v) for k, v in res.items()},
        "triadDet": pw.triad_det(),
        "lightConeFunctionalAtX1": light_cone_functional(pw.z, 1.0),
        "passed": bool(ok),
    }
    _dump(_json(out), cfg.output)
    return 0 if ok else 1


def _common(p, order_default="auto"):
    p.add_argument("--k-max", type=int, default=None, help="largest k (default depends on the check)")
    p.add_argument("--samples", type=int, default=None, help="random sample count (default per check)")
    p.add_argument("--seed", type=int, default=0, help="64-bit RNG seed (default 0)")
    p.add_argument("--order", type=_order, default=order_default,
                   help="quadrature order, or series order for branching; 'auto' picks per check")
    p.add_argument("--tol", action="append", metavar="NAME=VAL",
                   help="override a named tolerance; may be repeated")
    p.add_argument("--output", default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser():
    parser = argparse.ArgumentParser(prog="confmax", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--suite", choices=SUITE_NAMES, default="all")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gram", help="Gram matrix of basis solutions in one family")
    p.add_argument("--side", choices=("L", "R"), default="L")
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    _common(p)
    p.set_defaults(func=cmd_gram)

    p = sub.add_parser("character", help="branching series tables and identity check")
    _common(p)
    p.set_defaults(func=cmd_character)

    p = sub.add_parser("export-field", help="sample E and H of a basis solution on a grid")
    p.add_argument("--label", required=True, help="e.g. L+0, R-2")
    p.add_argument("--lo", type=float, default=-1.0)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--points", type=int, default=5, help="grid points per axis")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("planewave", help="build a plane wave and check its constraints")
    p.add_argument("--u", type=float, nargs=3, required=True)
    p.add_argument("--freq", type=float, required=True)
    p.add_argument("--E0", type=float, nargs="+", required=True,
                   help="3 real numbers, or 6 as re/im pairs")
    _common(p)
    p.set_defaults(func=cmd_planewave)
    return parser


def main(argv=None):
    _kernels.set_threads_from_env()
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "E0", None) is not None and len(args.E0) not in (3, 6):
        parser.error("--E0 takes 3 or 6 numbers")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ValueError, OSError) as exc:
        print(f"confmax: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
