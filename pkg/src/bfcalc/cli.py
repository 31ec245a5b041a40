"""Command-line front end: ``bfcalc <subcommand> ...``.

Exit codes: 0 success (every inequality passes), 1 failed inequality or
numerical error, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from . import harness as hs
from . import jfunctional as jf
from . import specs
from .calculus import bf_of_generator, subordinate_semigroup
from .errors import BFCalcError, ConfigError, SpecParseError
from .functions import bf_derivative, bf_eval
from .records import records_to_csv, records_to_json, records_to_plotdata, summarize
from .semigroup import format_matrix

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_POINTS = "0,0.5,1,2,4,10"
OUTPUT_NAMES = {"csv": "report.csv", "json": "report.json", "plotdata": "report.plotdata"}


def _fmt(v) -> str:
    if v is None:
        return "n/a"
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.12g}"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _grid_points(text: str) -> np.ndarray:
    grid = hs.GridSpec.parse(text)
    return grid.values()


def _tol(args, default):
    return default if args.tol is None else args.tol


# -- subcommands ------------------------------------------------------------

def cmd_catalog(args) -> int:
    for line in specs.catalog_lines(args.filter or ""):
        print(line)
    return EXIT_OK


def cmd_eval(args) -> int:
    psi = specs.parse_psi(args.spec)
    tol = _tol(args, 1e-10)
    if args.grid:
        taus = _grid_points(args.grid)
    else:
        try:
            taus = np.array([float(v) for v in args.points.split(",") if v.strip()])
        except ValueError as exc:
            raise SpecParseError(f"bad --points {args.points!r}") from exc
    if np.any(taus < 0) or not np.all(np.isfinite(taus)):
        raise SpecParseError("evaluation points must be finite and nonnegative")
    rows = []
    for tau in taus:
        tau = float(tau)
        if tau == 0.0:
            rows.append([_fmt(0.0), _fmt(psi.a), _fmt(psi.derivative_at_zero)])
        else:
            rows.append([_fmt(tau), _fmt(bf_eval(psi, tau, tol)),
                         _fmt(bf_derivative(psi, tau, tol))])
    sys.stdout.write(_csv(["tau", "psi", "dpsi"], rows))
    return EXIT_OK


def _jfunc_row(g_spec: str, psi_spec: str, tol: float) -> dict:
    g = specs.parse_g(g_spec)
    psi = specs.parse_psi(psi_spec)
    res = jf.j_value_detailed(g, psi, tol)
    row = {"g": g.name, "psi": psi.name, "value": res.value, "closed_form": None,
           "bound_q": None, "bound_f": None, "bound_power": None,
           "bound_power_corrected": None, "bound_linear": None, "bound_bounded_psi": None}
    name, _, rest = g_spec.strip().partition(":")
    t, inner = None, None
    if name == "exp":
        t, inner = float(rest or 1.0), specs.parse_psi("power:1")
    elif name == "exp-psi":
        t_text, _, inner_spec = rest.partition(":")
        t, inner = float(t_text), specs.parse_psi(inner_spec)
    if t is not None and t > 0:
        if inner.name == psi.name:
            row["closed_form"] = jf.j_closed_form_exp(psi, t)
            row["bound_q"] = jf.j_bound_via_q(g, psi, lambda u: np.exp(-t * np.asarray(u)), tol)
            if g.g_zero_plus <= 1.0 and g.g_infinity == 0.0:
                row["bound_f"] = jf.j_bound_via_f(
                    g, psi, lambda u: -np.log(np.asarray(u)) / t, tol)
        if inner.tag and inner.tag[0] == "power":
            alpha = inner.tag[1]
            row["bound_power"] = jf.j_bound_power(psi, alpha, t, "stated")
            row["bound_power_corrected"] = jf.j_bound_power(psi, alpha, t, "corrected")
            if alpha == 1.0:
                row["bound_linear"] = jf.j_bound_linear(psi, t)
        if psi.is_bounded and psi.a == 0.0 and math.isfinite(psi.derivative_at_zero) \
                and not inner.is_constant:
            row["bound_bounded_psi"] = jf.j_bound_bounded_psi(psi, inner, t, tol)
    row["certificate"] = res.certificate
    return row


def cmd_jfunc(args) -> int:
    tol = _tol(args, 1e-10)
    row = _jfunc_row(args.g, args.psi, tol)
    header = list(row)
    cells = [v if isinstance(v, str) else _fmt(v) for v in row.values()]
    sys.stdout.write(_csv(header, [cells]))
    return EXIT_OK


def _emit_matrix(M, out) -> None:
    text = format_matrix(M)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_psi_of_a(args) -> int:
    psi = specs.parse_psi(args.psi)
    G = specs.parse_generator(args.generator)
    _emit_matrix(bf_of_generator(psi, G, args.method, _tol(args, 1e-10)), args.out)
    return EXIT_OK


def cmd_subordinate(args) -> int:
    psi = specs.parse_psi(args.psi)
    G = specs.parse_generator(args.generator)
    if not args.t >= 0:
        raise SpecParseError("--t must be nonnegative")
    _emit_matrix(subordinate_semigroup(psi, G, args.t, args.method, _tol(args, 1e-10)), args.out)
    return EXIT_OK


def load_config(path: str | None) -> hs.RunConfig:
    """Read a JSON run configuration; ``None`` gives the defaults."""
    if path is None:
        return hs.RunConfig()
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    try:
        cfg = hs.RunConfig.from_dict(data)
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return cfg


def _write(path: str, text: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(text)


def cmd_harness(args) -> int:
    cfg = load_config(args.config)
    if args.tol is not None:
        cfg.tolerance = args.tol
    if args.seed is not None:
        cfg.seed = args.seed
    if args.grid:
        cfg.t_grid = hs.GridSpec.parse(args.grid)
    if args.suites:
        cfg.suites = [s.strip() for s in args.suites.split(",") if s.strip()]
    cfg = hs.RunConfig.from_dict(cfg.as_dict())
    if args.out:
        outputs = {k: os.path.join(args.out, v) for k, v in OUTPUT_NAMES.items()}
    else:
        outputs = dict(cfg.output)
    skipped: list = []
    records = hs.run_suite(cfg, skipped)
    summary = summarize(records)
    failed = sum(s["failed"] for s in summary.values())
    header = {"version": __version__, "config": cfg.as_dict(), "seed": cfg.seed,
              "tolerance": cfg.tolerance, "summary": summary, "skipped": len(skipped),
              "failed": failed}
    if "csv" in outputs:
        _write(outputs["csv"], records_to_csv(records))
    if "json" in outputs:
        _write(outputs["json"], records_to_json(records, header))
    if "plotdata" in outputs:
        _write(outputs["plotdata"], records_to_plotdata(records))
    print(f"{'inequality':<22} {'total':>6} {'failed':>6} {'worst_ratio':>14}")
    for ident, s in summary.items():
        print(f"{ident:<22} {s['total']:>6} {s['failed']:>6} {_fmt(s['worst_ratio']):>14}")
    print(f"records {len(records)}  skipped {len(skipped)}  failed {failed}  seed {cfg.seed}")
    print("PASS" if failed == 0 else "FAIL")
    return EXIT_OK if failed == 0 else EXIT_FAIL


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", help="output directory (harness) or matrix file")
    common.add_argument("--tol", type=float, help="absolute tolerance")
    common.add_argument("--seed", type=int, help="seed for random sweeps")
    common.add_argument("--grid", help="log grid min:max:points")

    p = argparse.ArgumentParser(prog="bfcalc", description=(
        "Bernstein functions of matrix semigroup generators and operator-norm "
        "inequality checks."))
    p.add_argument("--version", action="version", version=f"bfcalc {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", parents=[common], help="list catalog specs")
    c.add_argument("filter", nargs="?", default="", help="substring filter")
    c.set_defaults(func=cmd_catalog)

    e = sub.add_parser("eval", parents=[common], help="tabulate psi and psi'")
    e.add_argument("spec")
    e.add_argument("--points", default=DEFAULT_POINTS, help="comma-separated tau values")
    e.set_defaults(func=cmd_eval)

    j = sub.add_parser("jfunc", parents=[common], help="J[g, psi] and its bounds")
    j.add_argument("g")
    j.add_argument("psi")
    j.set_defaults(func=cmd_jfunc)

    a = sub.add_parser("psi-of-a", parents=[common], help="psi(A) as a matrix file")
    a.add_argument("psi")
    a.add_argument("generator")
    a.add_argument("--method", default="auto", choices=["auto", "levy", "spectral", "cross"])
    a.set_defaults(func=cmd_psi_of_a)

    s = sub.add_parser("subordinate", parents=[common], help="exp(-t psi(A)) as a matrix file")
    s.add_argument("psi")
    s.add_argument("generator")
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--method", default="auto",
                   choices=["auto", "measure", "spectral", "compound", "cross"])
    s.set_defaults(func=cmd_subordinate)

    h = sub.add_parser("harness", parents=[common], help="run the inequality suites")
    h.add_argument("--suites", help="comma-separated suite names (overrides the config)")
    h.set_defaults(func=cmd_harness)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (SpecParseError, ConfigError) as exc:
        print(f"bfcalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BFCalcError as exc:
        print(f"bfcalc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
