"""Batch command-line front end.

Subcommands: solve (linear and the three nonlinear problem shapes),
probe (ridge extraction and conormal scans of a stored trajectory),
rates (power-law fits against the closed-form decay exponents),
opalg (exact verification of the operator identity catalog) and data
(generate or preview initial data).  Every run writes a manifest that
echoes the fully resolved configuration, so artifact directories are
self-describing and reruns are diffable.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from .errors import (
    AccuracyError,
    ConvergenceError,
    CuspwaveError,
    DomainError,
    GridMismatchError,
    ParameterError,
    ParseError,
    QuadratureError,
)
from .initial_data import (
    heaviside_fourier_split,
    make_a1,
    make_a2,
    make_smooth,
    parse_data_spec,
)
from .linear_solver import export_trajectory, solve_homogeneous
from .opalg import CoeffContext, catalog_verify
from .probe import (
    VectorFieldId,
    conormal_scan,
    estimate_catalog,
    export_fit_csv,
    export_ridge_csv,
    export_scan_csv,
    fit_power_law,
    ridge_extract,
)
from .semilinear import (
    NonlinearitySpec,
    PicardConfig,
    solve_fourth_order,
    solve_second_order,
    solve_third_order,
)
from .spectral import (
    Field,
    Grid,
    SpectralTrajectory,
    dft_forward,
    load_field,
    save_field,
    sobolev_norm,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_VERIFY = 4

_CONFIG_ERRORS = (ParameterError, ParseError, DomainError, GridMismatchError,
                  FileNotFoundError, NotADirectoryError, ValueError)
_NUMERIC_ERRORS = (ConvergenceError, AccuracyError, QuadratureError)


def _emit_error(exc) -> None:
    """One JSON-lines record per failure, on stderr."""
    record = {"error": type(exc).__name__, "message": str(exc)}
    sys.stderr.write(json.dumps(record) + "\n")


def _read_config_file(path) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError("expected key = value", line=lineno,
                                 column=1, expected="key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key] = value
    return values


def _resolve(args, schema, defaults) -> dict:
    """Merge defaults, config file values and explicit flags, typed."""
    resolved = dict(defaults)
    if getattr(args, "config", None):
        for key, value in _read_config_file(args.config).items():
            if key not in schema:
                raise ParameterError("unknown config key %r" % key)
            resolved[key] = schema[key](value)
    for key in schema:
        flag = getattr(args, key, None)
        if flag is not None:
            resolved[key] = schema[key](flag)
    return resolved


def _write_manifest(directory, command, cfg) -> None:
    os.makedirs(directory, exist_ok=True)
    with open(os.path.join(directory, "run_manifest.txt"), "w") as fh:
        fh.write("command = %s\n" % command)
        for key in sorted(cfg):
            fh.write("%s = %s\n" % (key, cfg[key]))


def _threads(cfg) -> int:
    if cfg.get("threads"):
        return int(cfg["threads"])
    env = os.environ.get("CUSPWAVE_THREADS")
    return int(env) if env else 1


def _build_grid(cfg) -> Grid:
    n = int(cfg["n"])
    return Grid(n, (int(cfg["N"]),) * n, float(cfg["L"]))


def _spectral_data(spec_path, grid) -> Field:
    with open(spec_path) as fh:
        spec = parse_data_spec(fh.read())
    if spec.family == "A1" and grid.n == 1:
        even, hil = heaviside_fourier_split(spec, grid)
        return Field(grid, even.values + hil.values, "spectral")
    maker = {"A1": make_a1, "A2": make_a2, "smooth": make_smooth}
    return dft_forward(maker[spec.family](spec, grid))


def _zero_field(grid) -> Field:
    return Field(grid, np.zeros(grid.sizes, dtype=complex), "spectral")


def _nonlinearity(cfg) -> NonlinearitySpec:
    text = str(cfg.get("f_coefficients", "")).strip()
    coeffs = tuple(float(c) for c in text.split(",")) if text else ()
    return NonlinearitySpec(kind="polynomial", coefficients=coeffs)


def _parse_s_list(cfg):
    text = str(cfg.get("s_list", "0")).strip()
    return tuple(float(s) for s in text.split(","))


# -- solve ----------------------------------------------------------------

_SOLVE_SCHEMA = {
    "m": int, "m1": int, "m2": int, "n": int, "N": int, "L": float,
    "T": float, "n_t": int, "max_iters": int, "tol": float, "s_mon": float,
    "data": str, "data_dt": str, "data_2": str, "data_3": str,
    "f_coefficients": str, "s_list": str, "out": str, "threads": int,
    "seed": int,
}
_SOLVE_DEFAULTS = {
    "m": 1, "m1": 2, "m2": 1, "n": 1, "N": 64, "L": np.pi, "T": 0.5,
    "n_t": 65, "max_iters": 40, "tol": 1e-10, "s_mon": 0.0,
    "data": "", "data_dt": "", "data_2": "", "data_3": "",
    "f_coefficients": "", "s_list": "0", "out": "run", "threads": 0,
    "seed": 0,
}


def cmd_solve(args) -> int:
    cfg = _resolve(args, _SOLVE_SCHEMA, _SOLVE_DEFAULTS)
    kind = args.kind
    grid = _build_grid(cfg)
    pic = PicardConfig(T=float(cfg["T"]), n_t=int(cfg["n_t"]),
                       max_iters=int(cfg["max_iters"]),
                       tol=float(cfg["tol"]), s_mon=float(cfg["s_mon"]))

    def data_or_zero(key):
        path = str(cfg[key]).strip()
        return _spectral_data(path, grid) if path else _zero_field(grid)

    phi0 = data_or_zero("data")
    phi1 = data_or_zero("data_dt")
    out = str(cfg["out"])
    report = None
    if kind == "linear":
        traj = solve_homogeneous(int(cfg["m"]), phi0, phi1, pic.times())
    elif kind == "second":
        traj, report = solve_second_order(
            int(cfg["m"]), _nonlinearity(cfg), phi0, phi1, pic)
    elif kind == "third":
        traj, report = solve_third_order(
            int(cfg["m"]), _nonlinearity(cfg), phi0, phi1,
            data_or_zero("data_2"), pic)
    else:
        traj, report = solve_fourth_order(
            int(cfg["m1"]), int(cfg["m2"]), _nonlinearity(cfg),
            phi0, phi1, data_or_zero("data_2"), data_or_zero("data_3"), pic)
    _write_manifest(out, "solve %s" % kind, cfg)
    export_trajectory(out, traj, s_list=_parse_s_list(cfg))
    if report is not None:
        report.write_manifest(os.path.join(out, "picard.csv"))
        if not report.converged:
            raise ConvergenceError(
                "iteration stalled after %d steps" % report.iterations)
    return EXIT_OK


# -- probe ----------------------------------------------------------------

_PROBE_SCHEMA = {
    "traj": str, "m": int, "threshold": float, "depth": int, "s": float,
    "fields": str, "out": str, "threads": int,
}
_PROBE_DEFAULTS = {
    "traj": "run", "m": 1, "threshold": 0.5, "depth": 1, "s": 0.0,
    "fields": "V0", "out": "probe", "threads": 0,
}


def load_trajectory(directory) -> SpectralTrajectory:
    """Rebuild a trajectory from an export directory's manifest."""
    manifest = os.path.join(directory, "manifest.csv")
    times, snaps = [], []
    with open(manifest, newline="") as fh:
        for row in csv.DictReader(fh):
            times.append(float(row["time"]))
            snaps.append(load_field(os.path.join(directory, row["file"]),
                                    space="spectral"))
    if not snaps:
        raise ParameterError("trajectory manifest %r is empty" % manifest)
    grid = snaps[0].grid
    zeros = [Field(grid, np.zeros(grid.sizes, dtype=complex), "spectral")
             for _ in snaps]
    return SpectralTrajectory(grid, np.asarray(times), snaps, zeros)


def _field_alphabet(text, m):
    fields = []
    for label in str(text).split(","):
        label = label.strip()
        if not label:
            continue
        if "[" in label:
            name, rest = label.split("[", 1)
            indices = tuple(int(v) for v in rest.rstrip("]").split(",") if v)
        else:
            name, indices = label, ()
        fields.append(VectorFieldId(name, indices, m))
    if not fields:
        raise ParameterError("empty vector field alphabet")
    return fields


def cmd_probe(args) -> int:
    cfg = _resolve(args, _PROBE_SCHEMA, _PROBE_DEFAULTS)
    traj = load_trajectory(str(cfg["traj"]))
    out = str(cfg["out"])
    _write_manifest(out, "probe", cfg)
    points = ridge_extract(traj, threshold=float(cfg["threshold"]))
    export_ridge_csv(os.path.join(out, "ridge.csv"), points)
    table = conormal_scan(traj, _field_alphabet(cfg["fields"], int(cfg["m"])),
                          depth=int(cfg["depth"]), s=float(cfg["s"]))
    export_scan_csv(os.path.join(out, "scan.csv"), table, float(cfg["s"]))
    return EXIT_OK


# -- rates ----------------------------------------------------------------

_RATES_SCHEMA = {
    "m": int, "s1": float, "N": int, "L": float, "t_lo": float,
    "t_hi": float, "n_t": int, "width": float, "out": str, "threads": int,
}
_RATES_DEFAULTS = {
    "m": 1, "s1": 0.0, "N": 1024, "L": np.pi, "t_lo": 0.3, "t_hi": 3.0,
    "n_t": 17, "width": 0.5, "out": "rates", "threads": 0,
}


def cmd_rates(args) -> int:
    cfg = _resolve(args, _RATES_SCHEMA, _RATES_DEFAULTS)
    m = int(cfg["m"])
    s1 = float(cfg["s1"]) or m / (2 * (m + 2))
    entry = estimate_catalog(m, s1)[0]
    grid = Grid(1, (int(cfg["N"]),), float(cfg["L"]))
    x = grid.coords()[0]
    jump = np.where(x >= 0, 1.0, -1.0) * np.exp(-(x / float(cfg["width"])) ** 2)
    phi = dft_forward(Field(grid, jump))
    times = np.geomspace(float(cfg["t_lo"]), float(cfg["t_hi"]),
                         int(cfg["n_t"]))
    traj = solve_homogeneous(m, phi, _zero_field(grid),
                             np.concatenate(([0.0], times)))
    norms = [sobolev_norm(traj.snapshots[i + 1], s1 + 1.0)
             for i in range(len(times))]
    fit = fit_power_law(times, norms)
    out = str(cfg["out"])
    _write_manifest(out, "rates", cfg)
    export_fit_csv(os.path.join(out, "fits.csv"), [entry], [fit])
    return EXIT_OK


# -- opalg ----------------------------------------------------------------

_OPALG_SCHEMA = {"m": int, "n": int, "pair": str, "out": str, "threads": int}
_OPALG_DEFAULTS = {"m": 1, "n": 2, "pair": "", "out": "", "threads": 0}


def cmd_opalg(args) -> int:
    if args.action != "verify":
        raise ParameterError("unknown opalg action %r" % args.action)
    cfg = _resolve(args, _OPALG_SCHEMA, _OPALG_DEFAULTS)
    pair = str(cfg["pair"]).strip()
    if pair:
        parts = pair.split(",")
        if len(parts) != 2:
            raise ParameterError("--pair expects two integers, e.g. 3,1")
        selector = (int(parts[0]), int(parts[1]))
    else:
        selector = int(cfg["m"])
    CoeffContext(int(cfg["n"]))  # validate the dimension before working
    rows = catalog_verify(selector, int(cfg["n"]), threads=_threads(cfg))
    out = str(cfg["out"]).strip()
    writer = csv.writer(sys.stdout)
    lines = [["name", "status", "residual_terms", "expected", "ok", "detail"]]
    for row in rows:
        lines.append([row.name, row.status, row.residual_terms,
                      row.expected, row.ok, row.detail])
    if out:
        _write_manifest(out, "opalg verify", cfg)
        with open(os.path.join(out, "catalog.csv"), "w", newline="") as fh:
            csv.writer(fh).writerows(lines)
    else:
        writer.writerows(lines)
    checked = [r for r in rows if r.expected != "asserted"]
    failed = [r for r in checked if not r.ok]
    asserted = len(rows) - len(checked)
    print("checked %d identities: %d passed, %d failed, %d asserted only"
          % (len(checked), len(checked) - len(failed), len(failed), asserted),
          file=sys.stderr)
    for row in failed:
        print("  FAILED: %s (%s)" % (row.name, row.status), file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


# -- data -----------------------------------------------------------------

_DATA_SCHEMA = {"spec": str, "n": int, "N": int, "L": float, "out": str,
                "preview": int, "threads": int}
_DATA_DEFAULTS = {"spec": "", "n": 1, "N": 64, "L": np.pi, "out": "data",
                  "preview": 0, "threads": 0}


def cmd_data(args) -> int:
    cfg = _resolve(args, _DATA_SCHEMA, _DATA_DEFAULTS)
    path = str(cfg["spec"]).strip()
    if not path:
        raise ParameterError("data command needs --spec")
    with open(path) as fh:
        spec = parse_data_spec(fh.read())
    grid = _build_grid(cfg)
    maker = {"A1": make_a1, "A2": make_a2, "smooth": make_smooth}
    field = maker[spec.family](spec, grid)
    if int(cfg["preview"]):
        print("family = %s" % spec.family)
        print("l2 = %r" % sobolev_norm(dft_forward(field), 0.0))
        print("extrema = %r %r" % (float(np.min(field.values.real)),
                                   float(np.max(field.values.real))))
        return EXIT_OK
    out = str(cfg["out"])
    _write_manifest(out, "data", cfg)
    save_field(os.path.join(out, "data.cwgrid"), field)
    return EXIT_OK


# -- entry point ----------------------------------------------------------

def _add_schema_flags(parser, schema):
    for key in schema:
        parser.add_argument("--%s" % key.replace("_", "-"), dest=key,
                            default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cuspwave",
        description="pseudospectral solves and exact operator checks for "
                    "degenerate hyperbolic equations")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run a solver")
    p_solve.add_argument("kind",
                         choices=("linear", "second", "third", "fourth"))
    p_solve.add_argument("--config", default=None)
    _add_schema_flags(p_solve, _SOLVE_SCHEMA)
    p_solve.set_defaults(func=cmd_solve)

    p_probe = sub.add_parser("probe", help="analyze a stored trajectory")
    p_probe.add_argument("--config", default=None)
    _add_schema_flags(p_probe, _PROBE_SCHEMA)
    p_probe.set_defaults(func=cmd_probe)

    p_rates = sub.add_parser("rates", help="fit decay rates")
    p_rates.add_argument("--config", default=None)
    _add_schema_flags(p_rates, _RATES_SCHEMA)
    p_rates.set_defaults(func=cmd_rates)

    p_opalg = sub.add_parser("opalg", help="verify operator identities")
    p_opalg.add_argument("action", choices=("verify",))
    p_opalg.add_argument("--config", default=None)
    _add_schema_flags(p_opalg, _OPALG_SCHEMA)
    p_opalg.set_defaults(func=cmd_opalg)

    p_data = sub.add_parser("data", help="generate or preview initial data")
    p_data.add_argument("--config", default=None)
    _add_schema_flags(p_data, _DATA_SCHEMA)
    p_data.set_defaults(func=cmd_data)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _NUMERIC_ERRORS as exc:
        _emit_error(exc)
        return EXIT_NUMERIC
    except _CONFIG_ERRORS as exc:
        _emit_error(exc)
        return EXIT_CONFIG
    except CuspwaveError as exc:
        _emit_error(exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
