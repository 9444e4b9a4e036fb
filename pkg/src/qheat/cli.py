"""Command line front end.

Subcommands:
    single    one steady-state point of the driven qubit, text report
    coupled   one steady-state point of the coupled-qubit pair
    sweep     linear parameter sweep over either model, CSV output
    preset    canned sweeps fig3 / fig4 / fig5 (see PRESETS)

All physics goes through the generic pipeline (kernel build, nullspace
solve, per-reservoir currents), never through the closed forms, so CLI
output exercises the same code path as any library caller.

Sweeps accept the pseudo-variable "tm", the mean temperature: sweeping tm
moves T_A and T_B together, keeping their difference fixed at the value
implied by --ta/--tb.

CSV layout: optional '#' comment lines carrying the tool version and the
full configuration echo (suppressed by --no-header), then a column header
row, then one row per grid point with floats at 12 significant digits.
Grid points with invalid parameters, or whose solve fails a consistency
check, keep their row with the message in the status column while the
rest of the sweep continues. No timestamps anywhere: identical
configurations produce byte-identical files.

Configuration can also come from a JSON file via --config; explicit
flags win over file values.

Exit codes: 0 success, 1 usage or configuration error, 2 physics or
numeric failure when --strict-positivity is set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .bath import BathSpec
from .kernel import build_kernel, combine_kernels
from .steady import (POSITIVITY_TOL, DensityMatrix, PositivityReport, SolveInfo,
                     assemble_liouvillian, positivity_report, solve_steady_state)
from .system import make_coupled_qubits, make_single_qubit
from .thermo import CurrentReport, law_checks, reservoir_current

__all__ = ["PRESETS", "compute_point", "main", "render_sweep", "PointResult"]


class UsageError(Exception):
    """Bad flags or configuration; reported on stderr with exit code 1."""


@dataclass(frozen=True)
class PointResult:
    """Everything the CLI reports about one steady-state solve."""

    rho: DensityMatrix
    currents: dict
    report: CurrentReport
    positivity: PositivityReport
    solve_info: SolveInfo


def compute_point(model: str, mode: str, params: dict) -> PointResult:
    """Generic pipeline at one parameter point.

    params for model "single": w0, ga, gb, ta, tb; for model "coupled":
    w1, w2, lam, g, ta, tb (g applies to both reservoirs).
    """
    if model == "single":
        system = make_single_qubit(params["w0"])
        g_of = {"A": params["ga"], "B": params["gb"]}
    elif model == "coupled":
        system, _ = make_coupled_qubits(params["w1"], params["w2"], params["lam"])
        g_of = {"A": params["g"], "B": params["g"]}
    else:
        raise ValueError(f"unknown model {model!r}")
    t_of = {"A": params["ta"], "B": params["tb"]}
    kernels = {}
    for r in ("A", "B"):
        bath = BathSpec(temperature=t_of[r], spectral_density=g_of[r], label=r)
        kernels[r] = build_kernel(system, bath, r, mode)
    liou = assemble_liouvillian(system, combine_kernels([kernels["A"], kernels["B"]]))
    rho, info = solve_steady_state(liou, full_output=True)
    q = {r: reservoir_current(system, kernels[r], rho) for r in ("A", "B")}
    report = law_checks([("A", t_of["A"], q["A"]), ("B", t_of["B"], q["B"])])
    return PointResult(rho=rho, currents=q, report=report,
                       positivity=positivity_report(rho), solve_info=info)


# ---------------------------------------------------------------- parsing

_COMMON_KEYS = {"out": "out", "strict-positivity": "strict_positivity",
                "no-header": "no_header"}
_MODEL_KEYS = {
    "single": {"w0": "w0", "ga": "ga", "gb": "gb", "ta": "ta", "tb": "tb",
               "mode": "mode"},
    "coupled": {"w1": "w1", "w2": "w2", "lambda": "lam", "g": "g",
                "ta": "ta", "tb": "tb", "mode": "mode"},
}
_SWEEP_KEYS = {**_MODEL_KEYS["single"], **_MODEL_KEYS["coupled"],
               "model": "model", "var": "var", "range": "range_spec"}

_DEFAULTS = {
    "single": dict(w0=1.0, ga=1.0, gb=1.0, ta=1.0, tb=1.0, mode="lindblad"),
    "coupled": dict(w1=1.0, w2=2.0, lam=0.5, g=1.0, ta=1.0, tb=1.0,
                    mode="lindblad"),
}

_SWEEP_VARS = {
    "single": ("w0", "ga", "gb", "ta", "tb", "tm"),
    "coupled": ("w1", "w2", "lambda", "g", "ta", "tb", "tm"),
}

PRESETS = {
    # populations vs mean temperature in equilibrium (dT = 0)
    "fig3": dict(model="coupled", mode="lindblad", w1=1.0, w2=2.0, lam=0.5,
                 g=1.0, ta=1.0, tb=1.0, var="tm", start=0.05, stop=8.0,
                 count=161),
    # currents vs T_A around the equilibrium crossing at T_A = T_B = 1
    "fig4": dict(model="coupled", mode="lindblad", w1=1.0, w2=2.0, lam=0.5,
                 g=1.0, ta=1.0, tb=1.0, var="ta", start=0.5, stop=1.5,
                 count=101),
    # non-secular populations vs mean temperature at fixed T_A - T_B = 10,
    # so T_A = T + 5 and T_B = T - 5 along the sweep (T_B = 0 at the start)
    "fig5": dict(model="coupled", mode="redfield", w1=1.0, w2=2.0, lam=0.5,
                 g=1.0, ta=10.0, tb=0.0, var="tm", start=5.0, stop=8.0,
                 count=161),
}


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage problems by default; this tool reserves 2
    # for physics failures, so route usage errors to exit code 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(p):
    p.add_argument("--out", default=None,
                   help="output path; '-' or unset writes to stdout")
    p.add_argument("--config", default=None,
                   help="JSON file with values for any flag; explicit flags win")
    p.add_argument("--strict-positivity", action="store_true", default=None,
                   help="exit 2 when the steady state is not positive")
    p.add_argument("--no-header", action="store_true", default=None,
                   help="omit the '#' comment lines from CSV output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qheat",
                     description="Steady states and heat currents of few-level "
                                 "systems between bosonic heat reservoirs.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("single", help="single-qubit steady-state point")
    p.add_argument("--w0", type=float, default=None, help="qubit splitting (default 1)")
    p.add_argument("--ga", type=float, default=None, help="reservoir A coupling (default 1)")
    p.add_argument("--gb", type=float, default=None, help="reservoir B coupling (default 1)")
    p.add_argument("--ta", type=float, default=None, help="temperature of A (default 1)")
    p.add_argument("--tb", type=float, default=None, help="temperature of B (default 1)")
    p.add_argument("--mode", choices=("lindblad", "redfield"), default=None,
                   help="kernel mode (default lindblad; identical for this model)")
    _add_common(p)

    p = sub.add_parser("coupled", help="coupled-qubit steady-state point")
    p.add_argument("--mode", choices=("lindblad", "redfield"), default=None,
                   help="kernel mode (default lindblad)")
    p.add_argument("--w1", type=float, default=None, help="qubit 1 splitting (default 1)")
    p.add_argument("--w2", type=float, default=None, help="qubit 2 splitting (default 2)")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="flip-flop coupling (default 0.5)")
    p.add_argument("--g", type=float, default=None,
                   help="coupling of both reservoirs (default 1)")
    p.add_argument("--ta", type=float, default=None, help="temperature of A (default 1)")
    p.add_argument("--tb", type=float, default=None, help="temperature of B (default 1)")
    _add_common(p)

    p = sub.add_parser("sweep", help="linear parameter sweep, CSV output")
    p.add_argument("--model", choices=("single", "coupled"), default=None,
                   help="model to sweep (default coupled)")
    p.add_argument("--mode", choices=("lindblad", "redfield"), default=None)
    for flag in ("w0", "ga", "gb", "w1", "w2", "g", "ta", "tb"):
        p.add_argument(f"--{flag}", type=float, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--var", default=None,
                   help="swept parameter name; 'tm' sweeps the mean temperature "
                        "at fixed T_A - T_B")
    p.add_argument("--range", dest="range_spec", default=None,
                   metavar="START:STOP:COUNT",
                   help="inclusive linear grid, e.g. 0.5:1.5:101")
    _add_common(p)

    p = sub.add_parser("preset", help="canned figure sweeps")
    p.add_argument("name", choices=sorted(PRESETS))
    _add_common(p)
    return parser


def _apply_config(args, keymap) -> None:
    """Fill unset args from the JSON config file; flags win on conflict."""
    if getattr(args, "config", None) is None:
        return
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config!r}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError(f"config {args.config!r} must hold a JSON object")
    known = {**keymap, **_COMMON_KEYS}
    unknown = sorted(set(cfg) - set(known))
    if unknown:
        raise UsageError(f"unknown config keys {unknown}; known: {sorted(known)}")
    for key, dest in known.items():
        if key in cfg and getattr(args, dest, None) is None:
            setattr(args, dest, cfg[key])


def _resolve_params(model: str, args) -> dict:
    params = {}
    for dest in set(_MODEL_KEYS[model].values()):
        value = getattr(args, dest, None)
        params[dest] = _DEFAULTS[model][dest] if value is None else value
    return params


# ---------------------------------------------------------------- sweeps

def _fmt(x) -> str:
    return f"{float(x):.12g}"


def _sweep_columns(model: str, var: str):
    if model == "single":
        pops = ["pop_1", "pop_2"]
        cohs = []
    else:
        pops = ["pop_1", "pop_2", "pop_3", "pop_4"]
        cohs = ["rho23_re", "rho23_im"]
    return ([var] + pops + cohs
            + ["q_A", "q_B", "conservation_residual", "min_population",
               "second_law", "status"])


CONSERVATION_ROW_TOL = 1e-8


def _sweep_row(model, value, point: PointResult | None, error: str | None):
    n_cols = len(_sweep_columns(model, "x"))
    if error is not None:
        return [_fmt(value)] + [""] * (n_cols - 2) + [f"error: {error}"]
    pops = [_fmt(p) for p in point.rho.populations]
    cohs = []
    if model == "coupled":
        rho23 = point.rho.entries[1, 2]
        cohs = [_fmt(rho23.real), _fmt(rho23.imag)]
    resid = point.report.conservation_residual
    status = "ok"
    if resid >= CONSERVATION_ROW_TOL:
        status = f"error: conservation residual {resid:.3e}"
    return ([_fmt(value)] + pops + cohs
            + [_fmt(point.currents["A"]), _fmt(point.currents["B"]),
               _fmt(resid), _fmt(point.positivity.min_population),
               point.report.second_law, status])


def parse_range(spec: str):
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError(f"range must be START:STOP:COUNT, got {spec!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad range {spec!r}: {exc}") from exc
    if count < 2:
        raise UsageError(f"range needs count >= 2, got {count}")
    if not start < stop:
        raise UsageError(f"range needs start < stop, got {start} .. {stop}")
    return start, stop, count


def render_sweep(model: str, mode: str, base_params: dict, var: str,
                 start: float, stop: float, count: int,
                 comments: bool = True):
    """Run the sweep and return (csv_text, n_error_rows, worst_min_population).

    Grid points run concurrently; row order follows the grid, so output
    is deterministic for a fixed configuration.
    """
    var_param = "lam" if var == "lambda" else var
    if var == "tm":
        dt_half = 0.5 * (base_params["ta"] - base_params["tb"])
    elif var_param not in base_params:
        raise UsageError(f"cannot sweep {var!r} for model {model!r}; "
                         f"valid: {', '.join(_SWEEP_VARS[model])}")
    grid = [float(v) for v in np.linspace(start, stop, count)]

    def one(value):
        p = dict(base_params)
        if var == "tm":
            p["ta"] = value + dt_half
            p["tb"] = value - dt_half
        else:
            p[var_param] = value
        try:
            return _sweep_row(model, value, compute_point(model, mode, p), None)
        except (ValueError, LookupError, RuntimeError) as exc:
            return _sweep_row(model, value, None, str(exc))

    with ThreadPoolExecutor() as pool:
        rows = list(pool.map(one, grid))

    n_bad = sum(1 for r in rows if r[-1] != "ok")
    min_pop = min((float(r[-3]) for r in rows if r[-1] == "ok"), default=0.0)
    buf = io.StringIO()
    if comments:
        echo = " ".join(
            f"{k}={v}" for k, v in sorted(
                {**{k: _fmt(v) for k, v in base_params.items()},
                 "model": model, "mode": mode, "var": var,
                 "range": f"{_fmt(start)}:{_fmt(stop)}:{count}"}.items()))
        buf.write(f"# qheat {__version__}\n")
        buf.write(f"# {echo}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_sweep_columns(model, var))
    writer.writerows(rows)
    return buf.getvalue(), n_bad, min_pop


# ---------------------------------------------------------------- reports

def format_point_report(model, mode, params, point: PointResult) -> str:
    lines = [f"model: {model} (mode {mode})",
             "parameters: " + " ".join(f"{k}={_fmt(v)}"
                                       for k, v in sorted(params.items())),
             "populations:"]
    for i, p in enumerate(point.rho.populations, start=1):
        lines.append(f"  rho_{i}{i} = {_fmt(p)}")
    off = point.rho.coherences
    peak = float(abs(off).max()) if off.size else 0.0
    if peak > 1e-12:
        lines.append("coherences:")
        n = point.rho.dim
        for i in range(n):
            for j in range(n):
                z = point.rho.entries[i, j]
                if i != j and abs(z) > 1e-12:
                    lines.append(f"  rho_{i + 1}{j + 1} = {_fmt(z.real)}"
                                 f"{z.imag:+.12g}j")
    else:
        lines.append(f"coherences: none above 1e-12 (max {peak:.3e})")
    lines += [f"q_A = {_fmt(point.currents['A'])}",
              f"q_B = {_fmt(point.currents['B'])}",
              f"conservation residual = {point.report.conservation_residual:.3e}",
              f"second law: {point.report.second_law}",
              f"min population = {_fmt(point.positivity.min_population)}",
              f"min eigenvalue = {_fmt(point.positivity.min_eigenvalue)}",
              f"solver residual = {point.solve_info.residual:.3e}"]
    return "\n".join(lines) + "\n"


def _write_output(path, text) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path!r}: {exc}") from exc


# ---------------------------------------------------------------- commands

def _point_command(model: str, args) -> int:
    _apply_config(args, _MODEL_KEYS[model])
    params = _resolve_params(model, args)
    mode = params.pop("mode")
    try:
        point = compute_point(model, mode, params)
    except (ValueError, LookupError) as exc:
        print(f"qheat: {exc}", file=sys.stderr)
        return 1
    except RuntimeError as exc:
        print(f"qheat: {exc}", file=sys.stderr)
        return 2 if args.strict_positivity else 1
    _write_output(args.out, format_point_report(model, mode, params, point))
    if args.strict_positivity and \
            point.positivity.min_eigenvalue < -POSITIVITY_TOL:
        print(f"qheat: steady state fails positivity: min eigenvalue "
              f"{point.positivity.min_eigenvalue:.6e}", file=sys.stderr)
        return 2
    return 0


def _sweep_from_config(args, model, mode, params, var, start, stop, count) -> int:
    text, n_bad, min_pop = render_sweep(model, mode, params, var, start, stop,
                                        count, comments=not args.no_header)
    _write_output(args.out, text)
    if n_bad:
        print(f"qheat: {n_bad} grid point(s) carry an error marker",
              file=sys.stderr)
    if args.strict_positivity and (n_bad or min_pop < -POSITIVITY_TOL):
        return 2
    return 0


def _cmd_sweep(args) -> int:
    _apply_config(args, _SWEEP_KEYS)
    model = args.model or "coupled"
    if args.var is None or args.range_spec is None:
        raise UsageError("sweep needs both --var and --range")
    var = args.var
    if var not in _SWEEP_VARS[model]:
        raise UsageError(f"cannot sweep {var!r} for model {model!r}; "
                         f"valid: {', '.join(_SWEEP_VARS[model])}")
    start, stop, count = parse_range(str(args.range_spec))
    params = _resolve_params(model, args)
    mode = params.pop("mode")
    return _sweep_from_config(args, model, mode, params, var, start, stop, count)


def _cmd_preset(args) -> int:
    _apply_config(args, {})
    cfg = dict(PRESETS[args.name])
    params = {k: cfg[k] for k in cfg
              if k not in ("model", "mode", "var", "start", "stop", "count")}
    return _sweep_from_config(args, cfg["model"], cfg["mode"], params,
                              cfg["var"], cfg["start"], cfg["stop"],
                              cfg["count"])


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"single": lambda a: _point_command("single", a),
               "coupled": lambda a: _point_command("coupled", a),
               "sweep": _cmd_sweep,
               "preset": _cmd_preset}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"qheat: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
