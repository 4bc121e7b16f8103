"""Command-line interface.

    chiralpoint <ldos|emission|dynamics|yield|scatter|sweep|fit>
                (--config FILE | --preset NAME) [--out PATH]
                [--format csv|json] [--jobs N] [--baseline] ...

Exit codes: 0 success, 2 configuration/validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from .errors import ConfigError, NumericalError
from . import config as cfg
from .export import write_csv, write_json
from .params import HBAR_EV_FS, SystemParams
from .response import cavity_window_grid, default_grid, purcell_spectrum, spectral_density
from .dynamics import DynamicsMethod, emission_spectrum, qe_dynamics
from .quantum_yield import yield_map
from .scatter import ScatterRoute, decompose_sigma0, scatter_spectrum
from .fitting import FitProblem, Spectrum, fit_spectrum, synthetic_purcell
from .sweep import Axis, Observable, SweepSpec, content_hash, run_sweep


def _load(args) -> tuple[SystemParams, dict, str]:
    args._t0 = time.perf_counter()
    if args.preset:
        params, run = cfg.load_preset(args.preset)
        label = f"preset:{args.preset}"
    elif args.config:
        params, run = cfg.load_config(args.config)
        label = str(args.config)
    else:
        raise ConfigError("either --config FILE or --preset NAME is required")
    import hashlib
    digest = hashlib.sha256(
        json.dumps(cfg.params_to_dict(params), sort_keys=True).encode()
    ).hexdigest()[:16]
    args._params = params
    return params, run, digest


def _emit(args, columns, rows, digest, extra=None, payload=None):
    fmt = args.format
    if args.out is None:
        out = sys.stdout
        for line in [f"# chiralpoint", f"# config-hash: {digest}"]:
            print(line)
        for key, value in (extra or {}).items():
            print(f"# {key}: {value}")
        print(",".join(columns))
        for row in rows:
            print(",".join("" if v is None else
                           (v if isinstance(v, str) else f"{float(v):.14e}")
                           for v in row))
        return
    path = Path(args.out)
    if fmt == "json":
        doc = payload or {"columns": columns,
                          "rows": [[v for v in row] for row in rows]}
        doc.setdefault("summary", extra or {})
        doc["config"] = cfg.params_to_dict(args._params)
        doc["elapsed_s"] = round(time.perf_counter() - args._t0, 6)
        write_json(path, doc, config_hash=digest)
    else:
        write_csv(path, columns, rows, config_hash=digest, extra_provenance=extra)
    print(f"wrote {path}")


def _cmd_ldos(args):
    params, run, digest = _load(args)
    n = args.n_grid or int(run.get("n_grid", 4001))
    grid = (default_grid(params, n) if args.window == "full"
            else cavity_window_grid(params, n))
    j = spectral_density(params, grid)
    base = params.with_mirror(False)
    j0 = spectral_density(base, grid)
    if params.emitter.mu_debye > 0:
        p = purcell_spectrum(params, grid).real
        p0 = purcell_spectrum(base, grid).real
    else:
        p = np.full(len(grid), np.nan)
        p0 = np.full(len(grid), np.nan)
    rows = zip(grid, j.real, p, j0.real, p0)
    _emit(args, ["omega_eV", "J_eV", "P", "J_baseline_eV", "P_baseline"],
          rows, digest)


def _emission_grid(params: SystemParams, n: int, half_width: float | None):
    e = params.emitter
    if half_width is None:
        kappa = params.photon.kappa
        half_width = 30 * max(kappa, 1e-4)
    return np.linspace(e.omega_0 - half_width, e.omega_0 + half_width, n)


def _cmd_emission(args):
    params, run, digest = _load(args)
    n = args.n_grid or int(run.get("n_grid", 20001))
    half = args.half_width_mev * 1e-3 if args.half_width_mev else None
    grid = _emission_grid(params, n, half)
    res = emission_spectrum(params, grid)
    rows = zip(grid, res.spectrum.real, res.local_coupling.real, res.lamb_shift.real)
    columns = ["omega_eV", "S_per_eV", "Gamma_eV", "Delta_eV"]
    if args.baseline:
        base = emission_spectrum(params.with_mirror(False), grid)
        rows = zip(grid, res.spectrum.real, res.local_coupling.real,
                   res.lamb_shift.real, base.spectrum.real)
        columns.append("S_baseline_per_eV")
    shift = args.shift_mev * 1e-3 if args.shift_mev else 0.0
    extra = {"spectrum-shift-eV": shift} if shift else None
    if shift:
        rows = ([r[0] + shift, *r[1:]] for r in rows)
    _emit(args, columns, rows, digest, extra=extra)


def _cmd_dynamics(args):
    params, run, digest = _load(args)
    t_max_fs = args.t_max_fs or float(run.get("t_max_fs", 10000.0))
    n_t = args.n_t or int(run.get("n_t", 1001))
    t = np.linspace(0.0, t_max_fs / HBAR_EV_FS, n_t)
    method = {"spectral": DynamicsMethod.SPECTRAL_FT,
              "ode": DynamicsMethod.DIRECT_ODE}[args.method]
    pop = qe_dynamics(params, t, method)
    pop_base = qe_dynamics(params.with_mirror(False), t, method)
    rows = zip(t * HBAR_EV_FS, pop, pop_base)
    _emit(args, ["t_fs", "population", "population_baseline"], rows, digest)


def _cmd_yield(args):
    params, run, digest = _load(args)
    if args.map or run.get("task") == "yield_map":
        lo, hi = run.get("qc_log10_range", [3.3, 6.0])
        qc = np.geomspace(10 ** lo, 10 ** hi, args.qc_points
                          or int(run.get("qc_points", 16)))
        phi = np.linspace(0, 2 * math.pi, args.phi_points
                          or int(run.get("phi_points", 16)), endpoint=False)
    else:
        qc = np.array([params.photon.omega_c / params.photon.kappa])
        phi = np.array([params.mirror.phi])
    cells = yield_map(params, qc, phi, jobs=args.jobs)
    rows = [(c.q_c, c.phi / math.pi, c.eta, c.eta0, c.eta_r, c.eta_d,
             c.delta_at_max) for c in cells]
    _emit(args, ["Qc", "phi_over_pi", "eta", "eta0", "eta_r", "eta_d",
                 "deltaL_at_max_eV"], rows, digest)


def _cmd_scatter(args):
    params, run, digest = _load(args)
    kappa = params.photon.kappa
    half = args.half_width_mev * 1e-3 if args.half_width_mev else 10 * kappa
    grid = np.linspace(-half, half, args.n_grid or 20001)
    sigma = scatter_spectrum(params, grid, ScatterRoute.DIRECT)
    sigma_base = scatter_spectrum(params.with_mirror(False), grid,
                                  ScatterRoute.DIRECT)
    d = decompose_sigma0(params)
    extra = {"sigma0": f"{d.sigma_total:.14e}",
             "sigma_sup": f"{d.sigma_sup:.14e}",
             "sigma_so": f"{d.sigma_so:.14e}",
             "mechanism": d.mechanism.value}
    rows = zip(grid, sigma, sigma_base)
    _emit(args, ["deltaL_eV", "sigma", "sigma_baseline"], rows, digest,
          extra=extra)


def _axes_from_args(args, run) -> list[Axis]:
    axes = []
    for text in args.axis or run.get("axes", []):
        if isinstance(text, str):
            parts = text.split(":")
            if len(parts) not in (4, 5):
                raise ConfigError(
                    f"axis {text!r} must be name:start:stop:points[:log]")
            axes.append(Axis(parts[0], float(parts[1]), float(parts[2]),
                             int(parts[3]), len(parts) == 5 and parts[4] == "log"))
        else:
            axes.append(Axis(**text))
    return axes


def _cmd_sweep(args):
    params, run, digest = _load(args)
    axes = _axes_from_args(args, run)
    if not axes:
        raise ConfigError("sweep needs at least one --axis")
    observable = Observable((args.observable or run.get("observable",
                                                        "purcell_max")))
    spec = SweepSpec(axes=tuple(axes), observable=observable)
    result = run_sweep(spec, params, jobs=args.jobs,
                       cache_dir=args.cache_dir)
    columns = result.column_names()
    rows = []
    for row in result.rows:
        rows.append(list(row.values)
                    + [row.observables.get(k) for k in columns[len(row.values):-1]]
                    + [row.error])
    _emit(args, columns, rows, digest,
          extra={"sweep-hash": content_hash(spec, params)})


def _read_spectrum_csv(path: Path, skip_rows: int) -> Spectrum:
    """Two-column CSV reader tolerant of '#' comments and one header row."""
    rows = []
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    for line in lines[skip_rows:]:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except (ValueError, IndexError):
            if rows:
                raise ConfigError(f"{path}: malformed data line {line!r}")
            continue  # header row
    if len(rows) < 2:
        raise ConfigError(f"{path}: no numeric omega,value rows found")
    arr = np.array(rows)
    return Spectrum(arr[:, 0], arr[:, 1])


def _cmd_fit(args):
    params, run, digest = _load(args)
    free = tuple((args.free or ",".join(run.get("free", ["g1"]))).split(","))
    n = int(run.get("n_grid", 601))
    half = float(run.get("grid_half_widths", 15.0))
    if args.data:
        data = _read_spectrum_csv(args.data, args.skip_rows)
    else:
        grid = cavity_window_grid(params, n, half_widths=half)
        noise = args.noise if args.noise is not None else float(run.get("noise", 0.01))
        data = synthetic_purcell(params, grid, noise=noise, seed=args.seed)
    problem = FitProblem(data=data, fixed=params, free=free, kind=args.kind)
    result = fit_spectrum(problem, seed=args.seed)
    columns, row = [], []
    for name in free:
        columns += [name, f"{name}_sigma"]
        row += [result.estimates[name], result.sigma[name]]
    columns.append("residual_norm")
    row.append(result.residual_norm)
    _emit(args, columns, [row], digest,
          payload={"estimates": result.estimates, "sigma": result.sigma,
                   "residual_norm": result.residual_norm})


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="chiralpoint",
        description="Few-mode plasmonic-photonic cavity with chiral mode coupling")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, help="JSON config file")
        p.add_argument("--preset", help="bundled preset name (see PRESETS.md)")
        p.add_argument("--out", type=Path, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--baseline", action="store_true",
                       help="include feedback-free baseline columns")

    p = sub.add_parser("ldos", help="spectral density and Purcell factor")
    common(p)
    p.add_argument("--n-grid", type=int)
    p.add_argument("--window", choices=("cavity", "full"), default="full")
    p.set_defaults(func=_cmd_ldos)

    p = sub.add_parser("emission", help="emitter emission spectrum")
    common(p)
    p.add_argument("--n-grid", type=int)
    p.add_argument("--half-width-mev", type=float)
    p.add_argument("--shift-mev", type=float,
                   help="optional rigid shift of the output frequency axis")
    p.set_defaults(func=_cmd_emission)

    p = sub.add_parser("dynamics", help="emitter population dynamics")
    common(p)
    p.add_argument("--t-max-fs", type=float)
    p.add_argument("--n-t", type=int)
    p.add_argument("--method", choices=("spectral", "ode"), default="ode")
    p.set_defaults(func=_cmd_dynamics)

    p = sub.add_parser("yield", help="quantum yield of the driven steady state")
    common(p)
    p.add_argument("--map", action="store_true", help="scan (Qc, phi) grids")
    p.add_argument("--qc-points", type=int)
    p.add_argument("--phi-points", type=int)
    p.set_defaults(func=_cmd_yield)

    p = sub.add_parser("scatter", help="scattering spectrum and decomposition")
    common(p)
    p.add_argument("--n-grid", type=int)
    p.add_argument("--half-width-mev", type=float)
    p.set_defaults(func=_cmd_scatter)

    p = sub.add_parser("sweep", help="generic parameter sweep")
    common(p)
    p.add_argument("--axis", action="append",
                   help="name:start:stop:points[:log], repeatable")
    p.add_argument("--observable",
                   choices=[o.value for o in Observable])
    p.add_argument("--cache-dir", type=Path)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("fit", help="extract couplings from a Purcell spectrum")
    common(p)
    p.add_argument("--data", type=Path,
                   help="CSV with omega_eV,value columns (default: synthetic)")
    p.add_argument("--skip-rows", type=int, default=0)
    p.add_argument("--free", help="comma list from g1,gc,phi")
    p.add_argument("--noise", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=("purcell", "spectral_density"),
                   default="purcell")
    p.set_defaults(func=_cmd_fit)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
