"""Sweep orchestration: named parameter axes driving the module operations.

A sweep resolves 1-2 named axes to parameter paths, evaluates one observable
per cell in a deterministic outer-major order, records per-cell errors as
row-level codes without aborting, and can resume from a cache keyed by the
content hash of (spec, params).
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import ChiralpointError, DomainError
from .config import params_to_dict
from .params import SystemParams
from .response import cavity_peak_metrics
from .quantum_yield import scan_detuning
from .scatter import decompose_sigma0


class Observable(Enum):
    PURCELL_MAX = "purcell_max"
    LINEWIDTH = "linewidth"
    ETA = "eta"
    SIGMA0 = "sigma0"
    ENHANCEMENT_PAIR = "enhancement_pair"


@dataclass(frozen=True)
class Axis:
    """One sweep axis: a dotted parameter path or the meta-names
    'Qc' (photon.kappa_c via omega_c/Qc - kappa_i) and 'phi_over_pi'."""

    name: str
    start: float
    stop: float
    points: int
    log: bool = False

    def __post_init__(self):
        if self.points < 2:
            raise DomainError("axis needs at least 2 points")

    def values(self) -> np.ndarray:
        if self.log:
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepSpec:
    axes: tuple[Axis, ...]
    observable: Observable
    scan: tuple[float, float] | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 2:
            raise DomainError("sweep supports 1 or 2 axes")


def _apply_axis(params: SystemParams, name: str, value: float) -> SystemParams:
    if name == "Qc":
        kappa_c = params.photon.omega_c / value - params.photon.kappa_i
        if kappa_c <= 0:
            raise DomainError(f"Qc={value} incompatible with kappa_i")
        return params.replace_path("photon.kappa_c", kappa_c)
    if name == "phi_over_pi":
        return params.replace_path("mirror.phi", value * math.pi)
    return params.replace_path(name, value)


def _evaluate_cell(args):
    params, spec, values = args
    try:
        for axis, value in zip(spec.axes, values):
            params = _apply_axis(params, axis.name, value)
        obs = spec.observable
        out: dict[str, float]
        if obs in (Observable.PURCELL_MAX, Observable.LINEWIDTH,
                   Observable.ENHANCEMENT_PAIR):
            m = cavity_peak_metrics(params)
            out = {"f_p": m.f_p, "omega_peak": m.omega_peak, "fwhm": m.fwhm}
            if obs is not Observable.PURCELL_MAX:
                b = cavity_peak_metrics(params.with_mirror(False))
                out.update({"f_p0": b.f_p, "fwhm0": b.fwhm,
                            "purcell_ratio": m.f_p / b.f_p,
                            "width_ratio": m.fwhm / b.fwhm})
        elif obs is Observable.ETA:
            scan = spec.scan
            if scan is None:
                half = 3.0 * max(abs(params.couplings.g1), params.couplings.ga,
                                 10 * params.photon.kappa, 1e-4)
                scan = (-half, half)
            with_m = scan_detuning(params.with_mirror(True), scan)
            base = scan_detuning(params.with_mirror(False), scan)
            out = {"eta": with_m.eta_max, "eta0": base.eta_max,
                   "eta_r": with_m.phi_r_max / base.phi_r_max,
                   "eta_d": base.plasmon_abs_min / with_m.plasmon_abs_min,
                   "deltaL_at_max_eV": with_m.delta_at_eta_max}
        elif obs is Observable.SIGMA0:
            d = decompose_sigma0(params)
            out = {"sigma0": d.sigma_total, "sigma_sup": d.sigma_sup,
                   "sigma_so": d.sigma_so}
        else:
            raise DomainError(f"unhandled observable {obs}")
        return values, out, ""
    except ChiralpointError as exc:
        return values, {}, f"{type(exc).__name__}: {exc}"
    except np.linalg.LinAlgError as exc:
        return values, {}, f"LinAlgError: {exc}"


@dataclass(frozen=True)
class SweepRow:
    values: tuple[float, ...]
    observables: dict[str, float]
    error: str = ""


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple[SweepRow, ...]
    content_hash: str

    def column_names(self) -> list[str]:
        names = [axis.name for axis in self.spec.axes]
        for row in self.rows:
            if row.observables:
                names += list(row.observables)
                break
        return names + ["error"]


def content_hash(spec: SweepSpec, params: SystemParams) -> str:
    """Stable hash of (spec, params) for resume and provenance."""
    doc = {
        "axes": [[a.name, a.start, a.stop, a.points, a.log] for a in spec.axes],
        "observable": spec.observable.value,
        "scan": spec.scan,
        "options": spec.options,
        "params": params_to_dict(params),
    }
    blob = json.dumps(doc, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def run_sweep(spec: SweepSpec, params: SystemParams, jobs: int = 1,
              cache_dir: str | Path | None = None) -> SweepResult:
    """Evaluate the sweep in outer-major order.

    Per-cell failures are recorded in the row's ``error`` field.  With a
    cache directory, a completed run with the same content hash is reloaded
    instead of recomputed.
    """
    digest = content_hash(spec, params)
    cache_file = None
    if cache_dir is not None:
        cache_file = Path(cache_dir) / f"sweep-{digest}.json"
        if cache_file.exists():
            doc = json.loads(cache_file.read_text())
            rows = tuple(SweepRow(tuple(r["values"]), r["observables"], r["error"])
                         for r in doc["rows"])
            return SweepResult(spec=spec, rows=rows, content_hash=digest)

    grids = [axis.values() for axis in spec.axes]
    cells = []
    if len(grids) == 1:
        cells = [(params, spec, (float(v),)) for v in grids[0]]
    else:
        cells = [(params, spec, (float(u), float(v)))
                 for u in grids[0] for v in grids[1]]

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate_cell, cells))
    else:
        results = [_evaluate_cell(c) for c in cells]

    rows = tuple(SweepRow(values=v, observables=obs, error=err)
                 for v, obs, err in results)
    out = SweepResult(spec=spec, rows=rows, content_hash=digest)
    if cache_file is not None:
        cache_file.parent.mkdir(parents=True, exist_ok=True)
        cache_file.write_text(json.dumps({
            "rows": [{"values": list(r.values), "observables": r.observables,
                      "error": r.error} for r in out.rows]}))
    return out
