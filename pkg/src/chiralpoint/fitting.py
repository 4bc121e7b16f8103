"""Least-squares extraction of coupling parameters from Purcell spectra.

The model is the complete closed-form spectral density (optionally divided
by the free-space density for Purcell data).  Free parameters are any subset
of {g1, gc, phi}.  g1 and gc are fitted on a signed linear scale with
multi-starts over a sign-symmetric bracket; phi is parametrised on the
circle through (cos phi, sin phi) so the optimiser never sees a branch cut.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .errors import DomainError, IllConditionedFit, NonConvergence
from .params import SystemParams, free_space_spectral_density, wrap_phase
from .response import Spectrum, system_polarizability

_FREE_ALLOWED = ("g1", "gc", "phi")


@dataclass(frozen=True)
class FitProblem:
    """Data plus the model mask.

    data    : measured spectrum (Purcell factor or spectral density in eV)
    fixed   : parameters with the unknowns holding any placeholder value
    free    : subset of {"g1", "gc", "phi"}
    weights : optional per-point weights (1/sigma); defaults to uniform
    kind    : "purcell" to compare against J/J0, "spectral_density" for J
    """

    data: Spectrum
    fixed: SystemParams
    free: tuple[str, ...] = ("g1",)
    weights: np.ndarray | None = None
    kind: str = "purcell"

    def __post_init__(self):
        bad = set(self.free) - set(_FREE_ALLOWED)
        if bad:
            raise DomainError(f"unknown free parameter(s) {sorted(bad)}")
        if not self.free:
            raise DomainError("at least one free parameter required")
        if len(self.data.grid) < 5 * len(self.free):
            raise DomainError("need at least 5 data points per free parameter")
        if self.kind not in ("purcell", "spectral_density"):
            raise DomainError(f"unknown data kind {self.kind!r}")


@dataclass(frozen=True)
class FitResult:
    estimates: dict[str, float]
    sigma: dict[str, float]
    covariance: np.ndarray
    residual_norm: float
    n_starts_converged: int
    free: tuple[str, ...] = field(default_factory=tuple)


def _internal_size(free: tuple[str, ...]) -> int:
    return sum(2 if name == "phi" else 1 for name in free)


def _unpack(theta: np.ndarray, free: tuple[str, ...]) -> dict[str, float]:
    out: dict[str, float] = {}
    k = 0
    for name in free:
        if name == "phi":
            out["phi"] = math.atan2(theta[k + 1], theta[k])
            k += 2
        else:
            out[name] = float(theta[k])
            k += 1
    return out


def _apply(params: SystemParams, values: dict[str, float]) -> SystemParams:
    for name, val in values.items():
        if name == "phi":
            params = params.replace_path("mirror.phi", wrap_phase(val))
        else:
            params = params.replace_path(f"couplings.{name}", val)
    return params


def evaluate_model(params: SystemParams, grid, kind: str):
    """Model prediction on the data grid for the given kind."""
    j = -np.imag(system_polarizability(params, np.asarray(grid, dtype=float)))
    if kind == "purcell":
        return j / free_space_spectral_density(
            np.asarray(grid, dtype=float), params.emitter.mu_debye)
    return j


def _start_points(problem: FitProblem, n_starts: int, seed: int) -> list[np.ndarray]:
    """Deterministic multi-start grid, sign-symmetric in g1 and gc."""
    rng = np.random.default_rng(seed)
    magnitudes = np.geomspace(1e-3, 50e-3, max(2, n_starts // 2))
    starts = []
    for mag in magnitudes:
        for sign in (-1.0, 1.0):
            theta = []
            for name in problem.free:
                if name == "g1":
                    theta.append(sign * mag)
                elif name == "gc":
                    theta.append(sign * mag / 50.0)
                else:
                    angle = rng.uniform(0, 2 * math.pi)
                    theta.extend([math.cos(angle), math.sin(angle)])
            starts.append(np.array(theta, dtype=float))
    return starts


def fit_spectrum(problem: FitProblem, n_starts: int = 8, seed: int = 0,
                 max_nfev: int = 4000,
                 condition_limit: float = 1e10) -> FitResult:
    """Weighted least squares with deterministic multi-starts.

    Returns the best converged start.  The 1-sigma uncertainties come from
    the Gauss-Newton covariance at the optimum, scaled by the residual
    variance; a covariance condition number above ``condition_limit`` raises
    IllConditionedFit (the dataset does not constrain the free parameters).
    """
    grid = problem.data.grid
    target = np.real(problem.data.values)
    w = problem.weights if problem.weights is not None else np.ones(len(grid))
    w = np.asarray(w, dtype=float)
    scale = float(np.max(np.abs(w * target))) or 1.0
    phi_slots = []
    k = 0
    for name in problem.free:
        if name == "phi":
            phi_slots.append(k)
            k += 2
        else:
            k += 1

    def residuals(theta):
        params = _apply(problem.fixed, _unpack(theta, problem.free))
        res = w * (evaluate_model(params, grid, problem.kind) - target)
        if phi_slots:
            # gauge residual: pin the circle parametrisation radius to 1,
            # removing its structural null direction without biasing phi
            gauge = [scale * (theta[k] ** 2 + theta[k + 1] ** 2 - 1.0)
                     for k in phi_slots]
            res = np.concatenate([res, gauge])
        return res

    best = None
    converged = 0
    for theta0 in _start_points(problem, n_starts, seed):
        try:
            res = least_squares(residuals, theta0, method="lm", max_nfev=max_nfev)
        except Exception:
            continue
        if not res.success:
            continue
        converged += 1
        if best is None or res.cost < best.cost:
            best = res
    if best is None:
        raise NonConvergence(f"no start converged within {max_nfev} evaluations")

    jac = best.jac
    jtj = jac.T @ jac
    cond = np.linalg.cond(jtj)
    if cond > condition_limit:
        raise IllConditionedFit(
            f"Gauss-Newton covariance condition {cond:.3g} exceeds "
            f"{condition_limit:.3g}; free parameters are not identifiable")
    dof = max(len(grid) - len(best.x), 1)
    variance = 2.0 * best.cost / dof
    cov = variance * np.linalg.inv(jtj)

    estimates = _unpack(best.x, problem.free)
    if "phi" in estimates:
        estimates["phi"] = wrap_phase(estimates["phi"])
    sigma: dict[str, float] = {}
    k = 0
    for name in problem.free:
        if name == "phi":
            cx, cy = best.x[k], best.x[k + 1]
            sub = cov[k:k + 2, k:k + 2]
            grad = np.array([-cy, cx]) / max(cx**2 + cy**2, 1e-30)
            sigma["phi"] = float(np.sqrt(grad @ sub @ grad))
            k += 2
        else:
            sigma[name] = float(np.sqrt(cov[k, k]))
            k += 1
    return FitResult(estimates=estimates, sigma=sigma, covariance=cov,
                     residual_norm=float(np.linalg.norm(best.fun)),
                     n_starts_converged=converged, free=problem.free)


def synthetic_purcell(params: SystemParams, grid, noise: float = 0.0,
                      seed: int = 0) -> Spectrum:
    """Model-generated Purcell data with multiplicative Gaussian noise."""
    clean = evaluate_model(params, grid, "purcell")
    if noise > 0:
        rng = np.random.default_rng(seed)
        clean = clean * (1.0 + noise * rng.standard_normal(len(clean)))
    return Spectrum(np.asarray(grid, dtype=float), clean)
