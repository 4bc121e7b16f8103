"""chiralpoint: few-mode model of a plasmonic-photonic cavity whose
counter-propagating ring modes are unidirectionally coupled by an end mirror.

Library layout:

* :mod:`chiralpoint.params`        - parameter containers, units, validation
* :mod:`chiralpoint.response`      - susceptibilities, spectral density, Purcell
* :mod:`chiralpoint.dynamics`      - generators, emission spectrum, populations
* :mod:`chiralpoint.quantum_yield` - driven steady state and power budget
* :mod:`chiralpoint.scatter`       - eigenmode scattering decomposition
* :mod:`chiralpoint.fitting`       - coupling extraction from spectra
* :mod:`chiralpoint.sweep`         - parameter sweeps
* :mod:`chiralpoint.config`        - JSON configs and bundled presets
"""

from __future__ import annotations

__version__ = "0.1.0"

from .params import (
    Couplings,
    Drive,
    DriveTarget,
    Emitter,
    MirrorConfig,
    PhotonicMode,
    PlasmonMode,
    SystemParams,
    free_space_spectral_density,
    unit_convert,
    validate,
)
from .response import (
    PeakMetrics,
    Spectrum,
    bare_susceptibilities,
    cavity_peak_metrics,
    cavity_window_grid,
    default_grid,
    enhancement_map,
    optimal_g1,
    peak_metrics,
    purcell_spectrum,
    spectral_density,
    spectral_density_components,
    system_polarizability,
)
from .dynamics import (
    Basis,
    DynamicsMethod,
    EmissionResult,
    GeneratorMatrix,
    build_generator,
    chi_sys,
    emission_spectrum,
    emitter_correlation,
    qe_dynamics,
)
from .quantum_yield import (
    PowerBudget,
    SteadyState,
    budget_vs_detuning,
    power_budget,
    scan_detuning,
    steady_state,
    yield_map,
)
from .scatter import (
    EigenSystem,
    ScatterDecomposition,
    ScatterMechanism,
    ScatterRoute,
    decompose_sigma0,
    eigendecompose_cavity,
    scatter_spectrum,
)
from .fitting import FitProblem, FitResult, fit_spectrum, synthetic_purcell
from .config import load_config, load_preset, params_from_dict, params_to_dict
from .sweep import Axis, Observable, SweepSpec, run_sweep

__all__ = [name for name in dir() if not name.startswith("_")]
