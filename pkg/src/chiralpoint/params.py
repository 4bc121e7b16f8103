"""Physical parameters of the coupled emitter/plasmon/ring-cavity system.

Internal unit system: hbar = 1, every energy and rate in eV, time in
hbar/eV (0.6582 fs).  Phases are stored in radians on [0, 2*pi).  All
containers are frozen dataclasses; derived quantities are properties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .errors import DomainError, UnsupportedUnit

# CODATA 2018 constants used for unit conversion and the free-space LDOS.
HBAR_JS = 1.054571817e-34       # J s
E_CHARGE = 1.602176634e-19      # C
EPSILON_0 = 8.8541878128e-12    # F/m
C_LIGHT = 2.99792458e8          # m/s
DEBYE_CM = 1e-21 / C_LIGHT      # C m per Debye
HBAR_EV_FS = HBAR_JS / E_CHARGE * 1e15   # fs per (hbar/eV) time unit
EV_TO_RAD_S = E_CHARGE / HBAR_JS         # rad/s per eV

TWO_PI = 2.0 * math.pi


def wrap_phase(phi: float) -> float:
    """Reduce a phase in radians to [0, 2*pi)."""
    out = math.fmod(phi, TWO_PI)
    if out < 0.0:
        out += TWO_PI
    # fmod can return exactly 2*pi after the correction for tiny negatives
    if out >= TWO_PI:
        out -= TWO_PI
    return out


_UNIT_FACTORS = {
    ("eV", "rad/s"): EV_TO_RAD_S,
    ("rad/s", "eV"): 1.0 / EV_TO_RAD_S,
    ("Debye", "C*m"): DEBYE_CM,
    ("C*m", "Debye"): 1.0 / DEBYE_CM,
    ("hbar/eV", "fs"): HBAR_EV_FS,
    ("fs", "hbar/eV"): 1.0 / HBAR_EV_FS,
}


def unit_convert(value: float, unit_from: str, unit_to: str) -> float:
    """Convert between the supported unit pairs.

    Supported: eV <-> rad/s, Debye <-> C*m, hbar/eV <-> fs.  Identity
    conversions are allowed for any of the listed unit names.
    """
    if unit_from == unit_to:
        known = {u for pair in _UNIT_FACTORS for u in pair}
        if unit_from not in known:
            raise UnsupportedUnit(f"unknown unit {unit_from!r}")
        return value
    try:
        return value * _UNIT_FACTORS[(unit_from, unit_to)]
    except KeyError:
        raise UnsupportedUnit(
            f"no conversion from {unit_from!r} to {unit_to!r}"
        ) from None


@dataclass(frozen=True)
class PlasmonMode:
    """Dipolar plasmon resonance.

    omega_a : resonance energy (eV)
    kappa_r : radiative decay rate (eV)
    kappa_o : Ohmic (absorptive) decay rate (eV)
    """

    omega_a: float
    kappa_r: float
    kappa_o: float

    @property
    def kappa_a(self) -> float:
        """Total plasmon decay rate."""
        return self.kappa_r + self.kappa_o

    @property
    def q_factor(self) -> float:
        return self.omega_a / self.kappa_a


@dataclass(frozen=True)
class PhotonicMode:
    """Degenerate pair of counter-propagating ring-cavity modes.

    omega_c : resonance energy (eV)
    kappa_i : intrinsic decay rate (eV)
    kappa_c : waveguide-induced decay rate (eV)
    """

    omega_c: float
    kappa_i: float
    kappa_c: float

    @property
    def kappa(self) -> float:
        """Total decay rate of each travelling mode."""
        return self.kappa_i + self.kappa_c

    @property
    def q_factor(self) -> float:
        return self.omega_c / self.kappa


@dataclass(frozen=True)
class MirrorConfig:
    """End mirror creating the unidirectional ccw -> cw coupling.

    phi is the roundtrip phase in radians, stored on [0, 2*pi).  With
    ``present=False`` every downstream quantity reduces to the feedback-free
    hybrid-cavity baseline.
    """

    present: bool = True
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "phi", wrap_phase(self.phi))


@dataclass(frozen=True)
class Emitter:
    """Two-level emitter.

    omega_0  : transition energy (eV)
    gamma_0  : free-space emission rate (eV)
    gamma_nr : nonradiative decay rate (eV)
    gamma_m  : decay into higher-order plasmonic modes (eV)
    mu_debye : transition dipole moment (Debye); needed only for the
               free-space LDOS normalisation.
    """

    omega_0: float
    gamma_0: float = 0.0
    gamma_nr: float = 0.0
    gamma_m: float = 0.0
    mu_debye: float = 0.0

    @property
    def gamma(self) -> float:
        """Total bare emitter decay rate."""
        return self.gamma_0 + self.gamma_nr + self.gamma_m


@dataclass(frozen=True)
class Couplings:
    """Coherent coupling rates (eV); all real, sign carries meaning.

    g1 : plasmon <-> travelling cavity mode
    ga : plasmon <-> emitter
    gc : cavity mode <-> emitter
    """

    g1: float
    ga: float
    gc: float = 0.0


class DriveTarget(Enum):
    EMITTER = "emitter"
    PLASMON = "plasmon"


@dataclass(frozen=True)
class Drive:
    """Weak coherent drive.

    omega_L is the drive frequency (eV); amplitude multiplies every
    steady-state amplitude linearly, so yield-type ratios never depend on it.
    """

    omega_L: float
    amplitude: float = 1.0
    target: DriveTarget = DriveTarget.EMITTER

    def __post_init__(self):
        if self.amplitude < 0:
            raise DomainError("drive amplitude must be nonnegative")


@dataclass(frozen=True)
class SystemParams:
    """Complete parameter set of the coupled system."""

    plasmon: PlasmonMode
    photon: PhotonicMode
    mirror: MirrorConfig
    emitter: Emitter
    couplings: Couplings

    @property
    def delta_ac(self) -> float:
        """Plasmon-photon detuning omega_a - omega_c."""
        return self.plasmon.omega_a - self.photon.omega_c

    def with_mirror(self, present: bool) -> "SystemParams":
        """Copy with the mirror feedback switched on or off."""
        return replace(self, mirror=replace(self.mirror, present=present))

    def replace(self, **updates) -> "SystemParams":
        """Copy with nested field updates.

        Accepts dotted paths like ``photon.kappa_c`` as keyword-style
        arguments via ``replace_path`` or whole sub-objects here.
        """
        return replace(self, **updates)

    def replace_path(self, path: str, value) -> "SystemParams":
        """Copy with one dotted-path field replaced, e.g. 'couplings.g1'."""
        head, _, tail = path.partition(".")
        if not tail:
            return replace(self, **{head: value})
        sub = getattr(self, head)
        return replace(self, **{head: replace(sub, **{tail: value})})


@dataclass(frozen=True)
class Violation:
    path: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`; never raises."""

    ok: bool
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    def __bool__(self) -> bool:
        return self.ok


def validate(params: SystemParams) -> ValidationReport:
    """Check every stored invariant, returning a report of violations."""
    v: list[Violation] = []

    def bad(path, msg):
        v.append(Violation(path, msg))

    p = params.plasmon
    if not p.omega_a > 0:
        bad("plasmon.omega_a", "omega_a must be positive")
    if p.kappa_r < 0:
        bad("plasmon.kappa_r", "kappa_r must be nonnegative")
    if p.kappa_o < 0:
        bad("plasmon.kappa_o", "kappa_o must be nonnegative")
    if not p.kappa_a > 0:
        bad("plasmon.kappa_a", "kappa_a must be positive")
    elif not math.isfinite(p.omega_a / p.kappa_a):
        bad("plasmon.q_factor", "Q_a must be finite")

    c = params.photon
    if not c.omega_c > 0:
        bad("photon.omega_c", "omega_c must be positive")
    if c.kappa_i < 0:
        bad("photon.kappa_i", "kappa_i must be nonnegative")
    if c.kappa_c < 0:
        bad("photon.kappa_c", "kappa_c must be nonnegative")
    if not c.kappa > 0:
        bad("photon.kappa", "total photonic decay kappa must be positive")

    e = params.emitter
    if not e.omega_0 > 0:
        bad("emitter.omega_0", "omega_0 must be positive")
    for name in ("gamma_0", "gamma_nr", "gamma_m"):
        if getattr(e, name) < 0:
            bad(f"emitter.{name}", f"{name} must be nonnegative")
    if e.mu_debye < 0:
        bad("emitter.mu_debye", "mu_debye must be nonnegative")

    g = params.couplings
    for name in ("g1", "ga", "gc"):
        val = getattr(g, name)
        if not (isinstance(val, (int, float)) and math.isfinite(val)):
            bad(f"couplings.{name}", f"{name} must be a finite real number")

    if not (0.0 <= params.mirror.phi < TWO_PI):
        bad("mirror.phi", "phi must be stored on [0, 2*pi)")

    return ValidationReport(ok=not v, violations=tuple(v))


def free_space_spectral_density(omega_ev, mu_debye: float):
    """Free-space emitter spectral density J0(omega) in eV.

    J0 = omega^3 mu^2 / (6 pi^2 hbar eps0 c^3), evaluated in SI and
    converted back to the internal eV units.  ``omega_ev`` may be an array.
    """
    if mu_debye <= 0:
        raise DomainError("free-space spectral density needs mu > 0")
    w_si = omega_ev * EV_TO_RAD_S
    mu_si = mu_debye * DEBYE_CM
    rate_si = w_si**3 * mu_si**2 / (6 * math.pi**2 * HBAR_JS * EPSILON_0 * C_LIGHT**3)
    return rate_si / EV_TO_RAD_S
