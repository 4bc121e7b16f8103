"""Configuration files: a strict JSON schema mirroring SystemParams.

Schema (all energies and rates in eV, phases in units of pi):

    {
      "plasmon":   {"omega_a": 2.5, "kappa_r": 0.0, "kappa_o": 0.1389},
      "photon":    {"omega_c": 1.5, "kappa_i": 0.0, "kappa_c": 7.5e-4},
      "mirror":    {"present": true, "phi_over_pi": 0.75},
      "emitter":   {"omega_0": 1.499, "gamma_0": 3e-6, "gamma_nr": 0.0,
                    "gamma_m": 0.0, "mu_debye": 48.0},
      "couplings": {"g1": -0.020, "ga": 0.010, "gc": 0.0},
      "run":       { ... optional, subcommand-specific settings ... }
    }

Unknown keys are rejected with the offending path.  Bundled presets live in
``chiralpoint/presets`` and are listed in PRESETS.md.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path

from .errors import ParseError, SchemaError, ValidationError
from .params import (
    Couplings,
    Emitter,
    MirrorConfig,
    PhotonicMode,
    PlasmonMode,
    SystemParams,
    validate,
)

_SECTIONS = {
    "plasmon": {"omega_a", "kappa_r", "kappa_o"},
    "photon": {"omega_c", "kappa_i", "kappa_c"},
    "mirror": {"present", "phi_over_pi"},
    "emitter": {"omega_0", "gamma_0", "gamma_nr", "gamma_m", "mu_debye"},
    "couplings": {"g1", "ga", "gc"},
}
_REQUIRED = {"plasmon": {"omega_a"}, "photon": {"omega_c"},
             "emitter": {"omega_0"}, "couplings": {"g1", "ga"}}


def _check_section(name: str, payload, strict: bool) -> dict:
    if not isinstance(payload, dict):
        raise SchemaError(f"section {name!r} must be an object")
    allowed = _SECTIONS[name]
    if strict:
        unknown = set(payload) - allowed
        if unknown:
            raise SchemaError(
                f"unknown key(s) {sorted(unknown)} in section {name!r}; "
                f"allowed: {sorted(allowed)}")
    missing = _REQUIRED.get(name, set()) - set(payload)
    if missing:
        raise SchemaError(f"section {name!r} missing required key(s) {sorted(missing)}")
    for key, value in payload.items():
        if key == "present":
            if not isinstance(value, bool):
                raise SchemaError(f"{name}.present must be a boolean")
        elif not isinstance(value, (int, float)) or isinstance(value, bool):
            raise SchemaError(f"{name}.{key} must be a number")
        elif not math.isfinite(value):
            raise SchemaError(f"{name}.{key} must be finite")
    return payload


def params_from_dict(doc: dict, strict: bool = True) -> SystemParams:
    """Build validated SystemParams from a parsed config document."""
    if not isinstance(doc, dict):
        raise SchemaError("top-level config must be an object")
    known_top = set(_SECTIONS) | {"run", "comment"}
    if strict:
        unknown = set(doc) - known_top
        if unknown:
            raise SchemaError(f"unknown top-level key(s) {sorted(unknown)}")
    for section in _SECTIONS:
        if section not in doc and section in _REQUIRED:
            raise SchemaError(f"missing required section {section!r}")

    pl = _check_section("plasmon", doc["plasmon"], strict)
    ph = _check_section("photon", doc["photon"], strict)
    mi = _check_section("mirror", doc.get("mirror", {"present": False}), strict)
    em = _check_section("emitter", doc["emitter"], strict)
    co = _check_section("couplings", doc["couplings"], strict)

    params = SystemParams(
        plasmon=PlasmonMode(omega_a=float(pl["omega_a"]),
                            kappa_r=float(pl.get("kappa_r", 0.0)),
                            kappa_o=float(pl.get("kappa_o", 0.0))),
        photon=PhotonicMode(omega_c=float(ph["omega_c"]),
                            kappa_i=float(ph.get("kappa_i", 0.0)),
                            kappa_c=float(ph.get("kappa_c", 0.0))),
        mirror=MirrorConfig(present=bool(mi.get("present", True)),
                            phi=float(mi.get("phi_over_pi", 0.0)) * math.pi),
        emitter=Emitter(omega_0=float(em["omega_0"]),
                        gamma_0=float(em.get("gamma_0", 0.0)),
                        gamma_nr=float(em.get("gamma_nr", 0.0)),
                        gamma_m=float(em.get("gamma_m", 0.0)),
                        mu_debye=float(em.get("mu_debye", 0.0))),
        couplings=Couplings(g1=float(co["g1"]), ga=float(co["ga"]),
                            gc=float(co.get("gc", 0.0))),
    )
    report = validate(params)
    if not report:
        detail = "; ".join(f"{v.path}: {v.message}" for v in report.violations)
        raise ValidationError(f"invalid parameters: {detail}")
    return params


def params_to_dict(params: SystemParams) -> dict:
    """Inverse of params_from_dict (phi reported in units of pi)."""
    return {
        "plasmon": {"omega_a": params.plasmon.omega_a,
                    "kappa_r": params.plasmon.kappa_r,
                    "kappa_o": params.plasmon.kappa_o},
        "photon": {"omega_c": params.photon.omega_c,
                   "kappa_i": params.photon.kappa_i,
                   "kappa_c": params.photon.kappa_c},
        "mirror": {"present": params.mirror.present,
                   "phi_over_pi": params.mirror.phi / math.pi},
        "emitter": {"omega_0": params.emitter.omega_0,
                    "gamma_0": params.emitter.gamma_0,
                    "gamma_nr": params.emitter.gamma_nr,
                    "gamma_m": params.emitter.gamma_m,
                    "mu_debye": params.emitter.mu_debye},
        "couplings": {"g1": params.couplings.g1,
                      "ga": params.couplings.ga,
                      "gc": params.couplings.gc},
    }


def load_config(path: str | Path, strict: bool = True) -> tuple[SystemParams, dict]:
    """Load a config file; returns (params, run_settings)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    params = params_from_dict(doc, strict=strict)
    run = doc.get("run", {})
    if not isinstance(run, dict):
        raise SchemaError("'run' section must be an object")
    return params, run


def preset_names() -> list[str]:
    """Names of the bundled presets (without extension)."""
    pkg = resources.files("chiralpoint") / "presets"
    return sorted(p.name[:-5] for p in pkg.iterdir() if p.name.endswith(".json"))


def load_preset(name: str) -> tuple[SystemParams, dict]:
    """Load a bundled preset by name, e.g. 'fig2'."""
    pkg = resources.files("chiralpoint") / "presets" / f"{name}.json"
    try:
        text = pkg.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ParseError(
            f"no preset named {name!r}; available: {', '.join(preset_names())}"
        ) from None
    doc = json.loads(text)
    params = params_from_dict(doc, strict=True)
    return params, doc.get("run", {})
