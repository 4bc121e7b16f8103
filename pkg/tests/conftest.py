from __future__ import annotations

import numpy as np
import pytest

from chiralpoint import (
    Couplings,
    Emitter,
    MirrorConfig,
    PhotonicMode,
    PlasmonMode,
    SystemParams,
)


def make_detuned(qc=2e3, g1=-20e-3, ga=10e-3, gc=0.0, phi=0.75 * np.pi,
                 omega_c=1.5, qa=18.0, gamma_0=3e-6, mirror=True,
                 kappa_i=0.0, omega_0=None, mu=48.0) -> SystemParams:
    """Red-detuned LDOS setting: plasmon 1 eV above the cavity."""
    omega_a = omega_c + 1.0
    return SystemParams(
        plasmon=PlasmonMode(omega_a=omega_a, kappa_r=0.0, kappa_o=omega_a / qa),
        photon=PhotonicMode(omega_c=omega_c, kappa_i=kappa_i,
                            kappa_c=omega_c / qc - kappa_i),
        mirror=MirrorConfig(present=mirror, phi=phi),
        emitter=Emitter(omega_0=omega_0 if omega_0 is not None else omega_c,
                        gamma_0=gamma_0, mu_debye=mu),
        couplings=Couplings(g1=g1, ga=ga, gc=gc),
    )


def make_resonant(qc=1e5, phi=0.0, g1=-2.9e-3, ga=7.2e-3, gc=1.44e-4,
                  gamma_nr=0.0, omega=2.25, kappa_i=0.0,
                  mirror=True) -> SystemParams:
    """Resonant yield setting: emitter, plasmon and cavity at one frequency."""
    return SystemParams(
        plasmon=PlasmonMode(omega_a=omega, kappa_r=2.45e-3, kappa_o=0.2),
        photon=PhotonicMode(omega_c=omega, kappa_i=kappa_i,
                            kappa_c=omega / qc - kappa_i),
        mirror=MirrorConfig(present=mirror, phi=phi),
        emitter=Emitter(omega_0=omega, gamma_0=3e-6, gamma_nr=gamma_nr,
                        gamma_m=83e-6, mu_debye=48.0),
        couplings=Couplings(g1=g1, ga=ga, gc=gc),
    )


def random_params(rng: np.random.Generator, resonant=False,
                  mirror=True) -> SystemParams:
    """Generic well-conditioned parameter draw for property tests."""
    omega_c = rng.uniform(1.0, 2.5)
    omega_a = omega_c if resonant else omega_c + rng.uniform(0.3, 1.5)
    kappa_a = omega_a / rng.uniform(8.0, 25.0)
    kappa_c = omega_c / 10 ** rng.uniform(3.0, 5.0)
    kappa_i = kappa_c * rng.uniform(0.0, 0.5)
    return SystemParams(
        plasmon=PlasmonMode(omega_a=omega_a,
                            kappa_r=kappa_a * rng.uniform(0.0, 0.3),
                            kappa_o=kappa_a * rng.uniform(0.3, 1.0)),
        photon=PhotonicMode(omega_c=omega_c, kappa_i=kappa_i, kappa_c=kappa_c),
        mirror=MirrorConfig(present=mirror, phi=rng.uniform(0, 2 * np.pi)),
        emitter=Emitter(omega_0=omega_c + rng.uniform(-2, 2) * kappa_c,
                        gamma_0=10 ** rng.uniform(-6.0, -4.0),
                        gamma_nr=10 ** rng.uniform(-6.0, -3.0),
                        gamma_m=10 ** rng.uniform(-6.0, -4.0),
                        mu_debye=rng.uniform(10.0, 60.0)),
        couplings=Couplings(g1=-(10 ** rng.uniform(-2.7, -1.5)),
                            ga=10 ** rng.uniform(-2.5, -1.5),
                            gc=10 ** rng.uniform(-4.0, -3.0)),
    )


@pytest.fixture
def detuned_params():
    return make_detuned()


@pytest.fixture
def resonant_params():
    return make_resonant()


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
