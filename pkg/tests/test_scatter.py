from __future__ import annotations

import numpy as np
import pytest

from chiralpoint import (
    Drive,
    DriveTarget,
    ScatterMechanism,
    ScatterRoute,
    decompose_sigma0,
    eigendecompose_cavity,
    scatter_spectrum,
)
from chiralpoint.errors import DefectiveMatrix, DomainError
from chiralpoint.quantum_yield import budget_vs_detuning
from chiralpoint.scatter import _adjugate3, _centered_block, _expansion_pieces
from conftest import make_resonant, random_params


def test_uncoupled_photon_pair_is_defective():
    # g1 = 0 leaves the photon pair exactly at its degeneracy for any phase
    for phi in (0.0, 0.37 * np.pi, np.pi, 1.5 * np.pi):
        params = make_resonant(qc=1e5, phi=phi, g1=0.0)
        with pytest.raises(DefectiveMatrix):
            eigendecompose_cavity(params)


def test_defective_threshold_can_be_overridden():
    params = make_resonant(qc=1e5, phi=0.3, g1=0.0)
    eig = eigendecompose_cavity(params, condition_limit=1e18, gap_limit=0.0)
    assert eig.condition > 1e4


def test_detuned_block_rejected():
    params = make_resonant(qc=1e5).replace_path("plasmon.omega_a", 2.3)
    with pytest.raises(DomainError):
        eigendecompose_cavity(params)


def test_bare_modes_without_couplings():
    params = make_resonant(qc=1e4, phi=0.4, g1=0.0, mirror=False,
                           kappa_i=5e-5)
    eig = eigendecompose_cavity(params)
    p, c = params.plasmon, params.photon
    expected = np.sort_complex(np.array(
        [-0.5j * p.kappa_a, -0.5j * c.kappa, -0.5j * c.kappa]))
    assert np.allclose(np.sort_complex(eig.eigenvalues), expected, atol=1e-15)
    assert eig.decay_rates[0] == pytest.approx(p.kappa_a / 2, rel=1e-12)


def test_superradiant_mode_tracks_plasmon():
    params = make_resonant(qc=1e5, phi=0.0)
    eig = eigendecompose_cavity(params)
    gam = eig.decay_rates
    assert gam[0] == pytest.approx(params.plasmon.kappa_a / 2, rel=0.1)
    assert gam[0] > 100 * gam[1] > 100 * gam[2] or gam[0] > 50 * gam[1]


def test_left_eigenvector_property(rng):
    for _ in range(20):
        params = random_params(rng, resonant=True)
        eig = eigendecompose_cavity(params, condition_limit=1e12)
        block = _centered_block(params)
        for row, lam in zip(eig.v_matrix, eig.eigenvalues):
            assert np.max(np.abs(row @ block - lam * row)) < 1e-10
        assert np.all(np.diff(eig.decay_rates) <= 0)
        norms = np.linalg.norm(eig.v_matrix, axis=1)
        assert np.allclose(norms, 1.0, rtol=1e-12)


def test_single_lorentzian_when_decoupled():
    params = make_resonant(qc=1e4, phi=0.7, g1=0.0)
    grid = np.linspace(-0.4, 0.4, 4001)
    sigma = scatter_spectrum(params, grid, ScatterRoute.DIRECT)
    ka = params.plasmon.kappa_a
    expected = ka / (grid**2 + ka**2 / 4)
    assert np.allclose(sigma, expected, rtol=1e-12)


def test_routes_agree_on_reference_sets():
    for qc, phi in ((1e5, 0.0), (1.5e4, 1.5 * np.pi)):
        params = make_resonant(qc=qc, phi=phi)
        grid = np.linspace(-5e-4, 5e-4, 4001)
        direct = scatter_spectrum(params, grid, ScatterRoute.DIRECT)
        eigen = scatter_spectrum(params, grid, ScatterRoute.EIGEN)
        assert np.max(np.abs(direct - eigen)) < 1e-9 * np.max(direct)


def test_routes_agree_on_random_draws(rng):
    checked = 0
    while checked < 100:
        params = random_params(rng, resonant=True)
        try:
            eigendecompose_cavity(params, condition_limit=1e6)
        except DefectiveMatrix:
            continue
        grid = np.linspace(-20 * params.photon.kappa, 20 * params.photon.kappa, 301)
        direct = scatter_spectrum(params, grid, ScatterRoute.DIRECT)
        eigen = scatter_spectrum(params, grid, ScatterRoute.EIGEN)
        assert np.max(np.abs(direct - eigen)) < 1e-9 * np.max(direct)
        checked += 1


def test_sharp_peak_only_with_feedback():
    params = make_resonant(qc=1e5, phi=0.0)
    kappa = params.photon.kappa
    grid = np.linspace(-5 * kappa, 5 * kappa, 200001)
    sigma = scatter_spectrum(params, grid, ScatterRoute.DIRECT)
    sigma0 = scatter_spectrum(params.with_mirror(False), grid, ScatterRoute.DIRECT)
    i = int(np.argmax(sigma))
    # narrow bright feature near zero detuning, far above the feedback-free level
    assert abs(grid[i]) < kappa
    assert sigma[i] > 10 * np.max(sigma0)
    # subnatural: the peak's halfwidth is well below the plasmon linewidth
    half = sigma[i] / 2
    width = grid[sigma > half][-1] - grid[sigma > half][0]
    assert width < 0.1 * params.plasmon.kappa_a


def test_partition_identity_and_classification_superscattering():
    params = make_resonant(qc=1e5, phi=0.0)
    d = decompose_sigma0(params)
    sigma0_direct = scatter_spectrum(params, np.zeros(1), ScatterRoute.DIRECT)[0]
    assert d.sigma_sup + d.sigma_so == pytest.approx(sigma0_direct, rel=1e-9)
    assert d.sigma_total == pytest.approx(sigma0_direct, rel=1e-9)
    assert d.mechanism is ScatterMechanism.SUPERSCATTERING
    assert d.sigma_so > d.sigma_sup > 0


def test_classification_negative_interference():
    params = make_resonant(qc=1.5e4, phi=1.5 * np.pi)
    d = decompose_sigma0(params)
    assert d.sigma_so < 0 < d.sigma_sup
    assert d.mechanism is ScatterMechanism.EIT_INTERMEDIATE


def test_rescaling_invariance_of_decomposition():
    params = make_resonant(qc=1e5, phi=0.0)
    eig = eigendecompose_cavity(params)
    base = _expansion_pieces(params, eig)

    rng = np.random.default_rng(5)
    from chiralpoint.scatter import EigenSystem, _sigma_eigen_terms
    for _ in range(10):
        scales = rng.uniform(0.2, 3.0, 3) * np.exp(2j * np.pi * rng.uniform(size=3))
        scaled = EigenSystem(eigenvalues=eig.eigenvalues,
                             v_matrix=eig.v_matrix * scales[:, None],
                             condition=eig.condition)
        pieces = _expansion_pieces(params, scaled)
        d0 = _sigma_eigen_terms(np.zeros(1), *base)
        d1 = _sigma_eigen_terms(np.zeros(1), *pieces)
        tot0 = d0[0].sum() + d0[1][0]
        tot1 = d1[0].sum() + d1[1][0]
        assert tot1 == pytest.approx(tot0, rel=1e-9)
        assert d1[0][0, 0] == pytest.approx(d0[0][0, 0], rel=1e-9)


def test_weight_matrix_is_hermitian():
    for qc, phi in ((1e5, 0.0), (1.5e4, 1.5 * np.pi), (2e4, 0.9)):
        params = make_resonant(qc=qc, phi=phi)
        eig = eigendecompose_cavity(params)
        _, h, _, _, _ = _expansion_pieces(params, eig)
        assert np.max(np.abs(h - h.conj().T)) < 1e-10 * np.max(np.abs(h))


def test_adjugate_matches_inverse():
    rng = np.random.default_rng(11)
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    adj = _adjugate3(m)
    assert np.allclose(adj / np.linalg.det(m), np.linalg.inv(m), rtol=1e-10)


def test_scatter_peak_colocated_with_radiation_peak():
    # plasmon-driven scattering peak and the radiated-power peak coincide to
    # within the feature linewidth (they weight the plasmon channel by
    # kappa_a vs kappa_r, and only the latter sees the emitter)
    params = make_resonant(qc=1e5, phi=0.0)
    kappa = params.photon.kappa
    grid = np.linspace(-2 * kappa, 2 * kappa, 80001)
    sigma = scatter_spectrum(params, grid, ScatterRoute.DIRECT)
    curves = budget_vs_detuning(params, grid, target=DriveTarget.PLASMON)
    i = int(np.argmax(sigma))
    half = sigma[i] / 2
    fwhm = grid[sigma > half][-1] - grid[sigma > half][0]
    step = grid[1] - grid[0]
    assert abs(grid[i] - grid[int(np.argmax(curves.phi_r))]) <= max(step, fwhm)
