"""Eigenmode decomposition of the driven cavity block and its scattering.

Under a weak plasmon drive the three cavity amplitudes (a, c1, c2) respond
through the resolvent of the zero-centred cavity block M.  Diagonalising M
by its left eigenvectors V (rows, V M = diag(lambda) V) splits the scattered
power sigma(Delta_L) = ||K c||^2 into three single-mode Lorentzian terms and
three interference terms.  The first Lorentzian belongs to the superradiant
eigenmode (largest decay) and is reported as sigma_sup; everything else is
sigma_so.  Both routes - direct linear solve and the six-term expansion -
must agree to machine precision, which the tests enforce.

Sign conventions: eigenvalues of the passive block have negative imaginary
parts, lambda_i = delta_i - i gamma_i with gamma_i > 0; the expansion uses
omega_i = -delta_i so that resonances appear at Delta_L = omega_c - omega_L
= -delta_i, i.e. when the drive hits the dressed mode frequency.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DefectiveMatrix, DomainError
from .params import SystemParams
from .dynamics import Basis, build_generator


@dataclass(frozen=True)
class EigenSystem:
    """Sorted eigenvalues and unit-norm left eigenvectors of the cavity block.

    eigenvalues[i] = delta_i - i gamma_i with gamma_a > gamma_b > gamma_c;
    index 0 is the superradiant mode.  ``condition`` is the condition number
    of the eigenvector matrix.
    """

    eigenvalues: np.ndarray
    v_matrix: np.ndarray
    condition: float

    @property
    def decay_rates(self) -> np.ndarray:
        return -self.eigenvalues.imag

    @property
    def radiation_patterns(self) -> np.ndarray:
        """C_i: response of each eigenmode to the unit plasmon drive."""
        return self.v_matrix[:, 0]


class ScatterMechanism(Enum):
    SUPERSCATTERING = "superscattering"
    EIT_INTERMEDIATE = "eit_intermediate"
    OTHER = "other"


@dataclass(frozen=True)
class ScatterDecomposition:
    """Resonant scattering split into superradiant and other contributions.

    Same-sign addition of both parts (sigma_sup > 0 and sigma_so > 0) marks
    superscattering; a negative interference remainder (sigma_so < 0 <
    sigma_sup) marks the intermediate transparency-like mechanism.
    """

    sigma_total: float
    sigma_sup: float
    sigma_so: float
    mechanism: ScatterMechanism


class ScatterRoute(Enum):
    DIRECT = "direct"
    EIGEN = "eigen"


def _centered_block(params: SystemParams) -> np.ndarray:
    """Cavity block with the common resonance frequency removed.

    The decomposition assumes resonant plasmon-photon coupling, so the block
    is built at omega_a = omega_c and shifted to zero centre frequency.
    """
    if abs(params.delta_ac) > 1e-9 * params.photon.omega_c:
        raise DomainError(
            "scattering decomposition assumes resonant coupling "
            f"(omega_a = omega_c); got delta_ac = {params.delta_ac:.3g} eV")
    block = build_generator(params, Basis.CAVITY3).matrix
    return block - params.photon.omega_c * np.eye(3)


def _channel_rates(params: SystemParams) -> np.ndarray:
    return np.array([params.plasmon.kappa_a,
                     params.photon.kappa_c, params.photon.kappa_c])


def eigendecompose_cavity(params: SystemParams,
                          condition_limit: float = 1e8,
                          gap_limit: float = 1e-8) -> EigenSystem:
    """Left-eigenvector decomposition of the centred cavity block.

    Raises DefectiveMatrix when the eigenvector matrix condition number
    exceeds ``condition_limit`` or when two eigenvalues coincide to within
    ``gap_limit`` of the spectral scale.  An exactly defective block (the
    uncoupled photonic pair at any mirror phase) trips the gap detector even
    when rounding happens to produce a modest condition number.  Pass larger
    limits to override.
    """
    block = _centered_block(params)
    lam, vt = np.linalg.eig(block.T)
    v = vt.T  # rows are left eigenvectors: v @ M = diag(lam) @ v
    order = np.argsort(-(-lam.imag))
    lam, v = lam[order], v[order]
    v = v / np.linalg.norm(v, axis=1)[:, None]
    cond = float(np.linalg.cond(v))
    scale = float(np.max(np.abs(lam))) or 1.0
    gaps = [abs(lam[i] - lam[j]) for i in range(3) for j in range(i + 1, 3)]
    # repeated eigenvalues are defective only with non-orthogonal eigenvectors
    # (a repeated diagonal entry keeps cond(V) = 1 and stays valid)
    if min(gaps) < gap_limit * scale and cond > 10.0:
        raise DefectiveMatrix(
            f"eigenvalue gap {min(gaps):.3g} below {gap_limit:.0e} of the "
            f"spectral scale {scale:.3g}; the cavity block is degenerate")
    if cond > condition_limit:
        raise DefectiveMatrix(
            f"eigenvector condition number {cond:.3g} exceeds {condition_limit:.3g}; "
            "the cavity block is defective or near a degeneracy")
    return EigenSystem(eigenvalues=lam, v_matrix=v, condition=cond)


def _adjugate3(m: np.ndarray) -> np.ndarray:
    """Adjugate of a 3x3 matrix (transpose of the cofactor matrix)."""
    cof = np.empty((3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            minor = np.delete(np.delete(m, i, axis=0), j, axis=1)
            cof[i, j] = (-1) ** (i + j) * (minor[0, 0] * minor[1, 1]
                                           - minor[0, 1] * minor[1, 0])
    return cof.T


def _expansion_pieces(params: SystemParams, eig: EigenSystem):
    """Weights of the six-term expansion: p_gamma, h matrix, C, omega_i, gamma_i."""
    v = eig.v_matrix
    gam = eig.decay_rates
    omega = -eig.eigenvalues.real
    rates = _channel_rates(params)
    adj = _adjugate3(v)
    p = 1.0 / abs(np.linalg.det(v)) ** 2
    prod = float(np.prod(gam))
    h = np.empty((3, 3), dtype=complex)
    for i in range(3):
        for j in range(3):
            s = np.sum(np.conj(adj[:, i]) * rates * adj[:, j])
            h[i, j] = s * prod / (gam[i] * gam[j])
    p_gamma = p / prod
    return p_gamma, h, eig.radiation_patterns, omega, gam


def _sigma_eigen_terms(delta, p_gamma, h, c_vec, omega, gam):
    """Diagonal Lorentzian terms and cross terms of the expansion."""
    delta = np.asarray(delta, dtype=float)
    diag = np.zeros((3,) + delta.shape)
    for i in range(3):
        diag[i] = (p_gamma * h[i, i].real * abs(c_vec[i]) ** 2 * gam[i] ** 2
                   / ((delta - omega[i]) ** 2 + gam[i] ** 2))
    cross = np.zeros(delta.shape)
    for i in range(3):
        for j in range(i + 1, 3):
            z = (p_gamma * h[i, j] * np.conj(c_vec[i]) * c_vec[j]
                 * gam[i] * gam[j]
                 / ((delta - omega[i] + 1j * gam[i])
                    * (delta - omega[j] - 1j * gam[j])))
            cross = cross + 2.0 * np.real(z)
    return diag, cross


def scatter_spectrum(params: SystemParams, delta_grid,
                     route: ScatterRoute = ScatterRoute.DIRECT,
                     condition_limit: float = 1e8) -> np.ndarray:
    """Scattered power sigma(Delta_L) under a unit plasmon drive.

    DIRECT solves c = -(M + Delta_L I)^{-1} s_p per point and returns
    ||K c||^2; EIGEN evaluates the six-term expansion.  The routes agree to
    machine precision for non-defective parameters.
    """
    delta_grid = np.asarray(delta_grid, dtype=float)
    if route is ScatterRoute.DIRECT:
        block = _centered_block(params)
        mats = block[None] + delta_grid[:, None, None] * np.eye(3)[None]
        rhs = np.zeros((len(delta_grid), 3, 1), dtype=complex)
        rhs[:, 0, 0] = 1.0
        c = -np.linalg.solve(mats, rhs)[..., 0]
        rates = _channel_rates(params)
        return np.einsum("k,nk->n", rates, np.abs(c) ** 2)
    eig = eigendecompose_cavity(params, condition_limit)
    pieces = _expansion_pieces(params, eig)
    diag, cross = _sigma_eigen_terms(delta_grid, *pieces)
    return diag.sum(axis=0) + cross


def decompose_sigma0(params: SystemParams,
                     condition_limit: float = 1e8) -> ScatterDecomposition:
    """Split sigma(Delta_L = 0) into the superradiant Lorentzian term and
    the five remaining terms; classify the mechanism from their signs."""
    eig = eigendecompose_cavity(params, condition_limit)
    pieces = _expansion_pieces(params, eig)
    diag, cross = _sigma_eigen_terms(np.zeros(1), *pieces)
    sigma_sup = float(diag[0, 0])
    sigma_so = float(diag[1, 0] + diag[2, 0] + cross[0])
    total = sigma_sup + sigma_so
    if sigma_sup > 0 and sigma_so > 0:
        mech = ScatterMechanism.SUPERSCATTERING
    elif sigma_sup > 0 > sigma_so:
        mech = ScatterMechanism.EIT_INTERMEDIATE
    else:
        mech = ScatterMechanism.OTHER
    return ScatterDecomposition(sigma_total=total, sigma_sup=sigma_sup,
                                sigma_so=sigma_so, mechanism=mech)
