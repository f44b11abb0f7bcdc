"""Explicit Hamiltonian matrices for the full and effective models."""
from __future__ import annotations

import numpy as np

from ..core import NearbyLevelSet, SystemParams
from ..dressed import EffectiveModel
from ..errors import DomainError
from .operators import OperatorSet, build_operators

# Field-frequency convention of the effective Hamiltonian:
#   "shifted": (omega - chi) n + omega0/2 sz + lambda(a s+ + h.c.) + chi n sz
#   "bare":    omega n         + omega0/2 sz + lambda(a s+ + h.c.) + chi n sz
# The closed-form dressed energies are the exact eigenvalues of "bare" only;
# see checks.select_hse_convention.
HSE_CONVENTIONS = ("shifted", "bare")


def _ops(n_max, n_nearby, ops):
    if ops is None:
        return build_operators(n_max, n_nearby)
    if ops.n_max != n_max or ops.n_nearby != n_nearby:
        raise DomainError("operator set does not match requested truncation / level count")
    return ops


def _jc_terms(params: SystemParams, ops: OperatorSet) -> np.ndarray:
    sp = ops.a @ ops.sigma_plus
    return 0.5 * params.omega0 * ops.sigma_z + params.lambda_c * (sp + sp.conj().T)


def build_full_hamiltonian(params: SystemParams, nearby: NearbyLevelSet, n_max: int,
                           ops: OperatorSet | None = None) -> np.ndarray:
    """Atom with ``g``, ``e`` and ``N`` nearby levels coupled to one field mode."""
    ops = _ops(n_max, len(nearby), ops)
    H = params.omega * ops.n + _jc_terms(params, ops)
    for (w_k, eta_k), P, kg in zip(nearby.levels, ops.proj_k, ops.k_from_g):
        x = ops.a @ kg
        H = H + 0.5 * w_k * P + eta_k * (x + x.conj().T)
    return H


def build_hse(params: SystemParams, chi: float, n_max: int, n_nearby: int = 0,
              convention: str = "shifted", ops: OperatorSet | None = None) -> np.ndarray:
    """Effective Stark-shifted Jaynes-Cummings Hamiltonian.

    With ``n_nearby > 0`` the matrix is embedded in the full space; ``sz`` and
    the atomic ladder operators vanish on the nearby levels while the photon
    number term acts everywhere.
    """
    if convention not in HSE_CONVENTIONS:
        raise DomainError(f"unknown convention {convention!r}")
    ops = _ops(n_max, n_nearby, ops)
    w_field = params.omega - chi if convention == "shifted" else params.omega
    return w_field * ops.n + _jc_terms(params, ops) + chi * (ops.n @ ops.sigma_z)


def build_h_script(params: SystemParams, nearby: NearbyLevelSet, effective: EffectiveModel,
                   n_max: int, t: float, ops: OperatorSet | None = None) -> np.ndarray:
    """Time-dependent part acting only inside the nearby-level subspace.

    ``chi n sum_k |k><k| + (n+1) sum_{j,k} xi_k eta_j [e^{i t (w_j - w_k)/2} |j><k| + h.c.]``
    """
    N = len(nearby)
    ops = _ops(n_max, N, ops)
    H = np.zeros((ops.dim, ops.dim), dtype=complex)
    if N == 0:
        return H
    for P in ops.proj_k:
        H += effective.chi * (ops.n @ P)
    n1 = ops.n + np.eye(ops.dim)
    w, eta, xi = nearby.omegas, nearby.etas, effective.xi
    for j in range(N):
        for k in range(N):
            jk = ops.atomic(2 + j, 2 + k)
            term = xi[k] * eta[j] * np.exp(0.5j * t * (w[j] - w[k])) * jk
            H += n1 @ (term + term.conj().T)
    return H


def rotation_generator(effective: EffectiveModel, nearby: NearbyLevelSet, n_max: int,
                       ops: OperatorSet | None = None) -> np.ndarray:
    """Anti-Hermitian ``sum_j xi_j (a |j><g| - a^dag |g><j|)``."""
    ops = _ops(n_max, len(nearby), ops)
    G = np.zeros((ops.dim, ops.dim), dtype=complex)
    for xi, kg in zip(effective.xi, ops.k_from_g):
        x = ops.a @ kg
        G += xi * (x - x.conj().T)
    return G


def rotation_operator(effective: EffectiveModel, nearby: NearbyLevelSet, n_max: int,
                      ops: OperatorSet | None = None) -> np.ndarray:
    """``exp(G)`` for the small-rotation generator, via the eigenbasis of ``iG``."""
    G = rotation_generator(effective, nearby, n_max, ops)
    vals, vecs = np.linalg.eigh(1j * G)
    return (vecs * np.exp(-1j * vals)) @ vecs.conj().T


def build_rotated_hamiltonian(params: SystemParams, nearby: NearbyLevelSet,
                              effective: EffectiveModel, n_max: int,
                              second_order: float = 1.0,
                              ops: OperatorSet | None = None) -> np.ndarray:
    """Rotated Hamiltonian to second order, after the exchange term is cancelled.

    ``second_order`` scales every term quadratic in the nearby couplings
    (the ``chi`` terms and the ``xi_j eta_k`` level mixing).  1.0 assembles the
    published coefficients; 0.5 gives the Schrieffer-Wolff coefficients.
    """
    N = len(nearby)
    ops = _ops(n_max, N, ops)
    chi = second_order * effective.chi
    n1 = ops.n + np.eye(ops.dim)
    H = (params.omega - chi) * ops.n + _jc_terms(params, ops) + chi * (ops.n @ ops.sigma_z)
    for (w_k, _), P in zip(nearby.levels, ops.proj_k):
        H = H + 0.5 * w_k * P + chi * (ops.n @ P)
    for xi_k, ke in zip(effective.xi, ops.k_from_e):
        H = H + params.lambda_c * xi_k * (n1 @ (ke + ke.conj().T))
    xi, eta = effective.xi, nearby.etas
    for j in range(N):
        for k in range(N):
            kj = ops.atomic(2 + k, 2 + j)
            H = H + second_order * xi[j] * eta[k] * (n1 @ (kj + kj.conj().T))
    return H
