"""Brute-force correlation functions and spectra from dense eigendecompositions.

Nothing here uses the closed-form dressed states; every quantity follows from
the Hamiltonian matrix, the initial density matrix and quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from ..core import NearbyLevelSet, PhotonStatistics, SystemParams
from ..errors import AliasingError, ConvergenceError, DomainError, InvalidStateError
from ..spectrum import CorrelationAvg, check_grid
from .hamiltonians import build_full_hamiltonian, build_hse
from .operators import E, OperatorSet, build_operators


class Propagator:
    """``U(t) = exp(-i t H)`` from the eigendecomposition of a Hermitian ``H``."""

    def __init__(self, H: np.ndarray):
        H = np.asarray(H)
        if H.ndim != 2 or H.shape[0] != H.shape[1]:
            raise DomainError("Hamiltonian must be a square matrix")
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(H)

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def evaluate(self, t: float) -> np.ndarray:
        V = self.eigenvectors
        return (V * np.exp(-1j * t * self.eigenvalues)) @ V.conj().T

    def to_eigenbasis(self, X: np.ndarray) -> np.ndarray:
        V = self.eigenvectors
        return V.conj().T @ X @ V


def initial_density(dist: PhotonStatistics, ops: OperatorSet) -> np.ndarray:
    """Excited atom with the field diagonal in photon number, normalised to unit trace."""
    if dist.m_max > ops.n_max:
        raise DomainError(f"field truncation M={dist.m_max} exceeds n_max={ops.n_max}")
    p = np.asarray(dist.probs) / np.sum(dist.probs)
    rho = np.zeros((ops.dim, ops.dim), dtype=complex)
    for m, pm in enumerate(p):
        i = ops.index(m, E)
        rho[i, i] = pm
    return rho


def check_density(rho: np.ndarray) -> None:
    tr = np.trace(rho)
    if abs(tr - 1.0) > 1e-12:
        raise InvalidStateError(f"density matrix trace is {tr!r}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        raise InvalidStateError("density matrix is not Hermitian")
    if np.any(np.diag(rho).real < -1e-14):
        raise InvalidStateError("density matrix has negative populations")


def correlation_numeric(t: float, tau: float, propagator: Propagator, rho0: np.ndarray,
                        ops: OperatorSet) -> complex:
    """``Tr[rho0 U^dag(t+tau) s+ U(tau) s- U(t)]`` by direct matrix products."""
    check_density(rho0)
    U_t = propagator.evaluate(t)
    U_tau = propagator.evaluate(tau)
    U_all = propagator.evaluate(t + tau)
    X = U_all.conj().T @ ops.sigma_plus @ U_tau @ ops.sigma_minus @ U_t
    return complex(np.trace(rho0 @ X))


@dataclass(frozen=True)
class AverageConfig:
    """Time-average settings.

    The average over ``t`` is a windowed mean ``int_0^T w(t) Gamma(t, tau) dt``
    with ``w = sin^4(pi t / T)`` normalised to unit area, evaluated by the
    composite trapezoidal rule.  ``n_samples`` of None picks a node count
    that resolves the fastest oscillation.  ``t_window`` is doubled until the
    result moves by less than ``convergence_tol``.
    """

    t_window: float = 100.0
    n_samples: int | None = None
    convergence_tol: float = 1e-9
    max_doublings: int = 8
    window: str = "sin4"

    def __post_init__(self):
        if not self.t_window > 0:
            raise DomainError("t_window must be > 0")
        if not self.convergence_tol > 0:
            raise DomainError("convergence_tol must be > 0")
        if self.max_doublings < 1:
            raise DomainError("max_doublings must be >= 1")
        if self.window not in ("sin4", "uniform"):
            raise DomainError(f"unknown window {self.window!r}")


def _window_transform(freqs: np.ndarray, T: float, cfg: AverageConfig) -> np.ndarray:
    """Quadrature of ``int_0^T w(t) e^{i f t} dt`` for each frequency ``f``."""
    f_max = float(np.max(np.abs(freqs))) if freqs.size else 0.0
    if cfg.n_samples is not None:
        n = cfg.n_samples
    else:
        n = int(math.ceil(T * max(f_max, 1e-12) * 2.0 / math.pi)) + 1 if f_max > 0 else 2
        n = max(n, 64)
    t = np.linspace(0.0, T, n)
    h = T / (n - 1)
    if cfg.window == "sin4":
        w = np.sin(np.pi * t / T) ** 4 * (8.0 / (3.0 * T)) * h
    else:
        w = np.full(n, h / T)
        w[0] = w[-1] = 0.5 * h / T
    return kernels.exp_sum(freqs, t, w)


@dataclass(frozen=True)
class AveragedCorrelation:
    """Time-averaged correlation as ``sum_k amps_k exp(i freqs_k tau)``.

    ``freqs`` are measured from ``carrier``.  ``change`` is the last
    window-doubling change, an upper bound on ``max_tau`` of the change in the
    correlation.
    """

    freqs: np.ndarray = field(repr=False)
    amps: np.ndarray = field(repr=False)
    carrier: float
    t_window: float
    change: float

    def __call__(self, tau) -> np.ndarray:
        return kernels.exp_sum(np.asarray(tau, dtype=float), self.freqs, self.amps)

    @property
    def freq_max(self) -> float:
        """Largest frequency carrying a non-negligible share of the amplitude."""
        mag = np.abs(self.amps)
        keep = mag >= 1e-10 * mag.sum()
        return float(np.max(np.abs(self.freqs[keep]))) if np.any(keep) else 0.0


def average_correlation(propagator: Propagator, rho0: np.ndarray, ops: OperatorSet,
                        cfg: AverageConfig = AverageConfig(), carrier: float = 0.0) -> AveragedCorrelation:
    """Average ``Gamma(t, tau)`` over ``t`` in the Hamiltonian eigenbasis.

    Writing ``r = V^dag rho0 V`` and ``P``, ``M`` for ``s+``, ``s-`` in that basis,
    ``Gamma(t, tau) = sum_{abc} r_ca e^{i(E_a-E_c)t} P_ab M_bc e^{i(E_a-E_b)tau}``.
    The ``t`` quadrature therefore only has to be applied to the phase factors
    ``e^{i(E_a-E_c)t}``, one per populated pair ``(a, c)``.
    """
    check_density(rho0)
    E_ = propagator.eigenvalues
    r = propagator.to_eigenbasis(rho0)
    P = propagator.to_eigenbasis(ops.sigma_plus)
    M = propagator.to_eigenbasis(ops.sigma_minus)
    ci, ai = np.nonzero(np.abs(r) > 1e-16)
    f_ac = E_[ai] - E_[ci]
    r_vals = r[ci, ai]

    def amplitudes(T):
        A = np.zeros_like(r)
        A[ai, ci] = r_vals * _window_transform(f_ac, T, cfg)
        C = P * (A @ M.T)
        return C, A

    T = cfg.t_window
    C_prev, A_prev = amplitudes(T)
    change = math.inf
    for _ in range(cfg.max_doublings):
        T *= 2.0
        C, A = amplitudes(T)
        change = float(np.sum(np.abs(C - C_prev)))
        if change < cfg.convergence_tol:
            break
        C_prev, A_prev = C, A
    else:
        dA = np.abs(A - A_prev)[ai, ci]
        order = np.argsort(dA)[::-1][:5]
        raise ConvergenceError(
            f"time average not converged after {cfg.max_doublings} doublings (change {change:.3g})",
            frequencies=f_ac[order].tolist())
    a_idx, b_idx = np.nonzero(np.abs(C) > 1e-15 * np.sum(np.abs(C)))
    freqs = E_[a_idx] - E_[b_idx] - carrier
    return AveragedCorrelation(freqs, C[a_idx, b_idx], carrier, T, change)


def time_average_numeric(tau_grid, propagator: Propagator, rho0: np.ndarray, ops: OperatorSet,
                         cfg: AverageConfig = AverageConfig(), carrier: float = 0.0) -> list[CorrelationAvg]:
    tau_grid = np.asarray(tau_grid, dtype=float)
    if np.any(tau_grid < 0):
        raise DomainError("tau must be >= 0")
    avg = average_correlation(propagator, rho0, ops, cfg, carrier)
    return [CorrelationAvg(float(t), complex(v)) for t, v in zip(tau_grid, avg(tau_grid))]


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
# largest node gap when panels of unit width are tiled
_GL_GAP = max(float(np.max(np.diff(_GL_NODES))) / 2.0, float(1.0 + _GL_NODES[0]))


@dataclass(frozen=True)
class TauQuadrature:
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    tau_max: float

    @property
    def max_gap(self) -> float:
        return float(np.max(np.diff(np.concatenate([[0.0], self.nodes]))))


def tau_quadrature(gamma: float, nu_max_rel: float, tau_factor: float = 40.0) -> TauQuadrature:
    """Composite 16-point Gauss-Legendre rule on ``[0, tau_factor / gamma]``.

    Panels are narrow enough that no node gap exceeds ``pi / (10 nu_max_rel)``.
    """
    if gamma <= 0:
        raise DomainError("gamma must be > 0")
    tau_max = tau_factor / gamma
    h = min(1.0, math.pi / (10.0 * max(nu_max_rel, 1e-12) * _GL_GAP))
    n_panels = int(math.ceil(tau_max / h))
    h = tau_max / n_panels
    left = np.arange(n_panels) * h
    nodes = (left[:, None] + 0.5 * h * (_GL_NODES + 1.0)).ravel()
    weights = np.tile(0.5 * h * _GL_WEIGHTS, n_panels)
    return TauQuadrature(nodes, weights, tau_max)


def spectrum_numeric(nu_rel, quad: TauQuadrature, gbar: np.ndarray, gamma: float,
                     freq_max: float = 0.0) -> np.ndarray:
    """``Re int_0^inf e^{-i nu tau} e^{-gamma tau} Gbar(tau) dtau`` by quadrature.

    ``gbar`` holds the correlation at ``quad.nodes``; ``nu_rel`` and
    ``freq_max`` (the highest frequency present in ``gbar``) share its frame.
    Truncating at ``tau_max`` costs at most ``|Gbar(0)| e^{-gamma tau_max} / gamma``.
    """
    nu_rel = np.asarray(nu_rel, dtype=float)
    if quad.tau_max < 40.0 / gamma * (1 - 1e-12):
        raise AliasingError(f"tau_max={quad.tau_max} is shorter than 40/gamma")
    nu_max = max(float(np.max(np.abs(nu_rel))), freq_max)
    if quad.max_gap > math.pi / (10.0 * nu_max) * (1 + 1e-9):
        raise AliasingError(f"tau spacing {quad.max_gap:.3g} too coarse for frequency {nu_max:.3g}")
    damp = quad.weights * np.exp(-gamma * quad.nodes)
    gbar = np.asarray(gbar, dtype=complex)
    return kernels.damped_fourier(nu_rel, quad.nodes, damp * gbar.real, damp * gbar.imag)


def _spectrum_from_hamiltonian(H, ops, dist, params, grid, cfg):
    prop = Propagator(H)
    rho0 = initial_density(dist, ops)
    avg = average_correlation(prop, rho0, ops, cfg, carrier=params.omega)
    nu_rel = params.lambda_c * check_grid(grid)
    quad = tau_quadrature(params.gamma, max(float(np.max(np.abs(nu_rel))), avg.freq_max))
    return spectrum_numeric(nu_rel, quad, avg(quad.nodes), params.gamma, avg.freq_max)


def default_n_max(dist: PhotonStatistics, guard: int = 10) -> int:
    return dist.m_max + guard


def effective_numeric_spectrum(params: SystemParams, chi: float, dist: PhotonStatistics, grid,
                               n_max: int | None = None, convention: str = "bare",
                               cfg: AverageConfig = AverageConfig()) -> np.ndarray:
    """End-to-end numeric spectrum of the effective Hamiltonian on a ``delta`` grid."""
    n_max = default_n_max(dist) if n_max is None else n_max
    ops = build_operators(n_max, 0)
    H = build_hse(params, chi, n_max, convention=convention, ops=ops)
    return _spectrum_from_hamiltonian(H, ops, dist, params, grid, cfg)


def full_model_spectrum(params: SystemParams, nearby: NearbyLevelSet, n_max: int | None, grid,
                        dist: PhotonStatistics, cfg: AverageConfig = AverageConfig()) -> np.ndarray:
    """Numeric spectrum of the untransformed model with explicit nearby levels."""
    n_max = default_n_max(dist) if n_max is None else n_max
    ops = build_operators(n_max, len(nearby))
    H = build_full_hamiltonian(params, nearby, n_max, ops=ops)
    return _spectrum_from_hamiltonian(H, ops, dist, params, grid, cfg)
