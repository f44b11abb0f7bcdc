"""Effective Stark-shift model and closed-form dressed-state quantities.

Nearby levels enter only through the Stark coefficient ``chi``.  For photon
index ``n`` the excitation doublet ``{|n,e>, |n+1,g>}`` is diagonalised in
closed form::

    Omega_n = 2 lambda sqrt(n+1)
    delta_n = Delta + chi (2n+1)
    mu_n    = sqrt(delta_n^2 + Omega_n^2)
    Phi_n   = arctan(Omega_n / (mu_n + delta_n))
    E_n^pm  = omega (n + 1/2) - chi/2 +- mu_n/2

The energies use the bare field frequency ``omega``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import NearbyLevelSet, SystemParams
from .errors import DomainError, SingularRotationError, ValidityWarning

DEFAULT_XI_LIMIT = 0.1


@dataclass(frozen=True)
class EffectiveModel:
    """Stark coefficient and rotation parameters of the reduced model.

    ``violations`` lists the (1-based) levels whose rotation parameter is not
    below ``xi_limit``.
    """

    chi: float
    omega_shifted: float
    xi: tuple = ()
    xi_max_observed: float = 0.0
    xi_limit: float = DEFAULT_XI_LIMIT
    violations: tuple = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    @classmethod
    def from_chi(cls, chi: float, params: SystemParams) -> "EffectiveModel":
        """Model specified by the Stark coefficient alone, with no explicit levels."""
        if not math.isfinite(chi):
            raise DomainError("chi must be finite")
        return cls(chi=float(chi), omega_shifted=params.omega - chi)


def effective_model(nearby: NearbyLevelSet, params: SystemParams,
                    xi_limit: float = DEFAULT_XI_LIMIT) -> EffectiveModel:
    """Rotation parameters ``xi_j = 2 eta_j / (Delta + Delta_j)`` and ``chi = sum xi_j eta_j``.

    Levels with ``xi_j >= xi_limit`` break the small-rotation assumption.  They
    are reported with a :class:`ValidityWarning` and kept in ``violations``;
    the model is still returned.
    """
    nearby.validate_against(params)
    denom = params.delta + nearby.detunings(params)
    bad = [k + 1 for k, d in enumerate(denom) if not d > 0]
    if bad:
        raise SingularRotationError(f"Delta + Delta_j <= 0 for levels {bad}")
    etas = nearby.etas
    xi = 2.0 * etas / denom
    chi = float(math.fsum(xi * etas))
    xi_max = float(np.max(np.abs(xi))) if xi.size else 0.0
    violations = tuple(int(k) + 1 for k in np.flatnonzero(np.abs(xi) >= xi_limit))
    if violations:
        warnings.warn(f"rotation parameter xi >= {xi_limit} for levels {list(violations)}",
                      ValidityWarning, stacklevel=2)
    return EffectiveModel(chi=chi, omega_shifted=params.omega - chi, xi=tuple(xi.tolist()),
                          xi_max_observed=xi_max, xi_limit=xi_limit, violations=violations)


@dataclass(frozen=True)
class DressedQuantities:
    n: int
    phi_n: float
    omega_n: float
    delta_n: float
    mu_n: float
    e_plus: float
    e_minus: float


@dataclass(frozen=True)
class EvolutionCoeffs:
    """Propagator matrix elements on the doublet ``{|n,e>, |n+1,g>}``.

    ``d_n = <n,e|U|n,e>``, ``f_n = <n,e|U|n+1,g>`` and ``g_n = <n+1,g|U|n+1,g>``.
    """

    d_n: complex
    f_n: complex
    g_n: complex


class LinePositions(NamedTuple):
    lambda_m: float
    c_plus: float | None = None
    c_minus: float | None = None


def dressed_arrays(n, params: SystemParams, chi: float) -> dict:
    """Vectorised dressed quantities for an array of photon indices."""
    n = np.asarray(n, dtype=float)
    lam = params.lambda_c
    omega_n = 2.0 * lam * np.sqrt(n + 1.0)
    delta_n = params.delta + chi * (2.0 * n + 1.0)
    mu_n = np.hypot(delta_n, omega_n)
    # tan(Phi) = Omega/(mu+delta) = (mu-delta)/Omega; pick the form without cancellation
    phi = np.where(delta_n >= 0, np.arctan2(omega_n, mu_n + delta_n),
                   np.arctan2(mu_n - delta_n, omega_n))
    base = params.omega * (n + 0.5) - 0.5 * chi
    return {"phi": phi, "omega_n": omega_n, "delta_n": delta_n, "mu_n": mu_n,
            "e_plus": base + 0.5 * mu_n, "e_minus": base - 0.5 * mu_n}


def dressed_quantities(n: int, params: SystemParams, chi: float) -> DressedQuantities:
    if n < 0 or int(n) != n:
        raise DomainError(f"photon index must be a non-negative integer, got {n}")
    q = dressed_arrays(n, params, chi)
    return DressedQuantities(int(n), float(q["phi"]), float(q["omega_n"]), float(q["delta_n"]),
                             float(q["mu_n"]), float(q["e_plus"]), float(q["e_minus"]))


def scaled_lambda(m, params: SystemParams, chi: float):
    """``Lambda_m = mu_m / (2 lambda)``, the half doublet splitting in units of lambda."""
    m = np.asarray(m, dtype=float)
    lam = params.lambda_c
    return np.sqrt(((params.delta + chi * (2.0 * m + 1.0)) / (2.0 * lam)) ** 2 + m + 1.0)


def vacuum_line_positions(params: SystemParams, chi: float) -> tuple[float, float]:
    """Positions ``c_+`` and ``c_-`` of the two lines ending in ``|0,g>``."""
    lam = params.lambda_c
    centre = (params.delta - chi) / (2.0 * lam)
    half = math.sqrt(((params.delta + chi) / (2.0 * lam)) ** 2 + 1.0)
    return centre + half, centre - half


def line_positions(m: int, params: SystemParams, chi: float) -> LinePositions:
    """``Lambda_m`` in units of lambda, plus ``c_+``/``c_-`` when ``m == 0``."""
    if m < 0:
        raise DomainError("m must be >= 0")
    lam_m = float(scaled_lambda(m, params, chi))
    if m == 0:
        return LinePositions(lam_m, *vacuum_line_positions(params, chi))
    return LinePositions(lam_m)


def evolution_arrays(n, t, params: SystemParams, chi: float):
    """Vectorised ``(D_n(t), F_n(t), G_n(t))``; ``n`` and ``t`` broadcast."""
    q = dressed_arrays(n, params, chi)
    t = np.asarray(t, dtype=float)
    c, s = np.cos(q["phi"]), np.sin(q["phi"])
    up = np.exp(-1j * t * q["e_plus"])
    dn = np.exp(-1j * t * q["e_minus"])
    d = up * c * c + dn * s * s
    f = c * s * (up - dn)
    g = up * s * s + dn * c * c
    return d, f, g


def evolution_coeffs(n: int, t: float, params: SystemParams, chi: float) -> EvolutionCoeffs:
    if n < 0:
        raise DomainError("n must be >= 0")
    d, f, g = evolution_arrays(n, t, params, chi)
    return EvolutionCoeffs(complex(d), complex(f), complex(g))
