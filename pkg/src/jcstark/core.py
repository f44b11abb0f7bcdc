"""Physical parameter records and photon-number statistics of the initial field.

Frequencies are angular (rad per unit time) and share one arbitrary time unit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, ValidationError

DEFAULT_TAIL_TOL = 1e-10

FIELD_KINDS = ("vacuum", "coherent", "thermal", "custom")


@dataclass(frozen=True)
class SystemParams:
    """Field and two-level-atom parameters.

    ``delta`` is always ``omega0 - omega``; build from a detuning with
    :meth:`from_detuning`.
    """

    omega: float
    omega0: float
    lambda_c: float
    gamma: float

    def __post_init__(self):
        for name in ("omega", "omega0", "lambda_c", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.lambda_c <= 0:
            raise DomainError(f"coupling lambda_c must be > 0, got {self.lambda_c}")
        if self.gamma <= 0:
            raise DomainError(f"detector width gamma must be > 0, got {self.gamma}")

    @property
    def delta(self) -> float:
        return self.omega0 - self.omega

    @classmethod
    def from_detuning(cls, delta: float, lambda_c: float = 1.0, gamma: float = 0.1,
                      omega: float = 10.0) -> "SystemParams":
        return cls(omega=omega, omega0=omega + delta, lambda_c=lambda_c, gamma=gamma)

    def as_dict(self) -> dict:
        return {"omega": self.omega, "omega0": self.omega0, "lambda_c": self.lambda_c,
                "gamma": self.gamma, "delta": self.delta}


@dataclass(frozen=True)
class NearbyLevelSet:
    """Off-resonant upper levels as ``(omega_k, eta_k)`` pairs.

    The checks against the atom and field frequencies need a
    :class:`SystemParams`, so they live in :meth:`validate_against`.
    """

    levels: tuple = ()

    def __post_init__(self):
        levels = tuple((float(w), float(e)) for w, e in self.levels)
        object.__setattr__(self, "levels", levels)
        for k, (w, e) in enumerate(levels, start=1):
            if not (math.isfinite(w) and math.isfinite(e)):
                raise DomainError(f"level {k}: non-finite entry")
            if e < 0:
                raise DomainError(f"level {k}: coupling eta_k must be >= 0, got {e}")

    def __len__(self):
        return len(self.levels)

    @property
    def omegas(self) -> np.ndarray:
        return np.array([w for w, _ in self.levels], dtype=float)

    @property
    def etas(self) -> np.ndarray:
        return np.array([e for _, e in self.levels], dtype=float)

    def detunings(self, params: SystemParams) -> np.ndarray:
        """Level detunings ``omega_k - omega`` from the field."""
        return self.omegas - params.omega

    def validate_against(self, params: SystemParams) -> None:
        for k, (w, _) in enumerate(self.levels, start=1):
            if w <= params.omega0:
                raise DomainError(f"level {k}: omega_k={w} must exceed omega0={params.omega0}")
            if w - params.omega <= 0:
                raise DomainError(f"level {k}: detuning omega_k - omega must be > 0")

    def scaled_couplings(self, factor: float) -> "NearbyLevelSet":
        return NearbyLevelSet(tuple((w, e * factor) for w, e in self.levels))


@dataclass(frozen=True)
class PhotonStatistics:
    """Truncated photon-number distribution ``p_0 .. p_M`` of the initial field.

    ``tail`` is the probability mass beyond ``m_max`` that was dropped.
    ``nbar`` is the nominal mean for coherent and thermal fields and the first
    moment of ``probs`` otherwise.
    """

    kind: str
    nbar: float
    probs: np.ndarray = field(repr=False)
    m_max: int
    tail: float

    def __post_init__(self):
        if self.kind not in FIELD_KINDS:
            raise ValidationError(f"unknown field kind {self.kind!r}")
        probs = np.array(self.probs, dtype=float)
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        if probs.ndim != 1 or probs.size == 0:
            raise ValidationError("probs must be a non-empty 1-d sequence")
        if probs.size != self.m_max + 1:
            raise ValidationError("m_max must equal len(probs) - 1")
        if np.any(probs < 0) or np.any(probs > 1):
            raise ValidationError("probabilities must lie in [0, 1]")
        if probs.sum() > 1 + 1e-12:
            raise ValidationError(f"probabilities sum to {probs.sum()!r} > 1")

    @property
    def mean(self) -> float:
        """First moment of the truncated distribution."""
        return float(np.dot(np.arange(self.probs.size), self.probs))

    @property
    def second_moment(self) -> float:
        m = np.arange(self.probs.size)
        return float(np.dot(m * m, self.probs))

    def normalized(self) -> "PhotonStatistics":
        """Same distribution rescaled so the truncated probabilities sum to one."""
        p = self.probs / self.probs.sum()
        return PhotonStatistics(self.kind, self.nbar, p, self.m_max, 0.0)

    def describe(self) -> dict:
        return {"kind": self.kind, "nbar": self.nbar, "m_max": self.m_max, "tail": self.tail}


def _check_common(nbar: float, tail_tol: float) -> None:
    if not math.isfinite(nbar) or nbar < 0:
        raise DomainError(f"mean photon number must be finite and >= 0, got {nbar}")
    if not (0 < tail_tol < 1):
        raise DomainError(f"tail_tol must lie in (0, 1), got {tail_tol}")


def vacuum() -> PhotonStatistics:
    return PhotonStatistics("vacuum", 0.0, np.array([1.0]), 0, 0.0)


def _truncation_index(p: np.ndarray, nbar: float, tail_tol: float) -> tuple[int, float]:
    """Smallest ``M`` whose dropped tail is negligible in mass, mean and second moment.

    ``p`` must extend far enough that everything past its end is negligible.
    The mass tail has to be below ``tail_tol``, the first-moment tail below
    ``tail_tol (nbar+1)`` and the second-moment tail below
    ``10 tail_tol (nbar+1)^2``, so the truncated moments reproduce the
    nominal ones to those bounds.  Tails are reverse cumulative sums, which
    keeps small tails free of cancellation.
    """
    m = np.arange(p.size, dtype=float)

    def beyond(x):
        t = np.cumsum(x[::-1])[::-1]
        return np.append(t[1:], 0.0)

    mass = beyond(p)
    ok = ((mass < tail_tol) & (beyond(m * p) < tail_tol * (nbar + 1))
          & (beyond(m * m * p) < 10 * tail_tol * (nbar + 1) ** 2))
    M = int(np.argmax(ok))
    return M, float(mass[M])


def coherent_distribution(nbar: float, tail_tol: float = DEFAULT_TAIL_TOL) -> PhotonStatistics:
    """Poisson photon statistics of a coherent field with mean ``nbar``.

    Probabilities come from the log-space recurrence
    ``log p_m = log p_{m-1} + log nbar - log m`` so nothing overflows.  The
    truncation index is chosen by :func:`_truncation_index`.
    """
    _check_common(nbar, tail_tol)
    if nbar == 0:
        return PhotonStatistics("coherent", 0.0, np.array([1.0]), 0, 0.0)
    # generate well past the point where terms underflow
    hi = int(math.ceil(nbar + 40.0 * math.sqrt(nbar) + 60.0))
    m = np.arange(hi + 1)
    steps = np.empty(hi + 1)
    steps[0] = -nbar
    steps[1:] = math.log(nbar) - np.log(m[1:])
    p = np.exp(np.cumsum(steps))
    M, tail = _truncation_index(p, nbar, tail_tol)
    return PhotonStatistics("coherent", float(nbar), p[: M + 1], M, tail)


def thermal_distribution(nbar: float, tail_tol: float = DEFAULT_TAIL_TOL) -> PhotonStatistics:
    """Bose-Einstein statistics ``p_m = nbar^m / (nbar+1)^(m+1)``.

    The truncation index is chosen by :func:`_truncation_index`; the reported
    tail is the exact geometric remainder ``q^(M+1)``, ``q = nbar/(nbar+1)``.
    """
    _check_common(nbar, tail_tol)
    if nbar == 0:
        return PhotonStatistics("thermal", 0.0, np.array([1.0]), 0, 0.0)
    log_q = math.log(nbar) - math.log1p(nbar)
    # q^hi is about e^-30 tail_tol, far below every bound
    hi = int(math.ceil((math.log(tail_tol) - 30.0) / log_q)) + 50
    p = np.exp(np.arange(hi + 1) * log_q - math.log1p(nbar))
    M, _ = _truncation_index(p, nbar, tail_tol)
    return PhotonStatistics("thermal", float(nbar), p[: M + 1], M, float(math.exp((M + 1) * log_q)))


def custom_distribution(probs: Iterable[float], renormalize: bool = False) -> PhotonStatistics:
    """Arbitrary diagonal photon distribution.

    Sums within 1e-9 of one are silently renormalized; larger deviations need
    ``renormalize=True``.
    """
    p = np.asarray(list(probs) if not isinstance(probs, np.ndarray) else probs, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValidationError("custom distribution needs at least one probability")
    if not np.all(np.isfinite(p)) or np.any(p < 0):
        raise ValidationError("probabilities must be finite and non-negative")
    total = float(p.sum())
    if total <= 0:
        raise ValidationError("probabilities sum to zero")
    if not renormalize and abs(total - 1) > 1e-9:
        raise ValidationError(f"probabilities sum to {total!r}; pass renormalize=True")
    p = p / total
    nbar = float(np.dot(np.arange(p.size), p))
    return PhotonStatistics("custom", nbar, p, p.size - 1, 0.0)


def make_distribution(kind: str, nbar: float = 0.0, probs: Sequence[float] | None = None,
                      tail_tol: float = DEFAULT_TAIL_TOL) -> PhotonStatistics:
    """Dispatch on field kind; used by the command line and config files."""
    if kind == "vacuum":
        return vacuum()
    if kind == "coherent":
        return coherent_distribution(nbar, tail_tol)
    if kind == "thermal":
        return thermal_distribution(nbar, tail_tol)
    if kind == "custom":
        if probs is None:
            raise ValidationError("custom field needs explicit probabilities")
        return custom_distribution(probs)
    raise ValidationError(f"unknown field kind {kind!r}")
