"""Dense operators on the truncated atom-field space.

Basis index is ``n * n_levels + level`` (Fock-major), levels ordered
``g, e, 1..N``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError

G, E = 0, 1


@dataclass(frozen=True)
class OperatorSet:
    n_max: int
    n_levels: int
    a: np.ndarray = field(repr=False)
    n: np.ndarray = field(repr=False)
    sigma_z: np.ndarray = field(repr=False)
    sigma_plus: np.ndarray = field(repr=False)
    proj_k: tuple = field(repr=False)
    k_from_g: tuple = field(repr=False)
    k_from_e: tuple = field(repr=False)

    @property
    def dim(self) -> int:
        return (self.n_max + 1) * self.n_levels

    @property
    def n_nearby(self) -> int:
        return self.n_levels - 2

    @property
    def adag(self) -> np.ndarray:
        return self.a.conj().T

    @property
    def sigma_minus(self) -> np.ndarray:
        return self.sigma_plus.conj().T

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)

    def index(self, n: int, level: int) -> int:
        return n * self.n_levels + level

    def atomic(self, i: int, j: int) -> np.ndarray:
        """``|i><j|`` on the atom, identity on the field."""
        P = np.zeros((self.n_levels, self.n_levels), dtype=complex)
        P[i, j] = 1.0
        return np.kron(np.eye(self.n_max + 1), P)

    def basis(self, n: int, level: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(n, level)] = 1.0
        return v


def build_operators(n_max: int, n_nearby: int = 0) -> OperatorSet:
    if n_max < 1:
        raise DomainError(f"Fock truncation n_max must be >= 1, got {n_max}")
    if n_nearby < 0:
        raise DomainError("number of nearby levels must be >= 0")
    L = n_nearby + 2
    a_f = np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1)
    I_a = np.eye(L)
    I_f = np.eye(n_max + 1)

    def atomic(i, j):
        P = np.zeros((L, L))
        P[i, j] = 1.0
        return np.kron(I_f, P).astype(complex)

    a = np.kron(a_f, I_a).astype(complex)
    n = np.kron(np.diag(np.arange(n_max + 1, dtype=float)), I_a).astype(complex)
    sz = atomic(E, E) - atomic(G, G)
    sp = atomic(E, G)
    ks = range(2, L)
    return OperatorSet(
        n_max=n_max, n_levels=L, a=a, n=n, sigma_z=sz, sigma_plus=sp,
        proj_k=tuple(atomic(k, k) for k in ks),
        k_from_g=tuple(atomic(k, G) for k in ks),
        k_from_e=tuple(atomic(k, E) for k in ks),
    )
