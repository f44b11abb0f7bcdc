"""NumPy fallback for the compiled kernels in ``_kernels.pyx``.

Sums run over lines / terms in a fixed order so repeated calls are bit-stable.
"""
import numpy as np

_CHUNK = 256


def lorentzian_sum(grid, centers, weights, gamma, lam):
    grid = np.ascontiguousarray(grid, dtype=np.float64)
    out = np.zeros_like(grid)
    g2, l2 = gamma * gamma, lam * lam
    for c, w in zip(centers, weights):
        x = grid - c
        out += w * gamma / (g2 + l2 * x * x)
    return out


def damped_fourier(nu, tau, a, b):
    nu = np.asarray(nu, dtype=np.float64)
    out = np.empty_like(nu)
    for start in range(0, nu.size, _CHUNK):
        x = np.multiply.outer(nu[start:start + _CHUNK], tau)
        out[start:start + _CHUNK] = np.cos(x) @ a + np.sin(x) @ b
    return out


def exp_sum(tau, freqs, amp_re, amp_im):
    tau = np.asarray(tau, dtype=np.float64)
    re = np.empty_like(tau)
    im = np.empty_like(tau)
    for start in range(0, tau.size, _CHUNK):
        x = np.multiply.outer(tau[start:start + _CHUNK], freqs)
        c, s = np.cos(x), np.sin(x)
        re[start:start + _CHUNK] = c @ amp_re - s @ amp_im
        im[start:start + _CHUNK] = s @ amp_re + c @ amp_im
    return re, im


def damped_fourier_uniform(nu0, dnu, n, tau, a, b):
    return damped_fourier(nu0 + dnu * np.arange(n), tau, a, b)
