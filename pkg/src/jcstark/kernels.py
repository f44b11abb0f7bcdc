"""Kernel backend selection.

The compiled extension is used when it imports; set ``JCSTARK_PURE_PYTHON=1``
to force the NumPy fallback.
"""
import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("JCSTARK_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"


def _f64(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def lorentzian_sum(grid, centers, weights, gamma, lam, impl=None):
    """``sum_k w_k gamma / (gamma^2 + lam^2 (x - c_k)^2)`` at every grid point."""
    impl = impl or _impl
    return impl.lorentzian_sum(_f64(grid), _f64(centers), _f64(weights), float(gamma), float(lam))


def damped_fourier(nu, tau, a, b, impl=None):
    """``sum_j a_j cos(nu tau_j) + b_j sin(nu tau_j)`` for each ``nu``.

    Uniformly spaced ``nu`` takes the angle-addition path.
    """
    impl = impl or _impl
    nu = _f64(nu)
    if nu.size > 2:
        step = np.diff(nu)
        if np.all(np.abs(step - step[0]) <= 1e-12 * np.max(np.abs(nu))):
            dnu = (nu[-1] - nu[0]) / (nu.size - 1)
            return impl.damped_fourier_uniform(float(nu[0]), float(dnu), nu.size,
                                               _f64(tau), _f64(a), _f64(b))
    return impl.damped_fourier(nu, _f64(tau), _f64(a), _f64(b))


def exp_sum(tau, freqs, amps, impl=None):
    """Complex ``sum_k amps_k exp(i freqs_k tau)`` at each ``tau``."""
    impl = impl or _impl
    amps = np.asarray(amps, dtype=complex)
    re, im = impl.exp_sum(_f64(tau), _f64(freqs), _f64(amps.real), _f64(amps.imag))
    return re + 1j * im
