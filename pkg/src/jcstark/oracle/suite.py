"""Verification suite run by ``jcstark --oracle verify|full``."""
from __future__ import annotations

import numpy as np

from ..core import NearbyLevelSet, PhotonStatistics, SystemParams
from ..dressed import effective_model
from ..spectrum import correlation_avg_array, physical_spectrum, transition_lines
from .checks import (CheckResult, check_evolution_coeffs, check_unitarity,
                     relative_commutator, select_hse_convention, verify_eigensystem,
                     verify_rotation_reduction)
from .dynamics import (AverageConfig, Propagator, average_correlation, default_n_max,
                       effective_numeric_spectrum, full_model_spectrum, initial_density)
from .hamiltonians import build_h_script, build_hse
from .operators import build_operators

SPECTRUM_TOL = 1e-3
TRUNCATION_TOL = 1e-8
EIGEN_CHECK_N_MAX = 40
COEFF_TIMES = (0.37, 1.9, 5.3, 12.1, 47.0)
UNITARITY_TIMES = (1.0, 10.0, 100.0, 1000.0)
COMMUTATOR_TIMES = (0.0, 1.0, 7.3, 19.1, 64.0)
SCALING_WINDOW = (3.1, 5.0)


def _rel_linf(a, b) -> float:
    return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))


def effective_checks(params: SystemParams, chi: float, dist: PhotonStatistics, grid,
                     cfg: AverageConfig = AverageConfig()) -> list[CheckResult]:
    results = []
    n_chk = min(default_n_max(dist), EIGEN_CHECK_N_MAX)
    conv = select_hse_convention(params, chi, n_chk)
    rep = verify_eigensystem(build_hse(params, chi, n_chk, convention=conv), n_chk, params, chi)
    literal = verify_eigensystem(build_hse(params, chi, n_chk, convention="shifted"), n_chk, params, chi)
    results.append(CheckResult("eigensystem", rep.max_residual, rep.tolerance, rep.passed,
                               {"convention": conv, "literal_shifted_residual": literal.max_residual}))
    results.append(CheckResult("closure", rep.closure_error, 1e-12, rep.closure_error < 1e-12))
    results.append(CheckResult("ground_state", rep.ground_residual, rep.tolerance,
                               rep.ground_residual < rep.tolerance))
    dev = check_evolution_coeffs(params, chi, n_chk, [t / params.lambda_c for t in COEFF_TIMES])
    results.append(CheckResult("evolution_coeffs", dev, 1e-10, dev < 1e-10))

    n_max = default_n_max(dist)
    ops = build_operators(n_max, 0)
    prop = Propagator(build_hse(params, chi, n_max, convention=conv, ops=ops))
    uni = check_unitarity(prop, [t / params.lambda_c for t in UNITARITY_TIMES])
    results.append(CheckResult("propagator_unitarity", uni, 1e-11, uni < 1e-11))

    norm_dist = dist.normalized()
    avg = average_correlation(prop, initial_density(dist, ops), ops, cfg, carrier=params.omega)
    g0_num = complex(avg(np.array([0.0]))[0])
    g0_ana = complex(correlation_avg_array(np.array([0.0]), norm_dist, params, chi)[0])
    results.append(CheckResult("gbar0", abs(g0_num - g0_ana), 1e-8, abs(g0_num - g0_ana) < 1e-8))

    lines = transition_lines(dist, params, chi)
    wsum = float(sum(ln.weight for ln in lines))
    g0_raw = complex(correlation_avg_array(np.array([0.0]), dist, params, chi)[0])
    results.append(CheckResult("weight_conservation", abs(wsum - g0_raw), 1e-12,
                               abs(wsum - g0_raw) <= 1e-12))

    analytic = physical_spectrum(dist, params, chi, grid).values
    numeric = effective_numeric_spectrum(params, chi, dist, grid, n_max, conv, cfg)
    literal_mode = physical_spectrum(dist, params, chi, grid, weight_mode="squared_literal").values
    err = _rel_linf(numeric, analytic)
    results.append(CheckResult("spectrum_equivalence", err, SPECTRUM_TOL, err <= SPECTRUM_TOL,
                               {"weight_mode": "probability",
                                "squared_literal_deviation": _rel_linf(numeric, literal_mode)}))

    coarse = effective_numeric_spectrum(params, chi, dist, grid, dist.m_max + 5, conv, cfg)
    err = _rel_linf(coarse, numeric)
    results.append(CheckResult("truncation_stability", err, TRUNCATION_TOL, err < TRUNCATION_TOL))

    if params.delta == 0 and chi == 0 and np.allclose(grid, -grid[::-1], rtol=0, atol=1e-12):
        asym = float(np.max(np.abs(analytic - analytic[::-1])))
        tol = 1e-12 * float(np.max(analytic))
        results.append(CheckResult("symmetry", asym, tol, asym <= tol))
    return results


def nearby_checks(params: SystemParams, nearby: NearbyLevelSet) -> list[CheckResult]:
    eff = effective_model(nearby, params, xi_limit=np.inf)
    n_max = 12
    hse = build_hse(params, eff.chi, n_max, n_nearby=len(nearby))
    worst = 0.0
    for t in COMMUTATOR_TIMES:
        hs = build_h_script(params, nearby, eff, n_max, t)
        worst = max(worst, relative_commutator(hse, hs))
    results = [CheckResult("commutator", worst, 1e-11, worst < 1e-11)]
    rot = verify_rotation_reduction(params, nearby, n_max)
    results.append(CheckResult("rotation_reduction", rot.ratio, rot.window[1], rot.passed,
                               {"window": list(rot.window), "eps": rot.eps, "eps_half": rot.eps_half,
                                "exchange_ratio": rot.exchange_ratio,
                                "eps_second_order_halved": rot.eps_corrected}))
    return results


def full_model_checks(params: SystemParams, nearby: NearbyLevelSet | None, dist: PhotonStatistics,
                      grid, cfg: AverageConfig = AverageConfig()) -> list[CheckResult]:
    if nearby is None or len(nearby) == 0:
        full = full_model_spectrum(params, NearbyLevelSet(), None, grid, dist, cfg)
        ref = effective_numeric_spectrum(params, 0.0, dist, grid, convention="shifted", cfg=cfg)
        err = _rel_linf(full, ref)
        return [CheckResult("full_model_no_levels", err, 1e-10, err < 1e-10)]
    devs = []
    for scale in (1.0, 0.5):
        nb = nearby.scaled_couplings(scale)
        chi = effective_model(nb, params, xi_limit=np.inf).chi
        full = full_model_spectrum(params, nb, None, grid, dist, cfg)
        devs.append(float(np.max(np.abs(full - physical_spectrum(dist, params, chi, grid).values))))
        if scale == 1.0:
            dev_chi0 = float(np.max(np.abs(full - physical_spectrum(dist, params, 0.0, grid).values)))
    ratio = devs[0] / devs[1] if devs[1] > 0 else float("inf")
    ok = SCALING_WINDOW[0] <= ratio <= SCALING_WINDOW[1]
    return [
        CheckResult("full_model_scaling", ratio, SCALING_WINDOW[1], ok,
                    {"window": list(SCALING_WINDOW), "deviation": devs[0], "deviation_half": devs[1]}),
        CheckResult("full_model_beats_chi0", devs[0], dev_chi0, devs[0] < dev_chi0),
    ]


def run_verification(params: SystemParams, chi: float, dist: PhotonStatistics, grid,
                     nearby: NearbyLevelSet | None = None, mode: str = "verify",
                     cfg: AverageConfig = AverageConfig()) -> list[CheckResult]:
    grid = np.asarray(grid, dtype=float)
    results = effective_checks(params, chi, dist, grid, cfg)
    if nearby is not None and len(nearby):
        results += nearby_checks(params, nearby)
    if mode == "full":
        results += full_model_checks(params, nearby, dist, grid, cfg)
    return results
