import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jcstark import (EffectiveModel, NearbyLevelSet, SystemParams, dressed_quantities,
                     effective_model, evolution_coeffs, line_positions)
from jcstark.dressed import dressed_arrays, evolution_arrays, scaled_lambda
from jcstark.errors import DomainError, SingularRotationError, ValidityWarning

reals = st.floats(-3.0, 3.0, allow_nan=False)
positive = st.floats(0.05, 5.0)


class TestEffectiveModel:
    def test_single_level(self, resonant):
        eff = effective_model(NearbyLevelSet(((12.0, 0.1),)), resonant, xi_limit=0.2)
        assert eff.xi[0] == pytest.approx(0.1, abs=1e-15)
        assert eff.chi == pytest.approx(0.01, abs=1e-15)
        assert eff.omega_shifted == pytest.approx(10.0 - 0.01, abs=1e-15)
        assert eff.valid

    def test_empty_set_is_plain_jaynes_cummings(self, resonant):
        eff = effective_model(NearbyLevelSet(), resonant)
        assert eff.chi == 0.0 and eff.omega_shifted == resonant.omega

    def test_two_identical_levels(self):
        # Delta = 0.4, Delta_k = 0.6, so Delta + Delta_k = 1 and xi sits on the limit
        p = SystemParams.from_detuning(0.4)
        nb = NearbyLevelSet(((10.6, 0.05), (10.6, 0.05)))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ValidityWarning)
            eff = effective_model(nb, p)
        np.testing.assert_allclose(eff.xi, [0.1, 0.1], atol=1e-14)
        assert eff.chi == pytest.approx(2 * 0.005, abs=1e-14)

    def test_warning_lists_offending_levels(self, resonant):
        nb = NearbyLevelSet(((12.0, 0.1), (50.0, 0.1), (11.0, 0.2)))
        with pytest.warns(ValidityWarning, match="1") as rec:
            eff = effective_model(nb, resonant)
        assert eff.violations == (1, 3)
        assert not eff.valid
        assert "3" in str(rec[0].message)

    def test_no_warning_when_small(self, resonant):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            effective_model(NearbyLevelSet(((50.0, 0.2),)), resonant)

    def test_singular_rotation(self):
        p = SystemParams.from_detuning(-5.0)
        with pytest.raises(SingularRotationError):
            effective_model(NearbyLevelSet(((12.0, 0.1),)), p)

    def test_from_chi(self, resonant):
        eff = EffectiveModel.from_chi(0.9, resonant)
        assert eff.chi == 0.9 and eff.omega_shifted == pytest.approx(9.1)


class TestDressedQuantities:
    def test_resonant_ground_doublet(self, resonant):
        q = dressed_quantities(0, resonant, 0.0)
        assert q.phi_n == pytest.approx(math.pi / 4, abs=1e-15)
        assert q.mu_n == pytest.approx(2.0, abs=1e-15)
        assert q.e_plus == pytest.approx(resonant.omega / 2 + 1, abs=1e-14)
        assert q.e_minus == pytest.approx(resonant.omega / 2 - 1, abs=1e-14)

    def test_resonant_n3(self, resonant):
        q = dressed_quantities(3, resonant, 0.0)
        assert q.mu_n == pytest.approx(4.0, abs=1e-15)
        assert q.omega_n == pytest.approx(4.0, abs=1e-15)

    def test_figure_values(self, figure_d):
        q = dressed_quantities(1, figure_d, 0.9)
        assert q.delta_n == pytest.approx(3.0, abs=1e-14)
        assert q.mu_n == pytest.approx(math.sqrt(17), abs=1e-14)
        assert q.mu_n == pytest.approx(4.1231, abs=1e-4)

    def test_negative_index(self, resonant):
        with pytest.raises(DomainError):
            dressed_quantities(-1, resonant, 0.0)

    def test_phi_robust_for_large_negative_detuning(self):
        p = SystemParams.from_detuning(-1e8)
        q = dressed_arrays(np.arange(5), p, 0.0)
        # mu + delta nearly cancels here; Phi must still come out just below pi/2
        phi = q["phi"]
        assert np.all(np.isfinite(phi)) and np.all((phi > 0) & (phi < math.pi / 2))
        np.testing.assert_allclose(math.pi / 2 - phi, q["omega_n"] / (2 * 1e8), rtol=1e-6)


@given(delta=reals, chi=reals, lam=positive)
def test_dressed_weight_identity(delta, chi, lam):
    p = SystemParams.from_detuning(delta, lambda_c=lam)
    q = dressed_arrays(np.arange(30), p, chi)
    c2, s2 = np.cos(q["phi"]) ** 2, np.sin(q["phi"]) ** 2
    np.testing.assert_allclose(c2 + s2, 1.0, atol=1e-15)
    np.testing.assert_allclose(c2 * s2, q["omega_n"] ** 2 / (4 * q["mu_n"] ** 2), atol=1e-12)


@given(delta=reals, lam=positive)
def test_chi_zero_limit(delta, lam):
    p = SystemParams.from_detuning(delta, lambda_c=lam)
    n = np.arange(30)
    q = dressed_arrays(n, p, 0.0)
    np.testing.assert_allclose(q["mu_n"], np.sqrt(delta ** 2 + 4 * lam ** 2 * (n + 1)),
                               rtol=1e-14, atol=1e-14)


@given(delta=reals, chi=reals, lam=positive, s=st.floats(0.1, 10.0))
def test_scaling(delta, chi, lam, s):
    p1 = SystemParams.from_detuning(delta, lambda_c=lam)
    p2 = SystemParams.from_detuning(s * delta, lambda_c=s * lam)
    n = np.arange(20)
    q1, q2 = dressed_arrays(n, p1, chi), dressed_arrays(n, p2, s * chi)
    for key in ("mu_n", "delta_n", "omega_n"):
        np.testing.assert_allclose(q2[key], s * q1[key], rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(q2["phi"], q1["phi"], atol=1e-12)
    np.testing.assert_allclose(scaled_lambda(n, p2, s * chi), scaled_lambda(n, p1, chi), rtol=1e-12)
    c1, c2 = line_positions(0, p1, chi), line_positions(0, p2, s * chi)
    assert c2.c_plus == pytest.approx(c1.c_plus, abs=1e-12)
    assert c2.c_minus == pytest.approx(c1.c_minus, abs=1e-12)


class TestLinePositions:
    def test_resonant(self, resonant):
        lp = line_positions(0, resonant, 0.0)
        assert (lp.c_plus, lp.c_minus) == (pytest.approx(1.0, abs=1e-15), pytest.approx(-1.0, abs=1e-15))
        for m in range(10):
            assert line_positions(m, resonant, 0.0).lambda_m == pytest.approx(math.sqrt(m + 1), abs=1e-15)

    def test_stark_shifted_vacuum_lines(self, resonant):
        lp = line_positions(0, resonant, 0.9)
        assert lp.c_plus == pytest.approx(0.646586, abs=1e-6)
        assert lp.c_minus == pytest.approx(-1.546586, abs=1e-6)

    def test_first_splitting(self, resonant):
        d = line_positions(1, resonant, 0.0).lambda_m - line_positions(0, resonant, 0.0).lambda_m
        assert d == pytest.approx(math.sqrt(2) - 1, abs=1e-14)
        assert d == pytest.approx(0.41421, abs=1e-5)

    def test_only_m0_has_c(self, resonant):
        assert line_positions(2, resonant, 0.0).c_plus is None
        with pytest.raises(DomainError):
            line_positions(-1, resonant, 0.0)

    def test_vacuum_lines_are_dressed_energy_differences(self, figure_d):
        q = dressed_quantities(0, figure_d, 0.9)
        ground = -0.5 * figure_d.omega0
        lp = line_positions(0, figure_d, 0.9)
        lam = figure_d.lambda_c
        assert lp.c_plus == pytest.approx((q.e_plus - ground - figure_d.omega) / lam, abs=1e-12)
        assert lp.c_minus == pytest.approx((q.e_minus - ground - figure_d.omega) / lam, abs=1e-12)


class TestEvolutionCoeffs:
    @pytest.mark.parametrize("n", [0, 1, 7, 40])
    def test_identity_at_t0(self, figure_d, n):
        c = evolution_coeffs(n, 0.0, figure_d, 0.9)
        assert (c.d_n, c.f_n, c.g_n) == (pytest.approx(1), pytest.approx(0), pytest.approx(1))

    def test_quarter_cycle(self, resonant):
        c = evolution_coeffs(0, math.pi / 2, resonant, 0.0)
        assert abs(c.f_n) == pytest.approx(1.0, abs=1e-15)
        assert abs(c.d_n) == pytest.approx(0.0, abs=1e-15)

    def test_full_cycle(self, resonant):
        c = evolution_coeffs(0, math.pi, resonant, 0.0)
        assert abs(c.d_n) == pytest.approx(1.0, abs=1e-15)
        assert abs(c.f_n) == pytest.approx(0.0, abs=1e-15)

    def test_negative_index(self, resonant):
        with pytest.raises(DomainError):
            evolution_coeffs(-2, 1.0, resonant, 0.0)


@given(delta=reals, chi=reals, lam=positive, t=st.floats(-1e3, 1e3))
def test_block_unitarity(delta, chi, lam, t):
    p = SystemParams.from_detuning(delta, lambda_c=lam)
    d, f, g = evolution_arrays(np.arange(25), t, p, chi)
    np.testing.assert_allclose(abs(d) ** 2 + abs(f) ** 2, 1.0, atol=1e-12)
    np.testing.assert_allclose(abs(f) ** 2 + abs(g) ** 2, 1.0, atol=1e-12)
    np.testing.assert_allclose(abs(d * np.conj(f) + f * np.conj(g)), 0.0, atol=1e-12)
