import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jcstark import (SpectralLine, SystemParams, asymmetry_metric, coherent_distribution,
                     correlation_avg, custom_distribution, default_grid, evaluate_spectrum,
                     make_distribution, peak_find, physical_spectrum, thermal_distribution,
                     transition_lines, vacuum)
from jcstark.dressed import dressed_quantities
from jcstark.errors import DomainError, EmptySpectrumError, ResolutionWarning, ValidationError
from jcstark.oracle import spectrum_numeric, tau_quadrature
from jcstark.spectrum import LABELS, correlation_avg_array

from conftest import FIGURE_COMBOS

# Centroid of the coherent nbar=1, Delta=0 spectrum on the default grid.
# Regression values from evaluating the line sum; only the sign and growth
# with chi are physical statements.
GOLDEN_ASYMMETRY = {0.0: 0.0, 0.3: 0.9867867224883536, 0.6: 1.7870127099049646,
                    0.9: 2.4318923656975393}


class TestGrid:
    def test_default_grid(self):
        g = default_grid()
        assert g.size == 4001 and g[0] == -10 and g[-1] == 10
        np.testing.assert_array_equal(g, -g[::-1])
        assert g[2000] == 0.0

    def test_non_symmetric(self):
        g = default_grid(-1, 3, 5)
        np.testing.assert_allclose(g, [-1, 0, 1, 2, 3])

    @pytest.mark.parametrize("args", [(0, 1, 1), (1, 1, 5), (2, 1, 5)])
    def test_invalid(self, args):
        with pytest.raises(ValidationError):
            default_grid(*args)


class TestTransitionLines:
    def test_vacuum_doublet(self, resonant):
        lines = transition_lines(vacuum(), resonant, 0.0)
        assert [ln.center for ln in lines] == [pytest.approx(1.0), pytest.approx(-1.0)]
        assert [ln.weight for ln in lines] == [pytest.approx(0.25, abs=1e-15)] * 2

    def test_single_photon(self, resonant):
        lines = transition_lines(custom_distribution([0, 1]), resonant, 0.0)
        m1 = [ln for ln in lines if ln.m == 1]
        r2 = math.sqrt(2)
        assert sorted(ln.center for ln in m1) == pytest.approx(
            sorted([r2 - 1, -(r2 - 1), r2 + 1, -(r2 + 1)]), abs=1e-14)
        assert all(ln.weight == pytest.approx(1 / 8, abs=1e-15) for ln in m1)
        assert all(ln.weight == 0 for ln in lines if ln.m == 0)

    def test_count(self, resonant):
        d = coherent_distribution(1.0)
        assert len(transition_lines(d, resonant, 0.9)) == 2 + 4 * d.m_max

    def test_labels(self, figure_d):
        lines = transition_lines(coherent_distribution(1.0), figure_d, 0.9)
        assert {ln.label for ln in lines} == set(LABELS)

    @pytest.mark.parametrize("delta,chi", FIGURE_COMBOS)
    def test_centers_are_dressed_energy_differences(self, delta, chi):
        p = SystemParams.from_detuning(delta)
        d = custom_distribution(np.full(21, 1 / 21))
        lines = transition_lines(d, p, chi)
        q = [dressed_quantities(n, p, chi) for n in range(21)]
        energy = {"plus": [x.e_plus for x in q], "minus": [x.e_minus for x in q]}
        for ln in lines:
            if ln.m == 0:
                continue
            upper, lower = ln.label.split("->")
            expect = (energy[upper][ln.m] - energy[lower][ln.m - 1] - p.omega) / p.lambda_c
            assert ln.center == pytest.approx(expect, abs=1e-12)

    def test_resonant_jaynes_cummings_positions(self, resonant):
        lines = transition_lines(custom_distribution(np.full(8, 1 / 8)), resonant, 0.0)
        for ln in lines:
            if ln.m:
                a, b = math.sqrt(ln.m + 1), math.sqrt(ln.m)
                assert min(abs(abs(ln.center) - (a - b)), abs(abs(ln.center) - (a + b))) < 1e-14

    def test_squared_literal_mode(self, resonant):
        d = custom_distribution([0.5, 0.5])
        wp = [ln.weight for ln in transition_lines(d, resonant, 0.0)]
        ws = [ln.weight for ln in transition_lines(d, resonant, 0.0, "squared_literal")]
        np.testing.assert_allclose(ws, 0.5 * np.array(wp), atol=1e-16)

    def test_unknown_mode(self, resonant):
        with pytest.raises(ValidationError):
            transition_lines(vacuum(), resonant, 0.0, "amplitude")


class TestEvaluate:
    def test_vacuum_peak_value(self, resonant):
        r = physical_spectrum(vacuum(), resonant, 0.0)
        i = int(np.argmin(np.abs(r.grid - 1.0)))
        assert r.values[i] == pytest.approx(0.25 / 0.1 + 0.25 * 0.1 / (0.01 + 4), abs=1e-12)
        assert r.values[i] == pytest.approx(2.50623, abs=1e-5)

    def test_single_line_peak(self):
        line = SpectralLine("plus->ground", 0, 0.5, 0.7)
        r = evaluate_spectrum([line], np.array([0.0, 0.5, 1.0]), 0.2, 1.0)
        assert r.values[1] == pytest.approx(0.7 / 0.2, abs=1e-15)

    def test_lambda_scales_offset(self):
        line = SpectralLine("plus->ground", 0, 0.0, 1.0)
        r = evaluate_spectrum([line], np.array([-1.0, 1.0]), 0.1, 2.0)
        np.testing.assert_allclose(r.values, 0.1 / (0.01 + 4.0), rtol=1e-15)

    def test_empty(self):
        with pytest.raises(EmptySpectrumError):
            evaluate_spectrum([], default_grid(), 0.1, 1.0)

    def test_bad_grid(self):
        line = SpectralLine("plus->ground", 0, 0.0, 1.0)
        with pytest.raises(ValidationError):
            evaluate_spectrum([line], np.array([0.0, 0.0, 1.0]), 0.1, 1.0)

    def test_input_grid_untouched(self, resonant):
        g = default_grid(-2, 2, 11)
        physical_spectrum(vacuum(), resonant, 0.0, g)
        g[0] = -3.0  # still writable

    def test_result_read_only(self, resonant):
        r = physical_spectrum(vacuum(), resonant, 0.0)
        with pytest.raises(ValueError):
            r.values[0] = 1.0

    @pytest.mark.parametrize("kind,nbar", [("coherent", 1), ("coherent", 10), ("thermal", 1),
                                           ("thermal", 10)])
    def test_symmetry(self, resonant, kind, nbar):
        r = physical_spectrum(make_distribution(kind, nbar), resonant, 0.0)
        assert np.max(np.abs(r.values - r.values[::-1])) <= 1e-12 * np.max(r.values)

    @given(w=st.floats(0.0, 1.0), delta=st.floats(-1, 1), chi=st.floats(-1, 1))
    def test_linearity(self, w, delta, chi):
        p = SystemParams.from_detuning(delta)
        p1 = np.array([0.2, 0.3, 0.5, 0.0])
        p2 = np.array([0.1, 0.0, 0.3, 0.6])
        grid = default_grid(-6, 6, 241)
        s1 = physical_spectrum(custom_distribution(p1), p, chi, grid).values
        s2 = physical_spectrum(custom_distribution(p2), p, chi, grid).values
        mix = physical_spectrum(custom_distribution(w * p1 + (1 - w) * p2), p, chi, grid).values
        np.testing.assert_allclose(mix, w * s1 + (1 - w) * s2, rtol=0, atol=1e-12)

    @pytest.mark.parametrize("delta,chi", FIGURE_COMBOS)
    @pytest.mark.parametrize("kind", ["coherent", "thermal"])
    def test_consistency_with_delay_integral(self, kind, delta, chi):
        p = SystemParams.from_detuning(delta)
        d = make_distribution(kind, 1.0)
        res = physical_spectrum(d, p, chi)
        analytic = res.values
        nu_rel = p.lambda_c * default_grid()
        total = sum(ln.weight for ln in res.lines)
        freqs_max = p.lambda_c * max(abs(ln.center) for ln in res.lines if ln.weight >= 1e-10 * total)
        quad = tau_quadrature(p.gamma, max(np.max(np.abs(nu_rel)), freqs_max))
        gbar = correlation_avg_array(quad.nodes, d, p, chi, carrier=p.omega)
        numeric = spectrum_numeric(nu_rel, quad, gbar, p.gamma, freqs_max)
        assert np.max(np.abs(numeric - analytic)) / np.max(analytic) <= 1e-6


class TestCorrelation:
    def test_weight_conservation(self, figure_d):
        for d in (coherent_distribution(1.0), thermal_distribution(10.0), vacuum()):
            wsum = sum(ln.weight for ln in transition_lines(d, figure_d, 0.9))
            assert abs(wsum - correlation_avg(0.0, d, figure_d, 0.9).value) <= 1e-12

    def test_half_at_resonance(self, resonant):
        d = coherent_distribution(3.0).normalized()
        assert abs(correlation_avg(0.0, d, resonant, 0.0).value - 0.5) <= 1e-12

    def test_vacuum_general(self, figure_d):
        phi = dressed_quantities(0, figure_d, 0.9).phi_n
        expect = math.cos(phi) ** 4 + math.sin(phi) ** 4
        assert correlation_avg(0.0, vacuum(), figure_d, 0.9).value == pytest.approx(expect, abs=1e-15)

    def test_negative_tau(self, resonant):
        with pytest.raises(DomainError):
            correlation_avg(-1.0, vacuum(), resonant, 0.0)

    @given(probs=st.lists(st.floats(0.0, 1.0), min_size=1, max_size=12).filter(lambda p: sum(p) > 0.1))
    def test_half_for_any_distribution(self, probs):
        d = custom_distribution(probs, renormalize=True)
        value = correlation_avg(0.0, d, SystemParams.from_detuning(0.0), 0.0).value
        assert abs(value - 0.5) <= 1e-12


class TestPeaks:
    def test_vacuum_doublet(self, resonant):
        r = physical_spectrum(vacuum(), resonant, 0.0)
        peaks = peak_find(r)
        step = r.grid[1] - r.grid[0]
        assert len(peaks) == 2
        assert abs(peaks[0][0] + 1) <= step and abs(peaks[1][0] - 1) <= step

    def test_single_line(self):
        line = SpectralLine("plus->ground", 0, 0.3, 1.0)
        r = evaluate_spectrum([line], default_grid(), 0.1, 1.0)
        peaks = peak_find(r)
        assert len(peaks) == 1 and peaks[0][0] == pytest.approx(0.3, abs=r.grid[1] - r.grid[0])

    def test_symmetric_peak_set(self, resonant):
        r = physical_spectrum(coherent_distribution(10.0), resonant, 0.0)
        pos = np.array([x for x, _ in peak_find(r)])
        step = r.grid[1] - r.grid[0]
        np.testing.assert_allclose(np.sort(pos), np.sort(-pos), atol=step)

    def test_resolution_warning(self, resonant):
        r = physical_spectrum(vacuum(), resonant, 0.0, default_grid(-10, 10, 101))
        with pytest.warns(ResolutionWarning):
            peak_find(r)

    def test_no_warning_on_default_grid(self, resonant):
        r = physical_spectrum(vacuum(), resonant, 0.0)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            peak_find(r)


class TestAsymmetry:
    @pytest.mark.parametrize("kind", ["coherent", "thermal", "vacuum"])
    def test_zero_when_symmetric(self, resonant, kind):
        r = physical_spectrum(make_distribution(kind, 2.0), resonant, 0.0)
        assert abs(asymmetry_metric(r)) <= 1e-10

    def test_single_line_centroid(self):
        line = SpectralLine("plus->ground", 0, 0.5, 1.0)
        r = evaluate_spectrum([line], default_grid(-2000, 2000, 800001), 0.1, 1.0)
        assert asymmetry_metric(r) == pytest.approx(0.5, abs=2e-3)

    def test_asymmetric_grid(self, resonant):
        r = physical_spectrum(vacuum(), resonant, 0.0, default_grid(-5, 10, 301))
        with pytest.raises(DomainError):
            asymmetry_metric(r)

    @pytest.mark.parametrize("chi", sorted(GOLDEN_ASYMMETRY))
    def test_golden(self, resonant, chi):
        r = physical_spectrum(coherent_distribution(1.0), resonant, chi)
        assert asymmetry_metric(r) == pytest.approx(GOLDEN_ASYMMETRY[chi], rel=1e-9, abs=1e-10)

    def test_golden_monotone_and_positive(self):
        values = [GOLDEN_ASYMMETRY[c] for c in sorted(GOLDEN_ASYMMETRY)]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert values[-1] > 1e-3
