"""Tests for the logification maps, vector-field lifts and synthetic sums."""

import math

import numpy as np
import pytest

from radfield.coords import (
    BlowupPoint,
    CutoffSpec,
    lapse_curve_point,
    lift_module_generator,
    logify_point,
    synth_phg,
    unlogify_point,
)

CHI = CutoffSpec()


class TestCutoff:
    def test_plateau_and_support(self):
        v = np.linspace(-1.2, 1.2, 241)
        chi = CHI.chi(v)
        assert np.all(chi[np.abs(v) <= CHI.c1] == 1.0)
        assert np.all(chi[np.abs(v) >= CHI.C] == 0.0)
        assert np.all((chi >= 0.0) & (chi <= 1.0))

    def test_smoothness_bounded_derivative(self):
        v = np.linspace(-1.0, 1.0, 4001)
        chi = CHI.chi(v)
        num = np.gradient(chi, v)
        assert np.max(np.abs(num)) < 10.0
        # analytic derivative matches finite differences
        ana = CHI.chi_prime(v)
        assert np.max(np.abs(ana - num)) < 0.05

    def test_bad_spec_rejected(self):
        with pytest.raises(ValueError):
            CutoffSpec(c1=0.8, C=0.5)


class TestLogify:
    def test_boundary_identity(self):
        _, vbar = logify_point(0.0, 0.3, m=1.0, chi=CHI)
        assert vbar == 0.3

    def test_massless_identity(self):
        rho = np.array([0.0, 0.1, 0.5])
        _, vbar = logify_point(rho, np.full(3, 0.2), m=0.0, chi=CHI)
        assert np.all(vbar == 0.2)

    def test_plateau_value(self):
        # chi(0) = 1:  vbar = 0 + 1 * e^{-1} * log(e^{-1}) = -e^{-1}
        _, vbar = logify_point(math.exp(-1.0), 0.0, m=1.0, chi=CHI)
        assert vbar == pytest.approx(-math.exp(-1.0), rel=1e-14)

    def test_identity_outside_support(self):
        _, vbar = logify_point(0.2, 0.9, m=1.0, chi=CHI)
        assert vbar == 0.9

    def test_negative_rho_rejected(self):
        with pytest.raises(ValueError):
            logify_point(-0.1, 0.0, 1.0, CHI)


class TestUnlogify:
    def test_round_trip(self):
        rng = np.random.default_rng(2)
        for _ in range(30):
            rho = rng.uniform(1e-6, 0.08)
            v = rng.uniform(-0.8, 0.8)
            m = rng.uniform(-0.8, 0.8)
            _, vbar = logify_point(rho, v, m, CHI)
            _, v_back = unlogify_point(rho, vbar, m, CHI)
            assert v_back == pytest.approx(v, abs=1e-10)

    def test_boundary(self):
        _, v = unlogify_point(0.0, 0.4, 2.0, CHI)
        assert v == 0.4

    def test_massless_identity(self):
        _, v = unlogify_point(0.3, -0.2, 0.0, CHI)
        assert v == -0.2

    def test_monotonicity_guard(self):
        # enormous m breaks monotonicity of v -> vbar
        with pytest.raises(ValueError):
            unlogify_point(0.3, 0.5, 80.0, CHI)


class TestLifts:
    def test_rho_drho_log_coefficient_on_plateau(self):
        lift = lift_module_generator("rho_drho", m=0.7, chi=CHI)
        # chi = 1 near v = 0: coefficient of log(rhobar) d/ds equals m
        assert lift.log_ds(1.3, 0.01, 0.0) == pytest.approx(0.7, abs=1e-14)
        assert lift.ds(1.3, 0.01, 0.0) == pytest.approx(0.7 - 1.3, abs=1e-14)
        assert lift.rho_drho == 1.0

    def test_v_dv_log_coefficient_vanishes_outside_support(self):
        lift = lift_module_generator("v_dv", m=0.7, chi=CHI)
        # chi = chi' = 0 for |v| >= C: no log term survives
        assert lift.log_ds(0.5, 0.01, 0.9) == pytest.approx(0.0, abs=1e-14)
        # on the plateau the exact coefficient is -chi*m
        assert lift.log_ds(0.5, 0.01, 0.0) == pytest.approx(-0.7, abs=1e-14)

    def test_massless_kills_all_log_slots(self):
        for name in ("rho_drho", "v_dv", "rho_dv"):
            lift = lift_module_generator(name, m=0.0, chi=CHI)
            for v in (-0.5, 0.0, 0.6):
                assert lift.log_ds(0.2, 0.05, v) == 0.0

    def test_unknown_generator(self):
        with pytest.raises(ValueError):
            lift_module_generator("d_dy", 1.0, CHI)

    @pytest.mark.parametrize("which", ["rho_drho", "v_dv", "rho_dv"])
    def test_chain_rule_consistency(self, which):
        """Lift applied to F == directional derivative of F o (coordinate maps)."""
        m = 0.6
        lift = lift_module_generator(which, m, CHI)

        def F(s, rb):
            return np.sin(0.7 * s) * (1.0 + 0.3 * rb)

        def F_s(s, rb):
            return 0.7 * np.cos(0.7 * s) * (1.0 + 0.3 * rb)

        def F_rb(s, rb):
            return 0.3 * np.sin(0.7 * s)

        def s_of(rho, v):
            _, vbar = logify_point(rho, v, m, CHI)
            return vbar / rho

        def f(rho, v):
            return F(s_of(rho, v), rho)

        hs = [1e-4, 5e-5]
        for rho, v in [(0.02, 0.1), (0.05, -0.3), (0.03, 0.5)]:
            s = s_of(rho, v)
            lifted = lift.apply(F_s, F_rb, s, rho, v)
            errs = []
            for h in hs:
                if which == "rho_drho":
                    num = rho * (f(rho + h, v) - f(rho - h, v)) / (2 * h)
                elif which == "v_dv":
                    num = v * (f(rho, v + h) - f(rho, v - h)) / (2 * h)
                else:
                    num = rho * (f(rho, v + h) - f(rho, v - h)) / (2 * h)
                errs.append(abs(num - lifted))
            # agreement at O(h^2): absolute match plus quadratic decay of the
            # finite-difference error under halving (ratio 1/4 up to noise)
            assert errs[0] < 2e-3
            assert errs[1] < 0.3 * errs[0] + 1e-11


class TestBlowup:
    def test_reconstruction_exact(self):
        p = BlowupPoint(s=3.7, rhobar=0.125)
        assert p.vbar == 3.7 * 0.125

    def test_lapse_curve_round_trip(self):
        m = 0.4
        s = 2.5
        rhobar = np.array([1e-4, 1e-3, 1e-2])
        _, v = lapse_curve_point(s, rhobar, m, CHI)
        _, vbar = logify_point(rhobar, v, m, CHI)
        assert np.max(np.abs(vbar / rhobar - s)) < 1e-10


class TestSynthPhg:
    def test_constant(self):
        rho = np.geomspace(1e-4, 0.1, 20)
        u = synth_phg([(0j, 0)], {(0j, 0): 1.0}, rho)
        assert np.allclose(u, 1.0)

    def test_rho_log_squared(self):
        rho = np.geomspace(1e-4, 0.1, 20)
        entries = [(-1j, 0), (-1j, 1), (-1j, 2)]
        u = synth_phg(entries, {(-1j, 2): 1.0}, rho)
        assert np.allclose(u.real, rho * np.log(rho) ** 2, rtol=1e-13)
        assert np.max(np.abs(u.imag)) < 1e-14

    def test_oscillatory_entry(self):
        rho = np.geomspace(1e-3, 0.1, 10)
        z = 2.0 - 0.5j
        u = synth_phg([(z, 0)], {(z, 0): 1.0}, rho)
        expected = rho**0.5 * np.exp(2j * np.log(rho))
        assert np.allclose(u, expected, rtol=1e-12)

    def test_positive_rho_required(self):
        with pytest.raises(ValueError):
            synth_phg([(0j, 0)], {(0j, 0): 1.0}, np.array([0.0, 0.1]))
