"""Tests for the normal-form metric models."""

import math

import numpy as np
import pytest

from radfield.geometry import (
    CotangentPoint,
    b_symbol,
    dual_metric_matrix,
    make_kerr_exterior,
    make_minkowski,
    measure_corner_constants,
    model_from_config,
    model_to_config,
    static_spherical_model,
    validate_model,
)

Y0 = np.array([math.pi / 2, 0.0])


def pt(rho, v, xi, gamma, eta=(0.0, 0.0), y=Y0):
    return CotangentPoint(rho, v, y, xi, gamma, np.asarray(eta))


def quadratic_form_reference(model, rho, v, y, xi, gamma, eta):
    """Independent route: the symbol from the explicit component display.

    omega xi^2 - 2(2 - alpha v) xi gamma - (4v - 4m rho - beta v^2) gamma^2
      - mu.eta xi - 2 v upsilon.eta gamma - h^{jk} eta_j eta_k  + remainders.
    """
    G = dual_metric_matrix(model, rho, v, y)
    lam = (
        model.omega(rho, v, y) * xi**2
        - 2.0 * (2.0 - model.alpha(rho, v, y) * v) * xi * gamma
        - (4.0 * v - 4.0 * model.m * rho - model.beta(rho, v, y) * v**2) * gamma**2
    )
    mu = np.asarray(model.mu(rho, v, y))
    ups = np.asarray(model.upsilon(rho, v, y))
    h = np.asarray(model.h_inv(rho, v, y))
    lam += -float(mu @ eta) * xi - 2.0 * v * float(ups @ eta) * gamma
    lam += -float(eta @ h @ eta)
    # declared remainders, entering through the same quadratic pairing
    zeta = np.concatenate(([xi, gamma], eta))
    R = G.copy()
    R[0, 0] -= model.omega(rho, v, y)
    R[0, 1] -= -2.0 + model.alpha(rho, v, y) * v
    R[1, 0] = R[0, 1]
    R[1, 1] -= -4.0 * v + 4.0 * model.m * rho + model.beta(rho, v, y) * v**2
    for j in range(model.nang):
        R[0, 2 + j] -= -0.5 * mu[j]
        R[2 + j, 0] = R[0, 2 + j]
        R[1, 2 + j] -= -v * ups[j]
        R[2 + j, 1] = R[1, 2 + j]
        for i in range(model.nang):
            R[2 + i, 2 + j] -= -h[i, j]
    return lam + float(zeta @ R @ zeta)


class TestMinkowski:
    def test_corner_entries(self):
        G = dual_metric_matrix(make_minkowski(), 0.0, 0.0, Y0)
        assert G[0, 0] == pytest.approx(1.0, abs=1e-14)
        assert G[0, 1] == pytest.approx(-2.0, abs=1e-14)
        assert G[1, 1] == pytest.approx(0.0, abs=1e-14)

    def test_corner_constants(self):
        c = measure_corner_constants(make_minkowski())
        assert c["omega_bar"] == pytest.approx(1.0, abs=1e-12)
        assert c["alpha_bar"] == pytest.approx(2.0, abs=1e-12)
        assert c["beta_bar"] == pytest.approx(4.0, abs=1e-12)
        assert c["m"] == 0.0

    def test_symbol_values(self):
        mink = make_minkowski()
        # omega xi^2 at the corner
        assert b_symbol(mink, pt(0.0, 0.0, 1.0, 0.0)) == pytest.approx(1.0, abs=1e-14)
        # omega xi^2 - 2*2*xi*gamma = 1 - 4
        assert b_symbol(mink, pt(0.0, 0.0, 1.0, 1.0)) == pytest.approx(-3.0, abs=1e-14)
        # g^{vv} = 0 at the corner
        assert b_symbol(mink, pt(0.0, 0.0, 0.0, 1.0)) == pytest.approx(0.0, abs=1e-14)

    def test_zero_fiber(self):
        assert b_symbol(make_minkowski(), pt(0.05, 0.2, 0.0, 0.0)) == 0.0


class TestKerr:
    @pytest.mark.parametrize("M,a", [(1.0, 0.0), (1.0, 0.5), (0.25, 0.1)])
    def test_constants(self, M, a):
        c = measure_corner_constants(make_kerr_exterior(M, a))
        assert c["m"] == pytest.approx(4.0 * M, abs=1e-14)
        assert c["omega_bar"] == pytest.approx(1.0, abs=1e-12)
        assert c["alpha_bar"] == pytest.approx(2.0, abs=1e-12)
        assert c["beta_bar"] == pytest.approx(4.0, abs=1e-12)
        assert c["m_from_slope"] == pytest.approx(4.0 * M, rel=1e-6)

    def test_schwarzschild_quarter_mass(self):
        assert make_kerr_exterior(0.25, 0.0).m == pytest.approx(1.0)

    def test_small_mass_limit_matches_minkowski(self):
        mink = make_minkowski()
        tiny = make_kerr_exterior(1e-13, 0.0)
        G1 = dual_metric_matrix(mink, 0.0, 0.0, Y0)
        G2 = dual_metric_matrix(tiny, 0.0, 0.0, Y0)
        assert np.max(np.abs(G1 - G2)) < 1e-12

    def test_rejects_extremal(self):
        with pytest.raises(ValueError):
            make_kerr_exterior(1.0, 1.0)
        with pytest.raises(ValueError):
            make_kerr_exterior(1.0, 1.5)
        with pytest.raises(ValueError):
            make_kerr_exterior(0.0, 0.0)

    def test_gvv_schwarzschild_value(self):
        # assembled g^{vv} at (rho, v) = (0.01, 0), M = 1:
        #   4 [A_tt - Delta/Sigma] = 4 [1/0.98 - 0.98] = 0.1616326530612...
        # whose principal part 4 m rho = 0.16; the rho^2 coefficient is 16 M^2.
        model = make_kerr_exterior(1.0, 0.0)
        G = dual_metric_matrix(model, 0.01, 0.0, Y0)
        assert G[1, 1] == pytest.approx(0.1616326530612244, rel=1e-12)
        assert abs(G[1, 1] - 0.16) < 2e-3

    def test_m_enters_at_order_rho_only(self):
        # at rho = 0 nothing depends on M
        for M in (0.3, 1.0, 2.5):
            model = make_kerr_exterior(M, 0.2 * M)
            G = dual_metric_matrix(model, 0.0, 0.17, Y0)
            Gm = dual_metric_matrix(make_minkowski(), 0.0, 0.17, Y0)
            assert np.max(np.abs(G - Gm)) < 1e-13


class TestSymbolProperties:
    def test_quadratic_homogeneity(self):
        rng = np.random.default_rng(7)
        model = make_kerr_exterior(0.8, 0.3)
        for _ in range(25):
            rho, v = rng.uniform(0, 0.05), rng.uniform(-0.4, 0.4)
            y = np.array([rng.uniform(1.0, 2.0), rng.uniform(0, 1)])
            zeta = rng.normal(size=4)
            t = rng.uniform(0.1, 5.0)
            p1 = CotangentPoint(rho, v, y, zeta[0], zeta[1], zeta[2:])
            p2 = CotangentPoint(rho, v, y, t * zeta[0], t * zeta[1], t * zeta[2:])
            lam1, lam2 = b_symbol(model, p1), b_symbol(model, p2)
            assert lam2 == pytest.approx(t * t * lam1, rel=1e-12, abs=1e-12)

    def test_matches_component_display(self):
        rng = np.random.default_rng(11)
        for model in (make_minkowski(), make_kerr_exterior(1.0, 0.6)):
            for _ in range(20):
                rho, v = rng.uniform(0, 0.05), rng.uniform(-0.4, 0.4)
                y = np.array([rng.uniform(1.0, 2.0), rng.uniform(0, 1)])
                zeta = rng.normal(size=4)
                p = CotangentPoint(rho, v, y, zeta[0], zeta[1], zeta[2:])
                ref = quadratic_form_reference(model, rho, v, y, zeta[0], zeta[1], zeta[2:])
                assert b_symbol(model, p) == pytest.approx(ref, rel=1e-12, abs=1e-12)


class TestIndependentEntry:
    def test_schwarzschild_bl_agrees_with_kerr_a0(self):
        M = 1.0
        bl = static_spherical_model(lambda u: 1.0 - 2.0 * M * u, "schwarzschild_bl")
        kerr = make_kerr_exterior(M, 0.0)
        assert bl.m == pytest.approx(4.0 * M, abs=1e-12)
        G1 = dual_metric_matrix(bl, 0.0, 0.0, Y0)
        G2 = dual_metric_matrix(kerr, 0.0, 0.0, Y0)
        assert np.max(np.abs(G1 - G2)) < 1e-10
        # also off the corner the two entry routes agree (a = 0 is exact)
        for rho, v in [(0.01, 0.2), (0.03, -0.3)]:
            G1 = dual_metric_matrix(bl, rho, v, Y0)
            G2 = dual_metric_matrix(kerr, rho, v, Y0)
            assert np.max(np.abs(G1 - G2)) < 1e-10


class TestValidation:
    def test_minkowski_all_pass(self):
        rep = validate_model(make_minkowski())
        assert rep.all_passed

    def test_kerr_high_spin_all_pass(self):
        rep = validate_model(make_kerr_exterior(1.0, 0.9))
        assert rep.all_passed

    def test_negated_h_inv_flagged(self):
        broken = model_from_config({"kind": "table", "h_inv_scale": -1.0, "label": "broken"})
        rep = validate_model(broken)
        assert not rep.all_passed
        failed = [r.name for r in rep.results if not r.passed]
        assert any("positive definite" in n for n in failed)

    def test_empty_samples_rejected(self):
        with pytest.raises(ValueError):
            validate_model(make_minkowski(), samples=[])


class TestSerialization:
    def test_builtin_round_trip(self):
        for model in (make_minkowski(), make_kerr_exterior(0.5, 0.2)):
            cfg = model_to_config(model)
            back = model_from_config(cfg)
            assert back.m == pytest.approx(model.m)
            G1 = dual_metric_matrix(model, 0.01, 0.1, Y0)
            G2 = dual_metric_matrix(back, 0.01, 0.1, Y0)
            assert np.max(np.abs(G1 - G2)) < 1e-14

    def test_table_model(self):
        cfg = {
            "kind": "table",
            "m": 0.5,
            "remainders": [
                {"slot": "v_v", "coeffs": [[1, 1, 0.3], [2, 0, -0.2]]}
            ],
            "label": "generic",
        }
        model = model_from_config(cfg)
        assert model.m == 0.5
        G = dual_metric_matrix(model, 0.1, 0.2, Y0)
        expected = -4 * 0.2 + 4 * 0.5 * 0.1 + 4 * 0.04 + 0.3 * 0.1 * 0.2 - 0.2 * 0.01
        assert G[1, 1] == pytest.approx(expected, rel=1e-12)
        assert validate_model(model).all_passed


class TestCotangentPoint:
    def test_fiber_consistency(self):
        p = pt(0.1, 0.2, 0.7, -2.0, (0.3, 0.1))
        assert p.nu * p.gamma == pytest.approx(1.0, abs=1e-15)
        assert p.xi_hat * p.gamma == pytest.approx(p.xi, abs=1e-15)
        assert np.allclose(p.eta_hat * p.gamma, p.eta, atol=1e-15)

    def test_gamma_zero_rejected(self):
        p = pt(0.1, 0.2, 0.7, 0.0)
        with pytest.raises(ValueError):
            _ = p.nu
