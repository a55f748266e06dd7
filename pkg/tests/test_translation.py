import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conic_laguerre import translation as T
from conic_laguerre.kernels import kernel_sum
from conic_laguerre.quadrature import cone_surface_rule
from conic_laguerre.special import c_const, cesaro_number, laguerre
from conic_laguerre.surface import basis_eval_L, fourier_coeffs, projection
from conftest import surface_points

CONFIGS = [(2, (0.0, 0.0)), (2, (0.5, 0.5)), (3, (0.5, 0.0, 0.5))]


def _pair(rng, d, P):
    x, t = surface_points(rng, d, P)
    y, s = surface_points(rng, d, P)
    return x, t, y, s


class TestTranslate:
    @pytest.mark.parametrize("d,kappa", CONFIGS)
    def test_laguerre_gives_kernel(self, rng, d, kappa):
        x, t, y, s = _pair(rng, d, 6)
        a = 2 * sum(kappa) + d - 2
        for n in (0, 4, 10):
            got = T.translate(d, kappa, x, t, lambda z: laguerre(n, a, z), y, s)
            ref = kernel_sum(d, kappa, n, x, t, y, s)
            assert np.max(np.abs(got - ref) / np.maximum(1, np.abs(ref))) <= 1e-7

    @pytest.mark.parametrize("d,kappa", CONFIGS)
    def test_constant_and_apex(self, rng, d, kappa):
        x, t, y, s = _pair(rng, d, 5)
        np.testing.assert_allclose(T.translate(d, kappa, x, t, np.ones_like, y, s), 1.0, rtol=1e-12)
        g = lambda z: np.exp(-z / 3) * np.cos(z)
        np.testing.assert_allclose(T.translate(d, kappa, np.zeros((5, d)), np.zeros(5), g, y, s), g(s),
                                   rtol=1e-12, atol=1e-14)

    def test_symmetric_non_polynomial(self, rng):
        d, kappa = 2, (0.5, 0.5)
        x, t, y, s = _pair(rng, d, 4)
        g = lambda z: 1 / (1 + z)
        np.testing.assert_allclose(T.translate(d, kappa, x, t, g, y, s), T.translate(d, kappa, y, s, g, x, t),
                                   rtol=1e-8)


class TestConvolution:
    def test_projection_identity(self, rng):
        d, kappa, n = 2, (0.5, 0.0), 2
        a = 2 * sum(kappa) + d - 2
        f = lambda x, t: basis_eval_L((2, 1, 0), d, kappa, x, t) - 0.3 * basis_eval_L((2, 0, 0), d, kappa, x, t)
        rule = cone_surface_rule(d, kappa, 2 * n + 4)
        x, t = surface_points(rng, d, 2)
        got = T.convolve(d, kappa, f, lambda z: laguerre(n, a, z), x, t, rule, q=n + 2)
        np.testing.assert_allclose(got, f(x, t), rtol=1e-9, atol=1e-10)

    def test_constant(self, rng):
        d, kappa = 2, (0.0, 0.0)
        rule = cone_surface_rule(d, kappa, 4)
        x, t = surface_points(rng, d, 2)
        np.testing.assert_allclose(T.convolve(d, kappa, lambda x, t: np.ones_like(t), np.ones_like, x, t, rule, q=2),
                                   1.0, rtol=1e-12)

    def test_multiplier(self, rng):
        d, kappa, N = 2, (0.5, 0.5), 3
        a = 2 * sum(kappa) + d - 2
        c = np.array([0.7, -0.4, 0.25, 0.1])
        g = T.laguerre_combination(c, a)
        f = lambda x, t: t ** 2 - x[:, 0] * t + 3 * x[:, 1] ** 3
        coeffs = fourier_coeffs(f, d, kappa, N)
        rule = cone_surface_rule(d, kappa, 2 * N + 6)
        x, t = surface_points(rng, d, 2)
        got = T.convolve(d, kappa, f, g, x, t, rule, q=N + 2)
        ref = sum(c[n] * projection(coeffs, x, t, n) for n in range(N + 1))
        np.testing.assert_allclose(got, ref, rtol=1e-8, atol=1e-9)


class TestCesaro:
    @pytest.mark.parametrize("d,kappa", CONFIGS)
    @pytest.mark.parametrize("delta", [0.0, 0.5, 2.0])
    def test_translation_form_vs_sum(self, rng, d, kappa, delta):
        x, t, y, s = _pair(rng, d, 5)
        for n in (0, 3, 8):
            a = T.cesaro_kernel(d, kappa, delta, n, x, t, y, s)
            b = T.cesaro_kernel_sum(d, kappa, delta, n, x, t, y, s)
            assert np.max(np.abs(a - b) / np.maximum(1, np.abs(b))) <= 1e-7

    def test_delta_zero_is_plain_sum(self, rng):
        d, kappa, n = 2, (0.5, 0.5), 5
        x, t, y, s = _pair(rng, d, 4)
        ref = sum(kernel_sum(d, kappa, k, x, t, y, s) for k in range(n + 1))
        np.testing.assert_allclose(T.cesaro_kernel_sum(d, kappa, 0.0, n, x, t, y, s), ref, rtol=1e-10)

    def test_apex(self, rng):
        d, kappa, delta, n = 3, (0.5, 0.0, 0.5), 0.7, 6
        y, s = surface_points(rng, d, 4)
        alpha = sum(kappa) + (d - 2) / 2
        ref = laguerre(n, delta + 2 * alpha + 1, s) / cesaro_number(n, delta)
        np.testing.assert_allclose(T.cesaro_kernel(d, kappa, delta, n, np.zeros((4, d)), np.zeros(4), y, s),
                                   ref, rtol=1e-12)


class TestOperatorNorm:
    @given(st.floats(0, 2.5), st.floats(0, 4))
    def test_degree_zero(self, alpha, delta):
        assert T.operator_norm_1d_alpha(alpha, delta, 0) == pytest.approx(2 ** (2 * alpha + 1), rel=1e-10)

    def test_surface_alias(self):
        assert T.operator_norm_1d(3, (0.5, 0.5, 0.5), 1.0, 7) == pytest.approx(
            T.operator_norm_1d_alpha(2.0, 1.0, 7), rel=1e-15)

    def test_apex_attains_and_others_below(self, rng):
        d, kappa, delta, n = 2, (0.5, 0.5), 0.5, 6
        x, t = surface_points(rng, d, 2, tmax=3.0)
        x = np.vstack([np.zeros((1, d)), x])
        t = np.concatenate([[0.0], t])
        vals, ref = T.operator_norm_sup_check(d, kappa, delta, n, x, t)
        assert vals[0] == pytest.approx(ref, rel=1e-8)
        assert np.all(vals <= ref * (1 + 1e-6))

    def test_regime_of_lemma(self):
        assert T.lemma_regime(2, 0) == ("power", 1.5)
        assert T.lemma_regime(2, 1.5) == ("log", 1.5)
        assert T.lemma_regime(2, 3) == ("power", 3.0)
        with pytest.raises(ValueError):
            T.lemma_estLn_value(0.0, -1.0, 4)

    def test_fit_power_exact(self):
        ns = np.array([10, 20, 40, 80])
        p, rss = T.fit_power(ns, 3.0 * ns ** 1.7)
        assert p == pytest.approx(1.7, abs=1e-12) and rss < 1e-20
        p, _ = T.fit_power_log(ns, ns ** 0.8 * np.log(ns))
        assert p == pytest.approx(0.8, abs=1e-12)

    def test_divergence_below_critical(self):
        out = T.divergence_check(2, (0, 0), 0.25, [16, 32, 64, 128])
        assert out["increasing"] and out["slope"] > 0


class TestH:
    @pytest.mark.parametrize("alpha,t,s", [(1.0, 2.0, 3.0), (0.0, 1.0, 4.0), (0.75, 2.5, 2.5), (2.0, 0.3, 5.0)])
    def test_normalization(self, alpha, t, s):
        assert T.H_normalization_check(alpha, t, s) == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("alpha,t,s", [(0.0, 1.0, 2.0), (0.2, 3.0, 0.5)])
    def test_H1_mass(self, alpha, t, s):
        assert T.H1_mass(alpha, t, s) == pytest.approx(math.sqrt(t * s) / c_const(2 * alpha + 0.5), rel=1e-10)

    @given(st.floats(0, 2), st.floats(0.1, 5), st.floats(0.1, 5), st.floats(0.1, 5))
    def test_symmetry_and_support(self, alpha, t, s, z):
        v = T.H_alpha(alpha, t, s, z)
        assert v >= 0
        for perm in ((s, t, z), (z, s, t), (t, z, s)):
            assert T.H_alpha(alpha, *perm) == pytest.approx(v, rel=1e-10)
        lo, hi = T.support(t, s)
        if z < lo * (1 - 1e-9) or z > hi * (1 + 1e-9):
            assert v == 0.0


class TestBounds:
    def test_constant_sup(self):
        out = T.translation_bound_check(2, (0.5, 0.5), np.array([0.6, 0.8]), 1.0, np.array([1.0]), p=np.inf)
        assert out["slack"] >= -1e-8

    def test_abs_L3_alpha_one(self):
        a = 2.0
        g = lambda z: np.abs(laguerre(3, a, z))
        roots = T.laguerre_roots(3, a)
        out = T.translation_bound_check(2, (0.5, 0.5), np.array([0.6, 0.8]), 1.0, g, p=1, K=12,
                                        breaks=roots, sphere_degree=24, ngrid=200)
        assert out["slack"] >= -1e-8 and not out["two_term"]
        assert np.isfinite(out["proj_error"])

    def test_two_term_alpha_zero(self):
        out = T.translation_bound_check(2, (0, 0), np.array([1.2, 0.0]), 1.2, np.array([0.5, -0.3, 0.2]),
                                        p=1, sphere_degree=24, ngrid=200)
        assert out["two_term"] and out["slack"] >= -1e-8

    def test_p2(self):
        out = T.translation_bound_check(3, (0.5, 0.5, 0.5), np.array([0.0, 0.6, 0.8]), 1.0,
                                        np.array([1.0, 0.5, -0.25]), p=2)
        assert 0 <= out["slack"] <= 1

    def test_bad_p(self):
        with pytest.raises(ValueError):
            T.translation_bound_check(2, (0.5, 0.5), np.array([1.0, 0.0]), 1.0, np.array([1.0]), p=3)

    @pytest.mark.parametrize("pqr", [(1, 1, 1), (2, 1, 2), (1, 2, 2)])
    def test_young(self, pqr):
        d, kappa = 2, (0.5, 0.5)
        f = fourier_coeffs(lambda x, t: 1 + x[:, 0] - 0.5 * t ** 2, d, kappa, 3)
        out = T.young_check(d, kappa, f, np.array([0.6, 0.3, -0.2]), *pqr)
        assert out["slack"] >= -1e-8

    def test_laguerre_coefficients_roundtrip(self):
        a = 1.0
        c = np.array([0.3, -1.0, 0.5, 0.0, 0.2])
        got = T.laguerre_coefficients(T.laguerre_combination(c, a), a, 6)
        np.testing.assert_allclose(got[:5], c, atol=1e-12)
        np.testing.assert_allclose(got[5:], 0.0, atol=1e-12)
