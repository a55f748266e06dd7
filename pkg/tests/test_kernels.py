import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conic_laguerre import kernels as K
from conic_laguerre.quadrature import cone_surface_rule
from conic_laguerre.surface import SurfaceBasis
from conic_laguerre.special import laguerre
from conftest import surface_points

CONFIGS = [(2, (0.0, 0.0)), (2, (0.5, 0.5)), (3, (0.0, 0.0, 0.0)), (3, (0.5, 0.5, 0.5))]


def _pair(rng, d, P, tmax=4.0):
    x, t = surface_points(rng, d, P, tmax=tmax)
    y, s = surface_points(rng, d, P, tmax=tmax)
    return x, t, y, s


@pytest.mark.parametrize("d,kappa", CONFIGS)
def test_sum_basics(rng, d, kappa):
    x, t, y, s = _pair(rng, d, 6)
    np.testing.assert_allclose(K.kernel_sum(d, kappa, 0, x, t, y, s), 1.0, rtol=1e-13)
    np.testing.assert_allclose(K.kernel_sum(d, kappa, 5, x, t, y, s), K.kernel_sum(d, kappa, 5, y, s, x, t),
                               rtol=1e-12)
    apex = np.zeros((1, d))
    a = 2 * sum(kappa) + d - 2
    np.testing.assert_allclose(K.kernel_sum(d, kappa, 4, x, t, apex, [0.0]), laguerre(4, a, t), rtol=1e-11)


@pytest.mark.parametrize("d,kappa", CONFIGS)
@pytest.mark.parametrize("n", [0, 3, 8])
def test_closed_matches_sum(rng, d, kappa, n):
    x, t, y, s = _pair(rng, d, 12)
    ref = K.kernel_sum(d, kappa, n, x, t, y, s)
    got = K.kernel_closed(d, kappa, n, x, t, y, s)
    scale = np.maximum(np.abs(ref), 1.0)
    assert np.max(np.abs(got - ref) / scale) <= 1e-6


@pytest.mark.parametrize("d,kappa", CONFIGS)
def test_closed_at_apex_and_symmetry(rng, d, kappa):
    x, t, y, s = _pair(rng, d, 5)
    apex = np.zeros((1, d))
    a = 2 * sum(kappa) + d - 2
    np.testing.assert_allclose(K.kernel_closed(d, kappa, 6, x, t, apex, [0.0]), laguerre(6, a, t), rtol=1e-12)
    np.testing.assert_allclose(K.kernel_closed(d, kappa, 6, x, t, y, s), K.kernel_closed(d, kappa, 6, y, s, x, t),
                               rtol=1e-9, atol=1e-9)
    np.testing.assert_allclose(K.kernel_apex(d, kappa, 6, t), laguerre(6, a, t))


@pytest.mark.parametrize("d,kappa", CONFIGS)
def test_addition_matches_sum(rng, d, kappa):
    x, t, y, s = _pair(rng, d, 8)
    P = K.kernel_addition(d, kappa, 6, x, t, y, s)
    assert P.shape == (7, 8)
    for n in (0, 2, 6):
        np.testing.assert_allclose(P[n], K.kernel_sum(d, kappa, n, x, t, y, s), rtol=1e-9, atol=1e-9)


def test_rho_bounds(rng):
    d = 3
    x, t, y, s = _pair(rng, d, 20000)
    u = 2 * rng.random(d) - 1
    r = K.rho(x, t, y, s, u)
    assert np.all(r >= 0) and np.all(r <= np.sqrt(t * s) * (1 + 1e-14))


def test_reproducing_property():
    d, kappa, n = 2, (0.5, 0.5), 3
    basis = SurfaceBasis(d, kappa, n)
    rule = cone_surface_rule(d, kappa, 2 * n + 4)
    p = np.array([[0.6, -0.8]]) * 1.3
    tp = np.array([1.3])
    Kv = K.kernel_closed(d, kappa, n, np.broadcast_to(p, rule.x.shape), np.full(rule.t.shape, 1.3),
                         rule.x, rule.t)
    B = basis.evaluate(rule.x, rule.t)[:, basis.degree_slice(n)]
    got = (rule.weights * Kv) @ B
    ref = basis.evaluate(p, tp)[0, basis.degree_slice(n)]
    np.testing.assert_allclose(got, ref, atol=1e-8)


class TestPoisson:
    @pytest.mark.parametrize("d,kappa", CONFIGS)
    def test_r_zero(self, rng, d, kappa):
        x, t, y, s = _pair(rng, d, 4)
        np.testing.assert_allclose(K.poisson_closed(d, kappa, 0.0, x, t, y, s), 1.0, rtol=1e-13)

    def test_rho_zero_cosh_branch(self):
        # with kappa = 0, rho = sqrt((ts + <x,y>)/2) vanishes on antipodal rays
        r, t, s = 0.4, 1.5, 2.0
        x = np.array([[t, 0.0]])
        y = np.array([[-s, 0.0]])
        ref = np.exp(-(t + s) * r / (1 - r)) / (1 - r)
        assert K.poisson_closed(2, (0, 0), r, x, [t], y, [s]) == pytest.approx(ref, rel=1e-13)
        # orthogonal rays give rho = sqrt(ts/2)
        y = np.array([[0.0, s]])
        rho = np.sqrt(t * s / 2)
        ref = np.exp(-(t + s) * r / (1 - r)) / (1 - r) * np.cosh(2 * np.sqrt(r) / (1 - r) * rho)
        assert K.poisson_closed(2, (0, 0), r, x, [t], y, [s]) == pytest.approx(ref, rel=1e-13)

    @pytest.mark.parametrize("d,kappa", CONFIGS)
    @pytest.mark.parametrize("r", [0.3, 0.7])
    def test_closed_vs_series(self, rng, d, kappa, r):
        x, t, y, s = _pair(rng, d, 3 if d == 3 else 6)
        ser, ok = K.poisson_series(d, kappa, r, x, t, y, s, N=200)
        assert ok
        np.testing.assert_allclose(K.poisson_closed(d, kappa, r, x, t, y, s), ser, rtol=1e-8)

    @given(st.floats(0, 0.95), st.integers(0, 2 ** 31))
    def test_positive_when_alpha_zero(self, r, seed):
        x, t, y, s = _pair(np.random.default_rng(seed), 2, 5)
        assert np.all(K.poisson_closed(2, (0, 0), r, x, t, y, s) > 0)

    def test_rejects_r(self, rng):
        x, t, y, s = _pair(rng, 2, 1)
        with pytest.raises(ValueError):
            K.poisson_closed(2, (0, 0), 1.0, x, t, y, s)


class TestJacobiKernel:
    @pytest.mark.parametrize("gamma", [-0.5, 0.0, 1.5])
    @pytest.mark.parametrize("d,kappa", [(2, (0.0, 0.0)), (2, (0.5, 1.0)), (3, (0.5, 0.0, 0.5))])
    def test_closed_vs_sum(self, rng, gamma, d, kappa):
        x, t, y, s = _pair(rng, d, 6, tmax=1.0)
        for n in (0, 2, 5):
            ref = K.jacobi_kernel_sum(d, kappa, gamma, n, x, t, y, s)
            got = K.jacobi_kernel_closed(d, kappa, gamma, n, x, t, y, s)
            assert np.max(np.abs(got - ref) / np.maximum(np.abs(ref), 1.0)) <= 1e-6

    def test_scaled_limit(self, rng):
        d, kappa, n = 2, (0.5, 0.5), 3
        x, t, y, s = _pair(rng, d, 3, tmax=2.0)
        ref = K.kernel_sum(d, kappa, n, x, t, y, s)
        errs = [np.max(np.abs(K.jacobi_kernel_sum(d, kappa, g, n, x / g, t / g, y / g, s / g) - ref))
                for g in (1e2, 1e3, 1e4)]
        assert errs[0] > errs[1] > errs[2]
