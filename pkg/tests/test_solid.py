import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conic_laguerre import solid as SO
from conic_laguerre.quadrature import ball_rule, gauss_laguerre, solid_cone_rule
from conic_laguerre.special import laguerre, laguerre_norm
from conftest import solid_points

CONFIGS = [(1, (0.0,), 0.5), (1, (0.5,), 1.0), (2, (0.0, 0.0), 0.5), (2, (0.5, 0.5), 1.0)]


def _pair(rng, d, P):
    x, t = solid_points(rng, d, P)
    y, s = solid_points(rng, d, P)
    return x, t, y, s


def test_ball_basis_counts_and_orthonormality():
    assert SO.ball_basis(2, (0.5, 0.5), 1.0, 0).count == 1
    for m in range(5):
        assert SO.ball_basis(1, (0.5,), 1.0, m).count == 1
    for d, kappa, mu in CONFIGS:
        for m in (1, 3):
            B = SO.ball_basis(d, kappa, mu, m)
            r = ball_rule(d, kappa, mu, 2 * m + 2)
            V = B(r.points)
            np.testing.assert_allclose((V * r.weights[:, None]).T @ V, np.eye(B.count), atol=1e-10)


def test_values_and_norms(rng):
    d, kappa, mu = 2, (0.5, 0.0), 1.0
    x, t = solid_points(rng, d, 5)
    np.testing.assert_allclose(SO.basis_eval_solid((0, 0, 0), d, kappa, mu, x, t), 1.0, rtol=1e-13)
    assert SO.basis_norm_solid(0, 0, kappa, mu, d) == pytest.approx(1.0)
    a = 2 * sum(kappa) + 2 * mu + d - 1
    np.testing.assert_allclose(SO.basis_eval_solid((3, 0, 0), d, kappa, mu, x, t), laguerre(3, a, t), rtol=1e-12)
    assert SO.basis_norm_solid(2, 1, kappa, mu, d) == pytest.approx((a + 1) * (a + 2) * (a + 3), rel=1e-13)


@pytest.mark.parametrize("d,kappa,mu", CONFIGS)
def test_gram(d, kappa, mu):
    G, h = SO.solid_gram(d, kappa, mu, 6)
    assert np.max(np.abs(G - np.diag(h)) / np.sqrt(np.outer(h, h))) <= 1e-10


@pytest.mark.parametrize("d", [1, 2])
def test_dimension(d):
    b = SO.SolidBasis(d, (0.0,) * d, 0.5, 5)
    for n in range(6):
        assert b.degree_slice(n).size == SO.dim_solid(d, n)


@pytest.mark.parametrize("d,kappa,mu", CONFIGS)
@pytest.mark.parametrize("n", [0, 1, 4])
def test_lift(d, kappa, mu, n):
    rep = SO.lift_check(d, kappa, mu, n)
    assert rep["gram_dev"] <= 1e-10 and rep["leak"] <= 1e-10 and rep["dims_ok"]


@pytest.mark.parametrize("d,kappa,mu", CONFIGS)
def test_lift_integral(d, kappa, mu):
    one = SO.lift_integral_check(lambda X, t: np.ones_like(t), d, kappa, mu, 4)
    assert one[0] == pytest.approx(1.0) and one[1] == pytest.approx(1.0)
    sq = SO.lift_integral_check(lambda X, t: X[:, -1] ** 2 + t * X[:, 0], d, kappa, mu, 6)
    assert sq[0] == pytest.approx(sq[1], rel=1e-10)


def test_lift_geometry(rng):
    x, t = solid_points(rng, 2, 10)
    X = SO.lift(x, t)
    np.testing.assert_allclose(np.linalg.norm(X, axis=1), t, rtol=1e-13)
    np.testing.assert_allclose(SO.lift(x, t, -1.0)[:, -1], -X[:, -1])


def test_point_check():
    with pytest.raises(Exception):
        SO.check_solid_point(np.array([[2.0, 0.0]]), [1.0])


@pytest.mark.parametrize("d,kappa,mu", CONFIGS)
def test_kernels(rng, d, kappa, mu):
    x, t, y, s = _pair(rng, d, 6)
    a = 2 * sum(kappa) + 2 * mu + d - 1
    for n in (0, 3, 7):
        ref = SO.kernel_solid_sum(d, kappa, mu, n, x, t, y, s)
        closed = SO.kernel_solid_closed(d, kappa, mu, n, x, t, y, s)
        sym = SO.kernel_solid_symmetrized(d, kappa, mu, n, x, t, y, s)[n]
        assert np.max(np.abs(closed - ref) / np.maximum(1, np.abs(ref))) <= 1e-6
        np.testing.assert_allclose(sym, ref, rtol=1e-9, atol=1e-9)
    apex = np.zeros((1, d))
    np.testing.assert_allclose(SO.kernel_solid_closed(d, kappa, mu, 5, x, t, apex, [0.0]), laguerre(5, a, t),
                               rtol=1e-11)
    np.testing.assert_allclose(SO.kernel_solid_sum(d, kappa, mu, 0, x, t, y, s), 1.0, rtol=1e-12)


def test_closed_domain():
    with pytest.raises(Exception):
        SO.kernel_solid_closed(1, (0.0,), -0.25, 1, [[0.1]], [1.0], [[0.2]], [1.0])


@pytest.mark.parametrize("d,kappa,mu", CONFIGS)
def test_poisson(rng, d, kappa, mu):
    x, t, y, s = _pair(rng, d, 4)
    np.testing.assert_allclose(SO.poisson_solid(d, kappa, mu, 0.0, x, t, y, s), 1.0, rtol=1e-13)
    np.testing.assert_allclose(SO.poisson_solid(d, kappa, mu, 0.3, x, t, y, s),
                               SO.poisson_solid_series(d, kappa, mu, 0.3, x, t, y, s), rtol=1e-8)


def test_translation_and_cesaro(rng):
    d, kappa, mu = 2, (0.5, 0.0), 0.5
    x, t, y, s = _pair(rng, d, 5)
    a = 2 * SO.alpha_solid(d, kappa, mu)
    got = SO.translate_solid(d, kappa, mu, x, t, lambda z: laguerre(4, a, z), y, s)
    ref = SO.kernel_solid_sum(d, kappa, mu, 4, x, t, y, s)
    np.testing.assert_allclose(got, ref, rtol=1e-7, atol=1e-7)
    c = np.array([0.5, -0.2, 0.1])
    np.testing.assert_allclose(SO.translate_solid_symmetrized(d, kappa, mu, x, t, c, y, s),
                               SO.translate_solid(d, kappa, mu, x, t, lambda z: sum(
                                   c[k] * laguerre(k, a, z) for k in range(3)), y, s), rtol=1e-8, atol=1e-9)
    K0 = SO.cesaro_kernel_solid(d, kappa, mu, 0.0, 3, x, t, y, s)
    np.testing.assert_allclose(K0, sum(SO.kernel_solid_sum(d, kappa, mu, k, x, t, y, s) for k in range(4)),
                               rtol=1e-9, atol=1e-9)
    assert SO.operator_norm_solid(d, kappa, mu, 1.0, 0) == pytest.approx(2 ** (a + 1), rel=1e-10)


def test_convolution_projection(rng):
    d, kappa, mu, n = 1, (0.5,), 0.5, 2
    a = 2 * SO.alpha_solid(d, kappa, mu)
    f = lambda x, t: SO.basis_eval_solid((2, 1, 0), d, kappa, mu, x, t)
    rule = solid_cone_rule(d, kappa, mu, 2 * n + 4)
    x, t = solid_points(rng, d, 2)
    got = SO.convolve_solid(d, kappa, mu, f, lambda z: laguerre(n, a, z), x, t, rule, q=n + 2)
    np.testing.assert_allclose(got, f(x, t), rtol=1e-9, atol=1e-10)


@given(st.integers(0, 2 ** 31))
def test_partial_sums_reproduce(seed):
    rng = np.random.default_rng(seed)
    d, kappa, mu = 2, (0.5, 0.5), 1.0
    c = rng.standard_normal(4)
    f = lambda x, t: c[0] + c[1] * x[:, 0] + c[2] * t ** 2 + c[3] * x[:, 1] ** 2 * t
    basis, coeffs = SO.solid_fourier_coeffs(f, d, kappa, mu, 3)
    x, t = solid_points(rng, d, 6)
    np.testing.assert_allclose(SO.solid_partial_sum(basis, coeffs, x, t, 3), f(x, t), rtol=1e-9, atol=1e-9)


def test_radial_reduction(rng):
    d, kappa, mu = 1, (0.5,), 1.0
    a = 2 * SO.alpha_solid(d, kappa, mu)
    f0 = lambda t: np.exp(-t / 3)
    basis, coeffs = SO.solid_fourier_coeffs(lambda x, t: f0(t), d, kappa, mu, 5, degree=80)
    g = gauss_laguerre(60, a).normalized()
    x, t = solid_points(rng, d, 10)
    s1 = sum(np.dot(g.weights, f0(g.nodes) * laguerre(k, a, g.nodes)) / laguerre_norm(k, a) * laguerre(k, a, t)
             for k in range(6))
    np.testing.assert_allclose(SO.solid_partial_sum(basis, coeffs, x, t, 5), s1, rtol=1e-10, atol=1e-12)


class TestBounds:
    def test_two_term(self):
        out = SO.translation_bound_check_solid(1, (0.0,), 0.0, np.array([0.3]), 1.0, np.array([1.0, -0.5, 0.25]),
                                               sphere_degree=20, ngrid=200)
        assert out["two_term"] and out["slack"] >= -1e-8 and out["slack_sharp"] >= -1e-8

    def test_one_term(self):
        out = SO.translation_bound_check_solid(1, (0.5,), 0.5, np.array([0.3]), 1.0, np.array([1.0, -0.5]),
                                               sphere_degree=20, ngrid=200)
        assert not out["two_term"] and out["slack"] >= -1e-8


class TestWedge:
    def test_weight_ratio_constant(self, rng):
        for kappa, mu in [(0.0, 0.5), (0.5, 1.0), (1.0, 0.25)]:
            t = 0.1 + 3 * rng.random(20)
            x = t * (2 * rng.random(20) - 1)
            rep = SO.wedge_map_check(kappa, mu, 2, x, t, x, t)
            assert rep["ratio_spread"] <= 1e-12
            assert rep["ratio"] == pytest.approx(rep["ratio_expected"], rel=1e-12)

    @pytest.mark.parametrize("mu", [0.5, 1.0])
    def test_product_kernel(self, rng, mu):
        t = 0.1 + 3 * rng.random(10)
        x = t * (2 * rng.random(10) - 1)
        s = 0.1 + 3 * rng.random(10)
        y = s * (2 * rng.random(10) - 1)
        for n in (0, 3, 8):
            rep = SO.wedge_map_check(0.0, mu, n, x, t, y, s)
            assert rep["kernel_err"] <= 1e-9
