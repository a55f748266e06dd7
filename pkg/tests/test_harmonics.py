from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conic_laguerre import harmonics as H
from conic_laguerre.quadrature import sphere_rule
from conic_laguerre.special import gegenbauer_Z
from conic_laguerre.surface import dim_surface
from conftest import sphere_points


def test_counts():
    assert H.build_basis(2, (0, 0), 0).count == 1
    for m in range(1, 6):
        assert H.build_basis(2, (0, 0), m).count == 2
    assert H.build_basis(3, (0, 0, 0), 2).count == 5
    for d in (2, 3, 4):
        for m in range(7):
            lower = comb(m + d - 3, m - 2) if m >= 2 else 0
            assert H.dim_harmonics(d, m) == comb(m + d - 1, m) - lower


def test_surface_dimension_matches_enumeration():
    for d in (2, 3):
        for n in range(6):
            assert dim_surface(d, n) == sum(H.dim_harmonics(d, m) for m in range(n + 1))


@pytest.mark.parametrize("d,kappa", [(2, (0.5, 1.0)), (3, (0.0, 0.5, 1.5))])
@pytest.mark.parametrize("m", [0, 1, 4, 7])
def test_orthonormal(d, kappa, m):
    Y = H.build_basis(d, kappa, m)
    r = sphere_rule(d, kappa, 2 * m + 2)
    V = Y(r.points)
    G = (V * r.weights[:, None]).T @ V
    np.testing.assert_allclose(G, np.eye(Y.count), atol=1e-10)


def test_orthogonal_across_degrees():
    d, kappa = 3, (0.5, 0.0, 1.0)
    r = sphere_rule(d, kappa, 12)
    A = H.build_basis(d, kappa, 3)(r.points)
    B = H.build_basis(d, kappa, 5)(r.points)
    assert np.max(np.abs((A * r.weights[:, None]).T @ B)) < 1e-11


def test_homogeneous(rng):
    Y = H.build_basis(3, (0.5, 0.5, 0.5), 3)
    xi = sphere_points(rng, 3, 5)
    np.testing.assert_allclose(Y(2.5 * xi), 2.5 ** 3 * Y(xi), rtol=1e-12)


def test_kernel_degree_zero_and_d2(rng):
    xi, eta = sphere_points(rng, 2, 4), sphere_points(rng, 2, 4)
    np.testing.assert_allclose(H.kernel_sum(H.build_basis(2, (0, 0), 0), xi, eta), 1.0)
    e = np.array([[1.0, 0.0]])
    assert H.kernel_sum(H.build_basis(2, (0, 0), 2), e, e) == pytest.approx(2.0, rel=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("n", [1, 2, 5])
def test_zero_kappa_is_gegenbauer(rng, d, n):
    xi, eta = sphere_points(rng, d, 20), sphere_points(rng, d, 20)
    ref = gegenbauer_Z(n, (d - 2) / 2, np.sum(xi * eta, axis=1))
    np.testing.assert_allclose(H.kernel_sum(H.build_basis(d, (0,) * d, n), xi, eta), ref, atol=1e-10)
    np.testing.assert_allclose(H.kernel_closed(d, (0,) * d, n, xi, eta), ref, atol=1e-12)


@given(st.integers(0, 6), st.integers(0, 2 ** 31))
def test_closed_matches_sum(n, seed):
    rng = np.random.default_rng(seed)
    kappa = (0.5, 1.0)
    xi, eta = sphere_points(rng, 2, 10), sphere_points(rng, 2, 10)
    a = H.kernel_sum(H.cached_basis(2, kappa, n), xi, eta)
    b = H.kernel_closed(2, kappa, n, xi, eta)
    np.testing.assert_allclose(b, a, rtol=1e-8, atol=1e-8)


def test_basis_independence(rng):
    d, kappa, n = 3, (0.5, 0.0, 1.0), 4
    b1 = H.build_basis(d, kappa, n, rng=np.random.default_rng(1))
    b2 = H.build_basis(d, kappa, n, rng=np.random.default_rng(2))
    xi, eta = sphere_points(rng, d, 30), sphere_points(rng, d, 30)
    np.testing.assert_allclose(H.kernel_sum(b1, xi, eta), H.kernel_sum(b2, xi, eta), atol=1e-9)


def test_reproducing(rng):
    d, kappa, n = 3, (0.5, 1.0, 0.0), 3
    Y = H.build_basis(d, kappa, n)
    r = sphere_rule(d, kappa, 2 * n + 2)
    xi = sphere_points(rng, d, 3)
    for p in xi:
        K = H.kernel_closed(d, kappa, n, np.broadcast_to(p, r.points.shape), r.points)
        got = (r.weights * K) @ Y(r.points)
        np.testing.assert_allclose(got, Y(p[None])[0], atol=1e-9)


def test_closed_all_matches_single(rng):
    d, kappa = 2, (0.25, 0.75)
    xi, eta = sphere_points(rng, d, 6), sphere_points(rng, d, 6)
    allk = H.kernel_closed_all(d, kappa, 7, xi, eta)
    for n in range(8):
        np.testing.assert_allclose(allk[n], H.kernel_closed(d, kappa, n, xi, eta), rtol=1e-11, atol=1e-12)
