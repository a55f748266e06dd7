"""Orthogonal expansions on the conic surface ||x|| = t.

The Laguerre family L^n_{m,l}(x,t) = L_{n-m}^{2m+2|kappa|+d-2}(t) Y_l^m(x)
is orthogonal for t^{-1} h_kappa^2(x) e^{-t}.  The Jacobi family replaces
the Laguerre factor by P_{n-m}^{(2m+2|kappa|+d-2, gamma)}(1-2t) on t <= 1.
"""
from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.special import gammaln

from .harmonics import cached_basis
from .quadrature import cone_surface_rule, jacobi_cone_rule
from .special import (
    ParameterDomainError,
    b_const,
    c_sphere,
    cesaro_weights,
    jacobi,
    laguerre_all,
    log_jacobi_norm,
)


def alpha_kappa(d, kappa):
    """alpha_kappa = |kappa| + (d-2)/2."""
    return float(np.sum(kappa)) + (d - 2) / 2.0


def b_surface(d, kappa):
    """Normaliser of t^{-1} h_kappa^2 e^{-t} on the surface: b_{2|kappa|+d-2} c_kappa^h."""
    return b_const(2 * float(np.sum(kappa)) + d - 2) * c_sphere(kappa)


def dim_surface(d, n):
    """dim V_n = binom(n+d, n) - binom(n+d-2, n-2)."""
    lower = comb(n + d - 2, n - 2) if n >= 2 else 0
    return comb(n + d, n) - lower


def log_basis_norm(n, m, d, kappa):
    if m > n or m < 0:
        raise IndexError(f"need 0 <= m <= n, got m={m}, n={n}")
    a = 2 * float(np.sum(kappa)) + d - 1
    return gammaln(a + n + m) - gammaln(a) - gammaln(n - m + 1)


def basis_norm(n, m, kappa, d):
    """h_{m,n} = (2|kappa|+d-1)_{n+m} / (n-m)!."""
    return float(np.exp(log_basis_norm(n, m, d, kappa)))


def check_surface_point(x, t, tol=1e-12):
    x = np.atleast_2d(np.asarray(x, float))
    t = np.atleast_1d(np.asarray(t, float))
    if np.any(t < 0) or np.any(np.abs(np.linalg.norm(x, axis=1) - t) > tol * np.maximum(1, t)):
        raise ParameterDomainError("points must satisfy ||x|| = t >= 0")
    return x, t


class SurfaceBasis:
    """All L^n_{m,l} with n <= N, ordered by (n, m, l)."""

    def __init__(self, d, kappa, N):
        self.d = int(d)
        self.kappa = tuple(float(k) for k in np.ravel(kappa))
        if len(self.kappa) != self.d:
            raise ParameterDomainError("kappa length must equal d")
        self.N = int(N)
        self.harm = [cached_basis(self.d, self.kappa, m) for m in range(self.N + 1)]
        idx = []
        for n in range(self.N + 1):
            for m in range(n + 1):
                for ell in range(self.harm[m].count):
                    idx.append((n, m, ell))
        self.index = idx
        self._n = np.array([i[0] for i in idx], dtype=int)
        self._m = np.array([i[1] for i in idx], dtype=int)
        self.log_norms = np.array([log_basis_norm(n, m, self.d, self.kappa) for n, m, _ in idx])
        self.norms = np.exp(self.log_norms)

    @property
    def two_alpha(self):
        return 2 * sum(self.kappa) + self.d - 2

    def degree_slice(self, n):
        return np.flatnonzero(self._n == n)

    def laguerre_param(self, m):
        return 2 * m + self.two_alpha

    def evaluate(self, x, t):
        """Matrix (P, len(index)) of basis values."""
        x = np.atleast_2d(np.asarray(x, float))
        t = np.atleast_1d(np.asarray(t, float))
        out = np.empty((x.shape[0], len(self.index)))
        col = {key: j for j, key in enumerate(self.index)}
        for m in range(self.N + 1):
            Y = self.harm[m](x)
            lag = laguerre_all(self.N - m, self.laguerre_param(m), t)
            for n in range(m, self.N + 1):
                j0 = col[(n, m, 0)]
                out[:, j0:j0 + Y.shape[1]] = lag[n - m][:, None] * Y
        return out


def basis_eval_L(idx, d, kappa, x, t):
    """Value of L^n_{m,l} at surface points."""
    n, m, ell = idx
    Y = cached_basis(d, tuple(np.ravel(kappa)), m)(np.atleast_2d(x))[:, ell]
    a = 2 * m + 2 * float(np.sum(kappa)) + d - 2
    lag = laguerre_all(n - m, a, np.atleast_1d(t))[n - m]
    return lag * Y


@dataclass
class ExpansionCoeffs:
    """Fourier-Laguerre coefficients indexed like ``basis.index``."""

    basis: SurfaceBasis
    values: np.ndarray
    norms: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.norms is None:
            self.norms = self.basis.norms

    def as_dict(self):
        return {k: float(v) for k, v in zip(self.basis.index, self.values)}

    def parseval(self):
        return float(np.sum(self.values ** 2 * self.norms))


def fourier_coeffs(f, d, kappa, N, rule=None, degree=None):
    """All f^n_{m,l} = <f, L^n_{m,l}> / h_{m,n} for n <= N.

    ``f`` takes (x, t) arrays.  The default rule has degree 2N + 8, exact
    for polynomial f up to degree N + 8.
    """
    basis = SurfaceBasis(d, kappa, N)
    if rule is None:
        rule = cone_surface_rule(d, kappa, degree if degree is not None else 2 * N + 8)
    fv = np.asarray(f(rule.x, rule.t), float)
    B = basis.evaluate(rule.x, rule.t)
    vals = (B * (rule.weights * fv)[:, None]).sum(axis=0) / basis.norms
    return ExpansionCoeffs(basis, vals)


def projection(coeffs, x, t, n):
    """proj_n f at points."""
    basis = coeffs.basis
    if n > basis.N:
        raise IndexError(f"degree {n} beyond stored N={basis.N}")
    sl = basis.degree_slice(n)
    B = basis.evaluate(x, t)[:, sl]
    return B @ coeffs.values[sl]


def _projections(coeffs, x, t, n):
    basis = coeffs.basis
    if n > basis.N:
        raise IndexError(f"degree {n} beyond stored N={basis.N}")
    B = basis.evaluate(x, t)
    parts = B * coeffs.values[None, :]
    return np.stack([parts[:, basis.degree_slice(k)].sum(axis=1) for k in range(n + 1)])


def partial_sum(coeffs, x, t, n):
    """S_n f = sum_{k<=n} proj_k f."""
    return _projections(coeffs, x, t, n).sum(axis=0)


def cesaro_mean(coeffs, x, t, n, delta):
    """(C, delta) mean: sum_k A_{n-k}^delta / A_n^delta proj_k f."""
    w = cesaro_weights(n, delta)
    return w @ _projections(coeffs, x, t, n)


# ----------------------------------------------------------------------------
# Jacobi-type family on t <= 1
# ----------------------------------------------------------------------------

def log_basis_norm_J(n, m, d, kappa, gamma):
    if m > n or m < 0:
        raise IndexError(f"need 0 <= m <= n, got m={m}, n={n}")
    a = 2 * float(np.sum(kappa)) + d - 2
    ratio = (gammaln(a + 1 + 2 * m) - gammaln(a + 1)
             - gammaln(a + gamma + 2 + 2 * m) + gammaln(a + gamma + 2))
    return ratio + log_jacobi_norm(n - m, 2 * m + a, gamma)


def basis_norm_J(n, m, kappa, gamma, d):
    """h^J_{m,n} = (2|kappa|+d-1)_{2m}/(2|kappa|+gamma+d)_{2m} h_{n-m}^{(2m+2|kappa|+d-2, gamma)}."""
    return float(np.exp(log_basis_norm_J(n, m, d, kappa, gamma)))


def basis_eval_J(idx, d, kappa, gamma, x, t):
    """J^n_{m,l}(x,t) = P_{n-m}^{(2m+2|kappa|+d-2, gamma)}(1-2t) Y_l^m(x)."""
    if not gamma > -1:
        raise ParameterDomainError("gamma must exceed -1")
    n, m, ell = idx
    Y = cached_basis(d, tuple(np.ravel(kappa)), m)(np.atleast_2d(x))[:, ell]
    a = 2 * m + 2 * float(np.sum(kappa)) + d - 2
    return jacobi(n - m, a, gamma, 1 - 2 * np.atleast_1d(np.asarray(t, float))) * Y


class JacobiSurfaceBasis:
    """All J^n_{m,l} with n <= N, ordered as in :class:`SurfaceBasis`."""

    def __init__(self, d, kappa, gamma, N):
        self.d = int(d)
        self.kappa = tuple(float(k) for k in np.ravel(kappa))
        self.gamma = float(gamma)
        self.N = int(N)
        self.harm = [cached_basis(self.d, self.kappa, m) for m in range(self.N + 1)]
        self.index = [(n, m, ell) for n in range(N + 1) for m in range(n + 1)
                      for ell in range(self.harm[m].count)]
        self._n = np.array([i[0] for i in self.index], dtype=int)
        self.log_norms = np.array([log_basis_norm_J(n, m, self.d, self.kappa, self.gamma)
                                   for n, m, _ in self.index])
        self.norms = np.exp(self.log_norms)

    def degree_slice(self, n):
        return np.flatnonzero(self._n == n)

    def evaluate(self, x, t):
        x = np.atleast_2d(np.asarray(x, float))
        y = 1 - 2 * np.atleast_1d(np.asarray(t, float))
        a0 = 2 * sum(self.kappa) + self.d - 2
        out = np.empty((x.shape[0], len(self.index)))
        for j, (n, m, ell) in enumerate(self.index):
            if ell == 0:
                Y = self.harm[m](x)
                P = jacobi(n - m, 2 * m + a0, self.gamma, y)
            out[:, j] = P * Y[:, ell]
        return out


def jacobi_gram(d, kappa, gamma, N):
    """Gram matrix of the Jacobi family under the normalised truncated-cone rule."""
    basis = JacobiSurfaceBasis(d, kappa, gamma, N)
    rule = jacobi_cone_rule(d, kappa, gamma, 2 * N + 2)
    B = basis.evaluate(rule.x, rule.t)
    return (B * rule.weights[:, None]).T @ B, basis.norms


def jacobi_to_laguerre_limit_check(idx, d, kappa, gammas, x, t):
    """Errors |gamma^m J(x/gamma, t/gamma) - L(x,t)| and |gamma^{2m} h^J - h| over gammas."""
    n, m, _ = idx
    ref = basis_eval_L(idx, d, kappa, x, t)
    href = basis_norm(n, m, kappa, d)
    val_err = []
    norm_err = []
    for g in gammas:
        val = g ** m * basis_eval_J(idx, d, kappa, g, np.atleast_2d(x) / g, np.atleast_1d(t) / g)
        val_err.append(float(np.max(np.abs(val - ref))))
        hj = np.exp(2 * m * np.log(g) + log_basis_norm_J(n, m, d, kappa, g))
        norm_err.append(float(abs(hj - href)))
    return np.array(val_err), np.array(norm_err)
