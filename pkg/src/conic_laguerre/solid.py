"""Laguerre expansions on the solid cone ||x|| <= t.

The weight is W_{kappa,mu}(x,t) = h_kappa^2(x) (t^2-||x||^2)^{mu-1/2} e^{-t}.
Writing X = (x, sqrt(t^2-||x||^2)) lifts the solid cone onto half of the
conic surface in one dimension higher, with the weight of bold kappa =
(kappa, mu).  Kernels, translation and Cesaro means are obtained from the
surface machinery through this lift; direct solid quadrature serves as an
independent cross-check.
"""
from math import comb

import numpy as np

from .harmonics import cached_basis, eval_monomials, monomial_exponents
from .kernels import (
    _Axes,
    _pairs,
    _rows,
    _scalar,
    kernel_addition,
    kernel_from_axes,
    poisson_from_axes,
    translate_pairs,
)
from .quadrature import cone_surface_rule, solid_cone_rule, sphere_rule
from .special import ParameterDomainError, b_const, cesaro_weights, laguerre, laguerre_all, laguerre_norm
from .surface import dim_surface, log_basis_norm
from .translation import (
    abs_integral_rows,
    laguerre_combination,
    norm_line,
    operator_norm_1d_alpha,
)


def alpha_solid(d, kappa, mu):
    """alpha_{kappa,mu} = |kappa| + mu + (d-1)/2."""
    return float(np.sum(kappa)) + mu + (d - 1) / 2.0


def bold_kappa(kappa, mu):
    return tuple(float(k) for k in np.ravel(kappa)) + (float(mu),)


def check_solid_point(x, t, tol=1e-12):
    x = _rows(x)
    t = np.atleast_1d(np.asarray(t, float))
    if np.any(t < 0) or np.any(np.linalg.norm(x, axis=1) > t * (1 + tol) + tol):
        raise ParameterDomainError("points must satisfy ||x|| <= t")
    return x, t


def lift(x, t, sign=1.0):
    """X = (x, +-sqrt(t^2 - ||x||^2)) on the surface one dimension up."""
    x = _rows(x)
    t = np.atleast_1d(np.asarray(t, float))
    last = np.sqrt(np.clip(t * t - np.sum(x * x, axis=1), 0.0, None))
    return np.concatenate([x, sign * last[:, None]], axis=1)


def dim_solid(d, n):
    """dim V_n(V^{d+1}) = binom(n+d, n)."""
    return comb(n + d, n) if n >= 0 else 0


# ----------------------------------------------------------------------------
# bases
# ----------------------------------------------------------------------------

class BallBasis:
    """Orthonormal basis of V_m(B^d, h_kappa^2 (1-|x|^2)^{mu-1/2}).

    Built from the h-harmonics on S^d with weight (kappa, mu) that are even
    in the last variable.  ``homogeneous(x, t)`` returns t^m P(x/t).
    """

    def __init__(self, d, kappa, mu, m):
        if not mu > -0.5:
            raise ParameterDomainError("mu must exceed -1/2")
        self.d, self.m, self.mu = int(d), int(m), float(mu)
        self.kappa = tuple(float(k) for k in np.ravel(kappa))
        self.harm = cached_basis(self.d + 1, bold_kappa(self.kappa, mu), self.m, even_last=True)

    @property
    def count(self):
        return self.harm.count

    def __call__(self, x):
        return self.homogeneous(x, np.ones(_rows(x).shape[0]))

    def homogeneous(self, x, t):
        return self.harm(lift(x, t))


def ball_basis(d, kappa, mu, m):
    return BallBasis(d, kappa, mu, m)


def log_basis_norm_solid(n, m, d, kappa, mu):
    return log_basis_norm(n, m, d + 1, bold_kappa(kappa, mu))


def basis_norm_solid(n, m, kappa, mu, d):
    """h^L_{m,n} = (2|kappa|+2mu+d)_{n+m} / (n-m)!."""
    return float(np.exp(log_basis_norm_solid(n, m, d, kappa, mu)))


class SolidBasis:
    """All bold L^n_{m,k} with n <= N, ordered by (n, m, k)."""

    def __init__(self, d, kappa, mu, N):
        self.d, self.N, self.mu = int(d), int(N), float(mu)
        self.kappa = tuple(float(k) for k in np.ravel(kappa))
        if len(self.kappa) != self.d:
            raise ParameterDomainError("kappa length must equal d")
        self.ball = [BallBasis(d, kappa, mu, m) for m in range(self.N + 1)]
        self.index = [(n, m, k) for n in range(self.N + 1) for m in range(n + 1)
                      for k in range(self.ball[m].count)]
        self._n = np.array([i[0] for i in self.index], dtype=int)
        self.log_norms = np.array([log_basis_norm_solid(n, m, d, self.kappa, mu)
                                   for n, m, _ in self.index])
        self.norms = np.exp(self.log_norms)
        self.a0 = 2 * sum(self.kappa) + 2 * self.mu + self.d - 1

    def degree_slice(self, n):
        return np.flatnonzero(self._n == n)

    def evaluate(self, x, t):
        x = _rows(x)
        t = np.atleast_1d(np.asarray(t, float))
        out = np.empty((x.shape[0], len(self.index)))
        col = {key: j for j, key in enumerate(self.index)}
        for m in range(self.N + 1):
            Y = self.ball[m].homogeneous(x, t)
            lag = laguerre_all(self.N - m, 2 * m + self.a0, t)
            for n in range(m, self.N + 1):
                j0 = col[(n, m, 0)]
                out[:, j0:j0 + Y.shape[1]] = lag[n - m][:, None] * Y
        return out


def basis_eval_solid(idx, d, kappa, mu, x, t):
    n, m, k = idx
    a = 2 * m + 2 * float(np.sum(kappa)) + 2 * mu + d - 1
    Y = BallBasis(d, kappa, mu, m).homogeneous(x, t)[:, k]
    return laguerre(n - m, a, np.atleast_1d(np.asarray(t, float))) * Y


def solid_gram(d, kappa, mu, N):
    """Gram matrix under the direct solid-cone rule, with the predicted norms."""
    basis = SolidBasis(d, kappa, mu, N)
    rule = solid_cone_rule(d, kappa, mu, 2 * N + 2)
    B = basis.evaluate(rule.x, rule.t)
    return (B * rule.weights[:, None]).T @ B, basis.norms


def solid_fourier_coeffs(f, d, kappa, mu, N, degree=None):
    basis = SolidBasis(d, kappa, mu, N)
    rule = solid_cone_rule(d, kappa, mu, degree if degree is not None else 2 * N + 8)
    fv = np.asarray(f(rule.x, rule.t), float)
    B = basis.evaluate(rule.x, rule.t)
    return basis, (B * (rule.weights * fv)[:, None]).sum(axis=0) / basis.norms


def solid_partial_sum(basis, coeffs, x, t, n, delta=0.0):
    """(C, delta) mean of the solid-cone expansion (delta = 0 is the partial sum)."""
    B = basis.evaluate(x, t) * coeffs[None, :]
    proj = np.stack([B[:, basis.degree_slice(k)].sum(axis=1) for k in range(n + 1)])
    return cesaro_weights(n, delta) @ proj


# ----------------------------------------------------------------------------
# lift
# ----------------------------------------------------------------------------

def lift_integral_check(f, d, kappa, mu, degree):
    """Both sides of: surface integral of f over V_0^{d+2} = solid integral of (f(X)+f(X^-))/2.

    ``f`` takes (X, t) with X of width d+1; both sides normalised.
    """
    bk = bold_kappa(kappa, mu)
    surf = cone_surface_rule(d + 1, bk, degree)
    lhs = float(np.dot(surf.weights, f(surf.x, surf.t)))
    sol = solid_cone_rule(d, kappa, mu, degree)
    sym = 0.5 * (f(lift(sol.x, sol.t), sol.t) + f(lift(sol.x, sol.t, -1.0), sol.t))
    rhs = float(np.dot(sol.weights, sym))
    return lhs, rhs


def lift_check(d, kappa, mu, n):
    """Orthogonality of the lifted families Y^{n,1}, Y^{n,2} on V_0^{d+2}.

    Y^{n,1} = bold L^n(W_{kappa,mu}) and Y^{n,2} = X_{d+1} bold L^{n-1}(W_{kappa,mu+1}).
    Returns a dict with the Gram deviation, the leakage onto lower degrees,
    the norm-ratio check and the dimension bookkeeping.
    """
    bk = bold_kappa(kappa, mu)
    rule = cone_surface_rule(d + 1, bk, 2 * n + 4)
    X, t = rule.x, rule.t
    x = X[:, :d]
    cols, pred = [], []
    b1 = SolidBasis(d, kappa, mu, n)
    sl1 = b1.degree_slice(n)
    cols.append(b1.evaluate(x, t)[:, sl1])
    pred.append(b1.norms[sl1])
    count2 = 0
    if n >= 1:
        b2 = SolidBasis(d, kappa, mu + 1, n - 1)
        sl2 = b2.degree_slice(n - 1)
        cols.append(X[:, d:d + 1] * b2.evaluate(x, t)[:, sl2])
        # <X_{d+1}^2> under the normalised surface weight converts the norms
        a = 2 * sum(bk) + d - 1
        ratio = (a + 1) * (a + 2) * (mu + 0.5) / (sum(bk) + (d + 1) / 2.0)
        pred.append(ratio * b2.norms[sl2])
        count2 = sl2.size
    Y = np.concatenate(cols, axis=1)
    G = (Y * rule.weights[:, None]).T @ Y
    h = np.concatenate(pred)
    gram_dev = float(np.max(np.abs(G - np.diag(h)) / np.sqrt(np.outer(h, h))))
    # orthogonality to every monomial of degree < n in (X, t)
    lows = [eval_monomials(np.column_stack([X, t]), monomial_exponents(d + 2, k)) for k in range(n)]
    leak = 0.0
    if lows:
        M = np.concatenate(lows, axis=1)
        inner = (M * rule.weights[:, None]).T @ Y
        scale = np.sqrt((M * M * rule.weights[:, None]).sum(axis=0))[:, None] * np.sqrt(h)[None, :]
        leak = float(np.max(np.abs(inner) / scale))
    dims = (dim_surface(d + 1, n), dim_solid(d, n), dim_solid(d, n - 1))
    return {
        "gram_dev": gram_dev,
        "leak": leak,
        "count": (sl1.size, count2),
        "dims": dims,
        "dims_ok": dims[0] == dims[1] + dims[2] and sl1.size == dims[1] and count2 == dims[2],
    }


# ----------------------------------------------------------------------------
# kernels
# ----------------------------------------------------------------------------

def solid_axes(kappa, mu, x, t, y, s):
    kappa = np.ravel(np.asarray(kappa, float))
    xl = lift(x, t)
    yl = lift(y, s)
    kinds = [("phi", float(k)) for k in kappa] + [("sym", float(mu))]
    return _Axes(kinds, xl * yl)


def _solid_pairs(x, t, y, s):
    x, t, y, s = _pairs(x, t, y, s)
    return np.ascontiguousarray(x), np.ascontiguousarray(t), np.ascontiguousarray(y), np.ascontiguousarray(s)


def kernel_solid_sum(d, kappa, mu, n, x, t, y, s, basis=None):
    x, t, y, s = _solid_pairs(x, t, y, s)
    if basis is None or basis.N < n:
        basis = SolidBasis(d, kappa, mu, n)
    sl = basis.degree_slice(n)
    A = basis.evaluate(x, t)[:, sl]
    B = basis.evaluate(y, s)[:, sl]
    return _scalar(np.sum(A * B / basis.norms[sl], axis=1))


def _check_closed(d, kappa, mu):
    alpha = alpha_solid(d, kappa, mu)
    if mu < 0 or np.any(np.asarray(kappa) < 0):
        raise ParameterDomainError("closed solid kernels need kappa_i >= 0 and mu >= 0")
    if not alpha > 0:
        raise ParameterDomainError("closed solid kernels need alpha_{kappa,mu} > 0")
    return alpha


def kernel_solid_closed(d, kappa, mu, n, x, t, y, s):
    """Integral form with the symmetric (1-u^2)^{mu-1} factor on the last axis."""
    x, t, y, s = _solid_pairs(x, t, y, s)
    alpha = _check_closed(d, kappa, mu)
    return _scalar(kernel_from_axes(alpha, n, t, s, solid_axes(kappa, mu, x, t, y, s)))


def kernel_solid_symmetrized(d, kappa, mu, N, x, t, y, s):
    """(P_n(X, Y) + P_n(X, Y^-)) / 2 on V_0^{d+2}, for n = 0..N (shape (N+1, P))."""
    x, t, y, s = _solid_pairs(x, t, y, s)
    bk = bold_kappa(kappa, mu)
    X = lift(x, t)
    plus = kernel_addition(d + 1, bk, N, X, t, lift(y, s), s)
    minus = kernel_addition(d + 1, bk, N, X, t, lift(y, s, -1.0), s)
    return 0.5 * (plus + minus)


def poisson_solid(d, kappa, mu, r, x, t, y, s):
    x, t, y, s = _solid_pairs(x, t, y, s)
    alpha = _check_closed(d, kappa, mu)
    return _scalar(poisson_from_axes(alpha, r, t, s, solid_axes(kappa, mu, x, t, y, s)))


def poisson_solid_series(d, kappa, mu, r, x, t, y, s, N=120):
    P = kernel_solid_symmetrized(d, kappa, mu, N, x, t, y, s)
    terms = P * (r ** np.arange(N + 1))[:, None]
    return _scalar(terms.sum(axis=0))


# ----------------------------------------------------------------------------
# translation, convolution, Cesaro
# ----------------------------------------------------------------------------

def translate_solid(d, kappa, mu, x, t, g, y, s, q=None, nv0=24):
    """bold T_{(x,t)} g (y,s) by the integral form."""
    x, t, y, s = _solid_pairs(x, t, y, s)
    alpha = _check_closed(d, kappa, mu)
    return _scalar(translate_pairs(alpha, g, t, s, solid_axes(kappa, mu, x, t, y, s), q=q, nv0=nv0))


def translate_solid_symmetrized(d, kappa, mu, x, t, coeffs, y, s):
    """Same operator for g = sum c_k L_k^{2 alpha}, via the lifted surface kernels."""
    coeffs = np.asarray(coeffs, float)
    P = kernel_solid_symmetrized(d, kappa, mu, coeffs.size - 1, x, t, y, s)
    return _scalar(coeffs @ P)


def convolve_solid(d, kappa, mu, f, g, x, t, rule, q=None):
    """f *_V g at solid points using a solid-cone rule adequate for f T g."""
    x = _rows(x)
    t = np.atleast_1d(np.asarray(t, float))
    fv = np.asarray(f(rule.x, rule.t), float)
    out = np.empty(t.size)
    Qn = rule.t.size
    for i in range(t.size):
        Tg = translate_solid(d, kappa, mu, np.repeat(x[i:i + 1], Qn, 0), np.full(Qn, t[i]),
                             g, rule.x, rule.t, q=q)
        out[i] = np.dot(rule.weights, fv * np.atleast_1d(Tg))
    return _scalar(out)


def cesaro_kernel_solid(d, kappa, mu, delta, n, x, t, y, s):
    """bold K_n^delta via the Cesaro-weighted lifted kernels."""
    P = kernel_solid_symmetrized(d, kappa, mu, n, x, t, y, s)
    return _scalar(cesaro_weights(n, delta) @ P)


def operator_norm_solid(d, kappa, mu, delta, n):
    """The one-variable reduction with alpha = alpha_{kappa,mu}."""
    return operator_norm_1d_alpha(alpha_solid(d, kappa, mu), delta, n)


def solid_abs_norm(d, kappa, mu, F, sphere_degree=30, smax=120.0, ngrid=400, weight_shift=0.0):
    """||F||_{1,kappa,mu} for F(Y, s) given on the lifted surface (Y of width d+1).

    Evaluated as the surface norm on V_0^{d+2} of the even extension, which
    is what the lift identity gives.
    """
    bk = bold_kappa(kappa, mu)
    sr = sphere_rule(d + 1, bk, sphere_degree)
    two_alpha = 2 * alpha_solid(d, kappa, mu)

    def G(rows, s):
        return F(sr.points[rows] * s[:, None], s)

    per_row = abs_integral_rows(G, sr.weights.size, two_alpha + weight_shift, smax, ngrid)
    return b_const(two_alpha) * float(np.dot(sr.weights, per_row))


def translation_bound_check_solid(d, kappa, mu, x, t, coeffs, sphere_degree=30, ngrid=400):
    """Both sides of the solid-cone L^1 translation bound for g = sum c_k L_k^{2 alpha}.

    For alpha >= 1/2 the right side is e^{t/2} ||g||_{1,u(2 alpha)}.  Below
    1/2 the displayed two-term bound adds sqrt(t) e^{t/2} ||g||_{1,u(2 alpha+1/2)};
    ``slack_sharp`` also reports the version with the surface constant
    1/((2 alpha+1) sqrt(pi)), which the lift implies.
    """
    alpha = alpha_solid(d, kappa, mu)
    coeffs = np.asarray(coeffs, float)
    K = coeffs.size - 1
    x = np.asarray(x, float).ravel()
    g = laguerre_combination(coeffs, 2 * alpha)
    bk = bold_kappa(kappa, mu)
    X = lift(x[None], np.array([t]))[0]

    def F(Y, s):
        P = s.size
        Pk = kernel_addition(d + 1, bk, K, np.repeat(X[None], P, 0), np.full(P, t), Y, s)
        Ym = Y.copy()
        Ym[:, -1] *= -1
        Pm = kernel_addition(d + 1, bk, K, np.repeat(X[None], P, 0), np.full(P, t), Ym, s)
        return coeffs @ (0.5 * (Pk + Pm))

    top = 4 * K + 2 * alpha + 60
    lhs = solid_abs_norm(d, kappa, mu, F, sphere_degree=sphere_degree, smax=top, ngrid=ngrid)
    base = np.exp(t / 2) * norm_line(g, 2 * alpha, 1, smax=top, ngrid=ngrid)
    out = {"lhs": lhs, "two_term": alpha < 0.5}
    if alpha < 0.5:
        extra = np.sqrt(t) * np.exp(t / 2) * norm_line(g, 2 * alpha + 0.5, 1, smax=top, ngrid=ngrid)
        rhs = base + extra
        sharp = base + extra / ((2 * alpha + 1) * np.sqrt(np.pi))
    else:
        rhs = sharp = base
    out.update(rhs=float(rhs), slack=float((rhs - lhs) / rhs),
               slack_sharp=float((sharp - lhs) / sharp))
    return out


# ----------------------------------------------------------------------------
# the wedge (d = 1)
# ----------------------------------------------------------------------------

def wedge_weight_ratio(kappa, mu, x, t):
    """W_{kappa,mu}(x,t) / U_{kappa,mu}((t+x)/2, (t-x)/2) at sample points (should be constant)."""
    x = np.asarray(x, float)
    t = np.asarray(t, float)
    W = np.abs(x) ** (2 * kappa) * (t * t - x * x) ** (mu - 0.5) * np.exp(-t)
    x1, x2 = (t + x) / 2, (t - x) / 2
    U = np.abs(x1 - x2) ** (2 * kappa) * np.abs(x1 * x2) ** (mu - 0.5) * np.exp(-x1 - x2)
    return W / U


def product_laguerre_kernel(mu, n, x1, x2, y1, y2):
    """sum_{j+k=n} L_j(x1) L_j(y1) L_k(x2) L_k(y2) / (h_j h_k) for w_{mu-1/2} x w_{mu-1/2}."""
    a = mu - 0.5
    Lx1, Ly1 = laguerre_all(n, a, x1), laguerre_all(n, a, y1)
    Lx2, Ly2 = laguerre_all(n, a, x2), laguerre_all(n, a, y2)
    out = 0.0
    for j in range(n + 1):
        k = n - j
        out = out + Lx1[j] * Ly1[j] * Lx2[k] * Ly2[k] / (laguerre_norm(j, a) * laguerre_norm(k, a))
    return out


def wedge_map_check(kappa, mu, n, x, t, y, s):
    """Weight-ratio spread and, for kappa = 0, kernel mismatch against the product-Laguerre kernel."""
    ratio = wedge_weight_ratio(kappa, mu, x, t)
    spread = float((ratio.max() - ratio.min()) / ratio.max())
    out = {"ratio": float(ratio.mean()), "ratio_spread": spread,
           "ratio_expected": 4.0 ** (mu - 0.5)}
    if kappa == 0:
        Kv = np.atleast_1d(kernel_solid_sum(1, [0.0], mu, n, np.asarray(x)[:, None], t,
                                            np.asarray(y)[:, None], s))
        Kp = product_laguerre_kernel(mu, n, (t + x) / 2, (t - x) / 2, (s + y) / 2, (s - y) / 2)
        out["kernel_err"] = float(np.max(np.abs(Kv - Kp) / np.maximum(1.0, np.abs(Kp))))
        out["values"] = (Kv, Kp)
    return out
