"""Orthonormal h-harmonics for the weight prod |x_i|^{2 kappa_i} on the sphere.

Bases are built numerically: within each parity class of exponents, the
degree-m monomials are orthogonalised against |x|^2 times the degree m-2
monomials (which on the sphere span the lower-degree restrictions).  Only
basis-invariant quantities such as the reproducing kernel are exported
downstream.
"""
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .quadrature import intertwin_rule, sphere_rule
from .special import ParameterDomainError, gegenbauer_Z


def dim_harmonics(d, m):
    """a_m^d = binom(m+d-1, m) - binom(m+d-3, m-2)."""
    if m < 0:
        return 0
    lower = comb(m + d - 3, m - 2) if m >= 2 else 0
    return comb(m + d - 1, m) - lower


@lru_cache(maxsize=None)
def monomial_exponents(d, m):
    """All exponent vectors of total degree m in d variables (lexicographic)."""
    if d == 1:
        return np.array([[m]], dtype=int)
    rows = []
    for first in range(m, -1, -1):
        for rest in monomial_exponents(d - 1, m - first):
            rows.append((first,) + tuple(rest))
    return np.array(rows, dtype=int)


def eval_monomials(x, exps):
    """Matrix of x^e for rows of x (P, d) and exponents (M, d)."""
    x = np.atleast_2d(np.asarray(x, float))
    out = np.ones((x.shape[0], exps.shape[0]))
    for j in range(exps.shape[1]):
        col = exps[:, j]
        top = int(col.max()) if col.size else 0
        powers = x[:, j:j + 1] ** np.arange(top + 1)[None, :]
        out *= powers[:, col]
    return out


@dataclass(frozen=True)
class HarmonicBasis:
    """Orthonormal basis of H_m^d(h_kappa^2) as coefficient tables over monomials.

    Evaluation is homogeneous of degree m, so ``basis(x)`` at |x| = t gives
    t^m Y(x/t).
    """

    d: int
    kappa: tuple
    m: int
    exponents: np.ndarray  # (M, d)
    coeffs: np.ndarray     # (M, a)

    @property
    def count(self):
        return self.coeffs.shape[1]

    def __call__(self, x):
        return eval_monomials(x, self.exponents) @ self.coeffs


def _square_exponents(d):
    return np.eye(d, dtype=int) * 2


def build_basis(d, kappa, m, rng=None, even_last=False, degree=None):
    """Orthonormal h-harmonics of degree m.

    Parameters
    ----------
    rng : numpy Generator, optional
        Randomises the orthogonalisation order and mixes each parity class
        by a random orthogonal matrix; used to test basis independence.
    even_last : bool
        Keep only harmonics even in the last variable (the ball chart).
    """
    kappa = np.asarray(kappa, float).ravel()
    if kappa.size != d:
        raise ParameterDomainError("kappa length must equal d")
    if np.any(kappa <= -0.5):
        raise ParameterDomainError("kappa entries must exceed -1/2")
    if m < 0:
        raise ParameterDomainError("degree must be nonnegative")
    exps = monomial_exponents(d, m)
    if m == 0:
        return HarmonicBasis(d, tuple(kappa), 0, exps, np.ones((1, 1)))
    deg = 2 * m + 2 if degree is None else degree
    rule = sphere_rule(d, kappa, deg)
    sw = np.sqrt(rule.weights)[:, None]
    lower = monomial_exponents(d, m - 2) if m >= 2 else np.zeros((0, d), int)
    index = {tuple(e): i for i, e in enumerate(exps)}
    blocks = []
    parities = {tuple(p) for p in exps % 2}
    for par in sorted(parities):
        if even_last and par[-1] == 1:
            continue
        cols = np.flatnonzero(np.all(exps % 2 == par, axis=1))
        if rng is not None:
            cols = rng.permutation(cols)
        low = lower[np.all(lower % 2 == par, axis=1)] if lower.size else lower
        A = sw * eval_monomials(rule.points, exps[cols])
        M = cols.size
        # |x|^2 * x^e for each lower monomial, written in the local columns
        local = {c: j for j, c in enumerate(cols)}
        E = np.zeros((M, low.shape[0]))
        for j, e in enumerate(low):
            for sq in _square_exponents(d):
                E[local[index[tuple(e + sq)]], j] += 1.0
        P = np.eye(M)
        if low.shape[0]:
            Q, R = np.linalg.qr(A @ E)
            # two passes of projection for stability
            for _ in range(2):
                proj = np.linalg.solve(R, Q.T @ (A @ P))
                P = P - E @ proj
        U, S, Vt = np.linalg.svd(A @ P, full_matrices=False)
        r = M - low.shape[0]
        if r <= 0:
            continue
        if S[r - 1] < 1e-10 * S[0]:
            raise ArithmeticError(f"rank deficiency building degree {m} h-harmonics")
        C = P @ Vt[:r].T / S[:r]
        # one reorthonormalisation sweep
        G = (A @ C).T @ (A @ C)
        L = np.linalg.cholesky(G)
        C = C @ np.linalg.inv(L).T
        if rng is not None:
            Qr, _ = np.linalg.qr(rng.standard_normal((r, r)))
            C = C @ Qr
        full = np.zeros((exps.shape[0], r))
        full[cols] = C
        blocks.append(full)
    coeffs = np.concatenate(blocks, axis=1) if blocks else np.zeros((exps.shape[0], 0))
    return HarmonicBasis(d, tuple(kappa), m, exps, coeffs)


_BASIS_CACHE = {}


def cached_basis(d, kappa, m, even_last=False):
    key = (d, tuple(float(k) for k in np.ravel(kappa)), m, even_last)
    b = _BASIS_CACHE.get(key)
    if b is None:
        b = build_basis(d, kappa, m, even_last=even_last)
        _BASIS_CACHE[key] = b
    return b


def kernel_sum(basis, xi, eta):
    """sum_l Y_l(xi) Y_l(eta) for points xi, eta (broadcast over rows)."""
    a = basis(np.atleast_2d(xi))
    b = basis(np.atleast_2d(eta))
    out = np.sum(a * b, axis=1)
    return out if out.size > 1 else float(out[0])


def alpha_sphere(d, kappa):
    """|kappa| + (d-2)/2, the Gegenbauer index of the addition formula."""
    return float(np.sum(kappa)) + (d - 2) / 2.0


def kernel_closed(d, kappa, n, xi, eta, q=None):
    """V_kappa[Z_n^{|kappa|+(d-2)/2}(<xi, .>)](eta), exact by Gauss-Jacobi."""
    kappa = np.asarray(kappa, float).ravel()
    lam = alpha_sphere(d, kappa)
    rule = intertwin_rule(kappa, n // 2 + 2 if q is None else q)
    xi = np.atleast_2d(np.asarray(xi, float))
    eta = np.atleast_2d(np.asarray(eta, float))
    arg = (xi * eta) @ rule.u.T   # (P, Q)
    vals = gegenbauer_Z(n, lam, arg.ravel()).reshape(arg.shape)
    out = vals @ rule.weights
    return out if out.size > 1 else float(out[0])


def kernel_closed_all(d, kappa, N, xi, eta):
    """Sphere kernels for degrees 0..N at pairs of rows, shape (N+1, P)."""
    kappa = np.asarray(kappa, float).ravel()
    lam = alpha_sphere(d, kappa)
    rule = intertwin_rule(kappa, N // 2 + 2)
    xi = np.atleast_2d(np.asarray(xi, float))
    eta = np.atleast_2d(np.asarray(eta, float))
    arg = (xi * eta) @ rule.u.T
    w = rule.weights
    out = np.empty((N + 1, xi.shape[0] if xi.shape[0] > 1 else eta.shape[0]))
    out[0] = 1.0
    if N == 0:
        return out
    # Z_k = (k + lam) D_k with D_k = C_k^lam / lam; reduce each degree as we go
    d_prev = None
    d_cur = 2.0 * arg
    out[1] = (1 + lam) * (d_cur @ w)
    for k in range(1, N):
        if k == 1:
            d_next = (1.0 + lam) * arg * d_cur - 1.0
        else:
            d_next = (2.0 * (k + lam) * arg * d_cur - (k + 2.0 * lam - 1.0) * d_prev) / (k + 1)
        d_prev, d_cur = d_cur, d_next
        out[k + 1] = (k + 1 + lam) * (d_cur @ w)
    return out
