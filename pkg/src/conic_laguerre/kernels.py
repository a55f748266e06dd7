"""Reproducing and Poisson kernels on the conic surface.

Three evaluation routes are provided:

* ``kernel_sum``: the defining sum over an explicit orthonormal basis;
* ``kernel_addition``: the same sum collapsed with the h-harmonic addition
  formula, cheap enough for degrees in the hundreds;
* ``kernel_closed``: the integral representation over [-1,1]^{d+1}.

The closed form and the generalised translation share one pipeline
(:func:`translate_pairs`).  The inner variable v = cos(theta) is handled
by a Gauss-Jacobi rule whose size doubles until two successive answers
agree to a relative 1e-9 of the integrand's absolute mass.
"""
import numpy as np

from .harmonics import kernel_closed_all
from .quadrature import axis_rule, gauss_legendre, symmetric_rule
from .special import bessel_jhat, gegenbauer_Z, laguerre
from .surface import SurfaceBasis, JacobiSurfaceBasis, alpha_kappa, log_basis_norm

V_TOL = 1e-9
V_CAP = 512
U_CAP = 128
_CHUNK = 1 << 22


class ConvergenceError(ArithmeticError):
    """Quadrature refinement hit its cap; ``residual`` is the last change seen."""

    def __init__(self, msg, residual):
        super().__init__(f"{msg} (residual {residual:.3e})")
        self.residual = residual


# ----------------------------------------------------------------------------
# geometry
# ----------------------------------------------------------------------------

def _rows(a, width=None):
    a = np.atleast_2d(np.asarray(a, float))
    if width is not None and a.shape[1] != width:
        raise ValueError(f"expected points with {width} coordinates")
    return a


def rho(x, t, y, s, u):
    """rho(x,t,y,s;u) = sqrt((ts + sum x_i y_i u_i)/2) for rows of x, y and one u."""
    x, y = _rows(x), _rows(y)
    val = 0.5 * (np.asarray(t) * np.asarray(s) + (x * y) @ np.asarray(u, float))
    return np.sqrt(np.clip(val, 0.0, None))


class _Axes:
    """Per-axis description of the u-integral.

    ``kinds`` holds ('phi', kappa_i) for the (1+u)(1-u^2)^{kappa_i-1} factor
    and ('sym', mu) for the symmetric (1-u^2)^{mu-1} factor of the solid cone.
    """

    def __init__(self, kinds, coef):
        self.kinds = kinds
        self.coef = coef  # (P, k) products multiplying u_i inside rho^2

    def split(self):
        """Return (constant part (P,), active column indices)."""
        const = np.zeros(self.coef.shape[0])
        active = []
        for i, (kind, par) in enumerate(self.kinds):
            col = self.coef[:, i]
            if not np.any(col != 0):
                continue
            if kind == "phi" and par == 0:
                const += col
            else:
                active.append(i)
        return const, active

    def rule(self, q, active):
        grids = []
        for i in active:
            kind, par = self.kinds[i]
            if kind == "phi":
                grids.append(axis_rule(q, par))
            else:
                grids.append(symmetric_rule(q, par - 1.0))
        nodes = np.ones((1, 0))
        w = np.ones(1)
        for gx, gw in grids:
            nodes = np.concatenate([np.repeat(nodes, gx.size, axis=0),
                                    np.tile(gx, nodes.shape[0])[:, None]], axis=1)
            w = (w[:, None] * gw[None, :]).ravel()
        return nodes, w


def _rho_grid(ts, axes, q, active, const):
    nodes, w = axes.rule(q, active)
    r2 = 0.5 * (ts[:, None] + const[:, None] + axes.coef[:, active] @ nodes.T)
    return np.sqrt(np.clip(r2, 0.0, None)), w


def _u_average(F, ts, axes, q=None, q0=8, tol=V_TOL):
    """Average F(rho) over the u-rule; q fixed if given, else doubled to convergence."""
    const, active = axes.split()
    if not active:
        r = np.sqrt(np.clip(0.5 * (ts + const), 0.0, None))
        return F(r[:, None])[:, 0]
    if q is not None:
        R, w = _rho_grid(ts, axes, q, active, const)
        return F(R) @ w
    q = q0
    R, w = _rho_grid(ts, axes, q, active, const)
    vals = F(R)
    prev = vals @ w
    scale = np.abs(vals) @ w
    while True:
        q *= 2
        R, w = _rho_grid(ts, axes, q, active, const)
        vals = F(R)
        cur = vals @ w
        scale = np.maximum(scale, np.abs(vals) @ w)
        res = np.abs(cur - prev) / np.maximum(scale, 1e-300)
        if np.all(res <= tol):
            return cur
        if q >= U_CAP:
            raise ConvergenceError("u-rule did not converge", float(res.max()))
        prev = cur


# ----------------------------------------------------------------------------
# the v = cos(theta) integral
# ----------------------------------------------------------------------------

def _inner_v(alpha, g, ts_sum, R, nv):
    """Value and absolute mass of the theta-integral at rho = R (shape (P, Q))."""
    S = ts_sum[:, None, None]
    r = R[..., None]
    if alpha > 0:
        v, w = symmetric_rule(nv, alpha - 1.0)
        z = r * np.sqrt(1.0 - v * v)
        integ = g(S + 2 * r * v) * np.exp(-r * v) * bessel_jhat(alpha - 1.0, z)
        return integ @ w, np.abs(integ) @ w
    # alpha = 0: endpoint terms minus a j_1 correction
    gl = gauss_legendre(nv)
    v, w = gl.nodes, gl.weights
    z = r * np.sqrt(1.0 - v * v)
    integ = g(S + 2 * r * v) * np.exp(-r * v) * (0.5 * bessel_jhat(1.0, z))
    corr = 0.5 * R * R * (integ @ w)
    ends = 0.5 * (np.exp(-R) * g(ts_sum[:, None] + 2 * R)
                  + np.exp(R) * g(ts_sum[:, None] - 2 * R))
    mass = 0.5 * (np.abs(np.exp(-R) * g(ts_sum[:, None] + 2 * R))
                  + np.abs(np.exp(R) * g(ts_sum[:, None] - 2 * R))) \
        + 0.5 * R * R * (np.abs(integ) @ w)
    return ends - corr, mass


def _v_integral(alpha, g, ts_sum, R, nv0=24, tol=V_TOL):
    if not np.any(R):
        # rho = 0 (apex): the theta average of g(t+s) is g(t+s)
        return np.broadcast_to(g(ts_sum)[:, None], R.shape).copy()
    nv = nv0
    prev, mass = _inner_v(alpha, g, ts_sum, R, nv)
    while True:
        nv *= 2
        cur, m2 = _inner_v(alpha, g, ts_sum, R, nv)
        mass = np.maximum(mass, m2)
        res = np.abs(cur - prev) / np.maximum(mass, 1e-300)
        if np.all(res <= tol):
            return cur
        if nv >= V_CAP:
            raise ConvergenceError("theta-rule did not converge", float(res.max()))
        prev = cur


def _chunks(P, per_row):
    step = max(1, _CHUNK // max(per_row, 1))
    for i in range(0, P, step):
        yield slice(i, min(P, i + step))


def translate_pairs(alpha, g, t, s, axes, q=None, nv0=24):
    """Core of the translation operator for P point pairs.

    ``g`` is a vectorised callable on [0, inf).  ``axes`` carries the
    u-integral description; ``q`` fixes the u-rule size (exact for
    polynomial g of degree <= 2q-1) or, when None, doubles it.
    """
    t = np.atleast_1d(np.asarray(t, float))
    s = np.atleast_1d(np.asarray(s, float))
    ts = t * s
    tsum = t + s
    out = np.empty(t.size)
    qq = q if q is not None else 8
    nact = len(axes.split()[1])
    per = (qq ** nact) * 4 * nv0
    for sl in _chunks(t.size, per):
        sub = _Axes(axes.kinds, axes.coef[sl])
        F = (lambda R, ss=tsum[sl]: _v_integral(alpha, g, ss, R, nv0))
        out[sl] = _u_average(F, ts[sl], sub, q=q)
    return out


def surface_axes(kappa, x, y):
    kappa = np.ravel(np.asarray(kappa, float))
    return _Axes([("phi", float(k)) for k in kappa], _rows(x) * _rows(y))


# ----------------------------------------------------------------------------
# public kernels on the surface
# ----------------------------------------------------------------------------

def _pairs(x, t, y, s):
    x, y = _rows(x), _rows(y)
    t = np.atleast_1d(np.asarray(t, float))
    s = np.atleast_1d(np.asarray(s, float))
    P = max(x.shape[0], y.shape[0])
    x = np.broadcast_to(x, (P, x.shape[1]))
    y = np.broadcast_to(y, (P, y.shape[1]))
    return x, np.broadcast_to(t, (P,)), y, np.broadcast_to(s, (P,))


def _scalar(out):
    return float(out[0]) if out.size == 1 else out


def kernel_sum(d, kappa, n, x, t, y, s, basis=None):
    """P_n by summing L(p) L(q) / h over the degree-n slice of an explicit basis."""
    x, t, y, s = _pairs(x, t, y, s)
    if basis is None or basis.N < n:
        basis = SurfaceBasis(d, kappa, n)
    sl = basis.degree_slice(n)
    A = basis.evaluate(x, t)[:, sl]
    B = basis.evaluate(y, s)[:, sl]
    return _scalar(np.sum(A * B / basis.norms[sl], axis=1))


def _laguerre_param_table(N, a0, t):
    """L_k^{2m + a0}(t) for m, k with m + k <= N; array (N+1 [m], N+1 [k], P)."""
    t = np.atleast_1d(t)
    a = 2 * np.arange(N + 1, dtype=float)[:, None] + a0
    out = np.zeros((N + 1, N + 1, t.size))
    out[:, 0] = 1.0
    if N >= 1:
        out[:, 1] = 1.0 + a - t[None, :]
    for k in range(1, N):
        out[:, k + 1] = ((2 * k + 1 + a - t) * out[:, k] - (k + a) * out[:, k - 1]) / (k + 1)
    return out


def _addition_sum(N, two_alpha, log_norm, t, s, sphere):
    """Combine Laguerre factors with sphere kernels: P_n for n = 0..N."""
    Lt = _laguerre_param_table(N, two_alpha, t)
    Ls = _laguerre_param_table(N, two_alpha, s)
    ts = np.asarray(t) * np.asarray(s)
    P = ts.size
    out = np.zeros((N + 1, P))
    with np.errstate(divide="ignore", invalid="ignore"):
        logts = np.log(ts)
    for m in range(N + 1):
        if m == 0:
            powm = np.ones(P)
        else:
            powm = np.where(ts > 0, 1.0, 0.0)
        for k in range(N + 1 - m):
            n = m + k
            prod = Lt[m, k] * Ls[m, k]
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                mag = np.exp(np.log(np.abs(prod)) + (m * logts if m else 0.0) - log_norm(n, m))
            term = np.where(powm > 0, np.sign(prod) * mag, 0.0) * sphere[m]
            out[n] += np.nan_to_num(term)
    return out


def kernel_addition(d, kappa, N, x, t, y, s):
    """P_0 .. P_N at point pairs via the addition formula, shape (N+1, P)."""
    x, t, y, s = _pairs(x, t, y, s)
    kappa = np.ravel(np.asarray(kappa, float))
    with np.errstate(invalid="ignore", divide="ignore"):
        xi = np.where(t[:, None] > 0, x / np.where(t > 0, t, 1)[:, None], 0.0)
        eta = np.where(s[:, None] > 0, y / np.where(s > 0, s, 1)[:, None], 0.0)
    sphere = kernel_closed_all(d, kappa, N, xi, eta)
    if sphere.shape[1] != t.size:
        sphere = np.broadcast_to(sphere, (N + 1, t.size))
    two_alpha = 2 * kappa.sum() + d - 2
    return _addition_sum(N, two_alpha, lambda n, m: log_basis_norm(n, m, d, kappa), t, s, sphere)


def kernel_from_axes(alpha, n, t, s, axes, nv0=None):
    """Integral form of the reproducing kernel for a given u-integral description."""

    def g(z):
        return laguerre(n, 2 * alpha, z)

    return translate_pairs(alpha, g, t, s, axes, q=n // 2 + 2,
                           nv0=nv0 if nv0 is not None else 16 + n // 2)


def kernel_closed(d, kappa, n, x, t, y, s, nv0=None):
    """P_n from its integral representation (alpha_kappa > 0 or the alpha_kappa = 0 branch)."""
    x, t, y, s = _pairs(x, t, y, s)
    kappa = np.ravel(np.asarray(kappa, float))
    alpha = alpha_kappa(d, kappa)
    return _scalar(kernel_from_axes(alpha, n, t, s, surface_axes(kappa, x, y), nv0=nv0))


def kernel_apex(d, kappa, n, t):
    """P_n((x,t),(0,0)) = L_n^{2|kappa|+d-2}(t)."""
    return laguerre(n, 2 * alpha_kappa(d, kappa), t)


def poisson_from_axes(alpha, r, t, s, axes):
    """Closed Poisson kernel e^{-(t+s)r/(1-r)} (1-r)^{-2 alpha-1} E_u E_v exp(2 sqrt(r) v rho/(1-r))."""
    if not 0 <= r < 1:
        raise ValueError("need 0 <= r < 1")
    z = 2 * np.sqrt(r) / (1 - r)
    pref = np.exp(-(t + s) * r / (1 - r)) / (1 - r) ** (2 * alpha + 1)
    if alpha == 0:
        def F(R):
            return np.cosh(z * R)
    else:
        def F(R):
            return _v_exp(alpha, z, R)
    return pref * _u_average(F, t * s, axes)


def poisson_closed(d, kappa, r, x, t, y, s):
    """Poisson kernel sum_n P_n r^n from its closed form."""
    x, t, y, s = _pairs(x, t, y, s)
    kappa = np.ravel(np.asarray(kappa, float))
    alpha = alpha_kappa(d, kappa)
    return _scalar(poisson_from_axes(alpha, r, t, s, surface_axes(kappa, x, y)))


def _v_exp(alpha, z, R, tol=V_TOL):
    nv = 16
    v, w = symmetric_rule(nv, alpha - 1.0)
    prev = np.exp(z * R[..., None] * v) @ w
    while True:
        nv *= 2
        v, w = symmetric_rule(nv, alpha - 1.0)
        vals = np.exp(z * R[..., None] * v)
        cur = vals @ w
        res = np.abs(cur - prev) / cur
        if np.all(res <= tol):
            return cur
        if nv >= V_CAP:
            raise ConvergenceError("theta-rule did not converge", float(res.max()))
        prev = cur


def poisson_series(d, kappa, r, x, t, y, s, N=200):
    """Truncated sum_{n<=N} P_n r^n; returns (value, tail_ok)."""
    P = kernel_addition(d, kappa, N, x, t, y, s)
    terms = P * (r ** np.arange(N + 1))[:, None]
    total = terms.sum(axis=0)
    tail_ok = bool(np.all(np.abs(terms[-1]) <= 1e-12 * np.abs(total)))
    return _scalar(total), tail_ok


# ----------------------------------------------------------------------------
# Jacobi-type kernel on t <= 1
# ----------------------------------------------------------------------------

def jacobi_kernel_sum(d, kappa, gamma, n, x, t, y, s, basis=None):
    x, t, y, s = _pairs(x, t, y, s)
    if basis is None or basis.N < n:
        basis = JacobiSurfaceBasis(d, kappa, gamma, n)
    sl = basis.degree_slice(n)
    A = basis.evaluate(x, t)[:, sl]
    B = basis.evaluate(y, s)[:, sl]
    return _scalar(np.sum(A * B / basis.norms[sl], axis=1))


def jacobi_kernel_closed(d, kappa, gamma, n, x, t, y, s):
    """Closed form of the Jacobi-type reproducing kernel (polynomial integrand, exact rules)."""
    if gamma < -0.5:
        raise ValueError("closed form needs gamma >= -1/2")
    x, t, y, s = _pairs(x, t, y, s)
    kappa = np.ravel(np.asarray(kappa, float))
    alpha = alpha_kappa(d, kappa)
    lam = 2 * alpha + gamma + 1
    v1, w1 = symmetric_rule(n + 1, alpha - 1.0) if alpha > 0 else symmetric_rule(0, -1)
    v2, w2 = symmetric_rule(n + 1, gamma - 0.5) if gamma > -0.5 else symmetric_rule(0, -1)
    w_ts = np.sqrt(np.clip(1 - t, 0, None) * np.clip(1 - s, 0, None))
    axes = surface_axes(kappa, x, y)

    def F(R):
        zeta = (R[..., None, None] * v1[:, None] + w_ts[:, None, None, None] * v2[None, :])
        vals = gegenbauer_Z(2 * n, lam, zeta.ravel()).reshape(zeta.shape)
        return np.einsum("pqij,i,j->pq", vals, w1, w2)

    return _scalar(_u_average(F, t * s, axes, q=n // 2 + 2))
