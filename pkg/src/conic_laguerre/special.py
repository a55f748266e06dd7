"""One-variable special functions and the constants built from them.

Laguerre, Jacobi and Gegenbauer polynomials are evaluated by forward
three-term recurrence.  Gamma ratios go through ``gammaln`` so that norms
stay finite for degrees in the thousands.
"""
import numpy as np
from scipy.special import gammaln, jv

from ._backend import kernels as _k


class ParameterDomainError(ValueError):
    """Raised when a parameter lies outside the domain of a family."""


def _as_1d(x):
    arr = np.asarray(x, dtype=float)
    return np.ascontiguousarray(arr.ravel()), arr.shape


def _shape_out(vals, shape):
    return vals.reshape(shape) if shape else vals.reshape(()).item()


# ----------------------------------------------------------------------------
# constants
# ----------------------------------------------------------------------------

def log_pochhammer(a, n):
    """log of (a)_n for a > 0."""
    return gammaln(np.asarray(a, float) + n) - gammaln(a)


def pochhammer(a, n):
    """Rising factorial (a)_n; handles a <= 0 by direct product."""
    if n == 0:
        return 1.0
    if a > 0:
        return float(np.exp(log_pochhammer(a, n)))
    return float(np.prod(a + np.arange(n)))


def b_const(alpha):
    """b_alpha = 1/Gamma(alpha+1), the Laguerre weight normaliser."""
    return float(np.exp(-gammaln(alpha + 1.0)))


def c_const(alpha):
    """c_alpha with c_alpha * int_{-1}^1 (1-v^2)^(alpha-1/2) dv = 1."""
    if alpha <= -0.5:
        raise ParameterDomainError("c_alpha needs alpha > -1/2")
    return float(np.exp(gammaln(alpha + 1.0) - gammaln(alpha + 0.5)) / np.sqrt(np.pi))


def c_jacobi(a, b):
    """c_{a,b} = Gamma(a+b+2)/(Gamma(a+1)Gamma(b+1)), the [0,1] Beta normaliser."""
    _check_jacobi(a, b)
    return float(np.exp(gammaln(a + b + 2.0) - gammaln(a + 1.0) - gammaln(b + 1.0)))


def c_jacobi_interval(a, b):
    """c'_{a,b} = 2^{-a-b-1} c_{a,b}, the normaliser on [-1,1]."""
    return 2.0 ** (-a - b - 1.0) * c_jacobi(a, b)


def c_sphere(kappa):
    """c_kappa^h so that the h_kappa^2 weighted sphere has unit mass."""
    kappa = np.asarray(kappa, float)
    d = kappa.size
    return float(np.exp(gammaln(kappa.sum() + d / 2.0) - np.log(2.0)
                        - np.sum(gammaln(kappa + 0.5))))


# ----------------------------------------------------------------------------
# Laguerre
# ----------------------------------------------------------------------------

def _check_laguerre(alpha):
    if not alpha > -1:
        raise ParameterDomainError(f"Laguerre parameter must exceed -1, got {alpha}")


def laguerre(n, alpha, t):
    """L_n^alpha(t) by three-term recurrence."""
    _check_laguerre(alpha)
    if n < 0:
        raise ParameterDomainError("degree must be nonnegative")
    x, shape = _as_1d(t)
    return _shape_out(_k.lag(int(n), float(alpha), x), shape)


def laguerre_all(n, alpha, t):
    """Array of shape (n+1, *t.shape) holding L_0^alpha .. L_n^alpha at t."""
    _check_laguerre(alpha)
    x, shape = _as_1d(t)
    return _k.lag_all(int(n), float(alpha), x).reshape((n + 1,) + shape)


def laguerre_log(n, alpha, t):
    """(log|L_n^alpha(t)|, sign); safe for n in the thousands."""
    _check_laguerre(alpha)
    x, shape = _as_1d(t)
    la, sg = _k.lag_log(int(n), float(alpha), x)
    return la.reshape(shape), sg.reshape(shape)


def laguerre_series(n, alpha, t):
    """Explicit hypergeometric sum; a test oracle for small n only."""
    t = np.asarray(t, float)
    out = np.zeros_like(t)
    lead = np.exp(gammaln(n + alpha + 1) - gammaln(n + 1) - gammaln(alpha + 1))
    term = np.ones_like(t)
    for k in range(n + 1):
        out = out + term
        term = term * (-(n - k)) * t / ((k + 1) * (alpha + k + 1))
    return lead * out


def laguerre_norm(n, alpha):
    """h_n^alpha = (alpha+1)_n / n! = L_n^alpha(0)."""
    _check_laguerre(alpha)
    return float(np.exp(log_laguerre_norm(n, alpha)))


def log_laguerre_norm(n, alpha):
    return gammaln(n + alpha + 1.0) - gammaln(n + 1.0) - gammaln(alpha + 1.0)


def laguerre_generating_check(alpha, t, r, N):
    """|sum_{n<=N} L_n^alpha(t) r^n - (1-r)^{-alpha-1} exp(-tr/(1-r))|."""
    if not abs(r) < 1:
        raise ParameterDomainError("need |r| < 1")
    vals = laguerre_all(N, alpha, np.array([t]))[:, 0]
    series = np.polynomial.polynomial.polyval(r, vals)
    closed = (1.0 - r) ** (-alpha - 1.0) * np.exp(-t * r / (1.0 - r))
    return float(abs(series - closed))


# ----------------------------------------------------------------------------
# Jacobi, Gegenbauer, Chebyshev
# ----------------------------------------------------------------------------

def _check_jacobi(a, b):
    if not (a > -1 and b > -1):
        raise ParameterDomainError(f"Jacobi parameters must exceed -1, got ({a}, {b})")


def jacobi(n, a, b, x):
    """P_n^{(a,b)}(x) by recurrence."""
    _check_jacobi(a, b)
    xs, shape = _as_1d(x)
    return _shape_out(_k.jac(int(n), float(a), float(b), xs), shape)


def log_jacobi_norm(n, a, b):
    """log h_n^{(a,b)} for the c'_{a,b}-normalised weight on [-1,1]."""
    _check_jacobi(a, b)
    s = a + b
    out = (gammaln(a + 1 + n) - gammaln(a + 1) + gammaln(b + 1 + n) - gammaln(b + 1)
           - gammaln(n + 1) - (gammaln(s + 2 + n) - gammaln(s + 2)))
    return out + np.log(s + n + 1.0) - np.log(s + 2 * n + 1.0)


def jacobi_norm(n, a, b):
    """h_n^{(a,b)} = (a+1)_n (b+1)_n (a+b+n+1) / (n! (a+b+2)_n (a+b+2n+1))."""
    return float(np.exp(log_jacobi_norm(n, a, b)))


def gegenbauer(n, lam, x):
    """C_n^lam(x) with C_n^lam(1) = (2 lam)_n / n!."""
    if lam < 0:
        raise ParameterDomainError("Gegenbauer parameter must be >= 0")
    xs, shape = _as_1d(x)
    if n == 0:
        return _shape_out(np.ones_like(xs), shape)
    return _shape_out(lam * _k.geg_scaled(int(n), float(lam), xs), shape)


def gegenbauer_Z(n, lam, x):
    """Z_n^lam = (n+lam)/lam C_n^lam; for lam = 0 this is 2 T_n (n >= 1) and 1 at n = 0."""
    if lam < 0:
        raise ParameterDomainError("Gegenbauer parameter must be >= 0")
    xs, shape = _as_1d(x)
    if n == 0:
        return _shape_out(np.ones_like(xs), shape)
    return _shape_out((n + lam) * _k.geg_scaled(int(n), float(lam), xs), shape)


def gegenbauer_Z_all(N, lam, x):
    """Rows Z_0^lam .. Z_N^lam at x, shape (N+1, len(x))."""
    if lam < 0:
        raise ParameterDomainError("Gegenbauer parameter must be >= 0")
    x = np.asarray(x, float).ravel()
    out = np.empty((N + 1, x.size))
    out[0] = 1.0
    if N == 0:
        return out
    # D_k = C_k^lam / lam, finite as lam -> 0
    d_prev = None
    d_cur = 2.0 * x
    out[1] = (1 + lam) * d_cur
    for k in range(1, N):
        if k == 1:
            d_next = ((1.0 + lam) * 2.0 * x * d_cur - 2.0) / 2.0
        else:
            d_next = (2.0 * (k + lam) * x * d_cur - (k + 2.0 * lam - 1.0) * d_prev) / (k + 1)
        d_prev, d_cur = d_cur, d_next
        out[k + 1] = (k + 1 + lam) * d_cur
    return out


def chebyshev_T(n, x):
    return np.cos(n * np.arccos(np.clip(x, -1.0, 1.0)))


# ----------------------------------------------------------------------------
# Bessel
# ----------------------------------------------------------------------------

_SERIES_CUTOFF = 8.0
_Z_CAP = 500.0


def bessel_jhat(nu, z):
    """Normalised Bessel Gamma(nu+1) (2/z)^nu J_nu(z), equal to 1 at z = 0.

    Valid for nu > -1.  The power series is used up to z = 8; beyond that
    scipy's J_nu is rescaled, which avoids the cancellation the series
    suffers for large arguments.
    """
    if not nu > -1:
        raise ParameterDomainError("Bessel order must exceed -1")
    zs, shape = _as_1d(np.abs(np.asarray(z, float)))
    if np.any(zs > _Z_CAP):
        raise ParameterDomainError(f"Bessel argument above cap {_Z_CAP}")
    out = np.empty_like(zs)
    small = zs <= _SERIES_CUTOFF
    if small.any():
        out[small] = _k.jhat_series(float(nu), np.ascontiguousarray(zs[small]))
    big = ~small
    if big.any():
        zb = zs[big]
        out[big] = np.exp(gammaln(nu + 1.0) + nu * np.log(2.0 / zb)) * jv(nu, zb)
    return _shape_out(out, shape)


def bessel_j(alpha, z):
    """j_alpha(z) = z^{-alpha} J_alpha(z) for alpha >= -1/2."""
    if alpha < -0.5:
        raise ParameterDomainError("bessel_j needs alpha >= -1/2")
    return _bessel_j_any(alpha, z)


def _bessel_j_any(nu, z):
    # same as bessel_j but admits -1 < nu < -1/2 (needed for small alpha_kappa)
    scale = np.exp(-nu * np.log(2.0) - gammaln(nu + 1.0))
    return scale * bessel_jhat(nu, z)


def bessel_ihat(nu, z):
    """Normalised modified Bessel Gamma(nu+1)(2/z)^nu I_nu(z) by power series."""
    if not nu > -1:
        raise ParameterDomainError("Bessel order must exceed -1")
    zs, shape = _as_1d(np.abs(np.asarray(z, float)))
    if np.any(zs > _Z_CAP):
        raise ParameterDomainError(f"Bessel argument above cap {_Z_CAP}")
    return _shape_out(_k.ihat_series(float(nu), zs), shape)


def bessel_I(alpha, z):
    """I_alpha(z) from its power series."""
    z = np.asarray(z, float)
    hat = np.asarray(bessel_ihat(alpha, z))
    with np.errstate(divide="ignore", invalid="ignore"):
        pref = np.exp(alpha * np.log(z / 2.0) - gammaln(alpha + 1.0))
    if alpha == 0:
        pref = np.ones_like(z) if z.shape else 1.0
    out = pref * hat
    return out if np.ndim(out) else float(out)


# ----------------------------------------------------------------------------
# Cesaro numbers
# ----------------------------------------------------------------------------

def log_cesaro_number(n, delta):
    """log A_n^delta = log binom(n+delta, n)."""
    if not delta > -1:
        raise ParameterDomainError("Cesaro index must exceed -1")
    return gammaln(n + delta + 1.0) - gammaln(n + 1.0) - gammaln(delta + 1.0)


def cesaro_number(n, delta):
    return float(np.exp(log_cesaro_number(n, delta)))


def cesaro_weight(n, k, delta):
    """A_{n-k}^delta / A_n^delta."""
    if k > n or k < 0:
        raise IndexError(f"need 0 <= k <= n, got k={k}, n={n}")
    return float(np.exp(log_cesaro_number(n - k, delta) - log_cesaro_number(n, delta)))


def cesaro_weights(n, delta):
    """Vector of A_{n-k}^delta / A_n^delta for k = 0..n."""
    k = np.arange(n + 1)
    return np.exp(log_cesaro_number(n - k, delta) - log_cesaro_number(n, delta))


# ----------------------------------------------------------------------------
# product formula and Mehler identities (one-variable checks)
# ----------------------------------------------------------------------------

def product_formula(n, alpha, t, s, m=None):
    """Right side of the Laguerre product formula by Gauss quadrature in cos(theta).

    For alpha > -1/2 the theta integral carries sin^{2 alpha}; for alpha = -1/2
    the endpoint form with the j_1 correction is used; its coefficient is ts/2.  The result should be
    L_n^alpha(t) L_n^alpha(s) / L_n^alpha(0).
    """
    from .quadrature import gauss_jacobi, gauss_legendre

    if alpha < -0.5:
        raise ParameterDomainError("product formula needs alpha >= -1/2")
    t, s = float(t), float(s)
    m = m if m is not None else n + 40
    r = np.sqrt(t * s)
    if alpha > -0.5:
        rule = gauss_jacobi(m, alpha - 0.5, alpha - 0.5)
        v = rule.nodes
        f = (laguerre(n, alpha, t + s + 2 * r * v) * np.exp(-r * v)
             * _bessel_j_any(alpha - 0.5, r * np.sqrt(1 - v * v)))
        const = np.exp(alpha * np.log(2.0) + gammaln(alpha + 1.0)) / np.sqrt(2 * np.pi)
        return float(const * np.dot(rule.weights, f))
    ends = 0.5 * (np.exp(-r) * laguerre(n, -0.5, t + s + 2 * r)
                  + np.exp(r) * laguerre(n, -0.5, t + s - 2 * r))
    rule = gauss_legendre(m)
    v = rule.nodes
    f = (laguerre(n, -0.5, t + s + 2 * r * v) * np.exp(-r * v)
         * bessel_j(1.0, r * np.sqrt(1 - v * v)))
    # the correction carries ts/2 (with j_1(z) = J_1(z)/z); a bare ts does not reproduce the identity
    return float(ends - 0.5 * t * s * np.dot(rule.weights, f))


def mehler_series(alpha, x, y, r, N=300):
    """sum_{n<=N} L_n^alpha(x) L_n^alpha(y) r^n / binom(n+alpha, n)."""
    x = np.atleast_1d(np.asarray(x, float))
    y = np.atleast_1d(np.asarray(y, float))
    Lx = laguerre_all(N, alpha, x)
    Ly = laguerre_all(N, alpha, y)
    n = np.arange(N + 1)
    w = np.exp(n * np.log(r) - np.array([log_cesaro_number(k, alpha) for k in n]))
    return w @ (Lx * Ly)


def mehler_closed(alpha, x, y, r):
    """Gamma(alpha+1) (1-r)^{-1} e^{-(x+y)r/(1-r)} (xyr)^{-alpha/2} I_alpha(2 sqrt(xyr)/(1-r)).

    The power of 1-r is -1 (Hille-Hardy); -alpha-1 would disagree with the
    series and with the integral form whenever alpha != 0.
    """
    x = np.atleast_1d(np.asarray(x, float))
    y = np.atleast_1d(np.asarray(y, float))
    z = 2 * np.sqrt(x * y * r) / (1 - r)
    pref = np.exp(gammaln(alpha + 1.0) - np.log(1 - r) - (x + y) * r / (1 - r)
                  - alpha / 2 * np.log(x * y * r))
    return pref * np.asarray(bessel_I(alpha, z))


def mehler_integral(alpha, x, y, r, m=80):
    """Mehler kernel via c_alpha int e^{zv} (1-v^2)^{alpha-1/2} dv (endpoint average at -1/2)."""
    from .quadrature import symmetric_rule

    if alpha < -0.5:
        raise ParameterDomainError("integral form needs alpha >= -1/2")
    x = np.atleast_1d(np.asarray(x, float))
    y = np.atleast_1d(np.asarray(y, float))
    z = 2 * np.sqrt(x * y * r) / (1 - r)
    v, w = symmetric_rule(m, alpha - 0.5)
    avg = np.exp(np.outer(z, v)) @ w
    return avg * np.exp(-(alpha + 1) * np.log(1 - r) - (x + y) * r / (1 - r))
