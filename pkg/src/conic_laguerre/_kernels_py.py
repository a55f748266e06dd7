"""Pure numpy versions of the hot recurrences.

Every function takes a contiguous 1-D float64 array and returns arrays of the
same length.  The compiled module ``_kernels`` exposes the same names.
"""
import numpy as np

_BIG = 1e150
_LOG_BIG = np.log(_BIG)


def lag(n, a, t):
    """Laguerre L_n^a(t) by the three-term recurrence."""
    t = np.asarray(t, dtype=float)
    p0 = np.ones_like(t)
    if n == 0:
        return p0
    p1 = 1.0 + a - t
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1 + a - t) * p1 - (k + a) * p0) / (k + 1)
    return p1


def lag_all(n, a, t):
    """Rows L_0^a(t), ..., L_n^a(t)."""
    t = np.asarray(t, dtype=float)
    out = np.empty((n + 1, t.size))
    out[0] = 1.0
    if n >= 1:
        out[1] = 1.0 + a - t
    for k in range(1, n):
        out[k + 1] = ((2 * k + 1 + a - t) * out[k] - (k + a) * out[k - 1]) / (k + 1)
    return out


def lag_log(n, a, t):
    """Return (log|L_n^a(t)|, sign) with rescaling so large n never overflows."""
    t = np.asarray(t, dtype=float)
    p0 = np.ones_like(t)
    scale = np.zeros_like(t)
    if n == 0:
        return scale, p0.copy()
    p1 = 1.0 + a - t
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1 + a - t) * p1 - (k + a) * p0) / (k + 1)
        big = np.abs(p1) > _BIG
        if big.any():
            p0[big] /= _BIG
            p1[big] /= _BIG
            scale[big] += _LOG_BIG
    with np.errstate(divide="ignore"):
        return np.log(np.abs(p1)) + scale, np.sign(p1)


def jac(n, a, b, x):
    """Jacobi P_n^{(a,b)}(x)."""
    x = np.asarray(x, dtype=float)
    p0 = np.ones_like(x)
    if n == 0:
        return p0
    p1 = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0)
    for k in range(1, n):
        s = 2 * k + a + b
        c1 = 2.0 * (k + 1) * (k + a + b + 1) * s
        c2 = (s + 1) * (a * a - b * b)
        c3 = (s + 1) * (s + 2) * s
        c4 = 2.0 * (k + a) * (k + b) * (s + 2)
        p0, p1 = p1, ((c2 + c3 * x) * p1 - c4 * p0) / c1
    return p1


def geg_scaled(n, lam, x):
    """C_n^lam(x)/lam for n >= 1, finite as lam -> 0 (then 2 T_n(x)/n)."""
    x = np.asarray(x, dtype=float)
    if n < 1:
        raise ValueError("geg_scaled needs n >= 1")
    d1 = 2.0 * x
    if n == 1:
        return d1
    d2 = ((1.0 + lam) * 2.0 * x * d1 - 2.0) / 2.0
    d0 = d1
    d1 = d2
    for k in range(2, n):
        d0, d1 = d1, (2.0 * (k + lam) * x * d1 - (k + 2.0 * lam - 1.0) * d0) / (k + 1)
    return d1


def jhat_series(nu, z):
    """Normalised Bessel Gamma(nu+1)(2/z)^nu J_nu(z) from its power series."""
    z = np.asarray(z, dtype=float)
    q = -0.25 * z * z
    term = np.ones_like(z)
    total = np.ones_like(z)
    for k in range(1, 200):
        term = term * q / (k * (nu + k))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def ihat_series(nu, z):
    """Normalised modified Bessel Gamma(nu+1)(2/z)^nu I_nu(z) from its series."""
    z = np.asarray(z, dtype=float)
    q = 0.25 * z * z
    term = np.ones_like(z)
    total = np.ones_like(z)
    for k in range(1, 2000):
        term = term * q / (k * (nu + k))
        total = total + term
        if np.all(term <= 1e-17 * total):
            break
    return total
