"""Generalised translation, pseudo-convolution and Cesaro kernels on the surface.

Also hosts the one-dimensional |L_n| integrals that control the Cesaro
operator norms, and the H_alpha kernel used in the boundedness argument.
"""
import numpy as np
from scipy.linalg import eigvalsh_tridiagonal
from scipy.special import gammaln

from .kernels import _pairs, _scalar, kernel_addition, surface_axes, translate_pairs
from .quadrature import cone_surface_rule, gauss_jacobi, gauss_laguerre, gauss_legendre, sphere_rule
from .special import (
    b_const,
    c_const,
    cesaro_weights,
    laguerre,
    laguerre_log,
    laguerre_norm,
    log_cesaro_number,
)
from .surface import alpha_kappa

# ----------------------------------------------------------------------------
# translation and convolution
# ----------------------------------------------------------------------------


def translate(d, kappa, x, t, g, y, s, q=None, nv0=24):
    """T_{(x,t)} g (y,s) for a vectorised function g on [0, inf).

    With ``q=None`` the u-rule is refined until converged, which is what a
    general g needs; pass ``q`` when g is a polynomial of degree < 2q.
    """
    x, t, y, s = _pairs(x, t, y, s)
    kappa = np.ravel(np.asarray(kappa, float))
    alpha = alpha_kappa(d, kappa)
    axes = surface_axes(kappa, x, y)
    return _scalar(translate_pairs(alpha, g, t, s, axes, q=q, nv0=nv0))


def laguerre_coefficients(g, alpha, N, nodes=None, breaks=None):
    """c_n = <g, L_n^alpha> / h_n^alpha for n <= N, so that g = sum c_n L_n^alpha.

    Gauss-Laguerre with ``nodes`` points (default N + 40), exact when g is a
    polynomial of degree < nodes - N.  For piecewise smooth g pass the kink
    locations as ``breaks``; the integral is then split into panels there.
    """
    if breaks is None:
        rule = gauss_laguerre(nodes if nodes is not None else N + 40, alpha).normalized()
        T, W = rule.nodes, rule.weights
    else:
        T, W = _panel_rule(np.sort(np.asarray(breaks, float)), alpha, N + 40)
    gv = g(T)
    out = np.empty(N + 1)
    for n in range(N + 1):
        out[n] = np.dot(W, gv * laguerre(n, alpha, T)) / laguerre_norm(n, alpha)
    return out


def _panel_rule(breaks, alpha, m):
    """Normalised rule for t^alpha e^{-t} on [0, inf) split at ``breaks``."""
    b0 = breaks[0]
    j = gauss_jacobi(m, 0.0, alpha)  # (1+y)^alpha on [-1, 1]
    T = [b0 * (1 + j.nodes) / 2]
    W = [j.weights * (b0 / 2) ** (alpha + 1) * np.exp(-T[0])]
    leg = gauss_legendre(m)
    for a, b in zip(breaks[:-1], breaks[1:]):
        tt = (a + b) / 2 + (b - a) / 2 * leg.nodes
        T.append(tt)
        W.append((b - a) / 2 * leg.weights * tt ** alpha * np.exp(-tt))
    lag = gauss_laguerre(m, 0.0)
    tt = breaks[-1] + lag.nodes
    T.append(tt)
    W.append(lag.weights * tt ** alpha * np.exp(-breaks[-1]))
    return np.concatenate(T), np.concatenate(W) / np.exp(gammaln(alpha + 1))


def laguerre_combination(coeffs, alpha):
    """Vectorised g(z) = sum_k c_k L_k^alpha(z)."""
    coeffs = np.asarray(coeffs, float)

    def g(z):
        z = np.asarray(z, float)
        out = np.zeros_like(z)
        for k, c in enumerate(coeffs):
            if c != 0:
                out = out + c * laguerre(k, alpha, z)
        return out

    return g


def convolve(d, kappa, f, g, x, t, rule, q=None):
    """f * g at points (x, t): b_kappa int f(y,s) T_{(x,t)} g(y,s) w_kappa.

    ``rule`` is a cone-surface rule adequate for f times T g; ``q`` as in
    :func:`translate`.
    """
    x = np.atleast_2d(np.asarray(x, float))
    t = np.atleast_1d(np.asarray(t, float))
    fv = np.asarray(f(rule.x, rule.t), float)
    out = np.empty(t.size)
    Qn = rule.t.size
    for i in range(t.size):
        Tg = translate(d, kappa, np.repeat(x[i:i + 1], Qn, axis=0), np.full(Qn, t[i]),
                       g, rule.x, rule.t, q=q)
        out[i] = np.dot(rule.weights, fv * np.atleast_1d(Tg))
    return _scalar(out)


# ----------------------------------------------------------------------------
# Cesaro kernels
# ----------------------------------------------------------------------------

def cesaro_kernel(d, kappa, delta, n, x, t, y, s):
    """K_n^delta = A_n^{-delta} T_{(x,t)} L_n^{delta+2|kappa|+d-1} (y,s)."""
    a = delta + 2 * alpha_kappa(d, kappa) + 1
    scale = np.exp(-log_cesaro_number(n, delta))

    def g(z):
        return scale * laguerre(n, a, z)

    return translate(d, kappa, x, t, g, y, s, q=n // 2 + 2, nv0=16 + n // 2)


def cesaro_kernel_sum(d, kappa, delta, n, x, t, y, s):
    """sum_k A_{n-k}^delta / A_n^delta P_k via the addition formula."""
    P = kernel_addition(d, kappa, n, x, t, y, s)
    return _scalar(cesaro_weights(n, delta) @ P)


# ----------------------------------------------------------------------------
# integrals of |f| against t^w e^{-t/2}
# ----------------------------------------------------------------------------

_GL = None


def _gl(m=24):
    global _GL
    if _GL is None or _GL[0].size != m:
        r = gauss_legendre(m)
        _GL = (r.nodes, r.weights)
    return _GL


def _first_panel(w, m=24):
    r = gauss_jacobi(m, 0.0, w)  # (1+y)^w on [-1,1]
    return r.nodes, r.weights


def _plain_panels(edges, w, logf):
    """sum over panels [edges[i], edges[i+1]] of int |f| t^w e^{-t/2} by Gauss-Legendre."""
    xl, wl = _gl()
    A = edges[:-1, None]
    B = edges[1:, None]
    T = ((A + B) / 2 + (B - A) / 2 * xl).ravel()
    W = ((B - A) / 2 * wl).ravel()
    return np.sum(W * np.exp(logf(T) - T / 2 + w * np.log(T)))


def _integrate_panels(edges, w, logf):
    """As :func:`_plain_panels` but the first panel starts at 0 and carries t^w exactly."""
    xj, wj = _first_panel(w)
    b0 = edges[1]
    t0 = b0 * (1 + xj) / 2
    lw0 = np.log(wj) + (w + 1) * np.log(b0 / 2)
    first = np.sum(np.exp(lw0 + logf(t0) - t0 / 2))
    return first + _plain_panels(edges[1:], w, logf)


def laguerre_roots(n, a):
    """Zeros of L_n^a as eigenvalues of the Jacobi matrix."""
    if n == 0:
        return np.zeros(0)
    k = np.arange(n, dtype=float)
    kk = np.arange(1, n, dtype=float)
    return eigvalsh_tridiagonal(2 * k + a + 1, np.sqrt(kk * (kk + a)))


def laguerre_abs_moment(n, a, w):
    """int_0^inf |L_n^a(t)| t^w e^{-t/2} dt, split at the zeros of L_n^a.

    Works in log space so degrees in the thousands do not overflow.
    """
    if n == 0:
        return float(np.exp(gammaln(w + 1) + (w + 1) * np.log(2.0)))
    roots = laguerre_roots(n, a)

    def logf(t):
        return laguerre_log(n, a, t)[0]

    # beyond the last zero the integrand decays only like e^{-t/4} at first,
    # so extend the tail in blocks until a block adds nothing
    edges = np.concatenate([[0.0], roots, roots[-1] + 10.0 * np.arange(1, 21)])
    total = _integrate_panels(edges, w, logf)
    top = edges[-1]
    for _ in range(200):
        block = top + 10.0 * np.arange(0, 11)
        extra = _plain_panels(block, w, logf)
        total += extra
        top = block[-1]
        if extra <= 1e-18 * total:
            break
    return float(total)


def _bisect_roots(F, rows, lo, hi, iters=60):
    """Vectorised bisection on brackets where F(rows, lo), F(rows, hi) differ in sign."""
    flo = F(rows, lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = F(rows, mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
        if np.all(hi - lo <= 4e-16 * np.maximum(hi, 1e-300)):
            break
    return 0.5 * (lo + hi)


def abs_integral_rows(F, R, w, smax, ngrid, tail=200.0):
    """For each row r < R: int_0^inf |F(r, s)| s^w e^{-s/2} ds.

    Sign changes are bracketed on a quadratic grid of ``ngrid`` points on
    [0, smax] and refined by bisection; the integral is then split at them.
    ``F(rows, s)`` must accept equal-shape integer and float arrays.
    """
    grid = smax * (np.arange(ngrid + 1) / ngrid) ** 2
    rows = np.repeat(np.arange(R), grid.size)
    vals = F(rows, np.tile(grid, R)).reshape(R, grid.size)
    sg = np.sign(vals)
    change = (sg[:, :-1] * sg[:, 1:]) < 0
    rr, kk = np.nonzero(change)
    roots = _bisect_roots(F, rr, grid[kk], grid[kk + 1]) if rr.size else np.zeros(0)
    xl, wl = _gl()
    out = np.zeros(R)
    xj, wj = _first_panel(w)
    for r in range(R):
        rts = np.sort(roots[rr == r])
        top = smax + tail
        lead = rts[-1] if rts.size else 0.0
        npan = max(8, int(np.ceil((top - lead) / 10)))
        edges = np.concatenate([[0.0], rts, lead + (top - lead) * np.arange(1, npan + 1) / npan])
        edges = np.unique(edges)
        b0 = edges[1]
        t0 = b0 * (1 + xj) / 2
        w0 = wj * (b0 / 2) ** (w + 1)
        A = edges[1:-1, None]
        B = edges[2:, None]
        T = np.concatenate([t0, ((A + B) / 2 + (B - A) / 2 * xl).ravel()])
        W = np.concatenate([w0 * np.exp(-t0 / 2),
                            (((B - A) / 2 * wl).ravel()
                             * np.exp(-((A + B) / 2 + (B - A) / 2 * xl).ravel() / 2)
                             * ((A + B) / 2 + (B - A) / 2 * xl).ravel() ** w)])
        fv = F(np.full(T.size, r), T)
        out[r] = np.dot(W, np.abs(fv))
    return out


# ----------------------------------------------------------------------------
# norms and operator norms
# ----------------------------------------------------------------------------

def norm_line(g, alpha, p=1, smax=None, ngrid=400, degree=None):
    """||g||_{p,u(alpha)} = (b_alpha int |g e^{-t/2}|^p t^alpha dt)^{1/p}.

    p = 1 splits at sign changes; p = 2 uses Gauss-Laguerre with ``degree``
    (polynomial g); p = inf is a dense-grid maximum.
    """
    if p == 1:
        top = smax if smax is not None else 120.0
        val = abs_integral_rows(lambda r, s: g(s), 1, alpha, top, ngrid)[0]
        return b_const(alpha) * val
    if p == 2:
        m = (degree if degree is not None else 40) + 2
        rule = gauss_laguerre(m, alpha).normalized()
        return float(np.sqrt(np.dot(rule.weights, g(rule.nodes) ** 2)))
    if p == np.inf:
        tt = np.linspace(0, smax if smax is not None else 200.0, 200001)
        return float(np.max(np.abs(g(tt)) * np.exp(-tt / 2)))
    raise ValueError("p must be 1, 2 or inf")


def operator_norm_1d_alpha(alpha, delta, n):
    """A_n^{-delta} b_{2 alpha} int |L_n^{delta+2 alpha+1}| t^{2 alpha} e^{-t/2} dt."""
    a = delta + 2 * alpha + 1
    val = laguerre_abs_moment(n, a, 2 * alpha)
    return float(np.exp(np.log(val) - gammaln(2 * alpha + 1) - log_cesaro_number(n, delta)))


def operator_norm_1d(d, kappa, delta, n):
    """Operator norm of the (C, delta) means on the surface, reduced to one variable."""
    return operator_norm_1d_alpha(alpha_kappa(d, kappa), delta, n)


def surface_abs_norm(d, kappa, F, sphere_degree=40, smax=None, ngrid=400, weight_shift=0.0):
    """b_kappa int |F(y,s)| e^{-s/2} t^{-1} h^2 (times s^{shift}) over the surface.

    ``F(eta_rows, s)`` evaluates at y = s * eta.  Returns the normalised
    L^1-type norm with e^{-s/2}; ``weight_shift = 1/2`` gives the starred norm.
    """
    kappa = np.ravel(np.asarray(kappa, float))
    two_alpha = 2 * alpha_kappa(d, kappa)
    sr = sphere_rule(d, kappa, sphere_degree)
    R = sr.weights.size
    top = smax if smax is not None else 120.0

    def G(rows, s):
        return F(sr.points[rows], s)

    per_row = abs_integral_rows(G, R, two_alpha + weight_shift, top, ngrid)
    return b_const(two_alpha) * float(np.dot(sr.weights, per_row))


def operator_norm_sup_check(d, kappa, delta, n, x, t, sphere_degree=24, use_closed_at_apex=True):
    """Surface integrals int |K_n^delta(p, (y,s))| e^{s/2} w_kappa at sample points p.

    Returns (values, one_dimensional_norm).  Apex samples use the closed
    translation form; others use the Cesaro sum of addition-formula kernels.
    """
    x = np.atleast_2d(np.asarray(x, float))
    t = np.atleast_1d(np.asarray(t, float))
    kappa = np.ravel(np.asarray(kappa, float))
    ref = operator_norm_1d(d, kappa, delta, n)
    a = delta + 2 * alpha_kappa(d, kappa) + 1
    top = 4 * n + 2 * a + 2 + 40
    vals = []
    for xi, ti in zip(x, t):
        apex = ti == 0 and np.all(xi == 0)
        if apex and use_closed_at_apex:
            def F(eta, s, xi=xi, ti=ti):
                P = s.size
                return np.atleast_1d(cesaro_kernel(d, kappa, delta, n, np.zeros((P, d)),
                                                   np.zeros(P), eta * s[:, None], s))
        else:
            def F(eta, s, xi=xi, ti=ti):
                P = s.size
                return np.atleast_1d(cesaro_kernel_sum(d, kappa, delta, n, np.repeat(xi[None], P, 0),
                                                       np.full(P, ti), eta * s[:, None], s))
        # e^{s/2} in the norm combines with e^{-s} of the weight into e^{-s/2}
        vals.append(surface_abs_norm(d, kappa, F, sphere_degree=0 if apex else sphere_degree,
                                     smax=top, ngrid=max(400, 8 * n)))
    return np.array(vals), ref


# ----------------------------------------------------------------------------
# growth-rate fits
# ----------------------------------------------------------------------------

def lemma_estLn_value(alpha, beta, n):
    """b_alpha int |L_n^{alpha+beta}(t)| t^{alpha/2} e^{-t/2} dt."""
    if not alpha + beta > -1:
        raise ValueError("need alpha + beta > -1")
    return laguerre_abs_moment(n, alpha + beta, alpha / 2) * b_const(alpha)


def fit_power(ns, vals):
    """OLS fit log v = c + p log n; returns (p, residual sum of squares)."""
    X = np.column_stack([np.ones(len(ns)), np.log(ns)])
    y = np.log(vals)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    res = y - X @ coef
    return float(coef[1]), float(res @ res)


def fit_power_log(ns, vals):
    """OLS fit log v = c + p log n + log log n; returns (p, residual sum of squares)."""
    ns = np.asarray(ns, float)
    return fit_power(ns, np.asarray(vals) / np.log(ns))


def lemma_regime(alpha, beta):
    """Expected branch and exponent of the |L_n| integral."""
    if beta < 1.5:
        return "power", (alpha + 1) / 2
    if beta == 1.5:
        return "log", (alpha + 1) / 2
    return "power", alpha / 2 + beta - 1


def _centered_rss(y):
    y = y - y.mean()
    return float(y @ y)


def lemma_estLn_scan(alpha, beta, ns):
    """Values, fitted exponents and branch classification over an n-grid.

    The branch is the candidate model n^p, n^p log n (p = (alpha+1)/2) or
    n^{alpha/2+beta-1} whose log-ratio to the data is flattest.  Free-slope
    fits are reported alongside, the log-corrected one for the log branch.
    """
    ns = np.asarray(ns)
    vals = np.array([lemma_estLn_value(alpha, beta, int(n)) for n in ns])
    p_pow, r_pow = fit_power(ns, vals)
    p_log, r_log = fit_power_log(ns, vals)
    expected, exponent = lemma_regime(alpha, beta)
    ln, lv = np.log(ns), np.log(vals)
    e1 = (alpha + 1) / 2
    models = {
        "low": _centered_rss(lv - e1 * ln),
        "log": _centered_rss(lv - e1 * ln - np.log(ln)),
        "high": _centered_rss(lv - (alpha / 2 + beta - 1) * ln),
    }
    best = min(models, key=models.get)
    detected = "log" if best == "log" else "power"
    slope = p_log if detected == "log" else p_pow
    return {
        "ns": ns, "values": vals, "slope_power": p_pow, "rss_power": r_pow,
        "slope_log": p_log, "rss_log": r_log, "model_rss": models, "expected": expected,
        "expected_exponent": exponent, "detected": detected, "slope": slope,
    }


# ----------------------------------------------------------------------------
# H kernels
# ----------------------------------------------------------------------------

def _delta(t, s, z):
    return 2 * t * s + 2 * t * z + 2 * s * z - t * t - s * s - z * z


def support(t, s):
    """(z_minus, z_plus) = ((sqrt t - sqrt s)^2, (sqrt t + sqrt s)^2)."""
    return (np.sqrt(t) - np.sqrt(s)) ** 2, (np.sqrt(t) + np.sqrt(s)) ** 2


def H_alpha(alpha, t, s, z):
    """Delta^{2 alpha - 1/2} / (4tsz)^{2 alpha} e^{(t+s+z)/2} on the support, 0 elsewhere."""
    t, s, z = np.broadcast_arrays(*(np.asarray(v, float) for v in (t, s, z)))
    D = _delta(t, s, z)
    out = np.zeros(t.shape)
    inside = D > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.exp((2 * alpha - 0.5) * np.log(D[inside])
                     - 2 * alpha * np.log(4 * t[inside] * s[inside] * z[inside])
                     + (t[inside] + s[inside] + z[inside]) / 2)
    out[inside] = val
    return out if out.ndim else float(out)


def H1_alpha(alpha, t, s, z):
    """Delta^{2 alpha} / (2 (4tsz)^{2 alpha}) e^{(t+s+z)/2} on the support."""
    t, s, z = np.broadcast_arrays(*(np.asarray(v, float) for v in (t, s, z)))
    D = _delta(t, s, z)
    out = np.zeros(t.shape)
    inside = D > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        out[inside] = 0.5 * np.exp(2 * alpha * np.log(D[inside])
                                   - 2 * alpha * np.log(4 * t[inside] * s[inside] * z[inside])
                                   + (t[inside] + s[inside] + z[inside]) / 2)
    return out if out.ndim else float(out)


def _z_integral(func, exponent, alpha, t, s, m):
    """int func(z) z^{2 alpha} e^{-(z+t+s)/2} dz via z = t+s-2 sqrt(ts) u."""
    r = gauss_jacobi(m, exponent, exponent)
    u = r.nodes
    z = t + s - 2 * np.sqrt(t * s) * u
    jac = 2 * np.sqrt(t * s)
    integrand = func(z) * np.exp(2 * alpha * np.log(z) - (z + t + s) / 2) * jac
    # the Gauss-Jacobi weight already carries (1-u^2)^exponent
    return float(np.dot(r.weights, integrand / (1 - u * u) ** exponent))


def H_normalization_check(alpha, t, s, m=40):
    """c_{2 alpha} int H_alpha(t,s;z) z^{2 alpha} e^{-(z+t+s)/2} dz (should be 1)."""
    return c_const(2 * alpha) * _z_integral(lambda z: H_alpha(alpha, t, s, z),
                                            2 * alpha - 0.5, alpha, t, s, m)


def H1_mass(alpha, t, s, m=40):
    """int H^{(1)}_alpha z^{2 alpha} e^{-(z+t+s)/2} dz (should be sqrt(ts)/c_{2 alpha+1/2})."""
    return _z_integral(lambda z: H1_alpha(alpha, t, s, z), 2 * alpha, alpha, t, s, m)


# ----------------------------------------------------------------------------
# boundedness of the translation operator
# ----------------------------------------------------------------------------

def _coefficients_of(g, alpha, K, breaks=None):
    """Laguerre coefficients of g: passed through if already an array, else projected to degree K."""
    if callable(g):
        return laguerre_coefficients(g, alpha, K, breaks=breaks)
    return np.asarray(g, float)


def surface_grid_sup(d, kappa, F, sphere_degree=20, smax=80.0, ngrid=801):
    """max |F(eta, s)| e^{-s/2} over sphere-rule directions times an s-grid (a lower estimate of the sup)."""
    sr = sphere_rule(d, np.ravel(np.asarray(kappa, float)), sphere_degree)
    s = np.linspace(0.0, smax, ngrid)
    R = sr.weights.size
    eta = np.repeat(sr.points, s.size, axis=0)
    ss = np.tile(s, R)
    return float(np.max(np.abs(F(eta, ss)) * np.exp(-ss / 2)))


def translation_bound_check(d, kappa, x, t, g, p=1, K=40, breaks=None, sphere_degree=40,
                            ngrid=400):
    """Both sides of the translation bound ||T_{(x,t)} g||_{p,kappa} <= e^{t/2} ||g||_{p,u(2 alpha)}.

    ``g`` is either the coefficient vector of g = sum_k c_k L_k^{2 alpha_kappa}
    or a callable, which is replaced by its degree-K Laguerre projection
    g_K (both sides are then those of g_K; ``proj_error`` reports
    ||g - g_K||_{1,u(2 alpha)}; ``breaks`` lists kinks of g).  For p = 1 and alpha_kappa < 1/2 the bound
    gains sqrt(t) e^{t/2} ||g||_{1,u(2 alpha+1/2)} / ((2 alpha+1) sqrt(pi)).
    For p = inf the left side is a grid maximum, so it can only undershoot.
    Returns a dict with lhs, rhs, relative slack and flags.
    """
    kappa = np.ravel(np.asarray(kappa, float))
    alpha = alpha_kappa(d, kappa)
    coeffs = _coefficients_of(g, 2 * alpha, K, breaks)
    K = coeffs.size - 1
    gK = laguerre_combination(coeffs, 2 * alpha)
    x = np.asarray(x, float).ravel()
    top = 4 * K + 2 * alpha + 60

    def F(eta, s):
        P = s.size
        Pk = kernel_addition(d, kappa, K, np.repeat(x[None], P, 0), np.full(P, t),
                             eta * s[:, None], s)
        return coeffs @ Pk

    two_term = False
    if p == 1:
        lhs = surface_abs_norm(d, kappa, F, sphere_degree=sphere_degree, smax=top, ngrid=ngrid)
        rhs = np.exp(t / 2) * norm_line(gK, 2 * alpha, 1, smax=top, ngrid=ngrid)
        if alpha < 0.5:
            two_term = True
            extra = norm_line(gK, 2 * alpha + 0.5, 1, smax=top, ngrid=ngrid)
            rhs += np.sqrt(t) * np.exp(t / 2) * extra / ((2 * alpha + 1) * np.sqrt(np.pi))
    elif p == 2:
        # kernels of different degree are orthogonal and P_k(p,.) has norm^2 P_k(p,p)
        diag = np.atleast_2d(kernel_addition(d, kappa, K, x[None], np.array([t]), x[None],
                                             np.array([t]))).reshape(K + 1)
        lhs = float(np.sqrt(np.sum(coeffs ** 2 * diag)))
        h = np.array([laguerre_norm(k, 2 * alpha) for k in range(K + 1)])
        rhs = np.exp(t / 2) * np.sqrt(np.sum(coeffs ** 2 * h))
    elif p == np.inf:
        lhs = surface_grid_sup(d, kappa, F, smax=top)
        rhs = np.exp(t / 2) * norm_line(gK, 2 * alpha, np.inf, smax=top)
    else:
        raise ValueError("p must be 1, 2 or inf")
    out = {"lhs": float(lhs), "rhs": float(rhs), "slack": float((rhs - lhs) / rhs),
           "two_term": two_term, "p": p}
    if callable(g):
        out["proj_error"] = norm_line(lambda z: g(z) - gK(z), 2 * alpha, 1, smax=top, ngrid=ngrid)
    return out


def surface_norm(d, kappa, F, p, degree=None, sphere_degree=40, smax=120.0, ngrid=400):
    """||F||_{p,kappa} for F(x, t) on the surface.

    p = 2 uses the cone rule of the given degree (exact for polynomial F of
    degree <= degree/2), p = 1 splits at sign changes, p = inf is a grid max.
    """
    kappa = np.ravel(np.asarray(kappa, float))
    if p == 2:
        rule = cone_surface_rule(d, kappa, degree if degree is not None else 40)
        return float(np.sqrt(np.dot(rule.weights, F(rule.x, rule.t) ** 2)))

    def G(eta, s):
        return F(eta * s[:, None], s)

    if p == 1:
        return surface_abs_norm(d, kappa, G, sphere_degree=sphere_degree, smax=smax, ngrid=ngrid)
    if p == np.inf:
        return surface_grid_sup(d, kappa, G, smax=smax)
    raise ValueError("p must be 1, 2 or inf")


def young_check(d, kappa, f_coeffs, g_coeffs, p, q, r, smax=None):
    """Both sides of ||f*g||_r <= ||f||_p ||g||_q for polynomial data.

    ``f_coeffs`` is an :class:`~conic_laguerre.surface.ExpansionCoeffs`;
    f*g is formed from the multiplier identity proj_n(f*g) = g_n proj_n f.
    """
    kappa = np.ravel(np.asarray(kappa, float))
    alpha = alpha_kappa(d, kappa)
    basis = f_coeffs.basis
    N = basis.N
    g_coeffs = np.asarray(g_coeffs, float)
    mult = np.zeros(N + 1)
    mult[:min(N, g_coeffs.size - 1) + 1] = g_coeffs[:N + 1]
    conv_vals = f_coeffs.values * mult[basis._n]
    top = smax if smax is not None else 4 * max(N, g_coeffs.size) + 80

    def evaluator(vals):
        def F(x, t):
            return basis.evaluate(x, t) @ vals
        return F

    deg = 2 * N + 2
    lhs = surface_norm(d, kappa, evaluator(conv_vals), r, degree=deg, smax=top)
    fn = surface_norm(d, kappa, evaluator(f_coeffs.values), p, degree=deg, smax=top)
    g = laguerre_combination(g_coeffs, 2 * alpha)
    gn = norm_line(g, 2 * alpha, q, smax=top, degree=g_coeffs.size)
    rhs = fn * gn
    return {"lhs": lhs, "rhs": float(rhs), "slack": float((rhs - lhs) / rhs)}


def divergence_check(d, kappa, delta, ns):
    """Operator norms over an n-grid together with monotone growth and fitted slope.

    For alpha_kappa < 1/2 and delta <= 2 alpha_kappa + 1/2 the norms are
    unbounded, so the sequence should keep increasing.
    """
    ns = np.asarray(ns)
    vals = np.array([operator_norm_1d(d, kappa, delta, int(n)) for n in ns])
    slope, _ = fit_power(ns, vals)
    return {"ns": ns, "values": vals, "increasing": bool(np.all(np.diff(vals) > 0)),
            "slope": slope, "growth": float(vals[-1] / vals[0])}
