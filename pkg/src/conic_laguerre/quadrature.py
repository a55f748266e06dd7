"""Gauss rules and the product rules built from them.

One-dimensional rules come from the Golub-Welsch eigenproblem.  The sphere
rule is built recursively in polar coordinates, peeling off the last
coordinate at each level; this is exact for polynomials under the
reflection-invariant weight h_kappa^2.
"""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from .special import ParameterDomainError


@dataclass(frozen=True)
class QuadRule:
    """A one-dimensional Gauss rule.

    ``weights`` carry the raw weight mass (Gamma(alpha+1) for Laguerre,
    the Beta integral for Jacobi).  Use :meth:`normalized` for a
    probability rule.
    """

    nodes: np.ndarray
    weights: np.ndarray
    domain: str
    params: tuple
    degree_exact: int

    def normalized(self):
        return QuadRule(self.nodes, self.weights / self.weights.sum(), self.domain,
                        self.params, self.degree_exact)

    def integrate(self, f):
        return float(np.dot(self.weights, f(self.nodes)))


def _golub_welsch(diag, off, mu0, m, what):
    try:
        x, v = eigh_tridiagonal(diag, off)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(f"eigen-solver failed for {what} with m={m}") from exc
    w = mu0 * v[0, :] ** 2
    return x, w


def gauss_laguerre(m, alpha):
    """m-point rule for int_0^inf f(t) t^alpha e^{-t} dt."""
    if not alpha > -1:
        raise ParameterDomainError("Laguerre parameter must exceed -1")
    if m < 1:
        raise ParameterDomainError("need at least one node")
    k = np.arange(m, dtype=float)
    diag = 2 * k + alpha + 1
    kk = np.arange(1, m, dtype=float)
    off = np.sqrt(kk * (kk + alpha))
    mu0 = np.exp(gammaln(alpha + 1))
    x, w = _golub_welsch(diag, off, mu0, m, f"Laguerre({alpha})")
    return QuadRule(x, w, "halfline", (alpha,), 2 * m - 1)


def gauss_jacobi(m, a, b):
    """m-point rule for int_{-1}^1 f(x) (1-x)^a (1+x)^b dx."""
    if not (a > -1 and b > -1):
        raise ParameterDomainError("Jacobi parameters must exceed -1")
    if m < 1:
        raise ParameterDomainError("need at least one node")
    mu0 = np.exp((a + b + 1) * np.log(2.0) + gammaln(a + 1) + gammaln(b + 1) - gammaln(a + b + 2))
    if m == 1:
        x = np.array([(b - a) / (a + b + 2)])
        return QuadRule(x, np.array([mu0]), "interval", (a, b), 1)
    k = np.arange(1, m, dtype=float)
    s = 2 * k + a + b
    diag = np.empty(m)
    diag[0] = (b - a) / (a + b + 2)
    diag[1:] = (b * b - a * a) / (s * (s + 2))
    # off-diagonal; the k=1 entry has (1+a+b)/(s-1) cancelled by hand
    off = np.empty(m - 1)
    off[0] = np.sqrt(4 * (1 + a) * (1 + b) / ((2 + a + b) ** 2 * (3 + a + b)))
    kk = k[1:]
    s = 2 * kk + a + b
    off[1:] = np.sqrt(4 * kk * (kk + a) * (kk + b) * (kk + a + b) / (s * s * (s + 1) * (s - 1)))
    x, w = _golub_welsch(diag, off, mu0, m, f"Jacobi({a},{b})")
    return QuadRule(x, w, "interval", (a, b), 2 * m - 1)


def gauss_legendre(m):
    return gauss_jacobi(m, 0.0, 0.0)


def symmetric_rule(m, lam):
    """Normalised rule for c * int g(v) (1-v^2)^lam dv; lam = -1 means the endpoint average."""
    if lam == -1:
        return np.array([1.0, -1.0]), np.array([0.5, 0.5])
    r = gauss_jacobi(m, lam, lam)
    return r.nodes, r.weights / r.weights.sum()


# ----------------------------------------------------------------------------
# sphere, ball and cones
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class SphereRule:
    points: np.ndarray   # (Q, d)
    weights: np.ndarray  # (Q,), sum 1
    kappa: tuple
    degree_exact: int


def _sphere_raw(kappa, degree):
    """Unnormalised rule on S^{d-1} for h_kappa^2 d sigma."""
    kappa = np.asarray(kappa, float)
    pts = np.array([[1.0], [-1.0]])
    w = np.array([1.0, 1.0])
    m = degree // 4 + 1
    for k in range(2, kappa.size + 1):
        kd = kappa[k - 1]
        lam = kappa[:k - 1].sum() + (k - 3) / 2.0
        r = gauss_jacobi(m, lam, kd - 0.5)
        s = np.sqrt((1 + r.nodes) / 2)
        c = np.sqrt((1 - r.nodes) / 2)
        wy = r.weights * 2.0 ** (-kd - lam - 1.5)
        new_pts = []
        new_w = []
        for sign in (1.0, -1.0):
            block = np.concatenate([
                (c[:, None, None] * pts[None, :, :]),
                np.broadcast_to(sign * s[:, None, None], (m, pts.shape[0], 1)),
            ], axis=2)
            new_pts.append(block.reshape(-1, k))
            new_w.append((wy[:, None] * w[None, :]).ravel())
        pts = np.concatenate(new_pts)
        w = np.concatenate(new_w)
    return pts, w


def sphere_rule(d, kappa, degree):
    """Rule on S^{d-1} exact for polynomials of degree <= ``degree`` under c_kappa^h h_kappa^2."""
    kappa = _check_kappa(kappa, d)
    if d < 1:
        raise ParameterDomainError("need d >= 1")
    pts, w = _sphere_raw(kappa, degree)
    return SphereRule(pts, w / w.sum(), tuple(kappa), int(degree))


def sphere_mass(kappa, degree=2):
    """Raw mass int_S h_kappa^2 d sigma from the rule (should equal 1/c_kappa^h)."""
    _, w = _sphere_raw(np.asarray(kappa, float), degree)
    return float(w.sum())


def _check_kappa(kappa, d):
    kappa = np.asarray(kappa, float).ravel()
    if kappa.size != d:
        raise ParameterDomainError(f"kappa has {kappa.size} entries, expected {d}")
    # integrability only needs kappa_i > -1/2; closed kernel forms need >= 0
    if np.any(kappa <= -0.5):
        raise ParameterDomainError("kappa entries must exceed -1/2")
    return kappa


@dataclass(frozen=True)
class BallRule:
    points: np.ndarray
    weights: np.ndarray
    kappa: tuple
    mu: float
    degree_exact: int


def ball_rule(d, kappa, mu, degree):
    """Rule on the unit ball for h_kappa^2(x)(1-|x|^2)^{mu-1/2}, normalised to mass 1.

    Obtained from the sphere rule on S^d with (kappa, mu) by folding the
    two hemispheres together.
    """
    kappa = _check_kappa(kappa, d)
    if not mu > -0.5:
        raise ParameterDomainError("mu must exceed -1/2")
    m = degree // 4 + 1
    if d == 1:
        inner_pts, inner_w = np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    else:
        inner_pts, inner_w = _sphere_raw(kappa, degree)
    lam = kappa.sum() + (d - 2) / 2.0
    r = gauss_jacobi(m, lam, mu - 0.5)
    c = np.sqrt((1 - r.nodes) / 2)
    pts = (c[:, None, None] * inner_pts[None, :, :]).reshape(-1, d)
    w = (r.weights[:, None] * inner_w[None, :]).ravel()
    return BallRule(pts, w / w.sum(), tuple(kappa), float(mu), int(degree))


@dataclass(frozen=True)
class ConeRule:
    """Nodes (x, t) with weights summing to 1 for a normalised cone measure."""

    x: np.ndarray        # (Q, d)
    t: np.ndarray        # (Q,)
    weights: np.ndarray  # (Q,)
    kind: str
    degree_exact: int

    def integrate(self, f):
        return float(np.dot(self.weights, f(self.x, self.t)))


def cone_surface_rule(d, kappa, degree):
    """Rule for b_kappa int_{V_0} f(x,t) t^{-1} h_kappa^2(x) e^{-t} d sigma."""
    kappa = _check_kappa(kappa, d)
    a = 2 * kappa.sum() + d - 2
    tr = gauss_laguerre(degree // 2 + 1, a).normalized()
    sr = sphere_rule(d, kappa, degree)
    x = (tr.nodes[:, None, None] * sr.points[None, :, :]).reshape(-1, d)
    t = np.repeat(tr.nodes, sr.points.shape[0])
    w = (tr.weights[:, None] * sr.weights[None, :]).ravel()
    return ConeRule(x, t, w, "surface", int(degree))


def jacobi_cone_rule(d, kappa, gamma, degree):
    """Rule on the truncated surface t <= 1 for h^2 t^{-1} (1-t)^gamma, normalised."""
    kappa = _check_kappa(kappa, d)
    a = 2 * kappa.sum() + d - 2
    r = gauss_jacobi(degree // 2 + 1, a, gamma).normalized()
    tn = (1 - r.nodes) / 2
    sr = sphere_rule(d, kappa, degree)
    x = (tn[:, None, None] * sr.points[None, :, :]).reshape(-1, d)
    t = np.repeat(tn, sr.points.shape[0])
    w = (r.weights[:, None] * sr.weights[None, :]).ravel()
    return ConeRule(x, t, w, "surface-jacobi", int(degree))


def solid_cone_rule(d, kappa, mu, degree):
    """Rule for the normalised solid cone weight h^2(x)(t^2-|x|^2)^{mu-1/2} e^{-t}."""
    kappa = _check_kappa(kappa, d)
    a = 2 * kappa.sum() + 2 * mu + d - 1
    tr = gauss_laguerre(degree // 2 + 1, a).normalized()
    br = ball_rule(d, kappa, mu, degree)
    x = (tr.nodes[:, None, None] * br.points[None, :, :]).reshape(-1, d)
    t = np.repeat(tr.nodes, br.points.shape[0])
    w = (tr.weights[:, None] * br.weights[None, :]).ravel()
    return ConeRule(x, t, w, "solid", int(degree))


# ----------------------------------------------------------------------------
# intertwining operator
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class IntertwinRule:
    """Product rule for c_{kappa-1/2} prod (1+u_i)(1-u_i^2)^{kappa_i-1} du."""

    u: np.ndarray        # (Q, d)
    weights: np.ndarray  # (Q,)


def axis_rule(q, kappa_i):
    """Normalised rule for one axis of the V_kappa integral."""
    if kappa_i < 0:
        raise ParameterDomainError("kappa entries must be >= 0")
    if kappa_i - 1.0 <= -1.0:
        # kappa_i = 0, or so small that kappa_i - 1 rounds to -1: the limit is u = 1
        return np.array([1.0]), np.array([1.0])
    r = gauss_jacobi(q, kappa_i - 1.0, kappa_i)
    return r.nodes, r.weights / r.weights.sum()


def intertwin_rule(kappa, q):
    """Tensor product of :func:`axis_rule` over the entries of kappa."""
    kappa = np.asarray(kappa, float).ravel()
    grids = [axis_rule(q, k) for k in kappa]
    return product_rule(grids)


def product_rule(grids):
    """Tensor a list of (nodes, weights) pairs into an IntertwinRule-like object."""
    nodes = np.array([[]]).reshape(1, 0)
    w = np.ones(1)
    for gx, gw in grids:
        nodes = np.concatenate([
            np.repeat(nodes, gx.size, axis=0),
            np.tile(gx, nodes.shape[0])[:, None]], axis=1)
        w = (w[:, None] * gw[None, :]).ravel()
    return IntertwinRule(nodes, w)


def intertwine_apply(kappa, f, x, eta, q=None):
    """V_kappa[f(<x, .>)](eta) by the product Gauss-Jacobi rule.

    ``f`` must accept an ndarray.  ``q`` is the per-axis node count; by
    default 24, which is exact for polynomial f up to degree 47.
    """
    kappa = np.asarray(kappa, float).ravel()
    if np.any(kappa < 0):
        raise ParameterDomainError("kappa entries must be >= 0")
    x = np.asarray(x, float)
    eta = np.asarray(eta, float)
    rule = intertwin_rule(kappa, 24 if q is None else q)
    arg = rule.u @ (x * eta)
    return float(np.dot(rule.weights, f(arg)))
