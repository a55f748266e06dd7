"""Experiment registry used by the command line runner.

Every experiment kind expands a parameter grid into cases.  A case maps
(params, rng) to a list of report rows plus optional fit records.  Rows
carry a value, a reference, an error and a pass flag, where the pass flag
is exactly ``error <= tol``.  The meaning of ``error`` depends on the
quantity and is listed in :data:`ERROR_MEANING`.
"""
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import harmonics, kernels, solid, special, surface, translation

# ----------------------------------------------------------------------------
# report rows
# ----------------------------------------------------------------------------


@dataclass
class Row:
    params: dict
    value: float
    reference: float
    error: float
    tol: float

    @property
    def passed(self):
        return bool(np.isfinite(self.error) and self.error <= self.tol)


@dataclass
class CaseResult:
    rows: list
    fits: list = field(default_factory=list)


ERROR_MEANING = {
    "relative": "|value - reference| / |reference|",
    "absolute": "|value - reference|",
    "violation": "max(0, (value - reference) / reference), value must not exceed reference",
    "outside": "distance of value outside [lo, hi]",
}


def rel_err(value, reference):
    value = np.asarray(value, float)
    reference = np.asarray(reference, float)
    den = np.abs(reference)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.abs(value - reference) / den
    return np.where(den == 0, np.abs(value - reference), out)


def _row(params, value, reference, error, tol):
    return Row(dict(params), float(value), float(reference), float(error), float(tol))


def _rows_rel(params, key, values, refs, tol):
    values = np.atleast_1d(values)
    refs = np.atleast_1d(refs)
    errs = rel_err(values, refs)
    out = []
    for i, (v, r, e) in enumerate(zip(values, refs, errs)):
        p = dict(params)
        p[key] = i
        out.append(_row(p, v, r, e, tol))
    return out


# ----------------------------------------------------------------------------
# sampling
# ----------------------------------------------------------------------------

def sample_sphere(rng, d, P):
    """Uniform directions from normalised Gaussians."""
    z = rng.standard_normal((P, d))
    return z / np.linalg.norm(z, axis=1)[:, None]


def sample_surface(rng, d, P, tmin=0.05, tmax=4.0):
    t = tmin + (tmax - tmin) * rng.random(P)
    return sample_sphere(rng, d, P) * t[:, None], t


def sample_solid(rng, d, P, tmin=0.05, tmax=4.0):
    t = tmin + (tmax - tmin) * rng.random(P)
    r = rng.random(P) ** (1.0 / d)
    return sample_sphere(rng, d, P) * (r * t)[:, None], t


def _kappa(p):
    return np.asarray(p["kappa"], float)


# ----------------------------------------------------------------------------
# basis-validate
# ----------------------------------------------------------------------------

def _gram_deviation(G, h):
    return float(np.max(np.abs(G - np.diag(h)) / np.sqrt(np.outer(h, h))))


def case_basis_validate(p, rng):
    d, kap, N = p["d"], _kappa(p), p["n"]
    dom = p["domain"]
    if dom == "surface":
        basis = surface.SurfaceBasis(d, kap, N)
        rule = surface.cone_surface_rule(d, kap, 2 * N + 2)
        B = basis.evaluate(rule.x, rule.t)
        G, h = (B * rule.weights[:, None]).T @ B, basis.norms
    elif dom == "solid":
        G, h = solid.solid_gram(d, kap, p["mu"], N)
    elif dom == "jacobi":
        G, h = surface.jacobi_gram(d, kap, p["gamma"], N)
    else:
        raise ValueError(f"unknown domain {dom!r}")
    dev = _gram_deviation(G, h)
    return CaseResult([_row(p, dev, 0.0, dev, p["tol"])])


# ----------------------------------------------------------------------------
# kernel-compare
# ----------------------------------------------------------------------------

def case_kernel_compare(p, rng):
    d, kap, n, P = p["d"], _kappa(p), p["n"], p["pairs"]
    dom = p["domain"]
    if dom == "surface":
        x, t = sample_surface(rng, d, P)
        y, s = sample_surface(rng, d, P)
        val = kernels.kernel_closed(d, kap, n, x, t, y, s)
        ref = kernels.kernel_sum(d, kap, n, x, t, y, s)
    elif dom == "solid":
        x, t = sample_solid(rng, d, P)
        y, s = sample_solid(rng, d, P)
        val = solid.kernel_solid_closed(d, kap, p["mu"], n, x, t, y, s)
        ref = solid.kernel_solid_sum(d, kap, p["mu"], n, x, t, y, s)
    elif dom == "jacobi":
        x, t = sample_surface(rng, d, P, 0.0, 1.0)
        y, s = sample_surface(rng, d, P, 0.0, 1.0)
        val = kernels.jacobi_kernel_closed(d, kap, p["gamma"], n, x, t, y, s)
        ref = kernels.jacobi_kernel_sum(d, kap, p["gamma"], n, x, t, y, s)
    elif dom == "apex":
        x, t = sample_surface(rng, d, P)
        zero = np.zeros_like(x)
        val = kernels.kernel_sum(d, kap, n, x, t, zero, np.zeros(P))
        ref = special.laguerre(n, 2 * kap.sum() + d - 2, t)
    elif dom == "sphere":
        xi = sample_sphere(rng, d, P)
        eta = sample_sphere(rng, d, P)
        val = harmonics.kernel_sum(harmonics.cached_basis(d, tuple(kap), n), xi, eta)
        ref = harmonics.kernel_closed(d, kap, n, xi, eta)
    else:
        raise ValueError(f"unknown domain {dom!r}")
    return CaseResult(_rows_rel(p, "pair", val, ref, p["tol"]))


# ----------------------------------------------------------------------------
# poisson-compare
# ----------------------------------------------------------------------------

def case_poisson_compare(p, rng):
    P, N, rs = p["pairs"], p["series_terms"], p["r"]
    dom = p["domain"]
    rows = []
    if dom == "mehler":
        a = p["alpha"]
        x = 5 * rng.random(P)
        y = 5 * rng.random(P)
        for r in rs:
            ser = special.mehler_series(a, x, y, r, N=N)
            q = dict(p, r=r, quantity="closed")
            rows += _rows_rel(q, "pair", special.mehler_closed(a, x, y, r), ser, p["tol"])
            q = dict(p, r=r, quantity="integral")
            rows += _rows_rel(q, "pair", special.mehler_integral(a, x, y, r), ser, p["tol"])
        return CaseResult(rows)
    d, kap = p["d"], _kappa(p)
    if dom == "surface":
        x, t = sample_surface(rng, d, P)
        y, s = sample_surface(rng, d, P)
        K = kernels.kernel_addition(d, kap, N, x, t, y, s)
        closed = [kernels.poisson_closed(d, kap, r, x, t, y, s) for r in rs]
    elif dom == "solid":
        mu = p["mu"]
        x, t = sample_solid(rng, d, P)
        y, s = sample_solid(rng, d, P)
        K = solid.kernel_solid_symmetrized(d, kap, mu, N, x, t, y, s)
        closed = [solid.poisson_solid(d, kap, mu, r, x, t, y, s) for r in rs]
    else:
        raise ValueError(f"unknown domain {dom!r}")
    K = np.atleast_2d(np.asarray(K).reshape(N + 1, -1))
    for r, c in zip(rs, closed):
        ser = (r ** np.arange(N + 1)) @ K
        rows += _rows_rel(dict(p, r=r, quantity="closed"), "pair", c, ser, p["tol"])
    return CaseResult(rows)


# ----------------------------------------------------------------------------
# translation-bounds
# ----------------------------------------------------------------------------

def case_translation_bounds(p, rng):
    d, kap, dom = p["d"], _kappa(p), p["domain"]
    rows = []
    for i in range(p["cases"]):
        coeffs = rng.standard_normal(p["degree"] + 1)
        if dom == "surface":
            x, t = sample_surface(rng, d, 1)
            res = translation.translation_bound_check(d, kap, x[0], t[0], coeffs, p=p["p"],
                                                      sphere_degree=p["sphere_degree"],
                                                      ngrid=p["ngrid"])
        elif dom == "solid":
            if p["p"] != 1:
                raise ValueError("the solid-cone bound is implemented for p = 1 only")
            x, t = sample_solid(rng, d, 1)
            res = solid.translation_bound_check_solid(d, kap, p["mu"], x[0], t[0], coeffs,
                                                      sphere_degree=p["sphere_degree"],
                                                      ngrid=p["ngrid"])
        else:
            raise ValueError(f"unknown domain {dom!r}")
        lhs, rhs = res["lhs"], res["rhs"]
        viol = max(0.0, (lhs - rhs) / rhs)
        rows.append(_row(dict(p, case=i, t=float(t[0])), lhs, rhs, viol, p["tol"]))
    return CaseResult(rows)


# ----------------------------------------------------------------------------
# cesaro-scan
# ----------------------------------------------------------------------------

def cesaro_regime(alpha, delta):
    """Predicted growth exponent and regime of the (C, delta) operator norms."""
    crit = 2 * alpha + 0.5
    if delta < crit:
        return "power", crit - delta
    if delta == crit:
        return "log", 0.0
    return "bounded", 0.0


def last_quarter_variation(vals):
    """Relative spread (max - min) / max over the last quarter of a sequence."""
    vals = np.asarray(vals, float)
    k = max(2, int(np.ceil(len(vals) / 4)))
    tail = vals[-k:]
    return float((tail.max() - tail.min()) / tail.max())


def case_cesaro_scan(p, rng):
    d, kap, delta, ns = p["d"], _kappa(p), p["delta"], p["ns"]
    if p["domain"] == "solid":
        d_eff, k_eff = d + 1, solid.bold_kappa(kap, p["mu"])
    elif p["domain"] == "surface":
        d_eff, k_eff = d, kap
    else:
        raise ValueError(f"unknown domain {p['domain']!r}")
    alpha = surface.alpha_kappa(d_eff, k_eff)
    rows, norms = [], []
    for n in ns:
        if p["apex_check"]:
            vals, ref = translation.operator_norm_sup_check(d_eff, k_eff, delta, n,
                                                            np.zeros((1, d_eff)), np.zeros(1))
            e = float(rel_err(vals[0], ref))
            rows.append(_row(dict(p, n=n, quantity="apex"), vals[0], ref, e, p["tol"]))
        else:
            ref = translation.operator_norm_1d(d_eff, k_eff, delta, n)
        norms.append(ref)
    regime, expo = cesaro_regime(alpha, delta)
    fit = {"alpha": alpha, "delta": delta, "regime": regime, "ns": list(ns), "norms": norms}
    if len(ns) >= 2:
        if regime == "bounded":
            var = last_quarter_variation(norms)
            rows.append(_row(dict(p, n="", quantity="variation"), var, 0.0, var,
                             p["variation_tol"]))
            fit["variation"] = var
        else:
            fitter = translation.fit_power_log if regime == "log" else translation.fit_power
            slope, rss = fitter(np.asarray(ns, float), np.asarray(norms))
            rows.append(_row(dict(p, n="", quantity="slope"), slope, expo, abs(slope - expo),
                             p["slope_tol"]))
            fit.update(slope=slope, expected=expo, rss=rss)
    return CaseResult(rows, [fit])


# ----------------------------------------------------------------------------
# estLn-scan
# ----------------------------------------------------------------------------

def case_estln_scan(p, rng):
    res = translation.lemma_estLn_scan(p["alpha"], p["beta"], np.asarray(p["ns"]))
    rows = [
        _row(dict(p, quantity="slope"), res["slope"], res["expected_exponent"],
             abs(res["slope"] - res["expected_exponent"]), p["slope_tol"]),
        _row(dict(p, quantity="branch"), float(res["detected"] == res["expected"]), 1.0,
             float(res["detected"] != res["expected"]), 0.0),
    ]
    fit = {key: res[key] for key in ("slope_power", "slope_log", "expected", "detected",
                                     "expected_exponent", "slope")}
    fit.update(alpha=p["alpha"], beta=p["beta"], model_rss=res["model_rss"])
    return CaseResult(rows, [fit])


# ----------------------------------------------------------------------------
# limit-study
# ----------------------------------------------------------------------------

def _outside(v, lo, hi):
    if not np.isfinite(v):
        return float("inf")
    return float(max(0.0, lo - v, v - hi))


def _ratio_rows(p, errs, gammas, label):
    rows = []
    for g0, g1, e0, e1 in zip(gammas[:-1], gammas[1:], errs[:-1], errs[1:]):
        ratio = e0 / e1 if e1 > 0 else float("inf")
        rows.append(_row(dict(p, index=label, gamma=g1), ratio, g1 / g0,
                         _outside(ratio, p["ratio_lo"], p["ratio_hi"]), 0.0))
    return rows


def case_limit_study(p, rng):
    d, kap, n, gammas = p["d"], _kappa(p), p["n"], p["gammas"]
    x, t = sample_surface(rng, d, p["points"], 0.2, 3.0)
    rows, fits = [], []
    target = p["target"]
    if target in ("basis", "norm"):
        for m in range(n + 1):
            for ell in range(harmonics.cached_basis(d, tuple(kap), m).count):
                idx = (n, m, ell)
                verr, nerr = surface.jacobi_to_laguerre_limit_check(idx, d, kap, gammas, x, t)
                if target == "basis":
                    errs = verr / np.max(np.abs(surface.basis_eval_L(idx, d, kap, x, t)))
                else:
                    errs = nerr / surface.basis_norm(n, m, kap, d)
                label = f"{n}:{m}:{ell}"
                fits.append({"index": label, "errors": list(errs)})
                if m == n:
                    # degree-zero Jacobi factor: the scaled family is exact for every gamma
                    e = float(np.max(errs))
                    rows.append(_row(dict(p, index=label, gamma="exact"), e, 0.0, e,
                                     p["exact_tol"]))
                    continue
                rows += _ratio_rows(p, errs, gammas, label)
    elif target == "kernel":
        y, s = sample_surface(rng, d, p["points"], 0.2, 3.0)
        ref = np.atleast_1d(kernels.kernel_sum(d, kap, n, x, t, y, s))
        errs = []
        for g in gammas:
            val = np.atleast_1d(kernels.jacobi_kernel_sum(d, kap, g, n, x / g, t / g, y / g, s / g))
            errs.append(float(np.max(rel_err(val, ref))))
        rows += _ratio_rows(p, errs, gammas, str(n))
        fits.append({"index": str(n), "errors": errs})
    else:
        raise ValueError(f"unknown target {target!r}")
    return CaseResult(rows, fits)


# ----------------------------------------------------------------------------
# wedge-check
# ----------------------------------------------------------------------------

def case_wedge_check(p, rng):
    kap, mu, n, P = p["kappa"][0], p["mu"], p["n"], p["pairs"]
    x, t = sample_solid(rng, 1, P)
    y, s = sample_solid(rng, 1, P)
    res = solid.wedge_map_check(kap, mu, n, x[:, 0], t, y[:, 0], s)
    rows = [_row(dict(p, pair="", quantity="weight_ratio"), res["ratio"], res["ratio_expected"],
                 float(rel_err(res["ratio"], res["ratio_expected"])), p["tol"]),
            _row(dict(p, pair="", quantity="ratio_spread"), res["ratio_spread"], 0.0,
                 res["ratio_spread"], p["tol"])]
    if "values" in res:
        Kv, Kp = res["values"]
        rows += _rows_rel(dict(p, quantity="kernel"), "pair", Kv, Kp, p["tol"])
    return CaseResult(rows)


# ----------------------------------------------------------------------------
# solid-suite
# ----------------------------------------------------------------------------

def _random_poly(rng, width, degree):
    exps = np.concatenate([harmonics.monomial_exponents(width, k) for k in range(degree + 1)])
    coef = rng.standard_normal(exps.shape[0])

    def f(X, t):
        return harmonics.eval_monomials(np.column_stack([X, t]), exps) @ coef

    return f


def case_solid_suite(p, rng):
    d, kap, mu, n, tol = p["d"], _kappa(p), p["mu"], p["n"], p["tol"]
    rows = []

    def add(quantity, value, reference, error):
        rows.append(_row(dict(p, quantity=quantity), value, reference, error, tol))

    G, h = solid.solid_gram(d, kap, mu, n)
    dev = _gram_deviation(G, h)
    add("gram", dev, 0.0, dev)
    lc = solid.lift_check(d, kap, mu, n)
    add("lift_gram", lc["gram_dev"], 0.0, lc["gram_dev"])
    add("lift_leak", lc["leak"], 0.0, lc["leak"])
    add("lift_dims", float(lc["dims"][1] + lc["dims"][2]), float(lc["dims"][0]),
        0.0 if lc["dims_ok"] else 1.0)
    f = _random_poly(rng, d + 2, n)
    lhs, rhs = solid.lift_integral_check(f, d, kap, mu, n + 2)
    add("lift_integral", lhs, rhs, float(rel_err(lhs, rhs)))
    P = p["pairs"]
    x, t = sample_solid(rng, d, P)
    y, s = sample_solid(rng, d, P)
    ref = np.atleast_1d(solid.kernel_solid_sum(d, kap, mu, n, x, t, y, s))
    if min(mu, kap.min()) >= 0 and solid.alpha_solid(d, kap, mu) > 0:
        closed = np.atleast_1d(solid.kernel_solid_closed(d, kap, mu, n, x, t, y, s))
        e = rel_err(closed, ref)
        i = int(np.argmax(e))
        add("kernel_closed", closed[i], ref[i], e[i])
        N = p["series_terms"]
        K = solid.kernel_solid_symmetrized(d, kap, mu, N, x, t, y, s)
        sym = K[n]
        e = rel_err(sym, ref)
        i = int(np.argmax(e))
        add("kernel_lifted", sym[i], ref[i], e[i])
        r = p["r"]
        pc = np.atleast_1d(solid.poisson_solid(d, kap, mu, r, x, t, y, s))
        ps = (r ** np.arange(N + 1)) @ K
        e = rel_err(pc, ps)
        i = int(np.argmax(e))
        add("poisson", pc[i], ps[i], e[i])
    return CaseResult(rows)


# ----------------------------------------------------------------------------
# registry
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Kind:
    name: str
    func: callable
    columns: tuple        # CSV parameter columns, in order
    grid: tuple           # keys expanded as a Cartesian product, in order
    defaults: dict
    error: str
    summary: str


_COMMON = {"d": [2], "kappa": [(0.0,)], "mu": [0.5]}

KINDS = {k.name: k for k in [
    Kind("basis-validate", case_basis_validate,
         ("domain", "d", "kappa", "mu", "gamma", "n"),
         ("domain", "d", "kappa", "mu", "gamma", "n"),
         dict(_COMMON, gamma=[0.5], domain=["surface"], n=[6], tol=1e-10),
         "absolute", "Gram matrix of a basis against its predicted diagonal norms"),
    Kind("kernel-compare", case_kernel_compare,
         ("domain", "d", "kappa", "mu", "gamma", "n", "pair"),
         ("domain", "d", "kappa", "mu", "gamma", "n"),
         dict(_COMMON, gamma=[0.5], domain=["surface"], n=[0, 1, 2, 3, 4], pairs=50, tol=1e-6),
         "relative", "closed-form reproducing kernels against basis sums"),
    Kind("poisson-compare", case_poisson_compare,
         ("domain", "d", "kappa", "mu", "alpha", "r", "quantity", "pair"),
         ("domain", "d", "kappa", "mu", "alpha"),
         dict(_COMMON, domain=["surface"], alpha=[0.5], r=[0.1, 0.3, 0.5], pairs=10,
              series_terms=200, tol=1e-8),
         "relative", "closed Poisson kernels and Mehler formulas against truncated series"),
    Kind("translation-bounds", case_translation_bounds,
         ("domain", "d", "kappa", "mu", "p", "case", "t"),
         ("domain", "d", "kappa", "mu", "p"),
         dict(_COMMON, domain=["surface"], p=[1.0], cases=30, degree=3, sphere_degree=40, ngrid=400,
              tol=1e-8),
         "violation", "L1 translation bounds; value is the left side, reference the bound"),
    Kind("cesaro-scan", case_cesaro_scan,
         ("domain", "d", "kappa", "mu", "delta", "n", "quantity"),
         ("domain", "d", "kappa", "mu", "delta"),
         dict(_COMMON, domain=["surface"], delta=[0.0], ns=[16, 23, 32, 45, 64, 91, 128, 181, 256],
              apex_check=True, tol=1e-8, slope_tol=0.15, variation_tol=0.02),
         "relative (apex), absolute (slope), absolute (variation)",
         "Cesaro operator norms: apex value, growth exponent or boundedness"),
    Kind("estLn-scan", case_estln_scan,
         ("alpha", "beta", "quantity"),
         ("alpha", "beta"),
         dict(alpha=[2.0], beta=[0.0, 1.5, 3.0],
              ns=[64, 91, 128, 181, 256, 362, 512, 724, 1024, 1448, 2048], slope_tol=0.1),
         "absolute", "growth branches of weighted L1 norms of Laguerre polynomials"),
    Kind("limit-study", case_limit_study,
         ("d", "kappa", "target", "n", "index", "gamma"),
         ("d", "kappa", "target", "n"),
         dict(d=[2], kappa=[(0.0,)], target=["basis", "kernel"], n=[3], gammas=[1e2, 1e3, 1e4],
              points=3, ratio_lo=5.0, ratio_hi=20.0, exact_tol=1e-12),
         "outside (ratio), relative (exact)",
         "Jacobi to Laguerre scaling limits; value is the ratio of successive errors"),
    Kind("wedge-check", case_wedge_check,
         ("kappa", "mu", "n", "quantity", "pair"),
         ("kappa", "mu", "n"),
         dict(kappa=[(0.0,)], mu=[0.5], n=[0, 1, 2, 3, 4, 5, 6, 7, 8], pairs=20, tol=1e-9),
         "relative", "the d = 1 solid cone against product Laguerre on the quadrant"),
    Kind("solid-suite", case_solid_suite,
         ("d", "kappa", "mu", "n", "quantity"),
         ("d", "kappa", "mu", "n"),
         dict(d=[1], kappa=[(0.0,)], mu=[0.5], n=[4], pairs=20, series_terms=120, r=0.3, tol=1e-10),
         "absolute (gram, lift), relative (integrals, kernels)",
         "solid cone basis, lift and kernel consistency"),
]}


# value types for config parsing; list-valued keys are those with list defaults
INT_KEYS = {"d", "n", "pairs", "cases", "degree", "sphere_degree", "ngrid", "series_terms", "points"}
BOOL_KEYS = {"apex_check"}
STR_KEYS = {"domain", "target"}


def expand_grid(kind, params):
    """Cartesian product over the kind's grid keys, in declared order."""
    spec = KINDS[kind]
    axes = [params[k] for k in spec.grid]
    cases = []
    for combo in product(*axes):
        case = {k: v for k, v in params.items() if k not in spec.grid}
        case.update(zip(spec.grid, combo))
        if "kappa" in case:
            case["kappa"] = broadcast_kappa(case["kappa"], case.get("d", 1))
        cases.append(case)
    return cases


def broadcast_kappa(kappa, d):
    """A scalar kappa means kappa times the all-ones vector."""
    kap = tuple(float(k) for k in kappa)
    if len(kap) == 1 and d != 1:
        kap = kap * d
    if len(kap) != d:
        raise ValueError(f"kappa {kappa} does not have length d={d}")
    return kap
