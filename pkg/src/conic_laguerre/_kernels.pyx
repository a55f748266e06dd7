# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot recurrences (same API as _kernels_py)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, log

cnp.import_array()

cdef double _BIG = 1e150


# The recurrences run degree-outer, point-inner: the points are independent,
# so the inner loops pipeline instead of waiting on one division chain.

def lag(int n, double a, const double[::1] t):
    cdef Py_ssize_t i, m = t.shape[0]
    cdef int k
    cdef double p2
    out = np.ones(m)
    if n == 0:
        return out
    prev = np.ones(m)
    cdef double[::1] p1 = out
    cdef double[::1] p0 = prev
    for i in range(m):
        p1[i] = 1.0 + a - t[i]
    for k in range(1, n):
        for i in range(m):
            p2 = ((2 * k + 1 + a - t[i]) * p1[i] - (k + a) * p0[i]) / (k + 1)
            p0[i] = p1[i]
            p1[i] = p2
    return out


def lag_all(int n, double a, const double[::1] t):
    cdef Py_ssize_t i, m = t.shape[0]
    cdef int k
    out = np.empty((n + 1, m))
    cdef double[:, ::1] o = out
    for i in range(m):
        o[0, i] = 1.0
    if n >= 1:
        for i in range(m):
            o[1, i] = 1.0 + a - t[i]
    for k in range(1, n):
        for i in range(m):
            o[k + 1, i] = ((2 * k + 1 + a - t[i]) * o[k, i] - (k + a) * o[k - 1, i]) / (k + 1)
    return out


def lag_log(int n, double a, const double[::1] t):
    cdef Py_ssize_t i, m = t.shape[0]
    cdef int k
    cdef double p2
    cdef double lbig = log(_BIG)
    la = np.zeros(m)
    sg = np.ones(m)
    if n == 0:
        return la, sg
    cur = np.empty(m)
    prev = np.ones(m)
    cdef double[::1] ol = la
    cdef double[::1] os = sg
    cdef double[::1] p1 = cur
    cdef double[::1] p0 = prev
    for i in range(m):
        p1[i] = 1.0 + a - t[i]
    for k in range(1, n):
        for i in range(m):
            p2 = ((2 * k + 1 + a - t[i]) * p1[i] - (k + a) * p0[i]) / (k + 1)
            p0[i] = p1[i]
            p1[i] = p2
            if fabs(p2) > _BIG:
                p0[i] /= _BIG
                p1[i] /= _BIG
                ol[i] += lbig
    for i in range(m):
        if p1[i] == 0.0:
            ol[i] = -np.inf
            os[i] = 0.0
        else:
            ol[i] = log(fabs(p1[i])) + ol[i]
            os[i] = 1.0 if p1[i] > 0 else -1.0
    return la, sg


def jac(int n, double a, double b, const double[::1] x):
    cdef Py_ssize_t i, m = x.shape[0]
    cdef int k
    cdef double p2, s, c1, c2, c3, c4
    out = np.ones(m)
    if n == 0:
        return out
    prev = np.ones(m)
    cdef double[::1] p1 = out
    cdef double[::1] p0 = prev
    for i in range(m):
        p1[i] = (a + 1.0) + 0.5 * (a + b + 2.0) * (x[i] - 1.0)
    for k in range(1, n):
        s = 2 * k + a + b
        c1 = 2.0 * (k + 1) * (k + a + b + 1) * s
        c2 = (s + 1) * (a * a - b * b)
        c3 = (s + 1) * (s + 2) * s
        c4 = 2.0 * (k + a) * (k + b) * (s + 2)
        for i in range(m):
            p2 = ((c2 + c3 * x[i]) * p1[i] - c4 * p0[i]) / c1
            p0[i] = p1[i]
            p1[i] = p2
    return out


def geg_scaled(int n, double lam, const double[::1] x):
    if n < 1:
        raise ValueError("geg_scaled needs n >= 1")
    cdef Py_ssize_t i, m = x.shape[0]
    cdef int k
    cdef double d2
    out = np.empty(m)
    prev = np.empty(m)
    cdef double[::1] d1 = out
    cdef double[::1] d0 = prev
    for i in range(m):
        d1[i] = 2.0 * x[i]
    if n == 1:
        return out
    for i in range(m):
        d2 = ((1.0 + lam) * 2.0 * x[i] * d1[i] - 2.0) / 2.0
        d0[i] = d1[i]
        d1[i] = d2
    for k in range(2, n):
        for i in range(m):
            d2 = (2.0 * (k + lam) * x[i] * d1[i] - (k + 2.0 * lam - 1.0) * d0[i]) / (k + 1)
            d0[i] = d1[i]
            d1[i] = d2
    return out


def _series(double nu, const double[::1] z, double sign, int kmax):
    cdef Py_ssize_t i, m = z.shape[0]
    cdef int k
    cdef double c
    cdef bint done
    out = np.ones(m)
    tq = np.empty(m)
    tt = np.ones(m)
    cdef double[::1] total = out
    cdef double[::1] q = tq
    cdef double[::1] term = tt
    for i in range(m):
        q[i] = sign * 0.25 * z[i] * z[i]
    for k in range(1, kmax):
        c = k * (nu + k)
        done = True
        for i in range(m):
            term[i] = term[i] * q[i] / c
            total[i] += term[i]
            if fabs(term[i]) > 1e-17 * fabs(total[i]):
                done = False
        if done:
            break
    return out


def jhat_series(double nu, const double[::1] z):
    return _series(nu, z, -1.0, 200)


def ihat_series(double nu, const double[::1] z):
    return _series(nu, z, 1.0, 2000)
