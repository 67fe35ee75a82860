# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernels; same signatures as trefoil_geom._pykernels."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, sin, cos, atan2, fabs, fmod, M_PI, NAN, isfinite

cnp.import_array()

BACKEND = "cython"

SL2R, NIL, SPHERICAL, UNKNOWN = 0, 1, 2, 3


cdef inline void _lift(double mu, double nu, double zeta, double S, double* out) noexcept nogil:
    cdef double f = 1.0 / sqrt(1.0 - S * (mu * mu + nu * nu))
    cdef double c = cos(zeta), s = sin(zeta)
    out[0] = f * (mu * c - nu * s)
    out[1] = f * (mu * s + nu * c)
    out[2] = f * s / S
    out[3] = f * c


cdef inline void _map(const double[:, :] L, double mu, double nu, double zeta, double S,
                      double* res) noexcept nogil:
    cdef double p[4]
    cdef double q[4]
    cdef int i, j
    cdef double den
    _lift(mu, nu, zeta, S, p)
    for i in range(4):
        q[i] = 0.0
        for j in range(4):
            q[i] += L[i, j] * p[j]
    den = q[3] * q[3] + (S * q[2]) * (S * q[2])
    res[0] = (q[0] * q[3] + S * q[1] * q[2]) / den
    res[1] = (q[1] * q[3] - S * q[0] * q[2]) / den
    res[2] = atan2(S * q[2], q[3])


cdef inline void _metric(double mu, double nu, double S, double* Q) noexcept nogil:
    cdef double D = 1.0 - S * (mu * mu + nu * nu)
    cdef double D2 = D * D
    Q[0] = (nu * nu + 1.0) / D2
    Q[1] = -mu * nu / D2
    Q[2] = nu / (S * D)
    Q[3] = Q[1]
    Q[4] = (mu * mu + 1.0) / D2
    Q[5] = -mu / (S * D)
    Q[6] = Q[2]
    Q[7] = Q[5]
    Q[8] = 1.0 / (S * S)


cdef inline double _wrap(double a) noexcept nogil:
    cdef double r = fmod(a + M_PI, 2.0 * M_PI)
    if r < 0:
        r += 2.0 * M_PI
    return r - M_PI


def seifert_lift_batch(mu, nu, zeta, double S):
    cdef double[:] m = np.ascontiguousarray(mu, dtype=float).ravel()
    cdef double[:] n = np.ascontiguousarray(nu, dtype=float).ravel()
    cdef double[:] z = np.ascontiguousarray(zeta, dtype=float).ravel()
    cdef Py_ssize_t k, N = m.shape[0]
    out = np.empty((N, 4))
    cdef double[:, ::1] o = out
    for k in range(N):
        _lift(m[k], n[k], z[k], S, &o[k, 0])
    return out.reshape(np.shape(mu) + (4,))


def seifert_coords_batch(X, double S):
    arr = np.ascontiguousarray(X, dtype=float)
    shape = arr.shape[:-1]
    cdef double[:, ::1] q = arr.reshape(-1, 4)
    cdef Py_ssize_t k, N = q.shape[0]
    mu = np.empty(N)
    nu = np.empty(N)
    ze = np.empty(N)
    cdef double[:] m = mu, n = nu, z = ze
    cdef double den
    for k in range(N):
        den = q[k, 3] * q[k, 3] + (S * q[k, 2]) * (S * q[k, 2])
        if den == 0:
            m[k] = NAN
            n[k] = NAN
        else:
            m[k] = (q[k, 0] * q[k, 3] + S * q[k, 1] * q[k, 2]) / den
            n[k] = (q[k, 1] * q[k, 3] - S * q[k, 0] * q[k, 2]) / den
        z[k] = atan2(S * q[k, 2], q[k, 3])
    return mu.reshape(shape), nu.reshape(shape), ze.reshape(shape)


def seifert_map(L, mu, nu, zeta, double S):
    cdef double[:, :] Lv = np.ascontiguousarray(L, dtype=float)
    cdef double[:] m = np.ascontiguousarray(mu, dtype=float).ravel()
    cdef double[:] n = np.ascontiguousarray(nu, dtype=float).ravel()
    cdef double[:] z = np.ascontiguousarray(zeta, dtype=float).ravel()
    cdef Py_ssize_t k, N = m.shape[0]
    out = np.empty((3, N))
    cdef double[:, ::1] o = out
    cdef double r[3]
    for k in range(N):
        _map(Lv, m[k], n[k], z[k], S, r)
        o[0, k] = r[0]
        o[1, k] = r[1]
        o[2, k] = r[2]
    shape = np.shape(mu)
    return out[0].reshape(shape), out[1].reshape(shape), out[2].reshape(shape)


def metric_batch(mu, nu, double S):
    cdef double[:] m = np.ascontiguousarray(mu, dtype=float).ravel()
    cdef double[:] n = np.ascontiguousarray(nu, dtype=float).ravel()
    cdef Py_ssize_t k, N = m.shape[0]
    out = np.empty((N, 3, 3))
    cdef double[:, :, ::1] o = out
    for k in range(N):
        _metric(m[k], n[k], S, &o[k, 0, 0])
    return out.reshape(np.shape(mu) + (3, 3))


def pullback_residuals(L, mu, nu, zeta, double S, double h):
    cdef double[:, :] Lv = np.ascontiguousarray(L, dtype=float)
    cdef double[:] m = np.ascontiguousarray(mu, dtype=float).ravel()
    cdef double[:] n = np.ascontiguousarray(nu, dtype=float).ravel()
    cdef double[:] z = np.ascontiguousarray(zeta, dtype=float).ravel()
    cdef Py_ssize_t k, N = m.shape[0]
    out = np.empty(N)
    cdef double[:] o = out
    cdef double x[3]
    cdef double xp[3]
    cdef double xm[3]
    cdef double rp[3]
    cdef double rm[3]
    cdef double g[3]
    cdef double J[9]
    cdef double Qx[9]
    cdef double Qg[9]
    cdef double acc, worst, scale, D2
    cdef int a, b, i, j, col
    with nogil:
        for k in range(N):
            x[0] = m[k]
            x[1] = n[k]
            x[2] = z[k]
            _map(Lv, x[0], x[1], x[2], S, g)
            D2 = 1.0 - S * (g[0] * g[0] + g[1] * g[1])
            if not (isfinite(g[0]) and isfinite(g[1])) or (S > 0 and D2 <= 0) or D2 == 0:
                o[k] = NAN
                continue
            for col in range(3):
                for i in range(3):
                    xp[i] = x[i]
                    xm[i] = x[i]
                xp[col] += h
                xm[col] -= h
                _map(Lv, xp[0], xp[1], xp[2], S, rp)
                _map(Lv, xm[0], xm[1], xm[2], S, rm)
                J[0 * 3 + col] = (rp[0] - rm[0]) / (2 * h)
                J[1 * 3 + col] = (rp[1] - rm[1]) / (2 * h)
                J[2 * 3 + col] = _wrap(rp[2] - rm[2]) / (2 * h)
            _metric(x[0], x[1], S, Qx)
            _metric(g[0], g[1], S, Qg)
            worst = 0.0
            scale = 1.0
            for i in range(9):
                if fabs(Qx[i]) > scale:
                    scale = fabs(Qx[i])
                if fabs(Qg[i]) > scale:
                    scale = fabs(Qg[i])
            for i in range(3):
                for j in range(3):
                    acc = 0.0
                    for a in range(3):
                        for b in range(3):
                            acc += J[a * 3 + i] * Qg[a * 3 + b] * J[b * 3 + j]
                    acc = fabs(acc - Qx[i * 3 + j])
                    if acc > worst:
                        worst = acc
            o[k] = worst / scale
    return out


def classify_p1(x, y, double tol):
    xa = np.ascontiguousarray(x, dtype=float)
    shape = xa.shape
    cdef double[:] xv = xa.ravel()
    cdef double[:] yv = np.ascontiguousarray(y, dtype=float).ravel()
    cdef Py_ssize_t k, N = xv.shape[0]
    out = np.empty(N, dtype=np.int8)
    cdef cnp.int8_t[:] o = out
    cdef double v
    for k in range(N):
        v = fabs(xv[k] + 6.0 * yv[k])
        if fabs(v - 6.0) <= tol:
            o[k] = 1
        elif v > 6.0:
            o[k] = 0
        elif v > 1.2 + tol:
            o[k] = 2
        else:
            o[k] = 3
    return out.reshape(shape)
