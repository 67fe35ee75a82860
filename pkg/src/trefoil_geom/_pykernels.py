"""Pure numpy versions of the batch kernels (fallback for the compiled core)."""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"


def seifert_lift_batch(mu, nu, zeta, S: float) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    nu = np.asarray(nu, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    D = 1.0 - S * (mu * mu + nu * nu)
    f = 1.0 / np.sqrt(D)
    c, s = np.cos(zeta), np.sin(zeta)
    out = np.empty(mu.shape + (4,))
    out[..., 0] = f * (mu * c - nu * s)
    out[..., 1] = f * (mu * s + nu * c)
    out[..., 2] = f * s / S
    out[..., 3] = f * c
    return out


def seifert_coords_batch(X: np.ndarray, S: float):
    x, y, z, t = X[..., 0], X[..., 1], X[..., 2], X[..., 3]
    den = t * t + (S * z) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = (x * t + S * y * z) / den
        nu = (y * t - S * x * z) / den
    return mu, nu, np.arctan2(S * z, t)


def seifert_map(L: np.ndarray, mu, nu, zeta, S: float):
    """Coordinate expression of the linear isometry ``L`` in Seifert coordinates."""
    X = seifert_lift_batch(mu, nu, zeta, S)
    return seifert_coords_batch(X @ np.asarray(L, dtype=float).T, S)


def metric_batch(mu, nu, S: float) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    nu = np.asarray(nu, dtype=float)
    D = 1.0 - S * (mu * mu + nu * nu)
    Q = np.empty(mu.shape + (3, 3))
    Q[..., 0, 0] = (nu * nu + 1.0) / (D * D)
    Q[..., 0, 1] = Q[..., 1, 0] = -mu * nu / (D * D)
    Q[..., 0, 2] = Q[..., 2, 0] = nu / (S * D)
    Q[..., 1, 1] = (mu * mu + 1.0) / (D * D)
    Q[..., 1, 2] = Q[..., 2, 1] = -mu / (S * D)
    Q[..., 2, 2] = 1.0 / (S * S)
    return Q


def _wrap(a):
    return (a + math.pi) % (2.0 * math.pi) - math.pi


def pullback_residuals(L: np.ndarray, mu, nu, zeta, S: float, h: float) -> np.ndarray:
    """Scaled residual ``|J^T Q(g x) J - Q(x)| / max(1, |Q(x)|, |Q(g x)|)`` per sample.

    NaN marks samples whose image leaves the chart.
    """
    mu = np.asarray(mu, dtype=float)
    nu = np.asarray(nu, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    n = mu.shape[0]
    base = np.stack([mu, nu, zeta], axis=1)
    J = np.empty((n, 3, 3))
    for k in range(3):
        step = np.zeros(3)
        step[k] = h
        plus = seifert_map(L, *(base + step).T, S)
        minus = seifert_map(L, *(base - step).T, S)
        J[:, 0, k] = (plus[0] - minus[0]) / (2 * h)
        J[:, 1, k] = (plus[1] - minus[1]) / (2 * h)
        J[:, 2, k] = _wrap(plus[2] - minus[2]) / (2 * h)
    m2, n2, _ = seifert_map(L, mu, nu, zeta, S)
    D2 = 1.0 - S * (m2 * m2 + n2 * n2)
    ok = np.isfinite(m2) & np.isfinite(n2) & (D2 > 0 if S > 0 else D2 != 0)
    Qx = metric_batch(mu, nu, S)
    Qg = metric_batch(np.where(ok, m2, 0.0), np.where(ok, n2, 0.0), S)
    pulled = np.einsum("nki,nkl,nlj->nij", J, Qg, J)
    scale = np.maximum(1.0, np.maximum(np.abs(Qx).max(axis=(1, 2)), np.abs(Qg).max(axis=(1, 2))))
    res = np.abs(pulled - Qx).max(axis=(1, 2)) / scale
    return np.where(ok, res, np.nan)


# P1 class codes
SL2R, NIL, SPHERICAL, UNKNOWN = 0, 1, 2, 3


def classify_p1(x, y, tol: float) -> np.ndarray:
    """Region code of (x, y) = (r p, r q) against the lines x + 6y = 6 eps, 6 eps / 5."""
    v = np.abs(np.asarray(x, dtype=float) + 6.0 * np.asarray(y, dtype=float))
    out = np.full(v.shape, UNKNOWN, dtype=np.int8)
    out[v > 1.2 + tol] = SPHERICAL
    out[np.abs(v - 6.0) <= tol] = NIL
    out[v > 6.0 + tol] = SL2R
    return out
