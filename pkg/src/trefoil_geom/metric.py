"""The left-invariant metric of X(S,S) in Seifert coordinates (mu, nu, zeta)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from trefoil_geom import kernels
from trefoil_geom.algebra import LRIsometry, _require_nonzero, lr_to_linear
from trefoil_geom.errors import GeometryError, OutOfDomain

H_FD = 1e-6
TAU_FD = 1e-5
SAMPLE_RADIUS = 0.8


def _denominator(mu: float, nu: float, S: float) -> float:
    _require_nonzero(S)
    D = 1.0 - S * (mu * mu + nu * nu)
    if S > 0 and D <= 0:
        raise OutOfDomain(f"(mu, nu) = ({mu}, {nu}) is outside D_S for S = {S}")
    if D == 0:
        raise OutOfDomain("point lies on the circle at infinity")
    return D


@dataclass(frozen=True, eq=False)
class MetricSample:
    mu: float
    nu: float
    S: float
    matrix: np.ndarray
    zeta: float = 0.0

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))


def metric_Q(mu: float, nu: float, S: float, zeta: float = 0.0) -> MetricSample:
    """Metric matrix at (mu, nu, zeta); the value never depends on ``zeta``."""
    D = _denominator(mu, nu, S)
    D2 = D * D
    Q = np.array(
        [
            [(nu * nu + 1.0) / D2, -mu * nu / D2, nu / (S * D)],
            [-mu * nu / D2, (mu * mu + 1.0) / D2, -mu / (S * D)],
            [nu / (S * D), -mu / (S * D), 1.0 / (S * S)],
        ]
    )
    Q.flags.writeable = False
    return MetricSample(float(mu), float(nu), float(S), Q, float(zeta))


def metric_Q_normalized(mu: float, nu: float, sign: int) -> MetricSample:
    if sign not in (1, -1):
        raise GeometryError("sign must be +1 or -1")
    return metric_Q(mu, nu, float(sign))


def det_Q(mu: float, nu: float, S: float) -> float:
    """Closed-form ``det Q = 1 / (S^2 (1 - S(mu^2 + nu^2))^4)``."""
    D = _denominator(mu, nu, S)
    return 1.0 / (S * S * D**4)


def det_Q_normalized(mu: float, nu: float, sign: int) -> float:
    return det_Q(mu, nu, float(sign))


def volume_density(mu: float, nu: float, S: float) -> float:
    """``sqrt(det Q)``, the Riemannian volume density."""
    return math.sqrt(det_Q(mu, nu, S))


def base_metric(mu: float, nu: float, S: float) -> np.ndarray:
    """Quotient metric on D_S (horizontal part of Q): ``|dw|^2 / D^2``."""
    D = _denominator(mu, nu, S)
    return np.eye(2) / (D * D)


def klein_projection(mu: float, nu: float, S: float) -> np.ndarray:
    """Point of the hyperboloid sheet (S > 0) or northern hemisphere (S < 0) over (mu, nu)."""
    D = _denominator(mu, nu, S)
    f = 1.0 / math.sqrt(D)
    return np.array([mu * f, nu * f, f / math.sqrt(abs(S))])


def klein_constraint(X: np.ndarray, S: float) -> float:
    x1, x2, x3 = X
    if S > 0:
        return -x1 * x1 - x2 * x2 + x3 * x3 - 1.0 / S
    return x1 * x1 + x2 * x2 + x3 * x3 - 1.0 / abs(S)


def klein_pullback_closed(mu: float, nu: float, S: float) -> np.ndarray:
    """Pullback of the ambient metric through :func:`klein_projection`.

    Equals ``(D |dw|^2 + S (mu dmu + nu dnu)^2) / D^2`` with ``D = 1 - S(mu^2 + nu^2)``.
    """
    _require_nonzero(S)
    D = 1.0 - S * (mu * mu + nu * nu)
    P = np.array([mu, nu])
    return (D * np.eye(2) + S * np.outer(P, P)) / (D * D)


def klein_pullback_numeric(mu: float, nu: float, S: float, h: float = H_FD) -> np.ndarray:
    """Finite-difference pullback of the ambient metric (Minkowski for S > 0, Euclidean for S < 0)."""
    eta = np.diag([1.0, 1.0, -1.0]) if S > 0 else np.eye(3)
    J = np.empty((3, 2))
    J[:, 0] = (klein_projection(mu + h, nu, S) - klein_projection(mu - h, nu, S)) / (2 * h)
    J[:, 1] = (klein_projection(mu, nu + h, S) - klein_projection(mu, nu - h, S)) / (2 * h)
    return J.T @ eta @ J


@dataclass(frozen=True)
class PullbackReport:
    max_residual: float
    sample_count: int
    fd_step: float
    skipped: int = 0

    def passed(self, tol: float = TAU_FD) -> bool:
        return self.sample_count > 0 and self.max_residual <= tol

    def to_dict(self) -> dict:
        return {"max_residual": self.max_residual, "sample_count": self.sample_count, "fd_step": self.fd_step}


def sample_chart(rng: np.random.Generator, S: float, n: int, radius: float = SAMPLE_RADIUS):
    """Uniform samples from the disk of radius ``radius/sqrt|S|`` times [0, 2pi)."""
    R = radius / math.sqrt(abs(S))
    rad = R * np.sqrt(rng.uniform(0.0, 1.0, n))
    ang = rng.uniform(0.0, 2 * math.pi, n)
    zeta = rng.uniform(0.0, 2 * math.pi, n)
    return rad * np.cos(ang), rad * np.sin(ang), zeta


IsometryLike = Union[LRIsometry, np.ndarray]


def _as_linear(g: IsometryLike) -> np.ndarray:
    if isinstance(g, LRIsometry):
        return lr_to_linear(g)
    L = np.asarray(g, dtype=float)
    if L.shape != (4, 4):
        raise GeometryError("expected an LRIsometry or a 4x4 real matrix")
    return L


def isometry_pullback_test(
    g: IsometryLike,
    S: float,
    n_samples: int = 200,
    seed: int = 0,
    h: float = H_FD,
    backend=None,
) -> PullbackReport:
    """Check ``J^T Q(g x) J = Q(x)`` at random chart points.

    The residual is taken entrywise and divided by ``max(1, |Q(x)|, |Q(g x)|)``.
    Images that leave the chart are skipped and counted.
    """
    _require_nonzero(S)
    if isinstance(g, LRIsometry) and g.S != S:
        raise GeometryError("isometry and S disagree")
    L = _as_linear(g)
    impl = kernels if backend is None else backend
    mu, nu, zeta = sample_chart(np.random.default_rng(seed), S, n_samples)
    res = impl.pullback_residuals(L, mu, nu, zeta, S, h)
    good = res[np.isfinite(res)]
    worst = float(good.max()) if good.size else math.inf
    return PullbackReport(worst, int(good.size), h, int(n_samples - good.size))
