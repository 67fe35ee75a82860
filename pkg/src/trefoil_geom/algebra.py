"""The quadric Lie groups X(S,S), their left-right isometries and the Seifert projection.

A point (x, y, z, t) of the quadric ``t^2 + S^2 z^2 - S(x^2 + y^2) = 1`` is
identified with the complex matrix::

    [[t - iSz,        sqrt(S)(x + iy)],
     [sqrt(S)(x - iy), t + iSz       ]]

and the group law is matrix multiplication.  An isometry in left-right form
``(q, q')`` acts by ``x -> q x q'`` where ``q'`` is diagonal.  ``sqrt(S)`` is
the principal branch, i.e. ``i sqrt(|S|)`` when ``S < 0``.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from trefoil_geom.errors import Degenerate, GeometryError, OutOfDomain

DEFAULT_TAU_ALG = 1e-9

I2 = np.eye(2, dtype=complex)


def tau_alg() -> float:
    """Closed-form tolerance; ``TREFOIL_GEOM_TOL`` overrides the default 1e-9."""
    raw = os.environ.get("TREFOIL_GEOM_TOL")
    if raw is None or raw.strip() == "":
        return DEFAULT_TAU_ALG
    value = float(raw)
    if not value > 0:
        raise ValueError(f"TREFOIL_GEOM_TOL must be positive, got {raw!r}")
    return value


def _require_nonzero(S: float) -> None:
    if S == 0:
        raise Degenerate("S = 0 is the Nil limit; use the limit matrices in trefoil_geom.holonomy")


def sqrt_s(S: float) -> complex:
    """Principal square root of S as a complex number."""
    if S >= 0:
        return complex(np.sqrt(S))
    return 1j * np.sqrt(-S)


class PointAtInfinity(enum.Enum):
    """The point at infinity of D_S (only reachable when S < 0)."""

    INF = "inf"

    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = PointAtInfinity.INF

DiskPoint = Union[complex, PointAtInfinity]


def point_matrix(v, S: float) -> np.ndarray:
    """Complex 2x2 avatar of the vector (x, y, z, t); linear in ``v``."""
    x, y, z, t = v
    s = sqrt_s(S)
    return np.array(
        [[t - 1j * S * z, s * (x + 1j * y)], [s * (x - 1j * y), t + 1j * S * z]],
        dtype=complex,
    )


def matrix_coords(m: np.ndarray, S: float) -> np.ndarray:
    """Inverse of :func:`point_matrix`, returning real (x, y, z, t)."""
    s = sqrt_s(S)
    t = 0.5 * (m[0, 0] + m[1, 1])
    z = (m[1, 1] - m[0, 0]) / (2j * S)
    u = m[0, 1] / s
    return np.array([u.real, u.imag, z.real, t.real])


# Complex 2x2 images of the basis vectors e_x, e_y, e_z, e_t.
def _basis_matrices(S: float) -> list[np.ndarray]:
    return [point_matrix(e, S) for e in np.eye(4)]


@dataclass(frozen=True)
class QuadricPoint:
    x: float
    y: float
    z: float
    t: float
    S: float

    @classmethod
    def from_vector(cls, v, S: float) -> "QuadricPoint":
        x, y, z, t = (float(c) for c in v)
        return cls(x, y, z, t, float(S))

    @classmethod
    def from_matrix(cls, m: np.ndarray, S: float) -> "QuadricPoint":
        return cls.from_vector(matrix_coords(m, S), S)

    @classmethod
    def identity(cls, S: float) -> "QuadricPoint":
        return cls(0.0, 0.0, 0.0, 1.0, float(S))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z, self.t])

    @property
    def matrix(self) -> np.ndarray:
        return point_matrix(self.vector, self.S)

    def residual(self) -> float:
        S = self.S
        return self.t**2 + S * S * self.z**2 - S * (self.x**2 + self.y**2) - 1.0


def quadric_check(p: QuadricPoint, tol: float | None = None) -> bool:
    _require_nonzero(p.S)
    tol = tau_alg() if tol is None else tol
    return abs(p.residual()) <= tol


def _is_group_element(m: np.ndarray, S: float, tol: float) -> bool:
    scale = max(1.0, float(np.abs(m).max()))
    if abs(m[1, 1] - np.conj(m[0, 0])) > tol * scale:
        return False
    s = sqrt_s(S)
    if abs(m[1, 0] / s - np.conj(m[0, 1] / s)) > tol * scale:
        return False
    return abs(np.linalg.det(m) - 1.0) <= tol * scale * scale


def _is_fiber_rotation(m: np.ndarray, tol: float) -> bool:
    if abs(m[0, 1]) > tol or abs(m[1, 0]) > tol:
        return False
    if abs(abs(m[0, 0]) - 1.0) > tol:
        return False
    return abs(m[1, 1] - np.conj(m[0, 0])) <= tol


@dataclass(frozen=True, eq=False)
class LRIsometry:
    """Isometry ``x -> left @ x @ right`` of X(S,S); ``right`` is a fiber rotation.

    ``(left, right)`` and ``(-left, -right)`` describe the same isometry.
    """

    left: np.ndarray
    right: np.ndarray
    S: float
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        _require_nonzero(self.S)
        left = np.array(self.left, dtype=complex).reshape(2, 2)
        right = np.array(self.right, dtype=complex).reshape(2, 2)
        left.flags.writeable = False
        right.flags.writeable = False
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        if self.validate:
            tol = 1e-8
            if not _is_group_element(left, self.S, tol):
                raise GeometryError("left factor is not an element of X(S,S)")
            if not _is_fiber_rotation(right, tol):
                raise GeometryError("right factor must be diag(e^{-i theta}, e^{i theta})")

    @classmethod
    def identity(cls, S: float) -> "LRIsometry":
        return cls(I2, I2, S)

    @classmethod
    def left_mult(cls, q: QuadricPoint) -> "LRIsometry":
        return cls(q.matrix, I2, q.S)

    @classmethod
    def fiber_rotation(cls, theta: float, S: float) -> "LRIsometry":
        return cls(I2, np.diag([np.exp(-1j * theta), np.exp(1j * theta)]), S)

    def then(self, other: "LRIsometry") -> "LRIsometry":
        return lr_compose(self, other)

    def inverse(self) -> "LRIsometry":
        return LRIsometry(np.linalg.inv(self.left), np.linalg.inv(self.right), self.S)

    def apply(self, p: QuadricPoint) -> QuadricPoint:
        if p.S != self.S:
            raise GeometryError("point and isometry live in different X(S,S)")
        return QuadricPoint.from_matrix(self.left @ p.matrix @ self.right, self.S)

    def linear(self) -> np.ndarray:
        return lr_to_linear(self)

    def homography(self) -> Callable[[DiskPoint], DiskPoint]:
        return homography_of(self)

    def coordinates(self) -> np.ndarray:
        """(a, b, c, d) coordinates of the left factor."""
        return matrix_coords(self.left, self.S)


def lr_compose(g1: LRIsometry, g2: LRIsometry) -> LRIsometry:
    """Apply ``g1`` first, then ``g2``: ``(q1,q1')(q2,q2') = (q2 q1, q1' q2')``."""
    if g1.S != g2.S:
        raise GeometryError(f"cannot compose isometries of X({g1.S}) and X({g2.S})")
    return LRIsometry(g2.left @ g1.left, g1.right @ g2.right, g1.S, validate=False)


def compose_word(word: list[LRIsometry], S: float) -> LRIsometry:
    out = LRIsometry.identity(S)
    for g in word:
        out = lr_compose(out, g)
    return out


def lr_to_linear(g: LRIsometry) -> np.ndarray:
    """4x4 real matrix of ``g`` acting on column vectors (x, y, z, t)."""
    _require_nonzero(g.S)
    cols = [matrix_coords(g.left @ b @ g.right, g.S) for b in _basis_matrices(g.S)]
    return np.column_stack(cols)


def project_p(pt: QuadricPoint) -> DiskPoint:
    """Seifert projection ``(x + iy)/(t + iSz)``."""
    _require_nonzero(pt.S)
    num = complex(pt.x, pt.y)
    den = complex(pt.t, pt.S * pt.z)
    if den == 0:
        if num == 0:
            raise OutOfDomain("(x + iy) and (t + iSz) both vanish: not a quadric point")
        return INFINITY
    return num / den


def in_disk(w: DiskPoint, S: float) -> bool:
    if w is INFINITY:
        return S < 0
    return S < 0 or (w * w.conjugate()).real < 1.0 / S


def homography_of(g: LRIsometry) -> Callable[[DiskPoint], DiskPoint]:
    """Return the map of D_S induced by the left factor of ``g``."""
    a, b, c, d = g.coordinates()
    S = g.S
    m11 = complex(d, -S * c)
    m12 = complex(a, b)
    m21 = S * complex(a, -b)
    m22 = complex(d, S * c)

    def h(w: DiskPoint) -> DiskPoint:
        if w is INFINITY:
            if m21 == 0:
                return INFINITY
            return m11 / m21
        den = m21 * w + m22
        if den == 0:
            return INFINITY
        return (m11 * w + m12) / den

    h.coefficients = (m11, m12, m21, m22)  # type: ignore[attr-defined]
    return h


def seifert_lift(mu: float, nu: float, zeta: float, S: float) -> QuadricPoint:
    """Quadric point with Seifert coordinates (mu, nu, zeta).

    The section over w = mu + i nu is ``(1 - S|w|^2)^{-1/2} [[1, sqrt(S) w], [sqrt(S) conj(w), 1]]``,
    followed by the fiber rotation diag(e^{-i zeta}, e^{i zeta}).
    """
    _require_nonzero(S)
    D = 1.0 - S * (mu * mu + nu * nu)
    if D <= 0:
        raise OutOfDomain(f"(mu, nu) = ({mu}, {nu}) is outside D_S for S = {S}")
    f = 1.0 / np.sqrt(D)
    u = complex(mu, nu) * np.exp(1j * zeta)
    return QuadricPoint(f * u.real, f * u.imag, f * np.sin(zeta) / S, f * np.cos(zeta), float(S))


def seifert_coords(pt: QuadricPoint) -> tuple[float, float, float]:
    """Inverse of :func:`seifert_lift`; zeta is wrapped to (-pi, pi]."""
    w = project_p(pt)
    if w is INFINITY:
        raise OutOfDomain("point lies over the point at infinity")
    zeta = float(np.angle(complex(pt.t, pt.S * pt.z)))
    return w.real, w.imag, zeta


def random_quadric_points(rng: np.random.Generator, S: float, n: int, radius: float = 0.8) -> list[QuadricPoint]:
    """Sample quadric points whose projections are uniform in the disk of radius ``radius/sqrt|S|``."""
    R = radius / np.sqrt(abs(S))
    rad = R * np.sqrt(rng.uniform(0.0, 1.0, n))
    ang = rng.uniform(0.0, 2 * np.pi, n)
    zeta = rng.uniform(0.0, 2 * np.pi, n)
    return [
        seifert_lift(r * np.cos(a), r * np.sin(a), z, S) for r, a, z in zip(rad, ang, zeta)
    ]
