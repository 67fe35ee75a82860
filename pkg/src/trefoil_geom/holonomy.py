"""Lifted holonomies of the trefoil group into Isom(X(S,S)) and the Nil limit.

Words are written as maps: ``c = b a`` means "apply a, then b", which in
left-right notation is ``lr_compose(a, b)`` and as 4x4 matrices ``B @ A``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from trefoil_geom.algebra import (
    I2,
    LRIsometry,
    QuadricPoint,
    compose_word,
    lr_compose,
    lr_to_linear,
    seifert_coords,
    seifert_lift,
    sqrt_s,
    tau_alg,
)
from trefoil_geom.errors import ConstructionMismatch, Degenerate, GeometryError, NilRegime, OutOfRange
from trefoil_geom.surface2d import ALPHA_MAX, s_of_alpha

SQRT3 = math.sqrt(3.0)

# |1 - 2 sin(alpha)| below this and the curved constructor refuses.
NIL_GUARD = 1e-6


def rotation_R(alpha: float, theta: float, S: float) -> LRIsometry:
    """Rotation by 2*alpha about the origin of D_S, with fiber shift theta."""
    left = np.diag([np.exp(1j * alpha), np.exp(-1j * alpha)])
    right = np.diag([np.exp(-1j * theta), np.exp(1j * theta)])
    return LRIsometry(left, right, S)


def rotation_R_linear(alpha: float, theta: float, S: float) -> np.ndarray:
    """Closed-form 4x4 matrix of :func:`rotation_R`."""
    cp, sp = math.cos(alpha + theta), math.sin(alpha + theta)
    cm, sm = math.cos(alpha - theta), math.sin(alpha - theta)
    return np.array(
        [
            [cp, -sp, 0.0, 0.0],
            [sp, cp, 0.0, 0.0],
            [0.0, 0.0, cm, -sm / S],
            [0.0, 0.0, S * sm, cm],
        ]
    )


def translations_t(S: float) -> tuple[LRIsometry, LRIsometry]:
    """The translations t_1, t_-1 taking the origin of D_S to +1 and -1."""
    if S == 1:
        raise Degenerate("S = 1: the points +-1 are ideal, so t_+-1 do not exist")
    f = 1.0 / math.sqrt(abs(1.0 - S))
    s = sqrt_s(S)
    t1 = LRIsometry(f * np.array([[1, s], [s, 1]]), I2, S)
    tm1 = LRIsometry(f * np.array([[1, -s], [-s, 1]]), I2, S)
    return t1, tm1


def translations_t_linear(S: float) -> tuple[np.ndarray, np.ndarray]:
    if S == 1:
        raise Degenerate("S = 1: the points +-1 are ideal, so t_+-1 do not exist")
    f = 1.0 / math.sqrt(abs(1.0 - S))
    t1 = f * np.array([[1, 0, 0, 1], [0, 1, S, 0], [0, 1, 1, 0], [S, 0, 0, 1]], dtype=float)
    tm1 = f * np.array([[1, 0, 0, -1], [0, 1, -S, 0], [0, -1, 1, 0], [-S, 0, 0, 1]], dtype=float)
    return t1, tm1


def conjugate_ab(alpha: float, theta: float, S: float) -> tuple[LRIsometry, LRIsometry]:
    """``a = t_1 R t_1^-1`` and ``b = t_-1 R t_-1^-1`` for an arbitrary S.

    Only for ``S = s_of_alpha(alpha)`` do these generate a trefoil-group image.
    """
    t1, tm1 = translations_t(S)
    R = rotation_R(alpha, theta, S)
    a = compose_word([t1.inverse(), R, t1], S)
    b = compose_word([tm1.inverse(), R, tm1], S)
    return a, b


def closed_form_lr(alpha: float, theta: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The matrices M, N (left factors of a, b) and R (their common right factor)."""
    k = np.sqrt(complex(2.0 * math.cos(2.0 * alpha) - 1.0))
    c = 2.0 * math.cos(alpha)
    M = 0.5 * np.array([[c + 1j, -1j * k], [1j * k, c - 1j]])
    N = 0.5 * np.array([[c + 1j, 1j * k], [-1j * k, c - 1j]])
    R = np.diag([np.exp(-1j * theta), np.exp(1j * theta)])
    return M, N, R


def closed_form_lm(alpha: float, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Block formulas for the 4x4 matrices of a(alpha, theta) and b(alpha, theta)."""
    ca, ct, st = math.cos(alpha), math.cos(theta), math.sin(theta)
    lo = 1.0 - 2.0 * math.sin(alpha)
    hi = 1.0 + 2.0 * math.sin(alpha)
    if lo == 0:
        raise NilRegime("1 - 2 sin(alpha) = 0; use nil_generators")
    A11 = np.array([[2 * ca * ct - st, -2 * ca * st - ct], [2 * ca * st + ct, 2 * ca * ct - st]])
    A12 = np.array([[lo * ct, hi * st], [lo * st, -hi * ct]])
    A21 = np.array([[hi * ct, -hi * st], [-lo * st, -lo * ct]])
    A22 = np.array(
        [
            [2 * ca * ct + st, hi * (2 * ca * st - ct) / lo],
            [lo * (-2 * ca * st + ct) / hi, 2 * ca * ct + st],
        ]
    )
    a = 0.5 * np.block([[A11, A12], [A21, A22]])
    b = 0.5 * np.block([[A11, -A12], [-A21, A22]])
    return a, b


def _max_rel_diff(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.max(np.abs(x - y) / np.maximum(1.0, np.abs(y))))


@dataclass(frozen=True, eq=False)
class HolonomyPair:
    alpha: float
    theta: float
    S: float
    a: LRIsometry
    b: LRIsometry
    a_lm: np.ndarray
    b_lm: np.ndarray
    cross_checked: bool = True
    route_residual: float = 0.0

    def to_dict(self) -> dict:
        def lr(g: LRIsometry) -> dict:
            return {
                "left": [[float(v.real), float(v.imag)] for v in g.left.ravel()],
                "right": [[float(v.real), float(v.imag)] for v in g.right.ravel()],
            }

        return {
            "alpha": self.alpha,
            "theta": self.theta,
            "S": self.S,
            "a_lr": lr(self.a),
            "a_lm": [float(v) for v in self.a_lm.ravel()],
            "b_lr": lr(self.b),
            "b_lm": [float(v) for v in self.b_lm.ravel()],
        }


@dataclass(frozen=True, eq=False)
class NilHolonomyPair:
    t: float
    a_t: np.ndarray
    b_t: np.ndarray

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "a_t": [float(v) for v in self.a_t.ravel()],
            "b_t": [float(v) for v in self.b_t.ravel()],
        }


Pair = Union[HolonomyPair, NilHolonomyPair]


def generators_ab(alpha: float, theta: float, check: bool = True) -> HolonomyPair:
    """Generators a(alpha, theta), b(alpha, theta) with S = s_of_alpha(alpha).

    The closed-form blocks are returned; the conjugation route is rebuilt and
    compared entrywise.  At alpha = 0 (S = 1) the translations are ideal and
    only the closed form exists.
    """
    if not (0.0 <= alpha < ALPHA_MAX):
        raise OutOfRange(f"alpha = {alpha} outside [0, 5pi/6)")
    if abs(1.0 - 2.0 * math.sin(alpha)) < NIL_GUARD:
        raise NilRegime("alpha is (numerically) pi/6: the geometry is Nil, use nil_generators(t)")
    S = s_of_alpha(alpha)
    M, N, R = closed_form_lr(alpha, theta)
    a = LRIsometry(M, R, S)
    b = LRIsometry(N, R, S)
    a_lm, b_lm = closed_form_lm(alpha, theta)
    residual = 0.0
    cross = False
    if check and S != 1.0:
        residual = route_residual(alpha, theta)
        if residual > tau_alg():
            raise ConstructionMismatch(
                f"closed-form and conjugation routes differ by {residual:.3e} at alpha={alpha}, theta={theta}"
            )
        cross = True
    return HolonomyPair(alpha, theta, S, a, b, a_lm, b_lm, cross, residual)


def route_residual(alpha: float, theta: float) -> float:
    """Entrywise gap between the closed-form and conjugation-built generators."""
    S = s_of_alpha(alpha)
    if S == 1.0:
        raise Degenerate("alpha = 0: the conjugation route needs t_+-1, which are ideal")
    M, N, _ = closed_form_lr(alpha, theta)
    a_lm, b_lm = closed_form_lm(alpha, theta)
    ca, cb = conjugate_ab(alpha, theta, S)
    return max(
        _max_rel_diff(ca.left, M),
        _max_rel_diff(cb.left, N),
        _max_rel_diff(lr_to_linear(ca), a_lm),
        _max_rel_diff(lr_to_linear(cb), b_lm),
    )


def nil_generators(t: float) -> NilHolonomyPair:
    """Limits of lm(a), lm(b) as alpha -> pi/6 along theta = alpha + t(6 alpha - pi)."""
    h = 0.5 * SQRT3
    corner = -h * (8.0 * t + 1.0)
    a_t = np.array([[0.5, -h, 0.0, 0.5], [h, 0.5, 0.0, -h], [h, -0.5, 1.0, corner], [0.0, 0.0, 0.0, 1.0]])
    b_t = np.array([[0.5, -h, 0.0, -0.5], [h, 0.5, 0.0, h], [-h, 0.5, 1.0, corner], [0.0, 0.0, 0.0, 1.0]])
    return NilHolonomyPair(float(t), a_t, b_t)


def nil_theta(alpha: float, t: float) -> float:
    return alpha + t * (6.0 * alpha - math.pi)


@dataclass(frozen=True, eq=False)
class Words:
    """The elements c = b a, d = b a b and d^2, in 4x4 form (and LR form when S != 0)."""

    c_lm: np.ndarray
    d_lm: np.ndarray
    d2_lm: np.ndarray
    c: LRIsometry | None = None
    d: LRIsometry | None = None
    d2: LRIsometry | None = None


def words_cd(pair: Pair) -> Words:
    if isinstance(pair, NilHolonomyPair):
        A, B = pair.a_t, pair.b_t
        d = B @ A @ B
        return Words(B @ A, d, d @ d)
    c = lr_compose(pair.a, pair.b)
    d = compose_word([pair.b, pair.a, pair.b], pair.S)
    d2 = lr_compose(d, d)
    d_lm = pair.b_lm @ pair.a_lm @ pair.b_lm
    return Words(pair.b_lm @ pair.a_lm, d_lm, d_lm @ d_lm, c, d, d2)


@dataclass(frozen=True)
class RelatorReport:
    lr_residual: float | None
    lm_residual: float

    @property
    def max_residual(self) -> float:
        return max(self.lm_residual, self.lr_residual or 0.0)

    def passed(self, tol: float | None = None) -> bool:
        return self.max_residual <= (tau_alg() if tol is None else tol)


def relator_residual(A: np.ndarray, B: np.ndarray) -> float:
    """``max |aba - bab|`` for any two square matrices."""
    return float(np.max(np.abs(A @ B @ A - B @ A @ B)))


def relator_check(pair: Pair) -> RelatorReport:
    if isinstance(pair, NilHolonomyPair):
        return RelatorReport(None, relator_residual(pair.a_t, pair.b_t))
    aba = compose_word([pair.a, pair.b, pair.a], pair.S)
    bab = compose_word([pair.b, pair.a, pair.b], pair.S)
    lr = max(float(np.max(np.abs(aba.left - bab.left))), float(np.max(np.abs(aba.right - bab.right))))
    return RelatorReport(lr, relator_residual(pair.a_lm, pair.b_lm))


@dataclass(frozen=True)
class DomainLevels:
    level_dA: float
    level_cU: float
    height: float
    slope: float | None


def domain_levels(alpha: float, theta: float) -> DomainLevels:
    """Levels of the fundamental domain over the base triangle."""
    height = 6.0 * theta - math.pi
    level_cU = alpha + 5.0 * theta - math.pi
    slope = None if height == 0 else level_cU / height
    return DomainLevels(3.0 * theta - math.pi / 2, level_cU, height, slope)


def domain_slope(alpha: float, theta: float) -> float:
    levels = domain_levels(alpha, theta)
    if levels.slope is None:
        raise Degenerate("6 theta - pi = 0: the fundamental domain has zero height")
    return levels.slope


def base_vertex(S: float, sign: int = 1) -> QuadricPoint:
    """The point A (sign +1) or B (sign -1) over +-1 in D_S, at fiber level 0."""
    return seifert_lift(float(sign), 0.0, 0.0, S)


@dataclass(frozen=True)
class PhaseReading:
    """Base point and wrapped fiber phase of an image point."""

    w: complex
    phase: float


def _read(g: LRIsometry, p: QuadricPoint) -> PhaseReading:
    mu, nu, zeta = seifert_coords(g.apply(p))
    return PhaseReading(complex(mu, nu), zeta)


def matrix_levels(alpha: float, theta: float) -> tuple[PhaseReading, PhaseReading, float]:
    """Read d(A), (c o d)(A) and the d^2 fiber shift off the matrices (all wrapped)."""
    pair = generators_ab(alpha, theta, check=False)
    w = words_cd(pair)
    A = base_vertex(pair.S, 1)
    cd = lr_compose(w.d, w.c)
    return _read(w.d, A), _read(cd, A), _d2_shift(w.d2)


def as_fiber_translation(g: LRIsometry) -> np.ndarray:
    """Right factor of ``g`` after moving a left factor of +-I to the right."""
    left, right = g.left, g.right
    if abs(left[0, 0] + 1.0) < abs(left[0, 0] - 1.0):
        left, right = -left, -right
    if np.max(np.abs(left - I2)) > 1e-6:
        raise GeometryError("not a pure fiber translation")
    return right


def _d2_shift(d2: LRIsometry) -> float:
    return float(np.angle(as_fiber_translation(d2)[1, 1]))


def unwrapped_levels(alpha: float, theta: float, max_step: float = 0.05) -> tuple[float, float, float]:
    """Matrix-route levels unwrapped by continuation in theta from theta = pi/6.

    At theta = pi/6 all three levels lie in (-pi, pi), so the wrapped reading
    there is the true value; continuity fixes the branch elsewhere.
    """
    start = math.pi / 6
    n = max(2, int(math.ceil(abs(theta - start) / max_step)) + 1)
    path = np.linspace(start, theta, n)
    rows = []
    for th in path:
        dA, cdA, shift = matrix_levels(alpha, th)
        rows.append((dA.phase, cdA.phase, shift))
    arr = np.unwrap(np.array(rows), axis=0)
    return float(arr[-1, 0]), float(arr[-1, 1]), float(arr[-1, 2])


def unwrapped_levels_many(alpha: float, thetas, max_step: float = 0.05) -> np.ndarray:
    """Rows (level d(A), level (c o d)(A), d^2 shift) for each theta, by one continuation path."""
    thetas = np.asarray(thetas, dtype=float)
    start = math.pi / 6
    lo, hi = min(start, float(thetas.min())), max(start, float(thetas.max()))
    fine = np.linspace(lo, hi, max(2, int(math.ceil((hi - lo) / max_step)) + 1))
    path = np.unique(np.concatenate([fine, thetas, [start]]))
    rows = []
    for th in path:
        dA, cdA, shift = matrix_levels(alpha, th)
        rows.append((dA.phase, cdA.phase, shift))
    raw = np.array(rows)
    k0 = int(np.searchsorted(path, start))
    # unwrap outward from the anchor so its wrapped value is kept
    up = np.unwrap(raw[k0:], axis=0)
    down = np.unwrap(raw[k0::-1], axis=0)[::-1]
    arr = np.concatenate([down[:-1], up])
    return arr[np.searchsorted(path, thetas)]


def nil_levels(t: float) -> tuple[np.ndarray, np.ndarray]:
    """Images of A = (1, 0, 0, 1) under d_t and c_t d_t in the Nil model."""
    w = words_cd(nil_generators(t))
    A = np.array([1.0, 0.0, 0.0, 1.0])
    dA = w.d_lm @ A
    return dA, w.c_lm @ dA


def holonomy_for(alpha: float, theta: float | None = None, t: float | None = None) -> Pair:
    if t is not None:
        return nil_generators(t)
    if theta is None:
        raise GeometryError("theta is required for the curved generators")
    return generators_ab(alpha, theta)
