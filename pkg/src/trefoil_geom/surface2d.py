"""Cone surfaces, the (O,0|2,3,r) family and the isosceles base triangle."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from trefoil_geom.algebra import tau_alg
from trefoil_geom.errors import Degenerate, GeometryError, OutOfRange

Real = Union[int, float, Fraction]

ALPHA_MAX = 5 * math.pi / 6
ALPHA_EUCLIDEAN = math.pi / 6


class Regime(enum.Enum):
    HYPERBOLIC = "hyperbolic"
    EUCLIDEAN = "euclidean"
    SPHERICAL = "spherical"
    CUSP = "cusp"


def _is_infinite(r) -> bool:
    return isinstance(r, float) and math.isinf(r)


@dataclass(frozen=True)
class ConeSurfaceSig:
    """Signature (O,g | r_1, ..., r_k); ``math.inf`` marks a cusp."""

    genus: int = 0
    valuations: tuple = ()
    orientable: bool = True

    def __post_init__(self):
        if self.genus < 0:
            raise GeometryError("genus must be non-negative")
        if not self.orientable:
            raise NotImplementedError("only orientable cone surfaces are supported")
        vals = tuple(self.valuations)
        for r in vals:
            if not _is_infinite(r) and r == 1:
                raise GeometryError("a singular point cannot have valuation 1")
            if not _is_infinite(r) and r <= 0:
                raise GeometryError("valuations must be positive")
        object.__setattr__(self, "valuations", vals)

    @property
    def is_orbifold(self) -> bool:
        return all(_is_infinite(r) or Fraction(r).denominator == 1 for r in self.valuations)


def chi_cone(sig: ConeSurfaceSig) -> Real:
    """Cone Euler characteristic ``2 - 2g - k + sum 1/r_i`` (cusps contribute 0)."""
    total: Real = 2 - 2 * sig.genus - len(sig.valuations)
    for r in sig.valuations:
        if _is_infinite(r):
            continue
        total = total + (Fraction(1, 1) / r if isinstance(r, (int, Fraction)) else 1.0 / r)
    return total


def sig_23r(r: Real) -> ConeSurfaceSig:
    return ConeSurfaceSig(0, (2, 3, r))


def base_geometry(r: Real) -> Regime:
    """Model geometry of (O,0|2,3,r) for r > 6/5; ``math.inf`` gives HYPERBOLIC."""
    if _is_infinite(r):
        return Regime.HYPERBOLIC
    if r <= Fraction(6, 5):
        raise OutOfRange(f"(O,0|2,3,r) has no cone structure for r = {r} <= 6/5")
    if isinstance(r, (int, Fraction)):
        gap = Fraction(1, 6) - Fraction(1, 1) / r
        if gap == 0:
            return Regime.EUCLIDEAN
    else:
        gap = 1.0 / 6.0 - 1.0 / r
        if abs(gap) <= tau_alg():
            return Regime.EUCLIDEAN
    return Regime.HYPERBOLIC if gap > 0 else Regime.SPHERICAL


def _check_alpha(alpha: float) -> None:
    if not (0.0 <= alpha < ALPHA_MAX):
        raise OutOfRange(f"alpha = {alpha} outside [0, 5pi/6)")


def s_of_alpha(alpha: float) -> float:
    """Curvature parameter ``S = (1 - 2 sin a)/(1 + 2 sin a)`` of the base disk."""
    _check_alpha(alpha)
    s = 2.0 * math.sin(alpha)
    return (1.0 - s) / (1.0 + s)


def regime_of_alpha(alpha: float) -> Regime:
    _check_alpha(alpha)
    if alpha == 0:
        return Regime.CUSP
    if abs(1.0 - 2.0 * math.sin(alpha)) <= tau_alg():
        return Regime.EUCLIDEAN
    return Regime.HYPERBOLIC if alpha < ALPHA_EUCLIDEAN else Regime.SPHERICAL


@dataclass(frozen=True)
class TriangleSolution:
    """Isosceles triangle with base angles ``alpha`` and apex angle 2pi/3.

    ``mu`` is the half base (midpoint to a base vertex) and ``lambda_side``
    the altitude from the base midpoint to the apex.  Lengths are measured in
    curvature +-1 units; the Euclidean representative has base vertices at +-1.
    """

    alpha: float
    S: float
    mu: float
    lambda_side: float
    area: float
    regime: Regime
    notes: tuple = field(default=(), compare=False)


def solve_triangle(alpha: float) -> TriangleSolution:
    _check_alpha(alpha)
    regime = regime_of_alpha(alpha)
    S = s_of_alpha(alpha)
    if regime is Regime.CUSP:
        return TriangleSolution(alpha, S, math.inf, math.acosh(2.0 / math.sqrt(3.0)), math.pi / 3, regime,
                                ("base vertices are ideal",))
    if regime is Regime.EUCLIDEAN:
        height = math.tan(math.pi / 6)
        return TriangleSolution(alpha, 0.0, 1.0, height, height, regime)
    half = 1.0 / (2.0 * math.sin(alpha))
    slant = 2.0 * math.cos(alpha) / math.sqrt(3.0)
    if regime is Regime.HYPERBOLIC:
        return TriangleSolution(alpha, S, math.acosh(half), math.acosh(slant), math.pi / 3 - 2 * alpha, regime)
    return TriangleSolution(alpha, S, math.acos(min(half, 1.0)), math.acos(max(min(slant, 1.0), -1.0)),
                            2 * alpha - math.pi / 3, regime)


def alpha_to_model_distance(alpha: float) -> float:
    """Half base computed through S: ``cosh mu`` (or ``cos mu``) equals ``(1+S)/(1-S)``."""
    regime = regime_of_alpha(alpha)
    if regime is Regime.CUSP:
        raise Degenerate("alpha = 0: the base vertices are ideal, mu is infinite")
    if regime is Regime.EUCLIDEAN:
        return 1.0
    S = s_of_alpha(alpha)
    ratio = (1.0 + S) / (1.0 - S)
    if S > 0:
        return math.acosh(ratio)
    return math.acos(min(ratio, 1.0))


def rescaled_half_base(alpha: float) -> float:
    """``mu / (2 sqrt|S|)``: the Euclidean radius of the model distance, continuous through pi/6."""
    regime = regime_of_alpha(alpha)
    if regime is Regime.EUCLIDEAN:
        return 1.0
    S = s_of_alpha(alpha)
    return alpha_to_model_distance(alpha) / (2.0 * math.sqrt(abs(S)))


def sign_of(x) -> int:
    return (x > 0) - (x < 0)


def chi_sign_matches(r: Real) -> bool:
    """Gauss-Bonnet sign law for (O,0|2,3,r)."""
    expected = {Regime.SPHERICAL: 1, Regime.EUCLIDEAN: 0, Regime.HYPERBOLIC: -1}[base_geometry(r)]
    chi = chi_cone(sig_23r(r))
    if isinstance(chi, float) and abs(chi) <= tau_alg():
        return expected == 0
    return sign_of(chi) == expected


def triangle_angles(alpha: float) -> Sequence[float]:
    return (alpha, alpha, 2 * math.pi / 3)
