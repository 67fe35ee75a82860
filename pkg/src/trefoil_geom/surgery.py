"""From surgery data (p, q, r) on the trefoil to geometry, Seifert symbol and volume.

Sign bookkeeping: with ``m = p + 6q`` and ``eps = sign(m)`` every formula is
evaluated at ``r_eff = eps * r``, so the thresholds only see ``r |m|``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from scipy import integrate

from trefoil_geom.algebra import tau_alg
from trefoil_geom.errors import Degenerate, GeometryError, NotApplicable, NotRepresentable, OutOfRange, Undefined
from trefoil_geom.surface2d import s_of_alpha, sign_of, solve_triangle

RValue = Union[int, Fraction, float]
INF = math.inf


class GeometryClass(enum.Enum):
    SPHERICAL = "spherical"
    NIL = "nil"
    SL2R = "sl2r"
    EUCLIDEAN3 = "euclidean3"
    H2XR = "h2xr"
    S2XR = "s2xr"
    UNKNOWN = "unknown"

    @property
    def curved(self) -> bool:
        return self in (GeometryClass.SPHERICAL, GeometryClass.SL2R)


def parse_r(text: Union[str, RValue]) -> RValue:
    """``"inf"``, ``"a/b"``, an integer or a decimal."""
    if not isinstance(text, str):
        return _normalize_r(text)
    s = text.strip().lower()
    if s in ("inf", "infinity", "oo"):
        return INF
    try:
        if "/" in s:
            return _normalize_r(Fraction(s))
        return _normalize_r(int(s))
    except ValueError:
        pass
    try:
        return _normalize_r(float(s))
    except ValueError:
        raise GeometryError(f"cannot parse r = {text!r}") from None


def _normalize_r(r) -> RValue:
    if isinstance(r, bool):
        raise GeometryError("r must be a number")
    if isinstance(r, Fraction):
        r = int(r) if r.denominator == 1 else r
    elif isinstance(r, float) and math.isfinite(r) and r.is_integer():
        r = int(r)
    elif not isinstance(r, (int, float)):
        raise GeometryError(f"unsupported r {r!r}")
    if isinstance(r, float) and math.isnan(r):
        raise GeometryError("r is NaN")
    if r <= 0:
        raise OutOfRange(f"r must be positive, got {r}")
    return r


def _is_exact(r) -> bool:
    return isinstance(r, (int, Fraction))


def _is_inf(r) -> bool:
    return isinstance(r, float) and math.isinf(r)


@dataclass(frozen=True)
class SurgerySpec:
    """Cone-manifold (T_{p/q}, r): p/q surgery on the left trefoil with cone angle 2pi/r."""

    p: int
    q: int
    r: RValue = 1

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if (p, q) == (0, 0):
            raise GeometryError("(p, q) = (0, 0) is not a surgery coefficient")
        if math.gcd(p, q) != 1:
            raise GeometryError(f"gcd({p}, {q}) != 1")
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        if p + 6 * q == 0:
            raise Degenerate("p + 6q = 0: the exceptional fiber collapses")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", _normalize_r(self.r))

    @property
    def m(self) -> int:
        return self.p + 6 * self.q

    @property
    def eps(self) -> int:
        return 1 if self.m > 0 else -1

    @property
    def is_orbifold(self) -> bool:
        return isinstance(self.r, int)

    def rm(self) -> RValue:
        """``r |p + 6q|``, the quantity compared to the thresholds."""
        return self.r * abs(self.m)

    def __str__(self) -> str:
        return f"(T_{self.p}/{self.q}, r={self.r})"


def sphericity_limits(p: int, q: int) -> tuple[Fraction, Fraction]:
    """Lower and upper limits of sphericity ``6/(p+6q)`` and ``6/(5(p+6q))``."""
    m = p + 6 * q
    if m == 0:
        raise Degenerate("p + 6q = 0")
    return Fraction(6, m), Fraction(6, 5 * m)


def _compare(x: RValue, target: Fraction) -> int:
    """-1, 0, 1 for x below / at / above target; floats use a relative tolerance."""
    if _is_inf(x):
        return 1
    if _is_exact(x):
        return sign_of(Fraction(x) - target)
    t = float(target)
    if abs(x - t) <= tau_alg() * max(1.0, t):
        return 0
    return 1 if x > t else -1


def classify(spec: SurgerySpec) -> GeometryClass:
    if spec.p == 0:
        return zero_surgery_classify(spec.r)
    rm = spec.rm()
    upper = _compare(rm, Fraction(6))
    if upper == 0:
        return GeometryClass.NIL
    if upper > 0:
        return GeometryClass.SL2R
    if _compare(rm, Fraction(6, 5)) > 0:
        return GeometryClass.SPHERICAL
    return GeometryClass.UNKNOWN


def zero_surgery_classify(r: RValue) -> GeometryClass:
    r = _normalize_r(r)
    at_one = _compare(r, Fraction(1))
    if at_one == 0:
        return GeometryClass.EUCLIDEAN3
    if at_one > 0:
        return GeometryClass.H2XR
    if _compare(r, Fraction(1, 5)) > 0:
        return GeometryClass.S2XR
    return GeometryClass.UNKNOWN


def surgery_params(spec: SurgerySpec) -> tuple[float, float]:
    """(alpha, theta) of the holonomy; alpha = 0 at r = inf."""
    if spec.p == 0:
        raise NotApplicable("p = 0: use zero_surgery_classify")
    p, q = spec.p, spec.q
    if _is_inf(spec.r):
        return 0.0, -math.pi * q / p + 0.0
    r_eff = spec.eps * float(spec.r)
    alpha = math.pi / (float(spec.r) * abs(spec.m))
    theta = math.pi * (1.0 / (p * r_eff) - q / p)
    return alpha, theta


def cone_angle(spec: SurgerySpec) -> float:
    """2pi/r, cross-checked against 2 alpha |p + 6q|."""
    if _is_inf(spec.r):
        return 0.0
    beta = 2.0 * math.pi / float(spec.r)
    if spec.p != 0:
        alpha, _ = surgery_params(spec)
        if abs(beta - 2.0 * alpha * abs(spec.m)) > tau_alg():
            raise GeometryError("cone angle disagrees with 2 alpha |p + 6q|")
    return beta


@dataclass(frozen=True)
class SingularLength:
    raw: float
    length: float


def singular_length(spec: SurgerySpec) -> SingularLength:
    """``6pi/(p r (p+6q)) - pi/p`` (signed) and its magnitude."""
    if spec.p == 0:
        raise NotApplicable("p = 0: no singular length formula")
    p, m = spec.p, spec.m
    if _is_inf(spec.r):
        raw = -math.pi / p
    else:
        raw = 6.0 * math.pi / (p * spec.eps * float(spec.r) * m) - math.pi / p
    return SingularLength(raw, abs(raw))


def _require_volume(spec: SurgerySpec) -> GeometryClass:
    if spec.p == 0:
        raise NotApplicable("p = 0: no volume formula")
    cls = classify(spec)
    if cls is GeometryClass.UNKNOWN:
        raise Undefined(f"{spec} has no known geometry, so no volume")
    return cls


def volume(spec: SurgerySpec) -> float:
    """Normalized volume ``|pi^2 (r|m| - 6)^2 / (12 p r^2 m)|`` (0 for Nil)."""
    cls = _require_volume(spec)
    if cls is GeometryClass.NIL:
        return 0.0
    p, m = spec.p, spec.m
    if _is_inf(spec.r):
        return math.pi**2 / (12.0 * abs(p * m))
    if _is_exact(spec.r):
        r = Fraction(spec.r)
        exact = (r * abs(m) - 6) ** 2 / (12 * abs(p) * r * r * abs(m))
        return math.pi**2 * float(exact)
    r = float(spec.r)
    return abs(math.pi**2 * (r * abs(m) - 6.0) ** 2 / (12.0 * p * r * r * m))


def volume_seifert(m: int, n: int) -> float:
    """The same volume written in the S(m, n) notation, ``|pi^2 (m-6)^2 / (12 m (m - 6n))|``."""
    if m == 0 or m == 6 * n:
        raise NotApplicable("volume in S(m, n) form needs m != 0 and m != 6n")
    return abs(math.pi**2 * (m - 6) ** 2 / (12.0 * m * (m - 6 * n)))


def fiber_height(spec: SurgerySpec) -> float:
    """``|6 theta - pi|``, the fiber extent of the fundamental domain."""
    _, theta = surgery_params(spec)
    return abs(6.0 * theta - math.pi)


def volume_by_quadrature(spec: SurgerySpec) -> float:
    """fiber height * (1/4) * triangle area, with the area from the base triangle solver."""
    cls = _require_volume(spec)
    if cls is GeometryClass.NIL:
        return 0.0
    alpha, _ = surgery_params(spec)
    return fiber_height(spec) * 0.25 * abs(solve_triangle(alpha).area)


def _ray_radius(phi: float, S: float, H: float) -> float:
    """Distance from 0 along angle ``phi`` to the geodesic through 1 and iH."""
    cx = 0.5 * (1.0 + 1.0 / S)
    cy = (H * H + 1.0 / S) / (2.0 * H)
    k = cx * math.cos(phi) + cy * math.sin(phi)
    disc = math.sqrt(k * k - 1.0 / S)
    return k - disc if S > 0 else k + disc


def triangle_area_by_integration(alpha: float) -> float:
    """Area (curvature +-1 units) of the base triangle by integrating the conformal metric of D_S."""
    tri = solve_triangle(alpha)
    S = s_of_alpha(alpha)
    if tri.regime.value in ("euclidean", "cusp"):
        raise NotApplicable("integration oracle covers the curved, finite-vertex regimes only")
    if S > 0:
        H = math.tanh(tri.lambda_side / 2.0) / math.sqrt(S)
    else:
        H = math.tan(tri.lambda_side / 2.0) / math.sqrt(-S)

    def half(phi: float) -> float:
        R = _ray_radius(phi, S, H)
        return R * R / (2.0 * (1.0 - S * R * R))

    # The triangle is symmetric about the imaginary axis.
    val, _ = integrate.quad(half, 0.0, math.pi / 2, epsabs=1e-14, epsrel=1e-13, limit=200)
    return 4.0 * abs(S) * 2.0 * val


def volume_by_integration(spec: SurgerySpec) -> float:
    cls = _require_volume(spec)
    if cls is GeometryClass.NIL:
        return 0.0
    alpha, _ = surgery_params(spec)
    return fiber_height(spec) * 0.25 * triangle_area_by_integration(alpha)


@dataclass(frozen=True)
class SeifertData:
    """(Oo0 | b; (2,1), (3,1), (a, c)) with cone angle 2pi/gcd along the last fiber."""

    b: int
    pairs: tuple
    cone_angle: float
    exceptional: tuple
    gcd: RValue
    m: RValue
    n: RValue

    def symbol(self) -> str:
        body = ", ".join(f"({a},{c})" for a, c in self.pairs)
        return f"(Oo0|{self.b}; {body})"

    def normalized(self) -> "SeifertData":
        """Absorb (1, k) fibers into b."""
        b = self.b
        kept = []
        for a, c in self.pairs:
            if a == 1:
                b += c
            else:
                kept.append((a, c))
        return SeifertData(b, tuple(kept), self.cone_angle, self.exceptional, self.gcd, self.m, self.n)


def seifert_of(spec: SurgerySpec) -> SeifertData:
    """S(m, n) with m = r|p + 6q|, n = eps r q."""
    if _is_inf(spec.r):
        raise NotRepresentable("r = inf: the knot complement has no closed Seifert symbol")
    if not _is_exact(spec.r):
        raise NotRepresentable(f"r = {spec.r} is not rational; pass it as an integer or a/b")
    r = spec.r
    a, c = abs(spec.m), spec.eps * spec.q
    m = _normalize_int(r * a)
    n = _normalize_int(r * c)
    return SeifertData(-1, ((2, 1), (3, 1), (a, c)), cone_angle(spec), (a, c), r, m, n)


def _normalize_int(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def spec_from_seifert(m: RValue, n: RValue) -> SurgerySpec:
    """Inverse of :func:`seifert_of`: ``S(m, n) = (T_{(m - 6n)/n}, gcd(m, n))``."""
    m, n = Fraction(m), Fraction(n)
    if m < 0:
        raise OutOfRange("S(m, n) requires m >= 0")
    if m == 0 and n == 0:
        raise GeometryError("S(0, 0) is undefined")
    # rational gcd: the largest g with m/g, n/g coprime integers
    g = Fraction(math.gcd(m.numerator * n.denominator, n.numerator * m.denominator), m.denominator * n.denominator)
    p = (m - 6 * n) / g
    q = n / g
    return SurgerySpec(int(p), int(q), g)


def seifert_coefficient_check(spec: SurgerySpec) -> Optional[float]:
    """``max`` discrepancy of (6theta - pi)/(theta - alpha) = 6 + p/q and (6alpha - pi)/(theta - alpha) = p/q.

    None when q = 0 or at r = inf, where theta = alpha or the ratio degenerates.
    """
    if spec.q == 0 or spec.p == 0 or _is_inf(spec.r):
        return None
    alpha, theta = surgery_params(spec)
    if abs(theta - alpha) < 1e-15:
        return None
    p, q = spec.p, spec.q
    e1 = abs((6 * theta - math.pi) / (theta - alpha) - (6 + p / q))
    e2 = abs((6 * alpha - math.pi) / (theta - alpha) - p / q)
    return max(e1 / max(1.0, abs(6 + p / q)), e2 / max(1.0, abs(p / q)))


def gamma_e(x: float) -> float:
    """Limit of sphericity of S(x, y)."""
    return 5.0 * x * math.pi / 3.0


def gamma_N(x: float) -> float:
    """Nil angle of S(x, y)."""
    return x * math.pi / 3.0


@dataclass(frozen=True)
class GeomStructure:
    spec: SurgerySpec
    cls: GeometryClass
    alpha: Optional[float] = None
    theta: Optional[float] = None
    S: Optional[float] = None
    cone_angle: float = 0.0
    length: Optional[SingularLength] = None
    volume: Optional[float] = None
    seifert: Optional[SeifertData] = None
    notes: tuple = field(default=(), compare=False)


def geometric_structure(spec: SurgerySpec) -> GeomStructure:
    cls = classify(spec)
    beta = cone_angle(spec)
    notes = []
    try:
        seif = seifert_of(spec)
    except NotRepresentable as exc:
        seif = None
        notes.append(str(exc))
    if spec.p == 0:
        return GeomStructure(spec, cls, cone_angle=beta, seifert=seif, notes=tuple(notes))
    alpha, theta = surgery_params(spec)
    length = singular_length(spec)
    vol = None if cls is GeometryClass.UNKNOWN else volume(spec)
    S: Optional[float] = None
    if cls is GeometryClass.NIL:
        S = 0.0
    elif cls.curved:
        S = s_of_alpha(alpha)
    if seif is not None and abs(seif.exceptional[0]) == 1 and cls is GeometryClass.SPHERICAL:
        notes.append("the (1, n) fiber is not a geodesic of the spherical structure")
    return GeomStructure(spec, cls, alpha, theta, S, beta, length, vol, seif, tuple(notes))


def nil_parameter(spec: SurgerySpec) -> float:
    """t = q/p for the Nil holonomy."""
    if spec.p == 0:
        raise NotApplicable("p = 0")
    return spec.q / spec.p


def _specs(max_p: int, max_q: int):
    for p in range(-max_p, max_p + 1):
        for q in range(0, max_q + 1):
            if p == 0 or math.gcd(p, q) != 1 or (q == 0 and p < 0) or p + 6 * q == 0:
                continue
            yield p, q


def spherical_orbifold_radii(max_p: int = 20, max_q: int = 20, max_r: int = 12) -> set[int]:
    """Integer r >= 2 for which some (T_{p/q}, r) in the window is spherical."""
    found = set()
    for p, q in _specs(max_p, max_q):
        for r in range(2, max_r + 1):
            if classify(SurgerySpec(p, q, r)) is GeometryClass.SPHERICAL:
                found.add(r)
    return found


@dataclass
class SummaryReport:
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def summary_checks(x_max: int = 20, y_max: int = 40) -> SummaryReport:
    rep = SummaryReport()
    rep.checks["gamma_e = 5 gamma_N"] = all(
        abs(gamma_e(x) - 5 * gamma_N(x)) <= 1e-12 * gamma_e(x) for x in range(1, x_max + 1)
    )
    rep.checks["spherical orbifolds have 2 <= r <= 5"] = spherical_orbifold_radii() == {2, 3, 4, 5}

    def nil_with_r(m, n, r_expected):
        spec = spec_from_seifert(m, n)
        return classify(spec) is GeometryClass.NIL and spec.r == r_expected

    rep.checks["S(6,y), gcd(6,y)=1, y>1 is non-singular Nil"] = all(
        nil_with_r(6, y, 1) for y in range(2, y_max + 1) if math.gcd(6, y) == 1
    )
    # S(6,1) is 0-surgery: Seifert Euler number 0, so flat rather than Nil.
    rep.checks["S(6,1) is Euclidean"] = classify(spec_from_seifert(6, 1)) is GeometryClass.EUCLIDEAN3
    rep.checks["S(6,3y), gcd(2,y)=1 is a Nil orbifold with r=3"] = all(
        nil_with_r(6, 3 * y, 3) for y in range(0, y_max + 1) if math.gcd(2, y) == 1
    )
    rep.checks["S(6,2y), gcd(3,y)=1 is a Nil orbifold with r=2"] = all(
        nil_with_r(6, 2 * y, 2) for y in range(0, y_max + 1) if math.gcd(3, y) == 1
    )
    return rep
