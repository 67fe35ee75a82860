"""Invariant suites behind ``trefoil-geom verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from trefoil_geom import holonomy as hol
from trefoil_geom import metric as met
from trefoil_geom import surgery as sg
from trefoil_geom.algebra import (
    INFINITY,
    LRIsometry,
    compose_word,
    homography_of,
    project_p,
    quadric_check,
    random_quadric_points,
    seifert_coords,
    seifert_lift,
    tau_alg,
)
from trefoil_geom.errors import Degenerate
from trefoil_geom.surface2d import ALPHA_MAX

SUITES = ("algebra", "metric", "holonomy", "surgery")

# (surgery, volume) for the seven worked examples
WORKED_VOLUMES = [
    ((-1, 1, 1), 2 * math.pi**2 / 120),
    ((1, 0, 5), 2 * math.pi**2 / 600),
    ((1, 0, 2), 2 * math.pi**2 / 6),
    ((1, 0, 3), 2 * math.pi**2 / 24),
    ((1, 0, 4), 2 * math.pi**2 / 96),
    ((1, 0, math.inf), math.pi**2 / 12),
    ((1, 0, 6), 0.0),
]


@dataclass
class Check:
    name: str
    residual: float
    tol: float
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tol) and not self.failures

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "tol": self.tol,
            "failures": self.failures[:20],
        }


@dataclass
class Report:
    suite: str
    seed: int
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def alpha_grid(n: int = 50) -> np.ndarray:
    """n values in (0, 5pi/6) skipping the Nil point."""
    grid = (np.arange(n) + 0.5) * ALPHA_MAX / n
    return grid[np.abs(1 - 2 * np.sin(grid)) >= hol.NIL_GUARD]


def theta_grid(n: int = 50) -> np.ndarray:
    return (np.arange(n) + 0.5) * 2 * math.pi / n


def disk_gap(w1, w2) -> float:
    """|w1 - w2|; INFINITY only matches itself."""
    if w1 is INFINITY or w2 is INFINITY:
        return 0.0 if w1 is w2 else math.inf
    return abs(w1 - w2)


def random_word(rng: np.random.Generator, pair: hol.HolonomyPair, max_len: int = 6) -> LRIsometry:
    gens = [pair.a, pair.b, pair.a.inverse(), pair.b.inverse()]
    length = int(rng.integers(1, max_len + 1))
    return compose_word([gens[int(i)] for i in rng.integers(0, 4, length)], pair.S)


def equivariance_residual(seed: int, n_groups: int = 20, n_words: int = 10, n_points: int = 10) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_groups):
        alpha = float(rng.uniform(0.05, ALPHA_MAX - 0.05))
        if abs(1 - 2 * math.sin(alpha)) < 1e-3:
            continue
        pair = hol.generators_ab(alpha, float(rng.uniform(0, 2 * math.pi)), check=False)
        pts = random_quadric_points(rng, pair.S, n_points)
        for _ in range(n_words):
            g = random_word(rng, pair)
            h = homography_of(g)
            for x in pts:
                worst = max(worst, disk_gap(project_p(g.apply(x)), h(project_p(x))))
    return worst


def suite_algebra(seed: int) -> list:
    rng = np.random.default_rng(seed)
    checks = []
    worst_q = worst_rt = 0.0
    for S in (-1.0, -1 / 3, 0.5, 1.0):
        for pt in random_quadric_points(rng, S, 200):
            worst_q = max(worst_q, abs(pt.residual()))
            mu, nu, zeta = seifert_coords(pt)
            back = seifert_lift(mu, nu, zeta, S)
            worst_rt = max(worst_rt, float(np.abs(back.vector - pt.vector).max()))
            if not quadric_check(pt):
                worst_q = math.inf
    checks.append(Check("quadric residual of lifted points", worst_q, tau_alg()))
    checks.append(Check("seifert chart round trip", worst_rt, tau_alg()))
    checks.append(Check("projection equivariance p(gx) = h_g(p(x))", equivariance_residual(seed), tau_alg()))
    return checks


def suite_metric(seed: int) -> list:
    rng = np.random.default_rng(seed)
    checks = []
    min_eig, det_err, zeta_err = math.inf, 0.0, 0.0
    for S in (-1.0, -1 / 3, 0.5, 1.0):
        mu, nu, _ = met.sample_chart(rng, S, 1000)
        for a, b in zip(mu, nu):
            sample = met.metric_Q(a, b, S)
            min_eig = min(min_eig, float(np.linalg.eigvalsh(sample.matrix).min()))
            det_err = max(det_err, abs(sample.det - met.det_Q(a, b, S)) / met.det_Q(a, b, S))
            zeta_err = max(zeta_err, float(np.abs(met.metric_Q(a, b, S, zeta=2.5).matrix - sample.matrix).max()))
    checks.append(Check("metric positive definite (min eigenvalue > 0)", 0.0 if min_eig > 0 else math.inf, 0.0))
    checks.append(Check("det Q closed form (relative)", det_err, 1e-12))
    checks.append(Check("metric independent of zeta", zeta_err, 0.0))
    worst, fails = 0.0, []
    for S, g in certification_maps(seed):
        rep = met.isometry_pullback_test(g[1], S, 200, seed=seed)
        worst = max(worst, rep.max_residual)
        if not rep.passed():
            fails.append({"S": S, "map": g[0], "residual": rep.max_residual})
    checks.append(Check("isometry pullback certification", worst, met.TAU_FD, fails))
    kl = 0.0
    for mu_, nu_ in [(0.1, 0.2), (-0.4, 0.3), (0.5, -0.1)]:
        kl = max(kl, float(np.abs(met.klein_pullback_numeric(mu_, nu_, -1.0) - met.metric_Q(mu_, nu_, -1.0).matrix[:2, :2]).max()))
    checks.append(Check("Klein pullback equals principal block at S = -1", kl, met.TAU_FD))
    return checks


CERT_S = {-1.0: None, -1 / 3: math.pi / 2, 0.5: math.asin(1 / 6), 1.0: 0.0}


def certification_maps(seed: int, theta: float = 0.4):
    """(S, (name, isometry)) for l_q, r_q', R, t_+-1, a, b at the four test curvatures.

    S = -1 is outside the range of s_of_alpha, so there a and b are conjugates
    built for a free alpha.  t_+-1 do not exist at S = 1.
    """
    rng = np.random.default_rng(seed)
    out = []
    for S_nominal, alpha in CERT_S.items():
        if alpha is None:
            S = S_nominal
            a, b = hol.conjugate_ab(0.9, theta, S)
            alpha_r = 0.9
        else:
            pair = hol.generators_ab(alpha, theta, check=False)
            S, a, b, alpha_r = pair.S, pair.a, pair.b, alpha
        q = random_quadric_points(rng, S, 1)[0]
        maps = [
            ("l_q", LRIsometry.left_mult(q)),
            ("r_q'", LRIsometry.fiber_rotation(float(rng.uniform(0, 2 * math.pi)), S)),
            ("R", hol.rotation_R(alpha_r, theta, S)),
        ]
        try:
            t1, tm1 = hol.translations_t(S)
            maps += [("t_1", t1), ("t_-1", tm1)]
        except Degenerate:
            pass
        maps += [("a", a), ("b", b)]
        out += [(S, m) for m in maps]
    return out


def suite_holonomy(seed: int) -> list:
    checks = []
    rel = route = torsion = dleft = shift = lvl = 0.0
    I2 = np.eye(2)
    for alpha in alpha_grid(50):
        for theta in theta_grid(50):
            pair = hol.generators_ab(alpha, theta, check=False)
            route = max(route, hol.route_residual(alpha, theta))
            rel = max(rel, hol.relator_check(pair).max_residual)
            M, N = pair.a.left, pair.b.left
            NM = N @ M
            torsion = max(torsion, np.abs(NM @ NM @ NM + I2).max(), np.abs((M @ N @ M) @ (M @ N @ M) + I2).max())
            w = hol.words_cd(pair)
            dleft = max(dleft, np.abs(w.d.left - np.diag([1j, -1j])).max())
            shift = max(shift, abs(_wrap(hol._d2_shift(w.d2) - (6 * theta - math.pi))))
    checks.append(Check("relator aba = bab on the 50x50 grid", rel, tau_alg()))
    checks.append(Check("closed blocks vs conjugation route", route, tau_alg()))
    checks.append(Check("(NM)^3 = (MNM)^2 = -I", torsion, tau_alg()))
    checks.append(Check("left part of d is diag(i, -i)", dleft, tau_alg()))
    checks.append(Check("d^2 is the fiber translation 6 theta - pi", shift, tau_alg()))
    thetas = theta_grid(50)
    for alpha in alpha_grid(50):
        got = hol.unwrapped_levels_many(alpha, thetas)
        for (dA, cdA, sh), theta in zip(got, thetas):
            lv = hol.domain_levels(alpha, theta)
            lvl = max(lvl, abs(dA - lv.level_dA), abs(cdA - lv.level_cU), abs(sh - lv.height))
    checks.append(Check("domain levels from the matrices", lvl, tau_alg()))
    nil = 0.0
    for t in (-1.0, 0.0, 0.37, 5.0):
        p = hol.nil_generators(t)
        prod = p.a_t @ p.b_t @ p.a_t
        nil = max(nil, hol.relator_check(p).max_residual, abs(prod[2, 3] + 2 * math.sqrt(3) * (6 * t + 1)))
    checks.append(Check("Nil relator and product entry", nil, tau_alg()))
    lim = 0.0
    for t in (-1.0, 0.0, 0.37, 5.0):
        target = hol.nil_generators(t)
        for eps in (1e-4, -1e-4):
            alpha = math.pi / 6 + eps
            p = hol.generators_ab(alpha, hol.nil_theta(alpha, t), check=False)
            lim = max(lim, np.abs(p.a_lm - target.a_t).max(), np.abs(p.b_lm - target.b_t).max())
    checks.append(Check("Nil limit at pi/6 +- 1e-4", lim, 5e-3))
    return checks


def _wrap(x: float) -> float:
    return (x + math.pi) % (2 * math.pi) - math.pi


def suite_surgery(seed: int) -> list:
    checks = []
    worst = 0.0
    fails = []
    for (p, q, r), expected in WORKED_VOLUMES:
        got = sg.volume(sg.SurgerySpec(p, q, r))
        err = abs(got - expected) / expected if expected else abs(got)
        worst = max(worst, err)
        if err > 1e-12:
            fails.append({"spec": [p, q, str(r)], "volume": got, "expected": expected})
    checks.append(Check("worked volume examples", worst, 1e-12, fails))
    checks.append(Check("classification table matches the |r| thresholds", float(len(classification_mismatches())), 0.0))
    rng = np.random.default_rng(seed)
    quad = 0.0
    for spec in random_curved_specs(rng, 500):
        v = sg.volume(spec)
        quad = max(quad, abs(sg.volume_by_quadrature(spec) - v) / max(v, 1e-300))
    checks.append(Check("volume closed form vs quadrature assembly", quad, 1e-12))
    integ = 0.0
    for spec in random_curved_specs(rng, 40):
        v = sg.volume(spec)
        integ = max(integ, abs(sg.volume_by_integration(spec) - v) / v)
    checks.append(Check("volume vs numerical integration over the domain", integ, 1e-8))
    summary = sg.summary_checks()
    checks.append(Check("summary statements", 0.0, 0.0, [k for k, ok in summary.checks.items() if not ok]))
    coeff = 0.0
    for p, q in sg._specs(10, 10):
        for r in (2, 3, 7):
            c = sg.seifert_coefficient_check(sg.SurgerySpec(p, q, r))
            if c is not None:
                coeff = max(coeff, c)
    checks.append(Check("(6 theta - pi)/(theta - alpha) = 6 + p/q", coeff, 1e-9))
    return checks


def expected_class(p: int, q: int, r) -> sg.GeometryClass:
    """Classification thresholds, evaluated with exact integer arithmetic on 5 r |p + 6q|."""
    m = abs(p + 6 * q)
    if r * m == 6:
        return sg.GeometryClass.NIL
    if r * m > 6:
        return sg.GeometryClass.SL2R
    if 5 * r * m > 6:
        return sg.GeometryClass.SPHERICAL
    return sg.GeometryClass.UNKNOWN


def classification_mismatches(max_p: int = 20, max_q: int = 20, max_r: int = 12) -> list:
    bad = []
    for p, q in sg._specs(max_p, max_q):
        for r in range(1, max_r + 1):
            got = sg.classify(sg.SurgerySpec(p, q, r))
            if got is not expected_class(p, q, r):
                bad.append((p, q, r, got.value))
    return bad


def random_curved_specs(rng: np.random.Generator, n: int) -> list:
    out = []
    while len(out) < n:
        p = int(rng.integers(-30, 31))
        q = int(rng.integers(0, 31))
        if p == 0 or math.gcd(p, q) != 1 or (q == 0 and p < 0) or p + 6 * q == 0:
            continue
        r = Fraction(int(rng.integers(1, 60)), int(rng.integers(1, 12)))
        spec = sg.SurgerySpec(p, q, r)
        if sg.classify(spec).curved:
            out.append(spec)
    return out


SUITE_FUNCS: dict[str, Callable[[int], list]] = {
    "algebra": suite_algebra,
    "metric": suite_metric,
    "holonomy": suite_holonomy,
    "surgery": suite_surgery,
}


def run_suite(name: str, seed: int = 0) -> Report:
    names = SUITES if name == "all" else (name,)
    rep = Report(name, seed)
    for n in names:
        if n not in SUITE_FUNCS:
            raise KeyError(n)
        for c in SUITE_FUNCS[n](seed):
            c.name = f"{n}: {c.name}"
            rep.checks.append(c)
    return rep
