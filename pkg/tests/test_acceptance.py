"""Acceptance gate: ten criteria, one PASS/FAIL line each.

Run under pytest, or directly with ``python tests/test_acceptance.py``.
"""

import csv
import io
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import expected_class  # noqa: E402
from trefoil_geom import holonomy as hol  # noqa: E402
from trefoil_geom import metric as met  # noqa: E402
from trefoil_geom import plots  # noqa: E402
from trefoil_geom import surgery as sg  # noqa: E402
from trefoil_geom import verify as ver  # noqa: E402
from trefoil_geom.errors import Degenerate  # noqa: E402
from trefoil_geom.surface2d import Regime, base_geometry, chi_cone, sig_23r  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"
PI2 = math.pi**2
TOL = 1e-9
SEED = 42

ALPHAS = ver.alpha_grid(50)
THETAS = ver.theta_grid(50)


class Gate:
    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.items: list[tuple[str, bool]] = []
        self.t0 = time.perf_counter()

    def check(self, label: str, ok) -> None:
        self.items.append((label, bool(ok)))

    def runtime(self, limit: float) -> None:
        dt = time.perf_counter() - self.t0
        self.check(f"runtime {dt:.2f}s < {limit:g}s", dt < limit)

    @property
    def ok(self) -> bool:
        return bool(self.items) and all(ok for _, ok in self.items)

    def line(self) -> str:
        failed = [lbl for lbl, ok in self.items if not ok]
        tail = "" if not failed else " | failed: " + "; ".join(failed)
        return f"[{'PASS' if self.ok else 'FAIL'}] criterion {self.number}: {self.title}{tail}"


def _emit(gate: Gate, capsys=None) -> None:
    if capsys is None:
        print(gate.line())
    else:
        with capsys.disabled():
            print("\n" + gate.line())
    assert gate.ok, gate.line()


def criterion_1() -> Gate:
    g = Gate(1, "worked volumes to 1e-12 relative, < 1 s")
    cases = [
        ((-1, 1, 1), 2 * PI2 / 120),
        ((1, 0, 5), 2 * PI2 / 600),
        ((1, 0, 2), 2 * PI2 / 6),
        ((1, 0, 3), 2 * PI2 / 24),
        ((1, 0, 4), 2 * PI2 / 96),
        ((1, 0, math.inf), PI2 / 12),
        ((1, 0, 6), 0.0),
    ]
    for spec, want in cases:
        got = sg.volume(sg.SurgerySpec(*spec))
        ok = got == 0.0 if want == 0 else abs(got - want) <= 1e-12 * want
        g.check(f"V{spec} = {got!r}, want {want!r}", ok)
    g.runtime(1.0)
    return g


def criterion_2() -> Gate:
    g = Gate(2, "relator aba = bab on the 50x50 grid (LR and 4x4) and Nil identity, < 5 s")
    assert len(ALPHAS) == 50 and not np.any(np.isclose(ALPHAS, math.pi / 6))
    lr = lm = 0.0
    for alpha in ALPHAS:
        for theta in THETAS:
            rep = hol.relator_check(hol.generators_ab(alpha, theta, check=False))
            lr, lm = max(lr, rep.lr_residual), max(lm, rep.lm_residual)
    g.check(f"LR residual {lr:.2e} <= 1e-9", lr <= TOL)
    g.check(f"4x4 residual {lm:.2e} <= 1e-9", lm <= TOL)
    sq3 = math.sqrt(3)
    for t in (-1.0, 0.0, 0.37, 5.0):
        p = hol.nil_generators(t)
        aba, bab = p.a_t @ p.b_t @ p.a_t, p.b_t @ p.a_t @ p.b_t
        shown = np.array([[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, -2 * sq3 * (6 * t + 1)], [0, 0, 0, 1]])
        g.check(f"Nil t={t} aba = bab", np.abs(aba - bab).max() <= TOL)
        g.check(f"Nil t={t} product matrix", np.abs(aba - shown).max() <= TOL)
    g.runtime(5.0)
    return g


def criterion_3() -> Gate:
    g = Gate(3, "torsion (NM)^3 = (MNM)^2 = -I, d left = diag(i,-i), d^2 shift = 6theta - pi")
    I2 = np.eye(2)
    tors = dleft = 0.0
    for alpha in ALPHAS:
        for theta in THETAS:
            pair = hol.generators_ab(alpha, theta, check=False)
            M, N = pair.a.left, pair.b.left
            NM, MNM = N @ M, M @ N @ M
            tors = max(tors, np.abs(NM @ NM @ NM + I2).max(), np.abs(MNM @ MNM + I2).max())
            dleft = max(dleft, np.abs(hol.words_cd(pair).d.left - np.diag([1j, -1j])).max())
    shift = 0.0
    for alpha in ALPHAS:
        rows = hol.unwrapped_levels_many(alpha, THETAS)
        shift = max(shift, float(np.abs(rows[:, 2] - (6 * THETAS - math.pi)).max()))
    g.check(f"torsion {tors:.2e}", tors <= TOL)
    g.check(f"d left {dleft:.2e}", dleft <= TOL)
    g.check(f"d^2 shift (unwrapped) {shift:.2e}", shift <= TOL)
    return g


def criterion_4() -> Gate:
    g = Gate(4, "pullback residual <= 1e-5 for l_q, r_q', R, t+-1, a, b at >= 200 points, 4 curvatures, < 30 s")
    seen = {}
    for S, (name, iso) in ver.certification_maps(SEED):
        rep = met.isometry_pullback_test(iso, S, 200, seed=SEED)
        seen.setdefault(round(S, 12), []).append(name)
        g.check(
            f"S={S:.4g} {name}: {rep.max_residual:.2e} over {rep.sample_count}",
            rep.passed() and rep.sample_count >= 200 and rep.max_residual <= 1e-5,
        )
    expected = {"l_q", "r_q'", "R", "t_1", "t_-1", "a", "b"}
    for S in (-1.0, -1 / 3, 0.5):
        got = next(v for k, v in seen.items() if abs(k - S) < 1e-12)
        g.check(f"all maps at S={S:.4g}", set(got) == expected)
    got1 = next(v for k, v in seen.items() if abs(k - 1.0) < 1e-12)
    g.check("all defined maps at S=1", set(got1) == expected - {"t_1", "t_-1"})
    try:
        hol.translations_t(1.0)
        g.check("t+-1 at S=1 is Degenerate", False)
    except Degenerate:
        g.check("t+-1 at S=1 is Degenerate", True)
    g.runtime(30.0)
    return g


def criterion_5() -> Gate:
    g = Gate(5, "projection equivariance |p(gx) - h_g(p(x))| <= 1e-9")
    worst = max(ver.equivariance_residual(seed) for seed in (SEED, SEED + 1, SEED + 2))
    g.check(f"max absolute gap {worst:.2e}", worst <= TOL)
    return g


def criterion_6() -> Gate:
    g = Gate(6, "closed form vs conjugation route <= 1e-9; Nil limit within 5e-3 at pi/6 +- 1e-4")
    route = max(hol.route_residual(a, t) for a in ALPHAS for t in THETAS)
    g.check(f"route residual {route:.2e}", route <= TOL)
    worst = 0.0
    for t in (-1.0, -0.5, 0.0, 0.37, 1.0, 5.0):
        target = hol.nil_generators(t)
        for eps in (1e-4, -1e-4):
            alpha = math.pi / 6 + eps
            theta = alpha + t * (6 * alpha - math.pi)
            p = hol.generators_ab(alpha, theta, check=False)
            worst = max(worst, np.abs(p.a_lm - target.a_t).max(), np.abs(p.b_lm - target.b_t).max())
    g.check(f"Nil limit distance {worst:.2e}", worst <= 5e-3)
    return g


def criterion_7() -> Gate:
    g = Gate(7, "classification scan equals the threshold theorem; spherical orbifolds only r in {2,3,4,5}")
    got: dict[str, set] = {}
    want: dict[str, set] = {}
    for p in range(-20, 21):
        for q in range(0, 21):
            if p == 0 or math.gcd(p, q) != 1 or (q == 0 and p < 0) or p + 6 * q == 0:
                continue
            for r in range(1, 13):
                got.setdefault(sg.classify(sg.SurgerySpec(p, q, r)).value, set()).add((p, q, r))
                want.setdefault(expected_class(p, q, Fraction(r)), set()).add((p, q, r))
    g.check("class sets equal", got == want)
    g.check("all four classes occur", set(got) == {"spherical", "nil", "sl2r", "unknown"})
    radii = {r for p, q, r in got["spherical"] if r >= 2}
    g.check(f"spherical orbifold radii {sorted(radii)}", radii == {2, 3, 4, 5})
    g.check("library scan agrees", sg.spherical_orbifold_radii() == {2, 3, 4, 5})
    return g


def criterion_8() -> Gate:
    g = Gate(8, "matrix levels d(A) = 3theta - pi/2, (c o d)(A) = 5theta + alpha - pi")
    worst = 0.0
    for alpha in ALPHAS:
        rows = hol.unwrapped_levels_many(alpha, THETAS)
        worst = max(
            worst,
            float(np.abs(rows[:, 0] - (3 * THETAS - math.pi / 2)).max()),
            float(np.abs(rows[:, 1] - (5 * THETAS + alpha - math.pi)).max()),
        )
    g.check(f"max level error {worst:.2e}", worst <= TOL)
    return g


def criterion_9() -> Gate:
    g = Gate(9, "sign of chi for (2,3,r) matches base geometry at 100 r in (6/5, 60]")
    lo, hi = Fraction(6, 5), Fraction(60)
    rs = [lo + (hi - lo) * k / 100 for k in range(1, 101)]
    rs += [Fraction(6), Fraction(5), Fraction(7)]
    bad = []
    for r in rs:
        chi = chi_cone(sig_23r(r))
        geom = base_geometry(r)
        expect = Regime.SPHERICAL if chi > 0 else Regime.EUCLIDEAN if chi == 0 else Regime.HYPERBOLIC
        if geom is not expect:
            bad.append(str(r))
    g.check(f"{len(rs)} values, mismatches {bad}", not bad)
    return g


def criterion_10() -> Gate:
    g = Gate(10, "P1 and P2 CSVs byte-stable against golden files; gcd = 1 points on x = 6 are Nil")
    for which in plots.Which:
        a = plots.to_csv(plots.plot_regions(which))
        b = plots.to_csv(plots.plot_regions(which))
        g.check(f"{which.value} golden bytes", a == b == (GOLDEN / f"{which.value}.csv").read_text())
    rows = list(csv.DictReader(io.StringIO((GOLDEN / "p2.csv").read_text())))
    six = [r for r in rows if r["m"] == "6" and math.gcd(6, int(r["n"])) == 1]
    g.check(f"{len(six)} marked points on x = 6", six and all(r["class"] == "nil" and r["marked"] == "1" for r in six))
    return g


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("crit", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 11)])
def test_criterion(crit, capsys):
    _emit(crit(), capsys)


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.ok for r in results) else 1)
