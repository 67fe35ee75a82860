import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trefoil_geom import holonomy as hol
from trefoil_geom.algebra import (
    LRIsometry,
    QuadricPoint,
    compose_word,
    homography_of,
    lr_to_linear,
    project_p,
)
from trefoil_geom.errors import ConstructionMismatch, Degenerate, NilRegime, OutOfRange
from trefoil_geom.surface2d import ALPHA_MAX, s_of_alpha

SQ3 = math.sqrt(3)
I2 = np.eye(2)

alphas = st.floats(0.01, ALPHA_MAX - 0.01).filter(lambda a: abs(1 - 2 * math.sin(a)) > 1e-4)
thetas = st.floats(-2 * math.pi, 2 * math.pi)


def test_rotation_identity_and_linear_form():
    assert np.allclose(lr_to_linear(hol.rotation_R(0.0, 0.0, 0.5)), np.eye(4))
    for S in (-1.0, 0.5):
        R = hol.rotation_R(0.4, 0.9, S)
        assert np.allclose(lr_to_linear(R), hol.rotation_R_linear(0.4, 0.9, S))
        assert hol.rotation_R_linear(0.4, 0.9, S)[2, 3] == pytest.approx(-math.sin(0.4 - 0.9) / S)


def test_rotation_projects_to_rotation_by_two_alpha():
    h = homography_of(hol.rotation_R(0.3, 1.1, 0.5))
    w = 0.4 + 0.2j
    assert h(w) == pytest.approx(np.exp(0.6j) * w)


@pytest.mark.parametrize("S", [-1.0, -1 / 3, 0.5])
def test_translations(S):
    t1, tm1 = hol.translations_t(S)
    origin = QuadricPoint.identity(S)
    assert project_p(t1.apply(origin)) == pytest.approx(1.0)
    assert project_p(tm1.apply(origin)) == pytest.approx(-1.0)
    assert np.allclose(lr_to_linear(compose_word([t1, t1.inverse()], S)), np.eye(4))
    w = 0.1 - 0.2j
    assert homography_of(t1)(w) == pytest.approx((w + 1) / (S * w + 1))
    assert homography_of(tm1)(w) == pytest.approx((w - 1) / (-S * w + 1))
    L1, Lm1 = hol.translations_t_linear(S)
    assert np.allclose(lr_to_linear(t1), L1) and np.allclose(lr_to_linear(tm1), Lm1)


def test_translations_degenerate_at_s_one():
    with pytest.raises(Degenerate):
        hol.translations_t(1.0)


def test_aba_left_part_at_pi_over_12():
    pair = hol.generators_ab(math.pi / 12, math.pi / 12)
    aba = compose_word([pair.a, pair.b, pair.a], pair.S)
    assert np.allclose(aba.left, np.diag([1j, -1j]), atol=1e-12)


@settings(max_examples=60)
@given(alphas, thetas)
def test_relator_and_torsion(alpha, theta):
    pair = hol.generators_ab(alpha, theta)
    assert hol.relator_check(pair).passed()
    M, N = pair.a.left, pair.b.left
    NM, MNM = N @ M, M @ N @ M
    assert np.allclose(NM @ NM @ NM, -I2, atol=1e-9)
    assert np.allclose(MNM @ MNM, -I2, atol=1e-9)


@settings(max_examples=60)
@given(alphas, thetas)
def test_two_routes_agree(alpha, theta):
    assert hol.route_residual(alpha, theta) <= 1e-9


def test_transcription_error_is_caught(monkeypatch):
    good = hol.closed_form_lm

    def broken(alpha, theta):
        a, b = good(alpha, theta)
        # the (3,4) entry without the 1 - 2 sin(alpha) denominator
        a = a.copy()
        a[2, 3] *= 1 - 2 * math.sin(alpha)
        return a, b

    monkeypatch.setattr(hol, "closed_form_lm", broken)
    with pytest.raises(ConstructionMismatch):
        hol.generators_ab(0.3, 0.7)


def test_generator_guards():
    with pytest.raises(NilRegime):
        hol.generators_ab(math.pi / 6, 0.3)
    with pytest.raises(NilRegime):
        hol.generators_ab(math.pi / 6 + 1e-8, 0.3)
    with pytest.raises(OutOfRange):
        hol.generators_ab(ALPHA_MAX, 0.3)
    with pytest.raises(OutOfRange):
        hol.generators_ab(-0.1, 0.3)


def test_cusp_generators_closed_form_only():
    pair = hol.generators_ab(0.0, 0.4)
    assert pair.S == 1.0 and not pair.cross_checked
    assert hol.relator_check(pair).passed()
    with pytest.raises(Degenerate):
        hol.route_residual(0.0, 0.4)


def _derivative(h, w):
    m11, m12, m21, m22 = h.coefficients
    return (m11 * m22 - m12 * m21) / (m21 * w + m22) ** 2


@pytest.mark.parametrize("alpha", [0.2, 0.9, 2.0])
def test_generators_are_rotations_about_plus_minus_one(alpha):
    pair = hol.generators_ab(alpha, 0.3)
    for g, c in ((pair.a, 1.0), (pair.b, -1.0)):
        h = homography_of(g)
        assert h(c) == pytest.approx(c, abs=1e-12)
        d = _derivative(h, c)
        assert abs(d) == pytest.approx(1.0, abs=1e-12)
        assert abs(abs(np.angle(d)) - 2 * alpha) < 1e-9 or abs(abs(np.angle(d)) - (2 * math.pi - 2 * alpha)) < 1e-9


def test_s_matches_alpha():
    pair = hol.generators_ab(0.8, 0.1)
    assert pair.S == s_of_alpha(0.8)


def test_nil_generators_entries():
    t = 0.25
    p = hol.nil_generators(t)
    assert p.a_t[2, 3] == pytest.approx(-(SQ3 / 2) * (8 * t + 1))
    assert p.b_t[2, 3] == pytest.approx(-(SQ3 / 2) * (8 * t + 1))
    assert p.a_t[3, 3] == 1 and p.b_t[3, 3] == 1
    assert p.a_t[2, 2] == 1 and p.a_t[2, 0] == pytest.approx(SQ3 / 2) and p.b_t[2, 0] == pytest.approx(-SQ3 / 2)


@pytest.mark.parametrize("t", [-1.0, 0.0, 0.37, 5.0])
def test_nil_identities(t):
    p = hol.nil_generators(t)
    aba = p.a_t @ p.b_t @ p.a_t
    assert np.abs(aba - p.b_t @ p.a_t @ p.b_t).max() <= 1e-9
    expected = np.array([[-1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, -2 * SQ3 * (6 * t + 1)], [0, 0, 0, 1]])
    assert np.allclose(aba, expected, atol=1e-9)
    w = hol.words_cd(p)
    assert w.c_lm[2, 3] == pytest.approx(-(SQ3 / 2) * (16 * t + 3))
    assert w.d2_lm[2, 3] == pytest.approx(-4 * SQ3 * (6 * t + 1))
    dA, cdA = hol.nil_levels(t)
    assert np.allclose(dA, [-1, 0, -2 * SQ3 * (6 * t + 1), 1])
    assert np.allclose(cdA, [1, 0, -4 * SQ3 * (5 * t + 1), 1])


@pytest.mark.parametrize("t", [-1.0, 0.0, 0.37])
def test_nil_limit_linear_rate(t):
    target = hol.nil_generators(t)
    errs = []
    for eps in (1e-3, 1e-4):
        alpha = math.pi / 6 + eps
        p = hol.generators_ab(alpha, hol.nil_theta(alpha, t), check=False)
        errs.append(np.abs(p.a_lm - target.a_t).max())
    assert errs[1] < 5e-3
    assert errs[0] / errs[1] == pytest.approx(10, rel=0.2)


@settings(max_examples=30)
@given(alphas, thetas)
def test_words(alpha, theta):
    pair = hol.generators_ab(alpha, theta)
    w = hol.words_cd(pair)
    assert np.allclose(w.d.left, np.diag([1j, -1j]), atol=1e-9)
    assert np.allclose(hol.as_fiber_translation(w.d2), np.diag([-np.exp(-6j * theta), -np.exp(6j * theta)]), atol=1e-9)
    assert np.trace(w.c.left).real == pytest.approx(1.0, abs=1e-9)
    assert np.allclose(w.d_lm, lr_to_linear(w.d), atol=1e-9)
    assert np.allclose(w.c_lm, lr_to_linear(w.c), atol=1e-9)


def test_domain_levels_formulas():
    lv = hol.domain_levels(0.7, 0.7)
    assert lv.level_cU == pytest.approx(lv.height) and lv.slope == pytest.approx(1.0)
    assert lv.slope * lv.height == pytest.approx(lv.level_cU)
    with pytest.raises(Degenerate):
        hol.domain_slope(0.3, math.pi / 6)
    assert hol.domain_levels(0.3, math.pi / 6).slope is None


@pytest.mark.parametrize("alpha,theta", [(0.3, 0.37), (1.0, 1.2), (0.2, -0.5), (2.0, 3.0), (0.1, -2.9)])
def test_domain_levels_from_matrices(alpha, theta):
    dA, cdA, shift = hol.unwrapped_levels(alpha, theta)
    lv = hol.domain_levels(alpha, theta)
    assert dA == pytest.approx(lv.level_dA, abs=1e-9)
    assert cdA == pytest.approx(lv.level_cU, abs=1e-9)
    assert shift == pytest.approx(lv.height, abs=1e-9)


def test_domain_levels_many_matches_single():
    thetas = np.array([-2.0, 0.1, 0.9, 3.5])
    many = hol.unwrapped_levels_many(0.4, thetas)
    for row, th in zip(many, thetas):
        assert np.allclose(row, hol.unwrapped_levels(0.4, th), atol=1e-12)


def test_matrix_levels_land_over_the_right_vertices():
    dA, cdA, _ = hol.matrix_levels(0.4, 0.5)
    assert dA.w == pytest.approx(-1.0)
    assert cdA.w == pytest.approx(1.0)


def test_relator_negative_control():
    rng = np.random.default_rng(0)
    A, B = rng.normal(size=(4, 4)), rng.normal(size=(4, 4))
    assert hol.relator_residual(A, B) > 1e-3


def test_json_field_order():
    d = hol.generators_ab(0.3, 0.3).to_dict()
    assert list(d) == ["alpha", "theta", "S", "a_lr", "a_lm", "b_lr", "b_lm"]
    assert len(d["a_lm"]) == 16 and len(d["a_lr"]["left"]) == 4
    assert list(hol.nil_generators(0.0).to_dict()) == ["t", "a_t", "b_t"]


def test_conjugate_ab_generic_s():
    a, b = hol.conjugate_ab(0.9, 0.4, -1.0)
    assert isinstance(a, LRIsometry) and a.S == -1.0
    assert homography_of(a)(1.0) == pytest.approx(1.0)
