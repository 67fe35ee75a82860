import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import hyperbolic_triangle, spherical_triangle
from trefoil_geom.errors import Degenerate, GeometryError, OutOfRange
from trefoil_geom.surface2d import (
    ALPHA_MAX,
    ConeSurfaceSig,
    Regime,
    alpha_to_model_distance,
    base_geometry,
    chi_cone,
    chi_sign_matches,
    regime_of_alpha,
    rescaled_half_base,
    s_of_alpha,
    sig_23r,
    solve_triangle,
    triangle_angles,
)


def test_chi_exact_values():
    assert chi_cone(sig_23r(6)) == 0
    assert chi_cone(sig_23r(5)) == Fraction(1, 30)
    assert chi_cone(sig_23r(7)) == Fraction(-1, 42)
    assert chi_cone(sig_23r(math.inf)) == Fraction(-1, 6)
    assert chi_cone(ConeSurfaceSig(1, ())) == 0


def test_signature_validation():
    with pytest.raises(GeometryError):
        ConeSurfaceSig(0, (2, 1))
    with pytest.raises(GeometryError):
        ConeSurfaceSig(-1, ())
    assert sig_23r(5).is_orbifold
    assert not sig_23r(Fraction(5, 2)).is_orbifold


def test_base_geometry():
    assert base_geometry(6) is Regime.EUCLIDEAN
    assert base_geometry(5) is Regime.SPHERICAL
    assert base_geometry(7) is Regime.HYPERBOLIC
    assert base_geometry(math.inf) is Regime.HYPERBOLIC
    assert base_geometry(6.0) is Regime.EUCLIDEAN
    with pytest.raises(OutOfRange):
        base_geometry(Fraction(6, 5))


@given(st.fractions(Fraction(121, 100), Fraction(60)))
def test_gauss_bonnet_sign(r):
    assert chi_sign_matches(r)


def test_s_of_alpha():
    assert s_of_alpha(0) == 1
    assert s_of_alpha(math.pi / 2) == pytest.approx(-1 / 3)
    assert s_of_alpha(math.pi / 6) == pytest.approx(0, abs=1e-15)
    with pytest.raises(OutOfRange):
        s_of_alpha(ALPHA_MAX)
    with pytest.raises(OutOfRange):
        s_of_alpha(-0.1)


def test_regimes():
    assert regime_of_alpha(0) is Regime.CUSP
    assert regime_of_alpha(0.2) is Regime.HYPERBOLIC
    assert regime_of_alpha(math.pi / 6) is Regime.EUCLIDEAN
    assert regime_of_alpha(1.0) is Regime.SPHERICAL


@pytest.mark.parametrize("alpha", [0.05, 0.2, 0.4, 0.5])
def test_hyperbolic_triangle_against_hyperboloid(alpha):
    tri = solve_triangle(alpha)
    a, c, area = hyperbolic_triangle(tri.mu, tri.lambda_side)
    assert a == pytest.approx(alpha, abs=1e-10)
    assert c == pytest.approx(2 * math.pi / 3, abs=1e-10)
    assert tri.area == pytest.approx(area, abs=1e-10)


@pytest.mark.parametrize("alpha", [0.6, 1.0, 1.5, 2.0, 2.5])
def test_spherical_triangle_against_sphere(alpha):
    tri = solve_triangle(alpha)
    a, c, area = spherical_triangle(tri.mu, tri.lambda_side)
    assert a == pytest.approx(alpha, abs=1e-10)
    assert c == pytest.approx(2 * math.pi / 3, abs=1e-10)
    assert tri.area == pytest.approx(area, abs=1e-10)


def test_euclidean_and_cusp_triangles():
    e = solve_triangle(math.pi / 6)
    assert e.mu == 1.0 and e.lambda_side == pytest.approx(1 / math.sqrt(3))
    assert e.area == pytest.approx(1 / math.sqrt(3))
    c = solve_triangle(0.0)
    assert c.mu == math.inf and c.area == pytest.approx(math.pi / 3)


@given(st.floats(0.01, ALPHA_MAX - 0.01))
def test_model_distance_matches_trig_route(alpha):
    if abs(1 - 2 * math.sin(alpha)) < 1e-6:
        return
    assert alpha_to_model_distance(alpha) == pytest.approx(solve_triangle(alpha).mu, rel=1e-9)


def test_rescaled_half_base_continuous_through_euclidean():
    left = rescaled_half_base(math.pi / 6 - 1e-5)
    right = rescaled_half_base(math.pi / 6 + 1e-5)
    assert left == pytest.approx(1.0, abs=1e-4)
    assert right == pytest.approx(1.0, abs=1e-4)
    with pytest.raises(Degenerate):
        alpha_to_model_distance(0.0)


def test_triangle_angles():
    assert triangle_angles(0.3) == (0.3, 0.3, 2 * math.pi / 3)
