import importlib
import os
import subprocess
import sys

import numpy as np
import pytest

from trefoil_geom import _pykernels, holonomy, kernels
from trefoil_geom.algebra import seifert_coords, seifert_lift
from trefoil_geom.metric import metric_Q, sample_chart

BACKENDS = kernels.backends()


def test_compiled_backend_is_built():
    assert "cython" in BACKENDS, "the Cython extension did not build"
    assert kernels.BACKEND == "cython"


def test_pure_switch():
    code = "import trefoil_geom.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, TREFOIL_GEOM_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.fixture(params=sorted(BACKENDS))
def impl(request):
    return BACKENDS[request.param]


def _data(S=0.5, n=300):
    return sample_chart(np.random.default_rng(0), S, n)


def test_lift_and_coords_match_scalar(impl):
    S = -1 / 3
    mu, nu, zeta = _data(S, 50)
    X = impl.seifert_lift_batch(mu, nu, zeta, S)
    for k in range(50):
        assert np.allclose(X[k], seifert_lift(mu[k], nu[k], zeta[k], S).vector, atol=1e-14)
    m2, n2, z2 = impl.seifert_coords_batch(X, S)
    assert np.allclose(m2, mu) and np.allclose(n2, nu)
    assert np.allclose(np.exp(1j * z2), np.exp(1j * zeta))


def test_metric_batch_matches_scalar(impl):
    mu, nu, _ = _data()
    Q = impl.metric_batch(mu, nu, 0.5)
    for k in range(0, 300, 37):
        assert np.allclose(Q[k], metric_Q(mu[k], nu[k], 0.5).matrix, rtol=1e-15, atol=0)


def test_seifert_map_matches_scalar(impl):
    pair = holonomy.generators_ab(0.3, 0.8)
    mu, nu, zeta = _data(pair.S, 40)
    m2, n2, z2 = impl.seifert_map(pair.a_lm, mu, nu, zeta, pair.S)
    for k in range(40):
        ref = seifert_coords(pair.a.apply(seifert_lift(mu[k], nu[k], zeta[k], pair.S)))
        assert np.allclose((m2[k], n2[k]), ref[:2], atol=1e-12)
        assert abs(np.exp(1j * z2[k]) - np.exp(1j * ref[2])) < 1e-12


def test_backends_agree_on_pullback():
    pair = holonomy.generators_ab(1.2, 0.4)
    mu, nu, zeta = _data(pair.S, 500)
    results = [b.pullback_residuals(pair.b_lm, mu, nu, zeta, pair.S, 1e-6) for b in BACKENDS.values()]
    for r in results:
        assert np.nanmax(r) < 1e-5
    if len(results) == 2:
        assert np.allclose(results[0], results[1], atol=1e-8, equal_nan=True)


def test_classify_p1_codes(impl):
    x = np.array([6.0, 0.0, 7.0, 3.0, 1.2, 0.0, -6.0, -9.0])
    y = np.array([0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0])
    codes = impl.classify_p1(x, y, 1e-12)
    assert list(codes) == [kernels.NIL, kernels.NIL, kernels.SL2R, kernels.SPHERICAL,
                           kernels.UNKNOWN, kernels.UNKNOWN, kernels.NIL, kernels.SPHERICAL]


def test_fallback_module_is_importable_standalone():
    mod = importlib.reload(_pykernels)
    assert mod.BACKEND == "python"
