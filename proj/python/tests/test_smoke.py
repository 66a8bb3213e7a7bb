import math

import numpy as np
import pytest

import vage


def test_series_algebra():
    f = vage.Series((1, 3), "1 - x1")
    g = vage.invert(f)
    assert g == vage.Series((1, 3), "1 + x1 + x1^2 + x1^3")
    assert f * g == vage.Series((1, 3), "1")
    assert vage.expectation(g) == 1
    with pytest.raises(vage.NotInvertibleError):
        vage.invert(vage.Series((1, 3), "x1"))
    with pytest.raises(vage.ParseError):
        vage.Series((1, 3), "1 +")


def test_json_round_trip():
    f = vage.Series((2, 3), "0.5 - 2*x1*x2 + 1i*x2^3")
    s = f.to_json()
    assert vage.Series.from_json(s).to_json() == s
    w = vage.WeightSpec.tensor(vage.WeightSpec.gspace(), vage.WeightSpec.kondratiev())
    assert vage.WeightSpec.from_json(w.to_json()) == w


def test_weights_and_constants():
    k = vage.WeightSpec.kondratiev()
    assert vage.vage_constant(k, 2) ** 2 == pytest.approx(math.pi / 2, rel=1e-13)
    with pytest.raises(vage.DivergenceError):
        vage.vage_constant(k, 1)
    r = vage.check_superexponential(vage.WeightSpec.schwartz(), (1, 4))
    assert not r["ok"] and r["lhs"] == 16 and r["rhs"] == 9
    assert vage.zhang_partial(2, 3) == pytest.approx(2304 / 1575, rel=1e-15)


def test_vage_inequality_and_schwartz():
    w = vage.WeightSpec.kondratiev()
    f = vage.random_series((3, 4), w, 1, 5)
    g = vage.random_series((3, 4), w, 3, 6)
    assert vage.check_vage(f, g, w, 3, 1, 2)["holds"]
    k, ratio = vage.demonstrate_schwartz_failure(3, 1, 10.0)
    assert ratio > 10.0 and k == 128


def test_linsys_and_hermite():
    assert vage.kalman_observable(np.array([[1, 0]], dtype=complex), np.array([[0, 1], [0, 0]], dtype=complex))
    assert not vage.kalman_observable(np.array([[1, 0]], dtype=complex), np.zeros((2, 2), dtype=complex))
    lhs, rhs, err = vage.mehler_check(1.0, -1.0, 0.3)
    assert err < 1e-10
    assert vage.gp_integral_norm([0, 1], 2) == pytest.approx(4.0, rel=1e-6)
    assert vage.strip_radius(lambda n: -math.sqrt(2 * n + 1), 20000) == pytest.approx(1.0, abs=0.02)
