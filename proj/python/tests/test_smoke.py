import json
import math

import numpy as np
import pytest

import besovlab as bl


def mode(spec, k):
    x = spec.coordinates()
    return bl.GridFunction(spec, np.cos(2 * np.pi * k * x / spec.length))


def test_grid_roundtrip():
    spec = bl.GridSpec(1, 64, 8.0)
    values = np.linspace(-1.0, 1.0, 64)
    f = bl.GridFunction(spec, values)
    np.testing.assert_array_equal(f.values, values)
    assert f.spec.step == pytest.approx(0.125)
    with pytest.raises(bl.PreconditionError):
        bl.GridFunction(spec, np.zeros(10))


def test_heat_integral_closed_form():
    value, tail = bl.heat_time_integral([1], 1, 0.0, [1.0])
    assert value == pytest.approx(0.5 / math.sqrt(math.pi), abs=1e-8)
    assert tail >= 0.0
    with pytest.raises(ValueError, match="n \\+ \\|alpha\\| - b - 1 > 0"):
        bl.heat_time_integral([0], 1, 0.0, [1.0])


def test_gauss_extension_of_a_mode():
    spec = bl.GridSpec(1, 128, 8.0)
    f = mode(spec, 3)
    t = 0.2
    xi = 3 / spec.length
    expected = math.exp(-4 * math.pi**2 * xi**2 * t**2) * f.values
    np.testing.assert_allclose(bl.extend(f, bl.KernelKind.GAUSS, t).values, expected, atol=1e-12)
    expected = math.exp(-2 * math.pi * xi * t) * f.values
    np.testing.assert_allclose(bl.extend(f, bl.KernelKind.POISSON, t).values, expected, atol=1e-12)


def test_riesz_maps_cosine_to_sine():
    spec = bl.GridSpec(1, 64, 4.0)
    f = mode(spec, 2)
    x = spec.coordinates()
    np.testing.assert_allclose(bl.riesz_transform(f, 1).values, np.sin(2 * np.pi * 2 * x / 4.0), atol=1e-12)


def test_besov_seminorm_scales_under_dilation():
    # |f(2.)|_{B^{s}_{1,1}} = 2^{s-1} |f|, realised by halving the period on the same samples.
    coarse = bl.GridSpec(1, 512, 16.0)
    fine = bl.GridSpec(1, 512, 8.0)
    values = np.exp(-coarse.coordinates() ** 2)
    a = bl.besov_seminorm(bl.GridFunction(coarse, values), 0.5)
    b = bl.besov_seminorm(bl.GridFunction(fine, values), 0.5)
    assert b / a == pytest.approx(2 ** (0.5 - 1.0), rel=1e-10)


def test_family_is_deterministic():
    spec = bl.GridSpec(1, 128, 16.0)
    a = bl.family(3, spec, 9)
    b = bl.family(3, spec, 9)
    assert [m[0] for m in a] == [m[0] for m in b]
    for (_, fa), (_, fb) in zip(a, b):
        np.testing.assert_array_equal(fa.values, fb.values)
        assert fa.lp_norm(1.0) == pytest.approx(1.0, abs=1e-12)


def test_main_estimate_ratio_is_finite():
    spec = bl.GridSpec(1, 256, 16.0)
    f = bl.GridFunction(spec, np.exp(-spec.coordinates() ** 2))
    row = bl.main_estimate_ratio(f, 1, 0.0)
    assert not row["flagged"]
    assert 0.0 < row["ratio"] < 10.0


def test_run_suite_payload():
    payload, failures = bl.run_suite("lemma-integrals", {"grid.N": "128"})
    assert failures == []
    doc = json.loads(payload)
    assert doc["metadata"]["suite"] == "lemma-integrals"
    assert any(r["experiment"] == "heat_integral_oracle" for r in doc["rows"])
    with pytest.raises(bl.ConfigError, match="a > -1"):
        bl.run_suite("trace-ratios", {"trace.cases": "1:-1"})
    assert "identities" in bl.suite_names()
