import json

import numpy as np
import pytest

from strip_psg.data_model import (PiecewiseConstant, Scenario, MomentSpec,
                                  moment_integral, builtin_scenario,
                                  random_scenario)


def test_piecewise_eval_right_continuous():
    f = PiecewiseConstant([0.0, 0.5, 1.0], [2.0, -2.0])
    assert f(0.0) == 2.0
    assert f(0.5) == -2.0          # right-continuous at the breakpoint
    assert f.left_limit(0.5) == 2.0
    assert f(1.0) == -2.0
    np.testing.assert_allclose(f(np.array([0.1, 0.5, 0.9])), [2.0, -2.0, -2.0])


def test_piecewise_validation():
    with pytest.raises(ValueError):
        PiecewiseConstant([0.0, 1.0], [1.0, 2.0])   # wrong value count
    with pytest.raises(ValueError):
        PiecewiseConstant([0.0, 0.0, 1.0], [1.0, 2.0])  # non-increasing
    with pytest.raises(ValueError):
        PiecewiseConstant([0.0, np.nan], [1.0])


def test_piecewise_roundtrip():
    f = PiecewiseConstant([0.0, 0.25, 1.0], [3.0, -1.5])
    g = PiecewiseConstant.from_dict(f.to_dict())
    np.testing.assert_array_equal(g.breakpoints, f.breakpoints)
    np.testing.assert_array_equal(g.values, f.values)


def test_moment_integral_against_quadrature():
    rng = np.random.default_rng(3)
    for _ in range(20):
        bks = np.sort(np.concatenate(([0.0, 1.0], rng.uniform(0, 1, 3))))
        rho = PiecewiseConstant(bks, rng.uniform(0.2, 2.0, len(bks) - 1))
        u = PiecewiseConstant(bks, rng.uniform(-2, 2, len(bks) - 1))
        lo, hi = np.sort(rng.uniform(0, 1, 2))
        spec = MomentSpec(factors=("density", "velocity"), c0=1.0, c1=0.5)
        xs = np.linspace(lo, hi, 20001)
        integ = np.trapezoid(rho(xs) * u(xs) * (1.0 + 0.5 * xs), xs)
        val = moment_integral(rho, u, spec, lo, hi)
        assert abs(val - integ) < 1e-4


def test_scenario_validation_catches_bad_inflow():
    s = builtin_scenario("s1")
    assert s.validate() == []
    with pytest.raises(ValueError):
        builtin_scenario("s1", btilde=-1.0)   # left inflow must be positive
    with pytest.raises(ValueError):
        builtin_scenario("s1", b=0.5)         # right inflow must be negative


def test_scenario_json_roundtrip(tmp_path):
    s = builtin_scenario("s3")
    p = tmp_path / "s.json"
    s.save(p)
    s2 = Scenario.load(p)
    assert s2.t_max == s.t_max
    np.testing.assert_array_equal(s2.u0.values, s.u0.values)
    np.testing.assert_array_equal(s2.rho_bl.breakpoints, s.rho_bl.breakpoints)


def test_scenario_json_rejects_nonfinite(tmp_path):
    s = builtin_scenario("s1")
    p = tmp_path / "s.json"
    s.save(p)
    doc = json.loads(p.read_text())
    doc["u0"]["values"][0] = "NaN"
    p.write_text(json.dumps(doc))
    with pytest.raises(ValueError):
        Scenario.load(p)


def test_builtin_scenarios_valid():
    for name in ("s1", "s2", "s3", "s4"):
        s = builtin_scenario(name)
        assert s.validate() == []
        assert s.speed_scale() > 0


def test_random_scenarios_valid():
    rng = np.random.default_rng(0)
    for _ in range(20):
        s = random_scenario(rng)
        assert s.validate() == []
        assert np.all(s.u_bl.values > 0)
        assert np.all(s.u_br.values < 0)
