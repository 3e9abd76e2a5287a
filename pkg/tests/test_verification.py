import numpy as np
import pytest

from strip_psg.data_model import builtin_scenario
from strip_psg.verification import (TestFunction, weak_residuals, run_checks,
                                    reports_to_json, ALL_CHECKS)

FAST = {
    "weak": {"nx": 200, "nt": 200},
    "monotonicity": {"n_samples": 150},
    "triangles": {"n_samples": 60},
}


def test_full_suite_s1():
    s = builtin_scenario("s1")
    reports = run_checks(s, **FAST)
    assert len(reports) == len(ALL_CHECKS)
    for r in reports:
        assert r.passed, f"{r.name}: worst {r.worst:g} > tol {r.tol:g}"


def test_core_checks_s3():
    s = builtin_scenario("s3")
    for r in run_checks(s, names=("entropy", "identities", "boundary"),
                        entropy={"nt": 20, "nx": 400}):
        assert r.passed, f"{r.name}: worst {r.worst:g} > tol {r.tol:g}"


def test_weak_residual_decays():
    s = builtin_scenario("s1")
    tf = TestFunction(0.45, 0.5 * s.t_max, 0.35, 0.35 * s.t_max)
    r1c, r2c, _ = weak_residuals(s, tf, nx=100, nt=100)
    r1f, r2f, _ = weak_residuals(s, tf, nx=200, nt=200)
    r_coarse = max(abs(r1c), abs(r2c))
    r_fine = max(abs(r1f), abs(r2f))
    assert r_fine <= r_coarse / 1.5


def test_testfunction_support_and_derivatives():
    s = builtin_scenario("s1")
    assert TestFunction(0.5, 1.0, 0.3, 0.5).supported(s)
    assert not TestFunction(0.1, 1.0, 0.3, 0.5).supported(s)  # overlaps x=0
    tf = TestFunction(0.4, 0.8, 0.25, 0.4)
    h = 1e-6
    for x, t in ((0.35, 0.7), (0.5, 1.0), (0.55, 0.95)):
        fx = (tf.phi(x + h, t) - tf.phi(x - h, t)) / (2 * h)
        ft = (tf.phi(x, t + h) - tf.phi(x, t - h)) / (2 * h)
        assert abs(fx - tf.phi_x(x, t)) < 1e-7 * (1 + abs(fx))
        assert abs(ft - tf.phi_t(x, t)) < 1e-7 * (1 + abs(ft))


def test_reports_json_roundtrip(tmp_path):
    s = builtin_scenario("s2")
    reports = run_checks(s, names=("identities",))
    path = tmp_path / "checks.json"
    doc = reports_to_json(reports, path=str(path))
    assert doc["passed"] == all(r.passed for r in reports)
    assert doc["checks"][0]["name"] == "mu_identities"
    assert path.exists()


def test_unknown_check_name():
    s = builtin_scenario("s1")
    with pytest.raises(KeyError):
        run_checks(s, names=("nonsense",))
