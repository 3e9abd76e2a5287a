import numpy as np

from strip_psg.data_model import builtin_scenario
from strip_psg.characteristics import trace_curve, triangle_of, shock_locus


def s1_shock(t):
    if t <= 0.4:
        return 0.5 * t
    if t <= 0.625:
        return 3 * t + 1 - np.sqrt(10 * t)
    if t <= 1.25:
        return t - 0.25
    return 1.0


def test_free_particle_straight_line():
    s = builtin_scenario("s1")
    ts, xs = trace_curve(s, 0.9, 0.0, 0.05)
    # u0=-2 ahead of any interaction
    np.testing.assert_allclose(xs, 0.9 - 2.0 * np.asarray(ts), atol=1e-6)


def test_traced_particle_joins_shock():
    s = builtin_scenario("s1")
    ts, xs = trace_curve(s, 0.35, 0.0, 0.5)
    # init particle at 0.35 meets the shock t/2 when 0.35-2t = t/2 => t=0.14
    for t, x in zip(ts, xs):
        if t > 0.15:
            assert abs(x - s1_shock(t)) < 2e-2


def test_wall_capture():
    s = builtin_scenario("s1")
    ts, xs = trace_curve(s, 0.9, 0.0, 3.0)
    ts, xs = np.asarray(ts), np.asarray(xs)
    late = xs[ts > 1.3]
    assert np.all(late > 0.99)   # stuck at the right wall


def test_triangle_cases_s1():
    s = builtin_scenario("s1")
    tr = triangle_of(s, 0.5, 0.05)          # initial data region
    assert tr.case == "i"
    assert tr.left_foot[0] == "init" and tr.right_foot[0] == "init"
    tr = triangle_of(s, 0.05, 0.5)          # left inflow region
    assert tr.case == "ii"
    assert tr.left_foot[0] == "left"
    tr = triangle_of(s, 0.95, 0.5)          # right inflow region
    assert tr.case == "iii"
    assert tr.right_foot[0] == "right"


def test_triangle_contains_apex_history():
    s = builtin_scenario("s3")
    tr = triangle_of(s, 0.5, 0.8)   # apex on the accumulated atom
    assert tr.contains(0.5, 0.4)
    assert tr.contains(0.3, 0.1)
    assert not tr.contains(0.05, 0.79)


def test_shock_locus_s1():
    s = builtin_scenario("s1")
    curves = shock_locus(s, 0.05, 1.2, nt=300, nx=800)
    main = max(curves, key=lambda c: len(c.ts))
    assert main.ts[0] < 0.06 and main.ts[-1] > 1.19
    for t, x in zip(main.ts, main.xs):
        assert abs(x - s1_shock(t)) < 5e-3


def test_shock_locus_s3_branches():
    s = builtin_scenario("s3")
    curves = shock_locus(s, 0.55, 0.69, nt=100, nx=1000)
    # central atom plus two approaching side shocks
    has_center = any(abs(np.mean(c.xs) - 0.5) < 1e-3 for c in curves)
    has_left = any(np.mean(c.xs) < 0.4 for c in curves if len(c.ts) > 10)
    has_right = any(np.mean(c.xs) > 0.6 for c in curves if len(c.ts) > 10)
    assert has_center and has_left and has_right
    for c in curves:
        if len(c.ts) > 10 and np.mean(c.xs) < 0.4:
            for t, x in zip(c.ts, c.xs):
                assert abs(x - 2.5 * (t - 0.5)) < 5e-3
