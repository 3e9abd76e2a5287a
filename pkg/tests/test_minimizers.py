import numpy as np

from strip_psg.data_model import builtin_scenario, random_scenario
from strip_psg.potentials import F_of, Gbl_of, Gbr_of
from strip_psg.minimizers import (minimize_F, minimize_Gbl, minimize_Gbr,
                                  classify, slice_state)


def _brute(fn, lo, hi, n=4001):
    ps = np.linspace(lo, hi, n)
    vals = np.array([fn(p) for p in ps])
    k = np.argmin(vals)
    return ps[k], vals[k]


def test_minimize_F_against_grid():
    rng = np.random.default_rng(5)
    scens = [builtin_scenario(n) for n in ("s1", "s3")] + \
        [random_scenario(rng) for _ in range(3)]
    for s in scens:
        for _ in range(5):
            x = float(rng.uniform(0, 1))
            t = float(rng.uniform(0.05, s.t_max))
            b = minimize_F(s, x, t)
            pg, vg = _brute(lambda y: F_of(s, y, x, t), 0.0, 1.0)
            assert b.value <= vg + 1e-9
            assert abs(b.value - vg) < 1e-3
            assert b.lo - 5e-4 <= pg <= b.hi + 5e-4


def test_minimize_G_against_grid():
    rng = np.random.default_rng(6)
    scens = [builtin_scenario(n) for n in ("s1", "s2", "s4")] + \
        [random_scenario(rng) for _ in range(3)]
    for s in scens:
        for _ in range(5):
            x = float(rng.uniform(0, 1))
            t = float(rng.uniform(0.05, s.t_max))
            cap = min(t, s.t_max)
            bl = minimize_Gbl(s, x, t)
            pg, vg = _brute(lambda p: Gbl_of(s, p, x, t), 0.0, cap)
            assert abs(bl.value - vg) < 1e-3
            assert bl.lo - 5e-4 <= pg <= bl.hi + 5e-4
            br = minimize_Gbr(s, x, t)
            pg, vg = _brute(lambda p: Gbr_of(s, p, x, t), 0.0, cap)
            assert abs(br.value - vg) < 1e-3
            assert br.lo - 5e-4 <= pg <= br.hi + 5e-4


def test_s1_point_values():
    s = builtin_scenario("s1")
    b = minimize_Gbr(s, 0.8, 0.4)
    assert abs(b.value - (-1.12)) < 1e-12
    # apex of the first shock merge: all three potentials tie
    c = classify(s, 0.2, 0.4)
    assert c.winner == "Tie_All"
    for v in (c.F.value, c.Gbl.value, c.Gbr.value):
        assert abs(v - (-0.5)) < 1e-12


def test_classify_t0():
    s = builtin_scenario("s1")
    c = classify(s, 0.3, 0.0)
    assert c.winner == "F"
    assert c.F.lo == c.F.hi == 0.3


def test_classify_regions_s1():
    s = builtin_scenario("s1")
    assert classify(s, 0.05, 0.5).winner == "Gbl"    # behind the shock
    assert classify(s, 0.9, 0.5).winner == "Gbr"     # right inflow region
    assert classify(s, 0.5, 0.05).winner == "F"      # initial data region


def test_slice_state_matches_classify():
    rng = np.random.default_rng(9)
    s = builtin_scenario("s3")
    xs = rng.uniform(0, 1, 50)
    t = 0.8
    st = slice_state(s, xs, t)
    for i, x in enumerate(xs):
        c = classify(s, float(x), t)
        assert abs(st["mu"][i] - min(c.F.value, c.Gbl.value, c.Gbr.value)) < 1e-12


def test_bracket_monotone_in_x():
    rng = np.random.default_rng(11)
    for s in (builtin_scenario("s1"), random_scenario(rng)):
        t = 0.6 * s.t_max
        xs = np.sort(rng.uniform(0, 1, 40))
        st = slice_state(s, xs, t)
        assert np.all(np.diff(st["loF"]) > -1e-9)
        assert np.all(np.diff(st["hiL"]) < 1e-9)
        assert np.all(np.diff(st["loR"]) > -1e-9)
