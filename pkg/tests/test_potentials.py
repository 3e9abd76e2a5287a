import numpy as np
import pytest

from strip_psg.data_model import builtin_scenario, random_scenario
from strip_psg.potentials import tables, F_of, Gbl_of, Gbr_of


def test_cumulative_matches_quadrature():
    rng = np.random.default_rng(1)
    s = random_scenario(rng)
    tab = tables(s)
    xs = np.linspace(0, 1, 5001)
    rho = s.rho0(xs)
    for p in rng.uniform(0, 1, 10):
        mask = xs <= p
        approx = np.trapezoid(rho[mask], xs[mask])
        assert abs(tab.M0.c0(p) - approx) < 1e-3
        approx1 = np.trapezoid((rho * xs)[mask], xs[mask])
        assert abs(tab.M0.c1(p) - approx1) < 1e-3


def test_F_closed_form_constant_data():
    # s1: rho0=1, u0=-2, so F(y,x,t) = -2ty + y^2/2 - xy
    s = builtin_scenario("s1")
    for y, x, t in [(0.3, 0.5, 0.2), (1.0, 0.1, 1.5), (0.0, 0.9, 0.7)]:
        expect = -2 * t * y + 0.5 * y * y - x * y
        assert abs(F_of(s, y, x, t) - expect) < 1e-12


def test_Gbl_closed_form_constant_data():
    # s1: rho_bl=1, u_bl=3: Pl=3*tau, Ql=9*tau, Rl=9*tau^2/2
    s = builtin_scenario("s1")
    for tau, x, t in [(0.2, 0.4, 0.5), (1.0, 0.0, 1.5)]:
        expect = x * 3 * tau - t * 9 * tau + 4.5 * tau ** 2
        assert abs(Gbl_of(s, tau, x, t) - expect) < 1e-12


def test_Gbr_closed_form_constant_data():
    # s1: rho_br=1, u_br=-1: Pr=-xi, Qr=xi, Rr=xi^2/2, F(1,x,t)=-2t+1/2-x
    s = builtin_scenario("s1")
    for xi, x, t in [(0.3, 0.6, 0.8), (1.2, 0.95, 1.4)]:
        expect = (x - 1) * (-xi) - t * xi + 0.5 * xi ** 2 + (-2 * t + 0.5 - x)
        assert abs(Gbr_of(s, xi, x, t) - expect) < 1e-12


def test_domain_checks():
    s = builtin_scenario("s1")
    with pytest.raises(ValueError):
        F_of(s, 1.5, 0.5, 0.5)
    with pytest.raises(ValueError):
        Gbl_of(s, -0.1, 0.5, 0.5)
    with pytest.raises(ValueError):
        Gbr_of(s, 5.0, 0.5, 0.5)


def test_tables_cached():
    s = builtin_scenario("s2")
    assert tables(s) is tables(s)
