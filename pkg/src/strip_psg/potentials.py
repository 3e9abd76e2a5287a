"""Generalized potentials F, G_bl, G_br in cumulative-coefficient form.

Each potential is affine in (x, t) with piecewise-linear cumulative integrals of
the data as coefficients:

    F(y, x, t)     = t*P0(y) + A0(y) - x*M0(y)
    G_bl(tau,x,t)  = x*Pl(tau) - t*Ql(tau) + Rl(tau)
    G_br(xi, x, t) = (x-1)*Pr(xi) - t*Qr(xi) + Rr(xi) + F(1, x, t)

where M0 = cum(rho0), P0 = cum(rho0*u0), A0 = cum(eta*rho0),
Pl = cum(rho_bl*u_bl), Ql = cum(rho_bl*u_bl^2), Rl = cum(eta*rho_bl*u_bl^2),
and Pr, Qr, Rr likewise on the right boundary.  This makes every evaluation
exact and the minimization over the parameter a finite candidate search.
"""

import numpy as np


class Cumulative:
    """Cumulative integrals of a piecewise-constant weight.

    c0(p) = int_lo^p w,  c1(p) = int_lo^p eta*w(eta) d eta.
    """

    def __init__(self, edges, w):
        self.edges = np.asarray(edges, dtype=np.float64)
        self.w = np.asarray(w, dtype=np.float64)
        de = np.diff(self.edges)
        self.cum0 = np.concatenate(([0.0], np.cumsum(self.w * de)))
        dm = 0.5 * (self.edges[1:] ** 2 - self.edges[:-1] ** 2)
        self.cum1 = np.concatenate(([0.0], np.cumsum(self.w * dm)))

    def index(self, p):
        k = np.searchsorted(self.edges, p, side="right") - 1
        return np.clip(k, 0, len(self.w) - 1)

    def c0(self, p):
        p = np.asarray(p, dtype=np.float64)
        k = self.index(p)
        return self.cum0[k] + self.w[k] * (p - self.edges[k])

    def c1(self, p):
        p = np.asarray(p, dtype=np.float64)
        k = self.index(p)
        return self.cum1[k] + self.w[k] * 0.5 * (p * p - self.edges[k] ** 2)

    @property
    def total0(self):
        return self.cum0[-1]

    @property
    def total1(self):
        return self.cum1[-1]


class PotentialTables:
    """Per-scenario cumulative tables for all three potentials."""

    def __init__(self, s):
        e0 = np.union1d(s.rho0.breakpoints, s.u0.breakpoints)
        mid0 = 0.5 * (e0[:-1] + e0[1:])
        r0, v0 = s.rho0(mid0), s.u0(mid0)
        self.edges0 = e0
        self.rho0 = r0
        self.u0 = v0
        self.M0 = Cumulative(e0, r0)
        self.P0 = Cumulative(e0, r0 * v0)
        self.A0 = self.M0  # first moment of rho0 via c1

        el = np.union1d(s.rho_bl.breakpoints, s.u_bl.breakpoints)
        midl = 0.5 * (el[:-1] + el[1:])
        rl, vl = s.rho_bl(midl), s.u_bl(midl)
        self.edges_l = el
        self.rho_l = rl
        self.u_l = vl
        self.Pl = Cumulative(el, rl * vl)
        self.Ql = Cumulative(el, rl * vl * vl)

        er = np.union1d(s.rho_br.breakpoints, s.u_br.breakpoints)
        midr = 0.5 * (er[:-1] + er[1:])
        rr, vr = s.rho_br(midr), s.u_br(midr)
        self.edges_r = er
        self.rho_r = rr
        self.u_r = vr
        self.Pr = Cumulative(er, rr * vr)
        self.Qr = Cumulative(er, rr * vr * vr)

        self.t_max = s.t_max
        self.total_mass0 = self.M0.total0
        self.total_mom0 = self.P0.total0


def tables(s):
    """Cached PotentialTables for a scenario."""
    tab = getattr(s, "_potential_tables", None)
    if tab is None:
        tab = PotentialTables(s)
        s._potential_tables = tab
    return tab


def F_of(s, y, x, t):
    """F(y, x, t) for y in [0,1]."""
    tab = tables(s)
    y = np.asarray(y, dtype=np.float64)
    if np.any(y < -1e-12) or np.any(y > 1 + 1e-12):
        raise ValueError("y outside [0,1]")
    return t * tab.P0.c0(y) + tab.M0.c1(y) - x * tab.M0.c0(y)


def F1_of(s, x, t):
    """F(1, x, t), the additive constant in G_br."""
    tab = tables(s)
    return t * tab.P0.total0 + tab.M0.total1 - x * tab.M0.total0


def Gbl_of(s, tau, x, t):
    """G_bl(tau, x, t) for tau in [0, min(t, t_max)]."""
    tab = tables(s)
    tau = np.asarray(tau, dtype=np.float64)
    if t > tab.t_max + 1e-12:
        raise ValueError("t beyond t_max: boundary data undefined")
    if np.any(tau < -1e-12) or np.any(tau > min(t, tab.t_max) + 1e-12):
        raise ValueError("tau outside [0, min(t, t_max)]")
    return x * tab.Pl.c0(tau) - t * tab.Ql.c0(tau) + tab.Ql.c1(tau)


def Gbr_of(s, xi, x, t):
    """G_br(xi, x, t) for xi in [0, min(t, t_max)]."""
    tab = tables(s)
    xi = np.asarray(xi, dtype=np.float64)
    if t > tab.t_max + 1e-12:
        raise ValueError("t beyond t_max: boundary data undefined")
    if np.any(xi < -1e-12) or np.any(xi > min(t, tab.t_max) + 1e-12):
        raise ValueError("xi outside [0, min(t, t_max)]")
    return (x - 1.0) * tab.Pr.c0(xi) - t * tab.Qr.c0(xi) + tab.Qr.c1(xi) + F1_of(s, x, t)
