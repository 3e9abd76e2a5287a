"""Exact minimization of the three potentials and regime classification."""

from dataclasses import dataclass

import numpy as np

from .potentials import tables
from . import kernels

EPS_TIE_REL = 1e-9  # tie detection slack, relative to 1 + |mu|
FRAGILE_FACTOR = 10.0

WINNER_NAMES = ("F", "Gbl", "Gbr", "Tie_F_Gbl", "Tie_F_Gbr", "Tie_Gbl_Gbr", "Tie_All")
W_F, W_GBL, W_GBR, W_TIE_F_GBL, W_TIE_F_GBR, W_TIE_GBL_GBR, W_TIE_ALL = range(7)


@dataclass
class MinimizerBracket:
    """Minimum value and extreme minimizers [lo, hi] of one potential."""
    value: float
    lo: float
    hi: float

    @property
    def is_point(self):
        return self.hi - self.lo <= 1e-12


@dataclass
class RegimeClassification:
    x: float
    t: float
    mu: float
    winner: str
    fragile: bool
    F: MinimizerBracket
    Gbl: MinimizerBracket
    Gbr: MinimizerBracket
    eps_tie: float


def minimize_F(s, x, t):
    """Bracket of minimizers of F(., x, t) over [0, 1]."""
    v, lo, hi = kernels.sweep_F(tables(s), np.array([x]), t)
    return MinimizerBracket(float(v[0]), float(lo[0]), float(hi[0]))


def minimize_Gbl(s, x, t):
    """Bracket of minimizers of G_bl(., x, t) over [0, min(t, t_max)]."""
    _check_t(s, t)
    v, lo, hi = kernels.sweep_Gbl(tables(s), np.array([x]), t)
    return MinimizerBracket(float(v[0]), float(lo[0]), float(hi[0]))


def minimize_Gbr(s, x, t):
    """Bracket of minimizers of G_br(., x, t) over [0, min(t, t_max)]."""
    _check_t(s, t)
    v, lo, hi = kernels.sweep_Gbr(tables(s), np.array([x]), t)
    return MinimizerBracket(float(v[0]), float(lo[0]), float(hi[0]))


def _check_t(s, t):
    if t < 0 or t > s.t_max + 1e-12:
        raise ValueError("t outside [0, t_max]")


def slice_state(s, xs, t):
    """All three sweeps plus winner codes on an x array at fixed t.

    Returns a dict of arrays: valF/loF/hiF, valL/loL/hiL, valR/loR/hiR,
    mu, eps, winner (int codes per WINNER_NAMES).
    """
    _check_t(s, t)
    tab = tables(s)
    xs = np.asarray(xs, dtype=np.float64)
    if np.any(xs < -1e-12) or np.any(xs > 1 + 1e-12):
        raise ValueError("x outside [0,1]")
    valF, loF, hiF = kernels.sweep_F(tab, xs, t)
    valL, loL, hiL = kernels.sweep_Gbl(tab, xs, t)
    valR, loR, hiR = kernels.sweep_Gbr(tab, xs, t)
    mu = np.minimum(valF, np.minimum(valL, valR))
    eps = EPS_TIE_REL * (1.0 + np.abs(mu))
    nF = valF <= mu + eps
    nL = valL <= mu + eps
    nR = valR <= mu + eps
    code = np.select(
        [nF & nL & nR, nF & nL, nF & nR, nL & nR, nF, nL],
        [W_TIE_ALL, W_TIE_F_GBL, W_TIE_F_GBR, W_TIE_GBL_GBR, W_F, W_GBL],
        default=W_GBR)
    return {"valF": valF, "loF": loF, "hiF": hiF,
            "valL": valL, "loL": loL, "hiL": hiL,
            "valR": valR, "loR": loR, "hiR": hiR,
            "mu": mu, "eps": eps, "winner": code,
            "nF": nF, "nL": nL, "nR": nR}


def classify(s, x, t):
    """Regime of the point (x, t): winning potential(s) and minimizer brackets.

    At t=0 every potential degenerates; the convention is winner F with
    bracket lo = hi = x.
    """
    if t == 0.0:
        from .potentials import F_of
        mu = float(F_of(s, x, x, 0.0))
        bF = MinimizerBracket(mu, x, x)
        bL = MinimizerBracket(0.0, 0.0, 0.0)
        bR = MinimizerBracket(float(F_of(s, 1.0, x, 0.0)), 0.0, 0.0)
        return RegimeClassification(x, t, mu, "F", False, bF, bL, bR,
                                    EPS_TIE_REL * (1.0 + abs(mu)))
    st = slice_state(s, np.array([x]), t)
    mu = float(st["mu"][0])
    eps = float(st["eps"][0])
    vals = np.array([st["valF"][0], st["valL"][0], st["valR"][0]])
    near = vals <= mu + eps
    fragile = bool(np.any(~near & (vals <= mu + FRAGILE_FACTOR * eps)))
    return RegimeClassification(
        x, t, mu, WINNER_NAMES[int(st["winner"][0])], fragile,
        MinimizerBracket(float(st["valF"][0]), float(st["loF"][0]), float(st["hiF"][0])),
        MinimizerBracket(float(st["valL"][0]), float(st["loL"][0]), float(st["hiL"][0])),
        MinimizerBracket(float(st["valR"][0]), float(st["loR"][0]), float(st["hiR"][0])),
        eps)
