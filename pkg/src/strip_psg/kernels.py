"""Minimization sweep kernels: for an array of x at fixed t, return the minimum
value of each potential together with the extreme minimizers [lo, hi].

Candidates are exact: data breakpoints, interval endpoints, and the per-piece
stationary points (y = x - t*u0, tau = t - x/u_bl, xi = t - (x-1)/u_br), so no
grid search is involved.  Two implementations with identical results: numba
@njit scalar loops and a vectorized numpy fallback.  Set STRIP_PSG_NO_NUMBA=1
to force the fallback.
"""

import os
import numpy as np

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False

    def njit(*a, **k):
        def wrap(f):
            return f
        return wrap if not (len(a) == 1 and callable(a[0])) else a[0]


EPS_MIN_REL = 1e-10  # near-minimum slack, relative to 1 + |min|

_NO_NUMBA = os.environ.get("STRIP_PSG_NO_NUMBA", "") not in ("", "0")
USE_NUMBA = HAS_NUMBA and not _NO_NUMBA


# ---------------------------------------------------------------- numba path

@njit(cache=True)
def _sweep_F_loop(edges, wr, wru, c0M, c1M, c0P, xs, t, eps_rel):
    P = wr.shape[0]
    n = xs.shape[0]
    vals = np.empty(n)
    los = np.empty(n)
    his = np.empty(n)
    cand = np.empty(2 * P + 1)
    cval = np.empty(2 * P + 1)
    for i in range(n):
        x = xs[i]
        nc = 0
        for j in range(P + 1):
            cand[nc] = edges[j]
            nc += 1
        for k in range(P):
            yk = x - t * (wru[k] / wr[k])
            if edges[k] < yk < edges[k + 1]:
                cand[nc] = yk
                nc += 1
        vmin = np.inf
        for j in range(nc):
            p = cand[j]
            k = np.searchsorted(edges, p, side="right") - 1
            if k < 0:
                k = 0
            if k > P - 1:
                k = P - 1
            e = edges[k]
            v = (t * (c0P[k] + wru[k] * (p - e))
                 + c1M[k] + 0.5 * wr[k] * (p * p - e * e)
                 - x * (c0M[k] + wr[k] * (p - e)))
            cval[j] = v
            if v < vmin:
                vmin = v
        eps = eps_rel * (1.0 + abs(vmin))
        lo = np.inf
        hi = -np.inf
        for j in range(nc):
            if cval[j] <= vmin + eps:
                if cand[j] < lo:
                    lo = cand[j]
                if cand[j] > hi:
                    hi = cand[j]
        vals[i] = vmin
        los[i] = lo
        his[i] = hi
    return vals, los, his


@njit(cache=True)
def _sweep_G_loop(edges, v, wrv, wrvv, c0P, c0Q, c1Q, xs, t, tcap, xoff,
                  f1P, f1A, f1M, eps_rel):
    """Boundary potential sweep.  xoff=0 for G_bl, xoff=-1 for G_br; the F(1,.)
    shift enters through (f1P, f1A, f1M) which are zero for G_bl."""
    P = v.shape[0]
    n = xs.shape[0]
    vals = np.empty(n)
    los = np.empty(n)
    his = np.empty(n)
    cand = np.empty(2 * P + 2)
    cval = np.empty(2 * P + 2)
    for i in range(n):
        x = xs[i] + xoff
        shift = t * f1P + f1A - xs[i] * f1M
        nc = 0
        cand[nc] = 0.0
        nc += 1
        cand[nc] = tcap
        nc += 1
        for j in range(1, P):
            if 0.0 < edges[j] < tcap:
                cand[nc] = edges[j]
                nc += 1
        for k in range(P):
            pk = t - x / v[k]
            a = edges[k]
            b = edges[k + 1]
            if b > tcap:
                b = tcap
            if a < pk < b:
                cand[nc] = pk
                nc += 1
        vmin = np.inf
        for j in range(nc):
            p = cand[j]
            k = np.searchsorted(edges, p, side="right") - 1
            if k < 0:
                k = 0
            if k > P - 1:
                k = P - 1
            e = edges[k]
            val = (x * (c0P[k] + wrv[k] * (p - e))
                   - t * (c0Q[k] + wrvv[k] * (p - e))
                   + c1Q[k] + 0.5 * wrvv[k] * (p * p - e * e)
                   + shift)
            cval[j] = val
            if val < vmin:
                vmin = val
        eps = eps_rel * (1.0 + abs(vmin))
        lo = np.inf
        hi = -np.inf
        for j in range(nc):
            if cval[j] <= vmin + eps:
                if cand[j] < lo:
                    lo = cand[j]
                if cand[j] > hi:
                    hi = cand[j]
        vals[i] = vmin
        los[i] = lo
        his[i] = hi
    return vals, los, his


# ---------------------------------------------------------------- numpy path

def _sweep_F_numpy(edges, wr, wru, c0M, c1M, c0P, xs, t, eps_rel):
    P = len(wr)
    n = len(xs)
    roots = xs[None, :] - t * (wru / wr)[:, None]
    inside = (roots > edges[:-1, None]) & (roots < edges[1:, None])
    roots = np.where(inside, roots, edges[:-1, None])
    cand = np.concatenate([np.broadcast_to(edges[:, None], (P + 1, n)), roots])
    k = np.clip(np.searchsorted(edges, cand.ravel(), side="right") - 1, 0, P - 1)
    k = k.reshape(cand.shape)
    e = edges[k]
    vals = (t * (c0P[k] + wru[k] * (cand - e))
            + c1M[k] + 0.5 * wr[k] * (cand * cand - e * e)
            - xs[None, :] * (c0M[k] + wr[k] * (cand - e)))
    vmin = vals.min(axis=0)
    eps = eps_rel * (1.0 + np.abs(vmin))
    near = vals <= vmin[None, :] + eps[None, :]
    lo = np.where(near, cand, np.inf).min(axis=0)
    hi = np.where(near, cand, -np.inf).max(axis=0)
    return vmin, lo, hi


def _sweep_G_numpy(edges, v, wrv, wrvv, c0P, c0Q, c1Q, xs, t, tcap, xoff,
                   f1P, f1A, f1M, eps_rel):
    P = len(v)
    n = len(xs)
    x = xs + xoff
    shift = t * f1P + f1A - xs * f1M
    roots = t - x[None, :] / v[:, None]
    a = edges[:-1, None]
    b = np.minimum(edges[1:, None], tcap)
    inside = (roots > a) & (roots < b)
    roots = np.where(inside, roots, 0.0)
    fixed = np.concatenate(([0.0, tcap], edges[1:-1][edges[1:-1] < tcap]))
    cand = np.concatenate([np.broadcast_to(fixed[:, None], (len(fixed), n)), roots])
    k = np.clip(np.searchsorted(edges, cand.ravel(), side="right") - 1, 0, P - 1)
    k = k.reshape(cand.shape)
    e = edges[k]
    vals = (x[None, :] * (c0P[k] + wrv[k] * (cand - e))
            - t * (c0Q[k] + wrvv[k] * (cand - e))
            + c1Q[k] + 0.5 * wrvv[k] * (cand * cand - e * e)
            + shift[None, :])
    vmin = vals.min(axis=0)
    eps = eps_rel * (1.0 + np.abs(vmin))
    near = vals <= vmin[None, :] + eps[None, :]
    lo = np.where(near, cand, np.inf).min(axis=0)
    hi = np.where(near, cand, -np.inf).max(axis=0)
    return vmin, lo, hi


# ---------------------------------------------------------------- dispatch

def sweep_F(tab, xs, t, use_numba=None, eps_rel=EPS_MIN_REL):
    """(min F, lo, hi) over y in [0,1] for each x in xs."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    impl = _sweep_F_loop if (USE_NUMBA if use_numba is None else use_numba) else _sweep_F_numpy
    return impl(tab.edges0, tab.rho0, tab.rho0 * tab.u0,
                tab.M0.cum0, tab.M0.cum1, tab.P0.cum0, xs, t, eps_rel)


def sweep_Gbl(tab, xs, t, use_numba=None, eps_rel=EPS_MIN_REL):
    """(min G_bl, lo, hi) over tau in [0, min(t, t_max)] for each x in xs."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    tcap = min(t, tab.t_max)
    impl = _sweep_G_loop if (USE_NUMBA if use_numba is None else use_numba) else _sweep_G_numpy
    return impl(tab.edges_l, tab.u_l, tab.rho_l * tab.u_l,
                tab.rho_l * tab.u_l ** 2, tab.Pl.cum0, tab.Ql.cum0, tab.Ql.cum1,
                xs, t, tcap, 0.0, 0.0, 0.0, 0.0, eps_rel)


def sweep_Gbr(tab, xs, t, use_numba=None, eps_rel=EPS_MIN_REL):
    """(min G_br, lo, hi) over xi in [0, min(t, t_max)] for each x in xs."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    tcap = min(t, tab.t_max)
    impl = _sweep_G_loop if (USE_NUMBA if use_numba is None else use_numba) else _sweep_G_numpy
    return impl(tab.edges_r, tab.u_r, tab.rho_r * tab.u_r,
                tab.rho_r * tab.u_r ** 2, tab.Pr.cum0, tab.Qr.cum0, tab.Qr.cum1,
                xs, t, tcap, -1.0, tab.P0.total0, tab.M0.total1, tab.M0.total0,
                eps_rel)
