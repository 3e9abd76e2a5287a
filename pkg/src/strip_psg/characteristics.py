"""Generalized characteristics: curve tracing, dependence triangles, shock loci."""

from dataclasses import dataclass, field

import numpy as np

from .minimizers import classify
from .fields import u_at, u_slice, u_side, find_jumps, m_at, ATOM_FRAC, _B


def curve_velocity(s, x, t):
    """Speed of the generalized characteristic through (x, t).

    Coincides with u(x, t) everywhere, including captured boundary points
    (zero) and inflow boundary points (the inflow velocity).
    """
    return u_at(s, x, t)


def _captured(s, x, t):
    """True when (x, t) is a wall point whose atom condition holds."""
    st = classify(s, max(0.0, min(1.0, x)), t)
    if x <= _B:
        return min(st.F.value, st.Gbr.value) <= st.Gbl.value + st.eps_tie
    if x >= 1.0 - _B:
        return min(st.F.value, st.Gbl.value) <= st.Gbr.value + st.eps_tie
    return False


def trace_curve(s, x0, t0, t1, dt=None):
    """Trace the characteristic from (x0, t0) forward to t1 (midpoint scheme).

    Returns (ts, xs).  A curve reaching a wall whose capture condition holds
    sticks there.
    """
    if dt is None:
        dt = 1e-3 * s.t_max
    if t1 > s.t_max + 1e-12 or t0 < 0 or t1 < t0:
        raise ValueError("need 0 <= t0 <= t1 <= t_max")
    nsteps = max(1, int(np.ceil((t1 - t0) / dt)))
    ts = np.linspace(t0, t1, nsteps + 1)
    xs = np.empty(nsteps + 1)
    xs[0] = x0
    x = x0
    stuck = False
    for k in range(nsteps):
        h = ts[k + 1] - ts[k]
        if stuck:
            xs[k + 1] = x
            continue
        v1 = curve_velocity(s, x, ts[k])
        xm = min(1.0, max(0.0, x + 0.5 * h * v1))
        v2 = curve_velocity(s, xm, ts[k] + 0.5 * h)
        x = min(1.0, max(0.0, x + h * v2))
        if (x <= _B or x >= 1.0 - _B) and _captured(s, x, ts[k + 1]):
            x = 0.0 if x <= _B else 1.0
            stuck = True
        xs[k + 1] = x
    return ts, xs


@dataclass
class Triangle:
    """Dependence region of a point: bounded by two extreme characteristics.

    Feet are ('init', y) on the bottom, ('left', tau) on x=0, ('right', xi)
    on x=1; None means the region is bounded by the wall itself.
    """
    x: float
    t: float
    case: str
    left_foot: tuple | None
    right_foot: tuple | None

    def _side_x(self, foot, tq):
        kind, p = foot
        if kind == "init":
            return self.x + (p - self.x) * (self.t - tq) / self.t
        if kind == "left":
            if self.t - p <= 1e-15:
                return 0.0
            return self.x * (tq - p) / (self.t - p)
        if self.t - p <= 1e-15:
            return 1.0
        return 1.0 + (self.x - 1.0) * (tq - p) / (self.t - p)

    def contains(self, xq, tq, tol=1e-9):
        if tq < -tol or tq > self.t + tol or xq < -tol or xq > 1 + tol:
            return False
        lo = 0.0 if self.left_foot is None else self._side_x(self.left_foot, tq)
        hi = 1.0 if self.right_foot is None else self._side_x(self.right_foot, tq)
        return lo - tol <= xq <= hi + tol


def triangle_of(s, x, t):
    """Characteristic triangle with apex (x, t)."""
    c = classify(s, x, t)
    w = c.winner
    if x <= _B:
        if w == "Gbl":
            return Triangle(x, t, "b-inflow-left", None, ("left", c.Gbl.lo))
        if c.F.value <= c.Gbr.value:
            return Triangle(x, t, "b-i", None, ("init", c.F.hi))
        return Triangle(x, t, "b-iii", None, ("right", c.Gbr.hi))
    if x >= 1.0 - _B:
        if w == "Gbr":
            return Triangle(x, t, "b-inflow-right", ("right", c.Gbr.lo), None)
        if c.F.value <= c.Gbl.value:
            return Triangle(x, t, "b-ii", ("init", c.F.lo), None)
        return Triangle(x, t, "b-iv", ("left", c.Gbl.hi), None)
    if w == "F":
        return Triangle(x, t, "i", ("init", c.F.lo), ("init", c.F.hi))
    if w == "Gbl":
        return Triangle(x, t, "ii", ("left", c.Gbl.hi), ("left", c.Gbl.lo))
    if w == "Gbr":
        return Triangle(x, t, "iii", ("right", c.Gbr.lo), ("right", c.Gbr.hi))
    if w == "Tie_F_Gbl":
        return Triangle(x, t, "v", ("left", c.Gbl.hi), ("init", c.F.hi))
    if w == "Tie_F_Gbr":
        return Triangle(x, t, "vi", ("init", c.F.lo), ("right", c.Gbr.hi))
    return Triangle(x, t, "iv", ("left", c.Gbl.hi), ("right", c.Gbr.hi))


@dataclass
class CharCurve:
    curve_id: int
    ts: list = field(default_factory=list)
    xs: list = field(default_factory=list)


def shock_locus(s, t_lo, t_hi, nt=200, nx=800):
    """Shock curves on [t_lo, t_hi]: per-slice jump detection plus linking.

    Slice jumps are matched to the nearest live curve within a speed-limited
    window; unmatched jumps start new curves.  Returns a list of CharCurve.
    """
    ts = np.linspace(t_lo, t_hi, nt + 1)
    dtmax = np.max(np.diff(ts)) if nt > 0 else 0.0
    window = (s.speed_scale() + 1.0) * dtmax * 2.0 + 4.0 / nx
    curves = []
    live = []  # (curve, last_t)
    for t in ts:
        jumps = find_jumps(s, t, nx=nx)
        positions = [j.x for j in jumps]
        used = set()
        still = []
        for curve, last_t in live:
            if t - last_t > 1.5 * dtmax + 1e-12:
                continue
            best, bestd = None, np.inf
            for k, xj in enumerate(positions):
                if k in used:
                    continue
                d = abs(xj - curve.xs[-1])
                if d < bestd:
                    best, bestd = k, d
            if best is not None and bestd <= window:
                used.add(best)
                curve.ts.append(t)
                curve.xs.append(positions[best])
                still.append((curve, t))
            else:
                still.append((curve, last_t))
        live = still
        for k, xj in enumerate(positions):
            if k not in used:
                curve = CharCurve(len(curves), [t], [xj])
                curves.append(curve)
                live.append((curve, t))
    return curves
