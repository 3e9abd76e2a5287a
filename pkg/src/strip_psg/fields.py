"""Solution fields: velocity u, cumulative mass m, flux q, energy E, potential
flux H, and the measure (absolutely continuous density + atoms) on a time slice.

One-sided limits follow the monotone structure of the minimizers: approaching
from the left selects the left-boundary regime first and the lower/upper
extreme minimizers (y_*, tau^*, xi_*); from the right the mirrored choices.
Particle positions for the E and H integrals are recovered by inverting the
nondecreasing map x -> m(x+, t) at the particle's cumulative-mass level, which
locates free particles, shock positions, and wall captures in one rule.
"""

import math
from dataclasses import dataclass

import numpy as np

from .potentials import tables
from .minimizers import (slice_state, W_F, W_GBL, W_GBR, W_TIE_F_GBL,
                         W_TIE_F_GBR, W_TIE_GBL_GBR, W_TIE_ALL)

ATOM_FRAC = 1e-6      # atom mass threshold, relative to total mass
JUMP_FRAC = 1e-3      # velocity jump threshold, relative to speed scale
PT = 1e-12            # bracket collapse tolerance
FAN_TOL = 1e-11       # minimizer-at-origin tolerance for rarefaction branches
_B = 1e-14            # wall coincidence tolerance


def u_slice(s, xs, t, st=None):
    """Velocity at each x of a time slice (principal values)."""
    xs = np.asarray(xs, dtype=np.float64)
    if t == 0.0:
        return np.asarray(s.u0(np.clip(xs, 0, 1)), dtype=np.float64)
    tab = tables(s)
    if st is None:
        st = slice_state(s, xs, t)
    loF, hiF = st["loF"], st["hiF"]
    loL, hiL = st["loL"], st["hiL"]
    loR, hiR = st["loR"], st["hiR"]
    w = st["winner"]
    P0, M0 = tab.P0.c0, tab.M0.c0
    Pl, Ql = tab.Pl.c0, tab.Ql.c0
    Pr, Qr = tab.Pr.c0, tab.Qr.c0
    P0T, M0T = tab.P0.total0, tab.M0.total0
    u = np.zeros(xs.shape)

    with np.errstate(divide="ignore", invalid="ignore"):
        i = np.where(w == W_F)[0]
        if len(i):
            pt = hiF[i] - loF[i] <= PT
            p, q_ = i[pt], i[~pt]
            u[p] = (xs[p] - loF[p]) / t
            u[q_] = (P0(hiF[q_]) - P0(loF[q_])) / (M0(hiF[q_]) - M0(loF[q_]))
        i = np.where(w == W_GBL)[0]
        if len(i):
            pt = hiL[i] - loL[i] <= PT
            p, q_ = i[pt], i[~pt]
            u[p] = xs[p] / (t - loL[p])
            u[q_] = (Ql(hiL[q_]) - Ql(loL[q_])) / (Pl(hiL[q_]) - Pl(loL[q_]))
        i = np.where(w == W_GBR)[0]
        if len(i):
            pt = hiR[i] - loR[i] <= PT
            p, q_ = i[pt], i[~pt]
            u[p] = (xs[p] - 1.0) / (t - loR[p])
            u[q_] = (Qr(hiR[q_]) - Qr(loR[q_])) / (Pr(hiR[q_]) - Pr(loR[q_]))
        i = np.where(w == W_TIE_F_GBL)[0]
        if len(i):
            fan = (hiF[i] <= FAN_TOL) & (hiL[i] <= FAN_TOL)
            p, q_ = i[fan], i[~fan]
            u[p] = xs[p] / t
            u[q_] = (Ql(hiL[q_]) + P0(hiF[q_])) / (Pl(hiL[q_]) + M0(hiF[q_]))
        i = np.where(w == W_TIE_F_GBR)[0]
        if len(i):
            fan = (loF[i] >= 1.0 - FAN_TOL) & (hiR[i] <= FAN_TOL)
            p, q_ = i[fan], i[~fan]
            u[p] = (xs[p] - 1.0) / t
            u[q_] = ((Qr(hiR[q_]) + P0(loF[q_]) - P0T)
                     / (Pr(hiR[q_]) + M0(loF[q_]) - M0T))
        i = np.where((w == W_TIE_GBL_GBR) | (w == W_TIE_ALL))[0]
        if len(i):
            u[i] = ((Ql(hiL[i]) - Qr(hiR[i]) + P0T)
                    / (Pl(hiL[i]) - Pr(hiR[i]) + M0T))

    # boundary rules: inflow value when the own-boundary potential wins
    # strictly, zero when it loses strictly (captured), ties keep the
    # interior tie formula
    for j in np.where(xs <= _B)[0]:
        other = min(st["valF"][j], st["valR"][j])
        if other > st["valL"][j] + st["eps"][j]:
            u[j] = float(s.u_bl(min(t, s.t_max)))
        elif other < st["valL"][j] - st["eps"][j]:
            u[j] = 0.0
    for j in np.where(xs >= 1.0 - _B)[0]:
        other = min(st["valF"][j], st["valL"][j])
        if other > st["valR"][j] + st["eps"][j]:
            u[j] = float(s.u_br(min(t, s.t_max)))
        elif other < st["valR"][j] - st["eps"][j]:
            u[j] = 0.0
    return u


def u_at(s, x, t):
    return float(u_slice(s, np.array([x]), t)[0])


def u_side_slice(s, xs, t, side, st=None):
    """One-sided velocity limits u(x-, t) or u(x+, t)."""
    xs = np.asarray(xs, dtype=np.float64)
    if t == 0.0:
        f = s.u0.left_limit if side == "left" else s.u0
        return np.asarray(f(np.clip(xs, 0, 1)), dtype=np.float64)
    if st is None:
        st = slice_state(s, xs, t)
    nF, nL, nR = st["nF"], st["nL"], st["nR"]
    u = np.zeros(xs.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        if side == "left":
            bL = nL
            bF = ~nL & nF
            bR = ~nL & ~nF
            u[bL] = xs[bL] / (t - st["hiL"][bL])
            u[bF] = (xs[bF] - st["loF"][bF]) / t
            u[bR] = (xs[bR] - 1.0) / (t - st["loR"][bR])
        elif side == "right":
            bR = nR
            bF = ~nR & nF
            bL = ~nR & ~nF
            u[bR] = (xs[bR] - 1.0) / (t - st["hiR"][bR])
            u[bF] = (xs[bF] - st["hiF"][bF]) / t
            u[bL] = xs[bL] / (t - st["loL"][bL])
        else:
            raise ValueError("side must be 'left' or 'right'")
    # inflow limits at the walls where the division above degenerates
    tb = min(t, s.t_max)
    bad = ~np.isfinite(u)
    for j in np.where(bad & (xs <= 1e-9))[0]:
        u[j] = float(s.u_bl.left_limit(tb))
    for j in np.where(bad & (xs >= 1.0 - 1e-9))[0]:
        u[j] = float(s.u_br.left_limit(tb))
    return u


def u_side(s, x, t, side):
    return float(u_side_slice(s, np.array([x]), t, side)[0])


def _m_branch_values(s, which):
    """Branch values for a cumulative quantity: which='m' or 'q'."""
    tab = tables(s)
    if which == "m":
        cF, cL, cR = tab.M0.c0, tab.Pl.c0, tab.Pr.c0
        tot = tab.M0.total0
    else:
        cF, cL, cR = tab.P0.c0, tab.Ql.c0, tab.Qr.c0
        tot = tab.P0.total0
    return cF, cL, cR, tot


def _cumulative_slice(s, xs, t, side, which, st=None):
    xs = np.asarray(xs, dtype=np.float64)
    tab = tables(s)
    if t == 0.0:
        c = tab.M0.c0 if which == "m" else tab.P0.c0
        return np.asarray(c(np.clip(xs, 0, 1)), dtype=np.float64)
    if st is None:
        st = slice_state(s, xs, t)
    cF, cL, cR, tot = _m_branch_values(s, which)
    out = np.empty(xs.shape)
    if side == "principal":
        at0 = xs <= _B
        at1 = xs >= 1.0 - _B
        bF = (~at0) & (~at1) & (st["valF"] <= np.minimum(st["valL"], st["valR"]))
        bL = ~bF & (at0 | ((~at1) & (st["valL"] <= np.minimum(st["valF"], st["valR"]))))
        bR = ~bF & ~bL
        out[bF] = cF(st["loF"][bF])
        out[bL] = -cL(st["loL"][bL])
        out[bR] = tot - cR(st["loR"][bR])
    elif side == "left":
        bL = st["nL"]
        bF = ~bL & st["nF"]
        bR = ~bL & ~bF
        out[bL] = -cL(st["hiL"][bL])
        out[bF] = cF(st["loF"][bF])
        out[bR] = tot - cR(st["loR"][bR])
    elif side == "right":
        bR = st["nR"]
        bF = ~bR & st["nF"]
        bL = ~bR & ~bF
        out[bR] = tot - cR(st["hiR"][bR])
        out[bF] = cF(st["hiF"][bF])
        out[bL] = -cL(st["loL"][bL])
    else:
        raise ValueError("side must be 'principal', 'left' or 'right'")
    return out


def m_slice(s, xs, t, side="principal", st=None):
    """Cumulative mass m; normalized so m(0,t) = -(left inflow up to t)."""
    return _cumulative_slice(s, xs, t, side, "m", st)


def q_slice(s, xs, t, side="principal", st=None):
    """Momentum flux potential q with q_x-dual normalization matching m."""
    return _cumulative_slice(s, xs, t, side, "q", st)


def m_at(s, x, t, side="principal"):
    return float(m_slice(s, np.array([x]), t, side)[0])


def q_at(s, x, t, side="principal"):
    return float(q_slice(s, np.array([x]), t, side)[0])


@dataclass
class Jump:
    """Interior velocity discontinuity with one-sided states.

    delta is a safe offset: x -/+ delta are firmly in the one-sided regimes.
    """
    x: float
    u_left: float
    u_right: float
    mass: float
    delta: float
    u_star: float = 0.0   # velocity of the atom, (dq/dm across the jump)


def find_jumps(s, t, nx=800, jump_frac=JUMP_FRAC):
    """Velocity discontinuities on (0,1) at time t.

    Flagged grid cells are clustered, then each shock is located by bisecting
    the nondecreasing cumulative mass m(., t) through the cluster's mid level;
    one-sided states come from points offset just beyond the numerical tie
    window (whose half-width is eps_tie / mass jump).
    """
    thresh = jump_frac * s.speed_scale()
    if t == 0.0:
        out = []
        for b in s.u0.breakpoints[1:-1]:
            ul, ur = float(s.u0.left_limit(b)), float(s.u0(b))
            if ul - ur > thresh:
                out.append(Jump(float(b), ul, ur, 0.0, 1e-12, 0.5 * (ul + ur)))
        return out
    xs = np.linspace(0.0, 1.0, nx + 1)[1:-1]
    u = u_slice(s, xs, t)
    cells = np.where(u[:-1] - u[1:] > thresh)[0]
    if len(cells) == 0:
        return []
    groups = np.split(cells, np.where(np.diff(cells) > 1)[0] + 1)
    a = np.array([xs[g[0]] for g in groups])
    b = np.array([xs[g[-1] + 1] for g in groups])
    ma = m_slice(s, a, t)
    mb = m_slice(s, b, t)
    level = 0.5 * (ma + mb)
    for _ in range(60):
        mid = 0.5 * (a + b)
        geq = m_slice(s, mid, t) >= level
        b = np.where(geq, mid, b)
        a = np.where(geq, a, mid)
    xj = 0.5 * (a + b)
    mu = slice_state(s, xj, t)["mu"]
    eps = 1e-9 * (1.0 + np.abs(mu))
    delta = np.minimum(4.0 * eps / np.maximum(mb - ma, 1e-12) + 1e-12, 0.25 / nx)
    xl = np.maximum(xj - delta, 0.0)
    xr = np.minimum(xj + delta, 1.0)
    ul = u_slice(s, xl, t)
    ur = u_slice(s, xr, t)
    mass = m_slice(s, xr, t) - m_slice(s, xl, t)
    dq = q_slice(s, xr, t) - q_slice(s, xl, t)
    ustar = dq / np.maximum(mass, 1e-300)
    return [Jump(float(xj[k]), float(ul[k]), float(ur[k]), float(mass[k]),
                 float(delta[k]), float(ustar[k]))
            for k in range(len(xj)) if ul[k] - ur[k] > thresh]


@dataclass
class MeasureSlice:
    """rho(., t) as cellwise densities plus atoms."""
    t: float
    nodes: np.ndarray          # grid_n+1 cell edges on [0,1]
    cell_masses: np.ndarray    # absolutely continuous mass per cell
    densities: np.ndarray
    atoms: list                # [(x, mass)] interior atoms
    left_atom: float
    right_atom: float
    total_mass: float


def measure_at(s, t, grid_n=800):
    """Extract the spatial measure at time t from jumps of m."""
    total = m_at(s, 1.0, t) - m_at(s, 0.0, t)
    atoms = []
    for j in find_jumps(s, t, nx=grid_n):
        if j.mass > ATOM_FRAC * max(total, 1e-300):
            atoms.append((j.x, j.mass))
    nodes = np.linspace(0.0, 1.0, grid_n + 1)
    c = m_slice(s, nodes, t, side="right")
    c[-1] = m_at(s, 1.0, t, "left")
    cell = np.diff(c)
    for xj, mass in atoms:
        k = np.searchsorted(nodes, xj, side="left") - 1
        k = min(max(k, 0), grid_n - 1)
        cell[k] -= mass
    cell[np.abs(cell) < 1e-13 * max(total, 1.0)] = 0.0
    left_atom = max(c[0] - m_at(s, 0.0, t), 0.0)
    right_atom = max(m_at(s, 1.0, t) - c[-1], 0.0)
    return MeasureSlice(t, nodes, cell, cell * grid_n, atoms,
                        left_atom, right_atom, total)


class EnergyContext:
    """Particle-position oracle at a fixed time.

    position(levels) inverts the nondecreasing map x -> m(x+, t) at given
    cumulative-mass levels: initial particles carry level M0(eta), left-inflow
    particles -Pl(eta), right-inflow particles M0(1) - Pr(eta).  Quadrature
    nodes, positions, and velocities per family are cached over the full
    parameter range; integrals up to a branch-dependent upper limit reuse them
    with fractional coverage of the straddling cell.
    """

    def __init__(self, s, t, n_nodes=2048, iters=60):
        self.s = s
        self.t = t
        self.n_nodes = n_nodes
        self.iters = iters
        self._fam = {}

    def position(self, levels):
        levels = np.asarray(levels, dtype=np.float64)
        lo = np.zeros(levels.shape)
        hi = np.ones(levels.shape)
        for _ in range(self.iters):
            mid = 0.5 * (lo + hi)
            mv = m_slice(self.s, mid, self.t, side="right")
            geq = mv >= levels
            hi = np.where(geq, mid, hi)
            lo = np.where(geq, lo, mid)
        return hi

    def family(self, kind):
        """Cached quadrature data for one particle family.

        kind: 'init' (weight rho0*u0 over eta in [0,1]),
              'left' (rho_bl*u_bl^2 over [0, min(t, t_max)]),
              'right' (rho_br*u_br^2 over [0, min(t, t_max)]).
        Returns dict with cell bounds (lo, hi), weights w*h, positions, u.
        """
        if kind in self._fam:
            return self._fam[kind]
        tab = tables(self.s)
        if kind == "init":
            edges, w = tab.edges0, tab.rho0 * tab.u0
            lev = tab.M0.c0
            cap = 1.0
        elif kind == "left":
            edges, w = tab.edges_l, tab.rho_l * tab.u_l ** 2
            lev = lambda e: -tab.Pl.c0(e)
            cap = min(self.t, self.s.t_max)
        else:
            edges, w = tab.edges_r, tab.rho_r * tab.u_r ** 2
            lev = lambda e: tab.M0.total0 - tab.Pr.c0(e)
            cap = min(self.t, self.s.t_max)
        los, his, wts = [], [], []
        if cap > 0:
            cuts = np.concatenate(([0.0], edges[(edges > 0) & (edges < cap)], [cap]))
            for a, b in zip(cuts[:-1], cuts[1:]):
                k = max(8, int(math.ceil(self.n_nodes * (b - a) / cap)))
                h = (b - a) / k
                clo = a + h * np.arange(k)
                kk = np.clip(np.searchsorted(edges, clo + 0.5 * h, side="right") - 1,
                             0, len(w) - 1)
                los.append(clo)
                his.append(clo + h)
                wts.append(w[kk] * h)
        lo = np.concatenate(los) if los else np.zeros(0)
        hi = np.concatenate(his) if his else np.zeros(0)
        wts = np.concatenate(wts) if wts else np.zeros(0)
        pos = self.position(lev(0.5 * (lo + hi)))
        uv = u_slice(self.s, pos, self.t)
        lo, hi, wts, pos, uv = self._split_kinks(lev, lo, hi, wts, pos, uv)
        fam = {"lo": lo, "hi": hi, "w": wts, "pos": pos, "u": uv}
        self._fam[kind] = fam
        return fam

    def _split_kinks(self, lev, lo, hi, wts, pos, uv):
        """Split cells where u(pos(eta)) jumps (particle meets a shock/wall)
        exactly at the jump, so the midpoint rule stays accurate."""
        n = len(lo)
        if n < 2:
            return lo, hi, wts, pos, uv
        thr = 0.05 * (1.0 + self.s.speed_scale())
        t = self.t

        def u_of(eta):
            return float(u_slice(self.s, self.position(lev(np.array([eta]))), t)[0])

        splits = {}
        for k in np.where(np.abs(np.diff(uv)) > thr)[0]:
            a, b = 0.5 * (lo[k] + hi[k]), 0.5 * (lo[k + 1] + hi[k + 1])
            ua, ub = uv[k], uv[k + 1]
            for _ in range(60):
                mid = 0.5 * (a + b)
                um = u_of(mid)
                if abs(um - ua) <= abs(um - ub):
                    a = mid
                else:
                    b = mid
            eta = 0.5 * (a + b)
            c = k if eta < hi[k] else k + 1
            if lo[c] + 1e-14 < eta < hi[c] - 1e-14:
                splits[c] = eta
        if not splits:
            return lo, hi, wts, pos, uv
        keep = np.setdiff1d(np.arange(n), list(splits))
        nlo, nhi, nw = [lo[keep]], [hi[keep]], [wts[keep]]
        for c, eta in splits.items():
            dens = wts[c] / (hi[c] - lo[c])
            nlo.append(np.array([lo[c], eta]))
            nhi.append(np.array([eta, hi[c]]))
            nw.append(dens * np.array([eta - lo[c], hi[c] - eta]))
        lo = np.concatenate(nlo)
        hi = np.concatenate(nhi)
        wts = np.concatenate(nw)
        order = np.argsort(lo)
        lo, hi, wts = lo[order], hi[order], wts[order]
        pos = self.position(lev(0.5 * (lo + hi)))
        uv = u_slice(self.s, pos, t)
        return lo, hi, wts, pos, uv

    def integral(self, kind, upper, values):
        """sum of w * values over cells covered by [0, upper] (fractional)."""
        fam = self.family(kind)
        if len(fam["w"]) == 0 or upper <= 0:
            return 0.0
        frac = np.clip((upper - fam["lo"]) / (fam["hi"] - fam["lo"]), 0.0, 1.0)
        out = float(np.sum(frac * fam["w"] * values))
        # partially covered cell: shift the value from the full-cell midpoint
        # to the midpoint of the covered fraction (linear interpolation)
        idx = np.where((frac > 0.0) & (frac < 1.0))[0]
        n = len(frac)
        for k in idx:
            phi = 0.5 * (frac[k] - 1.0)  # covered-midpoint offset, cell units
            if phi < 0 and k > 0:
                slope = values[k] - values[k - 1]
            elif k + 1 < n:
                slope = values[k + 1] - values[k]
            else:
                slope = 0.0
            out += float(frac[k] * fam["w"][k] * phi * slope)
        return out


def _scalar_branch(s, x, t, side):
    """(branch, lower-extreme parameter) for cumulative quantities at a point."""
    st = slice_state(s, np.array([x]), t)
    vF, vL, vR = st["valF"][0], st["valL"][0], st["valR"][0]
    if side == "principal":
        if _B < x < 1.0 - _B and vF <= min(vL, vR):
            return "F", float(st["loF"][0])
        if x <= _B or (x < 1.0 - _B and vL <= min(vF, vR)):
            return "Gbl", float(st["loL"][0])
        return "Gbr", float(st["loR"][0])
    if side == "left":
        if st["nL"][0]:
            return "Gbl", float(st["hiL"][0])
        if st["nF"][0]:
            return "F", float(st["loF"][0])
        return "Gbr", float(st["loR"][0])
    if st["nR"][0]:
        return "Gbr", float(st["hiR"][0])
    if st["nF"][0]:
        return "F", float(st["hiF"][0])
    return "Gbl", float(st["loL"][0])


def E_at(s, x, t, ctx=None, side="principal"):
    """Energy field E(x,t): half-sum of particle kinetic energies by branch."""
    if ctx is None:
        ctx = EnergyContext(s, t)
    branch, par = _scalar_branch(s, x, t, side)
    if branch == "F":
        return 0.5 * ctx.integral("init", par, ctx.family("init")["u"])
    if branch == "Gbl":
        return -0.5 * ctx.integral("left", par, ctx.family("left")["u"])
    return (-0.5 * ctx.integral("right", par, ctx.family("right")["u"])
            + 0.5 * ctx.integral("init", 1.0, ctx.family("init")["u"]))


def H_at(s, x, t, ctx=None, side="principal"):
    """Potential flux H(x,t); satisfies H_x = -q and H_t = 2E."""
    if ctx is None:
        ctx = EnergyContext(s, t)
    branch, par = _scalar_branch(s, x, t, side)
    if branch == "F":
        return ctx.integral("init", par, ctx.family("init")["pos"] - x)
    if branch == "Gbl":
        return -ctx.integral("left", par, ctx.family("left")["pos"] - x)
    return (-ctx.integral("right", par, ctx.family("right")["pos"] - x)
            + ctx.integral("init", 1.0, ctx.family("init")["pos"] - x))
