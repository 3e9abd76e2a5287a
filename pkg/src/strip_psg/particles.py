"""Event-driven sticky-particle oracle.

Interior mass is discretized into n equal-mass particles at density quantiles;
boundary inflow is discretized per data piece into equal sub-intervals, each
injecting one particle carrying the exact sub-interval mass rho*|u|*dt at the
sub-interval midpoint time.  Adjacent particles merge on contact conserving
mass and momentum; particles reaching a wall while moving outward stick to it.
Events live in a lazy heap invalidated by per-particle version counters.
"""

import heapq
from dataclasses import dataclass, field

import numpy as np

from .potentials import tables
from . import fields


class ParticleSystem:
    def __init__(self, s, n=1000, seed=0):
        self.s = s
        tab = tables(s)
        mp = tab.M0.total0 / n
        levels = (np.arange(n) + 0.5) * mp
        xs = np.interp(levels, tab.M0.cum0, tab.edges0)
        vs = np.asarray(s.u0(xs), dtype=np.float64)

        self.x = list(xs)         # position at t_ref
        self.tref = [0.0] * n
        self.v = list(vs)
        self.mass = [mp] * n
        self.alive = [True] * n
        self.prev = list(range(-1, n - 1))
        self.next = list(range(1, n + 1))
        self.next[-1] = -1
        self.head = 0
        self.tail = n - 1
        self.ver = [0] * n
        self.t = 0.0
        self.wall_left = 0.0
        self.wall_right = 0.0
        self.rng = np.random.default_rng(seed)

        # injection schedule: (time, side, velocity, mass), time-sorted
        inj = []
        for side, edges, rho, vel in (
                ("L", tab.edges_l, tab.rho_l, tab.u_l),
                ("R", tab.edges_r, tab.rho_r, tab.u_r)):
            for a, b, r, v in zip(edges[:-1], edges[1:], rho, vel):
                piece_mass = r * abs(v) * (b - a)
                k = max(1, int(round(piece_mass / mp)))
                h = (b - a) / k
                for j in range(k):
                    inj.append((a + (j + 0.5) * h, side, v, piece_mass / k))
        inj.sort()
        self.injections = inj
        self.next_inj = 0

        self.heap = []
        self.seq = 0
        i = self.head
        while i != -1:
            self._schedule(i)
            i = self.next[i]

    # -------------------------------------------------- event scheduling

    def _push(self, t_ev, kind, i, j=-1):
        vj = self.ver[j] if j >= 0 else -1
        self.seq += 1
        heapq.heappush(self.heap, (t_ev, self.seq, kind, i, self.ver[i], j, vj))

    def pos(self, i, t):
        return self.x[i] + self.v[i] * (t - self.tref[i])

    def _schedule(self, i):
        """(Re)schedule collision-with-right-neighbor and wall events for i."""
        j = self.next[i]
        if j != -1:
            tm = max(self.tref[i], self.tref[j])
            gap = self.pos(j, tm) - self.pos(i, tm)
            rel = self.v[i] - self.v[j]
            if rel > 0:
                self._push(tm + max(gap, 0.0) / rel, "coll", i, j)
        if self.prev[i] == -1 and self.v[i] < 0:
            self._push(self.tref[i] - self.x[i] / self.v[i], "wallL", i)
        if self.next[i] == -1 and self.v[i] > 0:
            self._push(self.tref[i] + (1.0 - self.x[i]) / self.v[i], "wallR", i)

    def _new_particle(self, x, t, v, mass):
        self.x.append(x)
        self.tref.append(t)
        self.v.append(v)
        self.mass.append(mass)
        self.alive.append(True)
        self.prev.append(-1)
        self.next.append(-1)
        self.ver.append(0)
        return len(self.x) - 1

    # -------------------------------------------------- dynamics

    def advance(self, t_target):
        if t_target < self.t:
            raise ValueError("cannot advance backwards")
        if t_target > self.s.t_max + 1e-12:
            raise ValueError("t beyond t_max")
        while True:
            t_inj = (self.injections[self.next_inj][0]
                     if self.next_inj < len(self.injections) else np.inf)
            t_ev = self.heap[0][0] if self.heap else np.inf
            if min(t_inj, t_ev) > t_target:
                break
            if t_inj <= t_ev:
                self._do_injection()
            else:
                self._do_event()
        self.t = t_target

    def _do_injection(self):
        t0, side, v, mass = self.injections[self.next_inj]
        self.next_inj += 1
        if side == "L":
            i = self._new_particle(0.0, t0, v, mass)
            j = self.head
            self.next[i] = j
            if j != -1:
                self.prev[j] = i
            else:
                self.tail = i
            self.head = i
            # absorb immediately if the old head already sits at the wall
            if j != -1 and self.pos(j, t0) <= 0.0:
                self._merge_into(i, j, 0.0, t0)
            else:
                self._schedule(i)
        else:
            i = self._new_particle(1.0, t0, v, mass)
            j = self.tail
            self.prev[i] = j
            if j != -1:
                self.next[j] = i
            else:
                self.head = i
            self.tail = i
            if j != -1 and self.pos(j, t0) >= 1.0:
                self._merge_into(i, j, 1.0, t0)
            else:
                self._schedule(i)
                if j != -1:
                    self._schedule(j)  # j's right neighbor changed

    def _merge_into(self, i, j, xc, tc):
        """Merge j into i at (xc, tc); i keeps its links except absorbing j's."""
        mi, mj = self.mass[i], self.mass[j]
        self.v[i] = (mi * self.v[i] + mj * self.v[j]) / (mi + mj)
        self.mass[i] = mi + mj
        self.x[i] = xc
        self.tref[i] = tc
        self.ver[i] += 1
        self.ver[j] += 1
        self.alive[j] = False
        # splice j out
        pj, nj = self.prev[j], self.next[j]
        if pj == i:
            self.next[i] = nj
            if nj != -1:
                self.prev[nj] = i
            else:
                self.tail = i
        elif nj == i:
            self.prev[i] = pj
            if pj != -1:
                self.next[pj] = i
            else:
                self.head = i
        self._schedule(i)
        if self.prev[i] != -1:
            self._schedule(self.prev[i])

    def _do_event(self):
        t_ev, _, kind, i, vi, j, vj = heapq.heappop(self.heap)
        if not self.alive[i] or self.ver[i] != vi:
            return
        if kind == "coll":
            if j == -1 or not self.alive[j] or self.ver[j] != vj:
                return
            xc = self.pos(i, t_ev)
            self._merge_into(i, j, xc, t_ev)
        elif kind == "wallL":
            if self.prev[i] != -1:
                return  # no longer the head; a collision handles it
            self.wall_left += self.mass[i]
            self.alive[i] = False
            self.ver[i] += 1
            nxt = self.next[i]
            self.head = nxt
            if nxt != -1:
                self.prev[nxt] = -1
                self._schedule(nxt)
            else:
                self.tail = -1
        elif kind == "wallR":
            if self.next[i] != -1:
                return  # no longer the tail; a collision handles it
            self.wall_right += self.mass[i]
            self.alive[i] = False
            self.ver[i] += 1
            prv = self.prev[i]
            self.tail = prv
            if prv != -1:
                self.next[prv] = -1
                self._schedule(prv)
            else:
                self.head = -1

    # -------------------------------------------------- observables

    def particles(self, t=None):
        """(positions, velocities, masses) of live particles, left to right."""
        t = self.t if t is None else t
        xs, vs, ms = [], [], []
        i = self.head
        while i != -1:
            xs.append(min(1.0, max(0.0, self.pos(i, t))))
            vs.append(self.v[i])
            ms.append(self.mass[i])
            i = self.next[i]
        return np.array(xs), np.array(vs), np.array(ms)

    def empirical_m(self, xq, t=None):
        """Mass in [0, x] including the left wall accumulator; xq may be an array."""
        xs, _, ms = self.particles(t)
        cum = np.concatenate(([0.0], np.cumsum(ms)))
        idx = np.searchsorted(xs, np.asarray(xq, dtype=np.float64), side="right")
        return self.wall_left + cum[idx]

    def total_mass(self):
        _, _, ms = self.particles()
        return self.wall_left + self.wall_right + float(np.sum(ms))


@dataclass
class OracleComparison:
    t: float
    n: int
    sup_err: float
    total_model: float
    total_oracle: float
    atoms_model: list = field(default_factory=list)
    clusters_oracle: list = field(default_factory=list)


def compare(s, t, n=2000, seed=0, grid_n=1000, ps=None):
    """Sup distance between solver and oracle cumulative mass at time t."""
    if ps is None:
        ps = ParticleSystem(s, n=n, seed=seed)
    ps.advance(t)
    xs = np.linspace(0.0, 1.0, grid_n + 1)
    m0 = fields.m_at(s, 0.0, t)
    hi = fields.m_slice(s, xs, t, side="right") - m0
    lo = fields.m_slice(s, xs, t, side="left") - m0
    hi[-1] = fields.m_at(s, 1.0, t) - m0
    lo[-1] = fields.m_at(s, 1.0, t, "left") - m0
    emp = ps.empirical_m(xs)
    emp[-1] += ps.wall_right
    # distance from the empirical value to [m(x-), m(x+)]: atoms sitting a
    # rounding error off a grid node should not register at full mass
    sup_err = float(np.max(np.maximum(0.0, np.maximum(emp - hi, lo - emp))))
    meas = fields.measure_at(s, t, grid_n=grid_n)
    px, pv, pm = ps.particles()
    mp_tot = meas.total_mass
    clusters = [(float(x), float(m)) for x, m in zip(px, pm)
                if m > 10.0 * mp_tot / max(n, 1)]
    return OracleComparison(t, n, sup_err, mp_tot, ps.total_mass(),
                            [(float(a), float(b)) for a, b in meas.atoms], clusters)
