"""Scenario data: piecewise-constant fields on an interval, exact moments, JSON I/O."""

import json
import numpy as np


class PiecewiseConstant:
    """Right-continuous piecewise-constant function on [lo, hi].

    breakpoints: increasing array of length P+1 including both endpoints.
    values: array of length P, values[k] on [breakpoints[k], breakpoints[k+1]).
    The last piece is closed at hi.
    """

    def __init__(self, breakpoints, values):
        self.breakpoints = np.asarray(breakpoints, dtype=np.float64)
        self.values = np.asarray(values, dtype=np.float64)
        if self.breakpoints.ndim != 1 or self.values.ndim != 1:
            raise ValueError("breakpoints and values must be 1-d")
        if len(self.breakpoints) != len(self.values) + 1:
            raise ValueError("need len(breakpoints) == len(values) + 1")
        if not np.all(np.diff(self.breakpoints) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        if not np.all(np.isfinite(self.breakpoints)) or not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite data")

    @property
    def lo(self):
        return self.breakpoints[0]

    @property
    def hi(self):
        return self.breakpoints[-1]

    def piece_index(self, x):
        """Index k of the piece containing x (right-continuous; hi maps to the last piece)."""
        k = np.searchsorted(self.breakpoints, x, side="right") - 1
        return np.clip(k, 0, len(self.values) - 1)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.float64)
        if np.any(x < self.lo) or np.any(x > self.hi):
            raise ValueError("evaluation outside domain")
        return self.values[self.piece_index(x)]

    def left_limit(self, x):
        """Limit from the left; at lo returns the first value."""
        x = np.asarray(x, dtype=np.float64)
        if np.any(x < self.lo) or np.any(x > self.hi):
            raise ValueError("evaluation outside domain")
        k = np.searchsorted(self.breakpoints, x, side="left") - 1
        return self.values[np.clip(k, 0, len(self.values) - 1)]

    def to_dict(self):
        return {"breakpoints": self.breakpoints.tolist(), "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, d):
        return cls(d["breakpoints"], d["values"])


class MomentSpec:
    """Weighted moment of a (density, velocity) pair over a subinterval.

    factors: subset of {"density", "velocity", "velocity2"} multiplied together.
    weight: affine weight c0 + c1*eta in the integration variable.
    """

    def __init__(self, factors, c0=1.0, c1=0.0):
        allowed = {"density", "velocity", "velocity2"}
        if not set(factors) <= allowed:
            raise ValueError("unknown factor")
        self.factors = tuple(factors)
        self.c0 = float(c0)
        self.c1 = float(c1)


def moment_integral(density, velocity, spec, lo, hi):
    """Exact integral of prod(factors) * (c0 + c1*eta) d(eta) over [lo, hi].

    density and velocity are PiecewiseConstant on the same domain; the integrand is
    piecewise affine so each piece integrates in closed form.
    """
    if hi < lo:
        return -moment_integral(density, velocity, spec, hi, lo)
    edges = np.union1d(density.breakpoints, velocity.breakpoints)
    edges = edges[(edges > lo) & (edges < hi)]
    edges = np.concatenate(([lo], edges, [hi]))
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (a + b)
        w = 1.0
        if "density" in spec.factors:
            w *= float(density(mid))
        if "velocity" in spec.factors:
            w *= float(velocity(mid))
        if "velocity2" in spec.factors:
            w *= float(velocity(mid)) ** 2
        total += w * (spec.c0 * (b - a) + spec.c1 * 0.5 * (b * b - a * a))
    return total


class Scenario:
    """Problem data on the strip [0,1] x [0, t_max].

    rho0, u0 on [0,1]; rho_bl, u_bl (left inflow) and rho_br, u_br (right inflow)
    on [0, t_max]. Inflow means u_bl > 0 and u_br < 0; densities positive.
    """

    FIELDS = ("rho0", "u0", "rho_bl", "u_bl", "rho_br", "u_br")

    def __init__(self, rho0, u0, rho_bl, u_bl, rho_br, u_br, t_max):
        self.rho0 = rho0
        self.u0 = u0
        self.rho_bl = rho_bl
        self.u_bl = u_bl
        self.rho_br = rho_br
        self.u_br = u_br
        self.t_max = float(t_max)
        problems = self.validate()
        if problems:
            raise ValueError("invalid scenario: " + "; ".join(problems))

    def validate(self):
        """Return a list of problem descriptions (empty when valid)."""
        problems = []
        for name in self.FIELDS:
            f = getattr(self, name)
            if not isinstance(f, PiecewiseConstant):
                problems.append(f"{name} is not piecewise constant")
                continue
            dom = (0.0, 1.0) if name in ("rho0", "u0") else (0.0, self.t_max)
            if abs(f.lo - dom[0]) > 1e-14 or abs(f.hi - dom[1]) > 1e-12:
                problems.append(f"{name} domain is [{f.lo}, {f.hi}], expected {list(dom)}")
        if not (np.isfinite(self.t_max) and self.t_max > 0):
            problems.append("t_max must be positive and finite")
        if problems:
            return problems
        for name in ("rho0", "rho_bl", "rho_br"):
            if np.any(getattr(self, name).values <= 0):
                problems.append(f"{name} must be strictly positive")
        if np.any(self.u_bl.values <= 0):
            problems.append("u_bl must be strictly positive (inflow)")
        if np.any(self.u_br.values >= 0):
            problems.append("u_br must be strictly negative (inflow)")
        return problems

    def speed_scale(self):
        return max(
            np.max(np.abs(self.u0.values)),
            np.max(np.abs(self.u_bl.values)),
            np.max(np.abs(self.u_br.values)),
        )

    def to_dict(self):
        d = {name: getattr(self, name).to_dict() for name in self.FIELDS}
        d["t_max"] = self.t_max
        return d

    @classmethod
    def from_dict(cls, d):
        kw = {name: PiecewiseConstant.from_dict(d[name]) for name in cls.FIELDS}
        return cls(t_max=d["t_max"], **kw)

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            d = json.load(fh, parse_constant=_reject_constant)
        return cls.from_dict(d)


def _reject_constant(name):
    raise ValueError(f"non-finite value {name!r} in scenario file")


def _const(lo, hi, v):
    return PiecewiseConstant([lo, hi], [v])


def builtin_scenario(name, a=None, b=None, btilde=None, t_max=None):
    """Built-in scenarios s1..s4.

    s1/s2: constant data rho=1, u0=a, u_bl=btilde>0, u_br=b<0.
    Defaults: s1 (a,btilde,b)=(-2,3,-1) concentrates mass on the right boundary;
    s2 (2,1,-3) is the mirrored case. s3/s4 are symmetric-collision scenarios
    with a velocity jump at x=1/2.
    """
    if name == "s1":
        a = -2.0 if a is None else a
        btilde = 3.0 if btilde is None else btilde
        b = -1.0 if b is None else b
        T = 4.0 if t_max is None else t_max
        return Scenario(
            rho0=_const(0, 1, 1.0), u0=_const(0, 1, a),
            rho_bl=_const(0, T, 1.0), u_bl=_const(0, T, btilde),
            rho_br=_const(0, T, 1.0), u_br=_const(0, T, b), t_max=T)
    if name == "s2":
        a = 2.0 if a is None else a
        btilde = 1.0 if btilde is None else btilde
        b = -3.0 if b is None else b
        T = 4.0 if t_max is None else t_max
        return Scenario(
            rho0=_const(0, 1, 1.0), u0=_const(0, 1, a),
            rho_bl=_const(0, T, 1.0), u_bl=_const(0, T, btilde),
            rho_br=_const(0, T, 1.0), u_br=_const(0, T, b), t_max=T)
    if name == "s3":
        T = 2.0 if t_max is None else t_max
        return Scenario(
            rho0=_const(0, 1, 1.0),
            u0=PiecewiseConstant([0.0, 0.5, 1.0], [2.0, -2.0]),
            rho_bl=_const(0, T, 1.0),
            u_bl=PiecewiseConstant([0.0, 0.5, T], [2.0, 3.0]),
            rho_br=_const(0, T, 1.0),
            u_br=PiecewiseConstant([0.0, 0.5, T], [-2.0, -3.0]), t_max=T)
    if name == "s4":
        T = 2.0 if t_max is None else t_max
        return Scenario(
            rho0=_const(0, 1, 1.0),
            u0=PiecewiseConstant([0.0, 0.5, 1.0], [2.0, -2.0]),
            rho_bl=_const(0, T, 1.0), u_bl=_const(0, T, 1.0),
            rho_br=_const(0, T, 1.0), u_br=_const(0, T, -1.0), t_max=T)
    raise ValueError(f"unknown scenario {name!r}")


def random_scenario(rng, t_max=2.0, max_pieces=4):
    """Random admissible scenario for property testing (seeded rng)."""
    def pick(lo, hi, vlo, vhi, sign=None):
        p = int(rng.integers(1, max_pieces + 1))
        inner = np.sort(rng.uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo), p - 1))
        bp = np.concatenate(([lo], inner, [hi]))
        v = rng.uniform(vlo, vhi, p)
        if sign is not None:
            v = sign * np.abs(v)
        return PiecewiseConstant(bp, v)

    return Scenario(
        rho0=pick(0, 1, 0.2, 2.0, sign=+1),
        u0=pick(0, 1, -3.0, 3.0),
        rho_bl=pick(0, t_max, 0.2, 2.0, sign=+1),
        u_bl=pick(0, t_max, 0.3, 3.0, sign=+1),
        rho_br=pick(0, t_max, 0.2, 2.0, sign=+1),
        u_br=pick(0, t_max, 0.3, 3.0, sign=-1),
        t_max=t_max)
