"""Command-line interface: sample fields, trace curves, run checks, run the
particle oracle, and dump the built-in example scenarios."""

import argparse
import json
import os
import sys

import numpy as np

from .data_model import Scenario, builtin_scenario, random_scenario, \
    PiecewiseConstant
from .minimizers import slice_state, WINNER_NAMES
from . import fields, verification
from .characteristics import trace_curve, shock_locus
from .particles import compare

FMT = "%.17g"


def _load_scenario(args):
    try:
        if args.scenario_file:
            s = Scenario.load(args.scenario_file)
        elif args.scenario.startswith("random"):
            seed = int(args.scenario[6:] or 0)
            s = random_scenario(np.random.default_rng(seed))
        else:
            kw = {}
            for key in ("a", "b", "btilde"):
                v = getattr(args, key, None)
                if v is not None:
                    kw[key] = v
            if getattr(args, "t_max", None):
                kw["t_max"] = args.t_max
            s = builtin_scenario(args.scenario, **kw)
    except (ValueError, KeyError, OSError) as exc:
        sys.stderr.write("invalid scenario: %s\n" % exc)
        sys.exit(2)
    problems = s.validate()
    if problems:
        sys.stderr.write("invalid scenario:\n")
        for p in problems:
            sys.stderr.write("  " + p + "\n")
        sys.exit(2)
    return s


def _add_scenario_args(p):
    p.add_argument("--scenario", default="s1",
                   help="built-in name s1..s4, or randomN for seed N")
    p.add_argument("--scenario-file", default=None,
                   help="JSON scenario file (overrides --scenario)")
    p.add_argument("--a", type=float, default=None,
                   help="family parameter a for built-in scenarios")
    p.add_argument("--b", type=float, default=None,
                   help="family parameter b for built-in scenarios")
    p.add_argument("--btilde", type=float, default=None,
                   help="family parameter b-tilde for built-in scenarios")
    p.add_argument("--t-max", type=float, default=None)


def _out(args, name):
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        return os.path.join(args.out, name)
    return name


def _parse_times(args, s):
    if args.t_range:
        lo, hi, n = args.t_range.split(":")
        return np.linspace(float(lo), float(hi), int(n))
    return np.array([float(v) for v in args.t.split(",")])


def cmd_fields(args):
    s = _load_scenario(args)
    ts = _parse_times(args, s)
    xs = np.linspace(0.0, 1.0, args.nx)
    rows = []
    atom_rows = []
    for t in ts:
        st = slice_state(s, xs, t)
        u = fields.u_slice(s, xs, t, st=st)
        m = fields.m_slice(s, xs, t, st=st)
        win = st["winner"]
        for i, x in enumerate(xs):
            rows.append((x, t, u[i], m[i], WINNER_NAMES[win[i]], st["mu"][i]))
        msl = fields.measure_at(s, t, grid_n=max(args.nx, 400))
        for xj, mass in msl.atoms:
            atom_rows.append((t, xj, mass, "interior"))
        if msl.left_atom > 0:
            atom_rows.append((t, 0.0, msl.left_atom, "wall_left"))
        if msl.right_atom > 0:
            atom_rows.append((t, 1.0, msl.right_atom, "wall_right"))
    with open(_out(args, "fields.csv"), "w") as fh:
        fh.write("x,t,u,m,regime,mu\n")
        for x, t, u, m, w, mu in rows:
            fh.write(f"{FMT % x},{FMT % t},{FMT % u},{FMT % m},{w},{FMT % mu}\n")
    with open(_out(args, "atoms.csv"), "w") as fh:
        fh.write("t,location,mass,kind\n")
        for t, xj, mass, kind in atom_rows:
            fh.write(f"{FMT % t},{FMT % xj},{FMT % mass},{kind}\n")
    return 0


def cmd_curves(args):
    s = _load_scenario(args)
    rows = []
    cid = 0
    for x0 in np.linspace(0.0, 1.0, args.nx):
        ts, xs = trace_curve(s, x0, 0.0, args.t_hi)
        for t, x in zip(ts, xs):
            rows.append((cid, t, x))
        cid += 1
    for c in shock_locus(s, args.t_lo, args.t_hi, nt=args.nt, nx=800):
        for t, x in zip(c.ts, c.xs):
            rows.append((cid, t, x))
        cid += 1
    with open(_out(args, "curves.csv"), "w") as fh:
        fh.write("curve_id,t,x\n")
        for c, t, x in rows:
            fh.write(f"{c},{FMT % t},{FMT % x}\n")
    return 0


def cmd_verify(args):
    s = _load_scenario(args)
    names = args.checks.split(",") if args.checks else ["all"]
    overrides = {}
    if args.tol_weak is not None:
        overrides["weak"] = {"tol_frac": args.tol_weak}
    if args.nx:
        overrides.setdefault("weak", {})["nx"] = args.nx
        overrides.setdefault("weak", {})["nt"] = args.nx
    reports = verification.run_checks(s, names, **overrides)
    doc = verification.reports_to_json(
        reports, _out(args, "verify.json") if args.out else None)
    for r in reports:
        print(f"{r.name}: {'PASS' if r.passed else 'FAIL'} "
              f"(worst={r.worst:.3e}, tol={r.tol:.3e}, n={r.n_samples})")
    return 0 if doc["passed"] else 1


def cmd_oracle(args):
    s = _load_scenario(args)
    ts = _parse_times(args, s)
    ok = True
    for t in ts:
        c = compare(s, t, n=args.n, seed=args.seed)
        rel = c.sup_err / max(c.total_model, 1e-300)
        ok &= rel <= args.tol
        print(f"t={FMT % t}: sup_err={c.sup_err:.6e} "
              f"total={c.total_model:.6e} rel={rel:.3e}")
    return 0 if ok else 1


def cmd_examples(args):
    os.makedirs(args.out or ".", exist_ok=True)
    for name in ("s1", "s2", "s3", "s4"):
        path = _out(args, name + ".json")
        builtin_scenario(name).save(path)
        print(path)
    return 0


def main(argv=None):
    threads = os.environ.get("STRIP_PSG_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "NUMBA_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    ap = argparse.ArgumentParser(prog="strip-psg")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("fields", help="sample u, m, regime on a grid")
    _add_scenario_args(p)
    p.add_argument("--t", default="1.0", help="comma-separated times")
    p.add_argument("--t-range", default=None, help="lo:hi:n")
    p.add_argument("--nx", type=int, default=201)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_fields)

    p = sub.add_parser("curves", help="trace particle paths and shock curves")
    _add_scenario_args(p)
    p.add_argument("--t-lo", type=float, default=0.01)
    p.add_argument("--t-hi", type=float, default=None)
    p.add_argument("--nx", type=int, default=21)
    p.add_argument("--nt", type=int, default=200)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_curves)

    p = sub.add_parser("verify", help="run the verification checks")
    _add_scenario_args(p)
    p.add_argument("--checks", default=None,
                   help="comma-separated subset of: "
                        + ",".join(verification.ALL_CHECKS))
    p.add_argument("--nx", type=int, default=None)
    p.add_argument("--tol-weak", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("oracle", help="compare against the particle system")
    _add_scenario_args(p)
    p.add_argument("--t", default="1.0")
    p.add_argument("--t-range", default=None, help="lo:hi:n")
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=0.02)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("examples", help="write built-in scenarios as JSON")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_examples)

    args = ap.parse_args(argv)
    if getattr(args, "t_hi", "x") is None:
        args.t_hi = _load_scenario(args).t_max
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
