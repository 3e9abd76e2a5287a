"""Variational solver for 1D pressureless gas dynamics on the unit strip
with inflowing boundary data on both sides."""

from .data_model import (PiecewiseConstant, Scenario, builtin_scenario,
                         random_scenario)
from .potentials import tables, F_of, Gbl_of, Gbr_of
from .minimizers import (classify, slice_state, minimize_F, minimize_Gbl,
                         minimize_Gbr)
from .fields import (u_at, u_slice, u_side, m_at, m_slice, q_at, q_slice,
                     E_at, H_at, EnergyContext, find_jumps, measure_at, Jump,
                     MeasureSlice)
from .characteristics import trace_curve, triangle_of, shock_locus, Triangle
from .particles import ParticleSystem, compare
from .verification import run_checks, CheckReport, TestFunction

__version__ = "0.1.0"

__all__ = [
    "PiecewiseConstant", "Scenario", "builtin_scenario", "random_scenario",
    "tables", "F_of", "Gbl_of", "Gbr_of",
    "classify", "slice_state", "minimize_F", "minimize_Gbl", "minimize_Gbr",
    "u_at", "u_slice", "u_side", "m_at", "m_slice", "q_at", "q_slice",
    "E_at", "H_at", "EnergyContext", "find_jumps", "measure_at", "Jump",
    "MeasureSlice",
    "trace_curve", "triangle_of", "shock_locus", "Triangle",
    "ParticleSystem", "compare",
    "run_checks", "CheckReport", "TestFunction",
    "__version__",
]
