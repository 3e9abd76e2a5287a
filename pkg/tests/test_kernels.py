import os
import subprocess
import sys

import numpy as np
import pytest

from strip_psg import kernels
from strip_psg.data_model import builtin_scenario, random_scenario
from strip_psg.potentials import tables


def _sweep_all(tab, xs, t, use_numba):
    return (kernels.sweep_F(tab, xs, t, use_numba=use_numba)
            + kernels.sweep_Gbl(tab, xs, t, use_numba=use_numba)
            + kernels.sweep_Gbr(tab, xs, t, use_numba=use_numba))


@pytest.mark.skipif(not kernels.HAS_NUMBA, reason="numba not installed")
def test_numba_matches_numpy_builtin():
    xs = np.linspace(0.0, 1.0, 501)
    for name in ("s1", "s2", "s3", "s4"):
        s = builtin_scenario(name)
        tab = tables(s)
        for t in (0.1, 0.6, 1.3):
            fast = _sweep_all(tab, xs, t, True)
            slow = _sweep_all(tab, xs, t, False)
            for a, b in zip(fast, slow):
                np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


@pytest.mark.skipif(not kernels.HAS_NUMBA, reason="numba not installed")
def test_numba_matches_numpy_random():
    rng = np.random.default_rng(5)
    xs = np.linspace(0.0, 1.0, 301)
    for _ in range(5):
        s = random_scenario(rng)
        tab = tables(s)
        for t in rng.uniform(0.05, s.t_max, 3):
            fast = _sweep_all(tab, xs, float(t), True)
            slow = _sweep_all(tab, xs, float(t), False)
            for a, b in zip(fast, slow):
                np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


def test_env_flag_disables_numba():
    code = ("import strip_psg.kernels as k; "
            "print(k.USE_NUMBA)")
    env = dict(os.environ, STRIP_PSG_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"


def test_fallback_field_values():
    # the numpy path must drive the full field stack, not just raw sweeps
    code = (
        "from strip_psg.data_model import builtin_scenario\n"
        "from strip_psg.fields import m_at, u_at\n"
        "s = builtin_scenario('s1')\n"
        "print(repr(m_at(s, 0.6, 0.5)), repr(u_at(s, 0.9, 0.5)))\n")
    env_off = dict(os.environ, STRIP_PSG_NO_NUMBA="1")
    off = subprocess.run([sys.executable, "-c", code], env=env_off,
                         capture_output=True, text=True, check=True)
    on = subprocess.run([sys.executable, "-c", code],
                        capture_output=True, text=True, check=True)
    assert off.stdout == on.stdout
