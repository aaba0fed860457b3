import math
import os
import subprocess
import sys

import numpy as np
import pytest

from orliczdyn import _accel


@pytest.fixture
def rng():
    return np.random.default_rng(77)


GRID_T = np.linspace(0.0, 10.0, 101)
GRID_Y = GRID_T**2


CASES = [
    (_accel.FAMILY_POWER, 1.0),
    (_accel.FAMILY_POWER, 2.0),
    (_accel.FAMILY_POWER, 3.5),
    (_accel.FAMILY_POWERLOG, 2.0),
    (_accel.FAMILY_CUSTOM, 0.0),
]


@pytest.mark.skipif(not _accel.HAS_NUMBA, reason="numba unavailable")
class TestPathsAgree:
    @pytest.mark.parametrize("code,p", CASES)
    def test_phi_values(self, rng, code, p):
        ts = rng.uniform(0.0, 9.5, size=300)
        a = _accel.phi_values_numba(ts, code, p, GRID_T, GRID_Y)
        b = _accel.phi_values_numpy(ts, code, p, GRID_T, GRID_Y)
        np.testing.assert_allclose(a, b, rtol=1e-13)

    @pytest.mark.parametrize("code,p", CASES)
    def test_modular_sum(self, rng, code, p):
        vals = rng.uniform(0.0, 8.0, size=500)
        for k in (0.5, 1.0, 3.7):
            a = _accel.modular_sum_numba(vals, k, 0.5, code, p, GRID_T, GRID_Y)
            b = _accel.modular_sum_numpy(vals, k, 0.5, code, p, GRID_T, GRID_Y)
            assert a == pytest.approx(b, rel=1e-12)

    def test_custom_out_of_grid_is_inf(self):
        vals = np.array([20.0])
        for fn in (_accel.modular_sum_numba, _accel.modular_sum_numpy):
            assert math.isinf(fn(vals, 1.0, 1.0, _accel.FAMILY_CUSTOM, 0.0, GRID_T, GRID_Y))

    def test_orbit_logs_abelian(self, rng):
        units = rng.integers(-5, 6, size=(40, 1)).astype(np.int64)
        pows = np.arange(1, 33, dtype=np.int64).reshape(32, 1)
        args = (units, pows, 0.5, False, 0, math.log(2.0), -1.0, 1.0)
        np.testing.assert_allclose(
            _accel.clampexp_orbit_logs_numba(*args),
            _accel.clampexp_orbit_logs_numpy(*args),
            rtol=1e-14,
        )

    def test_orbit_logs_heisenberg(self, rng):
        units = rng.integers(-4, 5, size=(30, 3)).astype(np.int64)
        pows = np.stack(
            [np.arange(1, 25), np.zeros(24, dtype=np.int64), 2 * np.arange(1, 25)], axis=1
        ).astype(np.int64)
        args = (units, pows, 1.0, True, 2, math.log(2.0), -1.0, 1.0)
        np.testing.assert_allclose(
            _accel.clampexp_orbit_logs_numba(*args),
            _accel.clampexp_orbit_logs_numpy(*args),
            rtol=1e-14,
        )


def test_dispatch_consistency():
    if _accel.HAS_NUMBA:
        assert _accel.ACTIVE == "numba"
        assert _accel.modular_sum is _accel.modular_sum_numba
    else:
        assert _accel.ACTIVE == "numpy"
        assert _accel.modular_sum is _accel.modular_sum_numpy


def test_env_flag_selects_numpy_path():
    env = dict(os.environ, ORLICZ_DYN_NO_NUMBA="1")
    out = subprocess.run(
        [
            sys.executable,
            "-c",
            "from orliczdyn import _accel; print(_accel.ACTIVE, _accel.HAS_NUMBA)",
        ],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.split() == ["numpy", "False"]


def test_numpy_fallback_end_to_end():
    # the whole checker pipeline must work on the fallback path
    code = (
        "import orliczdyn as od\n"
        "z = od.GroupModel.int_line()\n"
        "w = od.ClampExpWeight(base=2.0, coord=0, lo=-1.0, hi=1.0)\n"
        "s = od.Scenario(model=z, phi=od.PowerYoung(2.0), a=z.element([1]),\n"
        "                weights=(w, w), powers=(1, 2),\n"
        "                K=od.CompactSet.box(z, [-3], [3]), epsilon=1e-2, n_max=32)\n"
        "rep = od.check_disjoint_transitive(s)\n"
        "print(rep.verdict, rep.n_star)\n"
    )
    env = dict(os.environ, ORLICZ_DYN_NO_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.split() == ["verified", "14"]
