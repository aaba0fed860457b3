"""Benchmark the jitted kernels against the pure-numpy fallbacks.

Run:  python3 benchmarks/bench_kernels.py

The same comparisons drive the ORLICZ_DYN_NO_NUMBA=1 fallback decision:
the jitted path wins on the small arrays the norm bisection hammers
(call overhead) and on the orbit tables (fused loop, no temporaries).
"""

import math
import time

import numpy as np

from orliczdyn import _accel

REPEAT = 5


def best_of(fn, *args, repeat=REPEAT, loops=1):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(loops):
            fn(*args)
        times.append((time.perf_counter() - t0) / loops)
    return min(times)


def row(name, t_numba, t_numpy):
    ratio = t_numpy / t_numba if t_numba > 0 else float("inf")
    print(f"{name:<38} numba {t_numba * 1e3:9.3f} ms   numpy {t_numpy * 1e3:9.3f} ms   x{ratio:.1f}")


def main():
    if not _accel.HAS_NUMBA:
        print("numba unavailable (or ORLICZ_DYN_NO_NUMBA set); nothing to compare")
        return
    rng = np.random.default_rng(0)
    grid_t = np.linspace(0.0, 50.0, 500)
    grid_y = np.expm1(grid_t)

    # modular sums: one large array, and the many-small-arrays pattern of
    # the Luxemburg-norm bisection
    big = rng.uniform(0.0, 10.0, size=1_000_000)
    small = rng.uniform(0.0, 10.0, size=64)
    for code, p, label in [
        (_accel.FAMILY_POWER, 2.0, "modular power(2), 1e6 values"),
        (_accel.FAMILY_POWERLOG, 2.0, "modular powerlog(2), 1e6 values"),
        (_accel.FAMILY_CUSTOM, 0.0, "modular custom grid, 1e6 values"),
    ]:
        args = (big, 1.7, 1.0, code, p, grid_t, grid_y)
        _accel.modular_sum_numba(*args)
        row(
            label,
            best_of(_accel.modular_sum_numba, *args),
            best_of(_accel.modular_sum_numpy, *args),
        )

    args = (small, 1.7, 1.0, _accel.FAMILY_POWER, 2.0, grid_t, grid_y)
    _accel.modular_sum_numba(*args)
    row(
        "modular power(2), 5000 x 64 values",
        best_of(lambda: [_accel.modular_sum_numba(*args) for _ in range(5000)]),
        best_of(lambda: [_accel.modular_sum_numpy(*args) for _ in range(5000)]),
    )

    # orbit log-weight tables at disjoint-chaos depth
    units = rng.integers(-3, 4, size=(343, 3)).astype(np.int64)
    pows = np.stack(
        [np.arange(1, 6401), np.zeros(6400, dtype=np.int64), 2 * np.arange(1, 6401)],
        axis=1,
    ).astype(np.int64)
    args = (units, pows, 1.0, True, 2, math.log(2.0), -1.0, 1.0)
    _accel.clampexp_orbit_logs_numba(*args)
    row(
        "orbit logs 343 x 6400, heisenberg",
        best_of(_accel.clampexp_orbit_logs_numba, *args),
        best_of(_accel.clampexp_orbit_logs_numpy, *args),
    )


if __name__ == "__main__":
    main()
