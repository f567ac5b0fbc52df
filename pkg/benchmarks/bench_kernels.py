"""Compare the numba and numpy paths of each hot kernel.

    python benchmarks/bench_kernels.py [--repeat 5] [--end-to-end]

Both implementations are called directly (``*_numba`` / ``*_numpy``), after a
warm-up call so compile time is excluded. ``--end-to-end`` also times a full
``mfdf simulate`` run in two subprocesses, one with MFDF_DISABLE_NUMBA=1.
"""
import argparse
import math
import os
import subprocess
import sys
import tempfile
import time

import numpy as np

from mfdf import kernels
from mfdf.config import SimConfig, config_to_text
from mfdf.experiments import _windows


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    xi = 2 * math.pi * np.fft.rfftfreq(1024, d=64 * math.pi / 1024) * 1.0
    xi_big = rng.uniform(-500, 500, 200_000)
    vec = lambda n: rng.normal(size=n) + 1j * rng.normal(size=n)  # noqa: E731
    stage = [vec(513) for _ in range(4)]
    final = [vec(513) for _ in range(9)]
    u = rng.normal(size=2048)
    win = _windows(64.0, 0.1)
    xs = np.linspace(63.9, 64.2, 16)
    return [
        ("omega, 513 modes", "omega_all", (xi, kernels.FDF, 1.0)),
        ("omega, 2e5 points", "omega_all", (xi_big, kernels.FDF, 1.0)),
        ("etd stage, 513 modes", "etd_stage", tuple(stage)),
        ("etd final, 513 modes", "etd_final", tuple(final)),
        ("u^4 on 2048 points", "int_power", (u, 4)),
        ("probe quadrature, 16 x 64^2", "probe_integral", (xs, win, 64, 0.5, kernels.FDF, 4.0)),
    ]


def end_to_end(repeat):
    cfg = SimConfig(equation="mfdf", delta=1.0, t_end=1.0, init="gaussian",
                    init_params={"amplitude": 0.1, "sigma": 2.0})
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "run.cfg")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(config_to_text(cfg))
        for label, flag in (("numba", "0"), ("numpy", "1")):
            env = dict(os.environ, MFDF_DISABLE_NUMBA=flag)
            cmd = [sys.executable, "-m", "mfdf", "simulate", "--config", path]
            t = best_of(lambda: subprocess.run(cmd, env=env, check=True, capture_output=True), repeat)
            print(f"  simulate N=1024, 322 steps ({label}): {t:8.3f} s (includes interpreter start-up)")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--end-to-end", action="store_true")
    args = p.parse_args(argv)

    print(f"{'kernel':32s} {'numba [ms]':>12s} {'numpy [ms]':>12s} {'speed-up':>9s}")
    for label, name, call_args in cases():
        fast = getattr(kernels, f"{name}_numba")
        slow = getattr(kernels, f"{name}_numpy")
        tn = best_of(lambda: fast(*call_args), args.repeat)
        tp = best_of(lambda: slow(*call_args), args.repeat)
        print(f"{label:32s} {tn * 1e3:12.3f} {tp * 1e3:12.3f} {tp / tn:8.1f}x")
    if args.end_to_end:
        end_to_end(max(1, args.repeat // 2))


if __name__ == "__main__":
    main()
