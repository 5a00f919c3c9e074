"""Time the compiled kernels against the numpy fallback.

Run ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Each kernel is
timed on both backends with identical inputs; the table reports the best of
``N`` runs and the largest difference between the two outputs.
"""
from __future__ import annotations

import argparse
import math
import timeit

import numpy as np

from lzsweep import _backend, primitives, pulses
from lzsweep.simulator import default_max_step


def cases():
    w = pulses.figure8_pulse(1.0)
    t, om = np.ascontiguousarray(w.t), np.ascontiguousarray(w.omega)
    h = default_max_step(w, 0.1)
    deltas = np.ascontiguousarray(np.geomspace(1e-4, 1e-1, 64))
    rng = np.random.default_rng(0)
    walk = np.ascontiguousarray(np.cumsum(rng.standard_normal((2000, 2)), axis=0))
    fig8 = np.ascontiguousarray(primitives.build_figure8(1.0, density=400).points)
    return {
        "propagate": (lambda k: k.propagate(t, om, 0.0, h), lambda out: np.array(out)),
        "propagate_batch[64]": (lambda k: k.propagate_batch(t, om, deltas, h), lambda out: np.concatenate(out)),
        "error_curve": (lambda k: k.error_curve(t, om, 0.0, h), lambda out: np.concatenate([o.ravel() for o in out])),
        "segment_crossings[walk]": (lambda k: k.segment_crossings(walk, False, 1e-12), _crossings),
        "segment_crossings[figure8]": (lambda k: k.segment_crossings(fig8, True, 1e-12), _crossings),
    }


def _crossings(out):
    pairs, flags = out
    return np.concatenate([np.asarray(pairs, dtype=float).ravel(), np.asarray(flags, dtype=float)])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    py = _backend.python_kernels
    cy = _backend.compiled_kernels
    if cy is None:
        print("compiled kernels not built; timing the numpy fallback only")
    print(f"{'kernel':<28}{'numpy [ms]':>12}{'cython [ms]':>13}{'speedup':>10}{'max |diff|':>13}")
    for name, (run, flat) in cases().items():
        t_py = min(timeit.repeat(lambda: run(py), number=1, repeat=args.repeat)) * 1e3
        if cy is None:
            print(f"{name:<28}{t_py:>12.2f}{'-':>13}{'-':>10}{'-':>13}")
            continue
        t_cy = min(timeit.repeat(lambda: run(cy), number=1, repeat=args.repeat)) * 1e3
        a, b = flat(run(py)), flat(run(cy))
        if a.shape != b.shape:
            diff = math.inf
        else:
            diff = float(np.max(np.abs(a - b))) if a.size else 0.0
        print(f"{name:<28}{t_py:>12.2f}{t_cy:>13.2f}{t_py / t_cy:>9.1f}x{diff:>13.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
