"""Nelder-Mead simplex search for small, noisy, derivative-free problems."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InputError


@dataclass
class TraceRow:
    iteration: int
    x: np.ndarray
    f: float


@dataclass
class NelderMeadResult:
    x: np.ndarray
    f: float
    iterations: int
    evaluations: int
    converged: bool
    reason: str
    trace: list = field(default_factory=list)


def initial_simplex(x0, rel: float = 0.05, abs_step: float = 2.5e-4) -> np.ndarray:
    """``x0`` plus one vertex per axis, offset by ``rel * x0[i]`` (or ``abs_step`` at zero)."""
    x0 = np.asarray(x0, dtype=float)
    sim = np.tile(x0, (len(x0) + 1, 1))
    for i in range(len(x0)):
        sim[i + 1, i] = x0[i] * (1 + rel) if x0[i] != 0 else abs_step
    return sim


def nelder_mead(f: Callable[[np.ndarray], float], x0, *, simplex=None, max_iter: int = 500,
                f_target: float | None = None, xatol: float = 1e-10, fatol: float = 1e-14,
                alpha: float = 1.0, gamma: float = 2.0, rho: float = 0.5, sigma: float = 0.5,
                workers: int = 1) -> NelderMeadResult:
    """Minimize ``f`` from ``x0`` with the Nelder-Mead simplex method.

    Parameters
    ----------
    f_target : float, optional
        Stop as soon as the best value is at or below this.
    workers : int
        Threads used for the independent evaluations (initial simplex and
        shrink steps).  The search path does not depend on this.

    Returns
    -------
    NelderMeadResult
        Best point, value, counts and one trace row per iteration.
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.ndim != 1 or x0.size == 0:
        raise InputError("x0 must be a non-empty 1-D array")
    sim = initial_simplex(x0) if simplex is None else np.array(simplex, dtype=float)
    if sim.shape != (x0.size + 1, x0.size):
        raise InputError("simplex must have shape (n + 1, n)")
    nev = 0
    pool = ThreadPoolExecutor(workers) if workers > 1 else None

    def evals(points):
        nonlocal nev
        nev += len(points)
        if pool is None:
            return [float(f(p)) for p in points]
        return [float(v) for v in pool.map(f, list(points))]

    def one(p):
        return evals([p])[0]

    try:
        fs = np.array(evals(sim))
        trace = []
        reason = "max_iter"
        converged = False
        it = 0
        for it in range(1, max_iter + 1):
            order = np.argsort(fs, kind="stable")
            sim, fs = sim[order], fs[order]
            trace.append(TraceRow(it - 1, sim[0].copy(), float(fs[0])))
            if f_target is not None and fs[0] <= f_target:
                reason, converged = "target", True
                break
            if np.max(np.abs(sim[1:] - sim[0])) <= xatol and np.max(np.abs(fs[1:] - fs[0])) <= fatol:
                reason, converged = "tolerance", True
                break
            centroid = sim[:-1].mean(axis=0)
            xr = centroid + alpha * (centroid - sim[-1])
            fr = one(xr)
            if fs[0] <= fr < fs[-2]:
                sim[-1], fs[-1] = xr, fr
                continue
            if fr < fs[0]:
                xe = centroid + gamma * (xr - centroid)
                fe = one(xe)
                if fe < fr:
                    sim[-1], fs[-1] = xe, fe
                else:
                    sim[-1], fs[-1] = xr, fr
                continue
            if fr < fs[-1]:
                xc = centroid + rho * (xr - centroid)
                fc = one(xc)
                if fc <= fr:
                    sim[-1], fs[-1] = xc, fc
                    continue
            else:
                xc = centroid + rho * (sim[-1] - centroid)
                fc = one(xc)
                if fc < fs[-1]:
                    sim[-1], fs[-1] = xc, fc
                    continue
            sim[1:] = sim[0] + sigma * (sim[1:] - sim[0])
            fs[1:] = evals(sim[1:])
        else:
            order = np.argsort(fs, kind="stable")
            sim, fs = sim[order], fs[order]
            trace.append(TraceRow(max_iter, sim[0].copy(), float(fs[0])))
            if f_target is not None and fs[0] <= f_target:
                reason, converged = "target", True
    finally:
        if pool is not None:
            pool.shutdown()
    return NelderMeadResult(sim[0].copy(), float(fs[0]), it, nev, converged, reason, trace)
