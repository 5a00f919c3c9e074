"""Two-level propagation, Magnus error terms, noise averages and scaling fits.

The Hamiltonian is ``H = (Omega/2) sz + (Delta/2) sx + delta sx`` with
``Omega`` linear between waveform samples.  Propagation uses a 4th-order
Magnus integrator with exact SU(2) exponentials (see ``_pykernels``).

Unitaries are carried as SU(2) pairs ``(alpha, beta)`` with
``U = [[alpha, -conj(beta)], [beta, conj(alpha)]]``.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import InputError, SolverError
from .waveform import Waveform

STEP_PHASE = 0.02  # max |H| * step per Magnus sub-step
MIN_STEPS = 2000  # sub-steps per waveform duration, at least


def _su2(alpha, beta) -> np.ndarray:
    return np.array([[alpha, -np.conj(beta)], [beta, np.conj(alpha)]], dtype=complex)


def default_max_step(w: Waveform, delta_noise: float = 0.0) -> float:
    """Sub-step length keeping ``|H| h <= STEP_PHASE`` and at least ``MIN_STEPS`` steps."""
    hx = abs(0.5 * w.delta) + abs(delta_noise)
    top = math.hypot(hx, 0.5 * float(np.max(np.abs(w.omega))))
    limit = w.duration / MIN_STEPS
    if top > 0:
        limit = min(limit, STEP_PHASE / top)
    return limit


@dataclass(frozen=True)
class NoiseModel:
    """Quasistatic Gaussian noise ``delta ~ N(0, sigma_delta^2)``.

    Draw ``i`` comes from a Philox generator keyed by ``(seed, i)``, so the
    samples do not depend on how the work is split across threads.
    """

    sigma_delta: float
    n_samples: int = 100
    seed: int = 0

    def __post_init__(self):
        if not (self.sigma_delta >= 0 and math.isfinite(self.sigma_delta)):
            raise InputError("sigma_delta must be finite and >= 0")
        if self.n_samples < 1:
            raise InputError("n_samples must be >= 1")

    def draws(self) -> np.ndarray:
        out = np.empty(self.n_samples)
        for i in range(self.n_samples):
            rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([self.seed, i])))
            out[i] = rng.standard_normal()
        return self.sigma_delta * out


@dataclass
class EvolutionResult:
    """Final propagator of one noisy run, compared with the noiseless one.

    ``a1_vector`` / ``a2_vector`` are the Pauli components of the first two
    Magnus terms at the final time (noise-free frame).
    """

    unitary: np.ndarray
    ideal: np.ndarray
    p_lz: float
    fidelity: float
    infidelity: float
    a1_vector: np.ndarray
    a2_vector: np.ndarray
    delta_noise: float = 0.0
    max_step: float = 0.0
    backend: str = field(default=_backend.NAME)

    @property
    def gate_angle(self) -> float:
        return gate_angle(self.unitary)


def _compare(a0, b0, a, b):
    """Phase-insensitive fidelity and infidelity of ``U`` against ``U0``."""
    va = np.conj(a0) * a + np.conj(b0) * b  # (U0^dag U)[0, 0]
    vb = a0 * b - b0 * a  # (U0^dag U)[1, 0]
    re = np.abs(va.real)
    fid = np.minimum(re, 1.0)
    # 1 - |Re va| without cancellation: (Im va^2 + |vb|^2) / (1 + |Re va|)
    infid = (va.imag**2 + np.abs(vb) ** 2) / (1.0 + re)
    return fid, infid


def evolve(w: Waveform, delta_noise: float = 0.0, max_step: float | None = None,
           backend: str | None = None) -> EvolutionResult:
    """Propagate ``w`` with quasistatic noise ``delta_noise``.

    Returns the final unitary, ``p_lz = |<1|U(T)|0>|^2``, the fidelity
    ``|Tr(U0^dag U)|/2`` against the noiseless run and the Magnus vectors.
    """
    if not math.isfinite(delta_noise):
        raise InputError("delta_noise must be finite")
    k = _backend.get(backend)
    h = default_max_step(w, delta_noise) if max_step is None else float(max_step)
    if not h > 0:
        raise SolverError("max_step must be positive")
    t, om = np.ascontiguousarray(w.t), np.ascontiguousarray(w.omega)
    hx0 = 0.5 * w.delta
    r, q, a0s, b0s = k.error_curve(t, om, hx0, h)
    a0, b0 = complex(a0s[-1]), complex(b0s[-1])
    if delta_noise == 0.0:
        a, b = a0, b0
    else:
        a, b = k.propagate(t, om, hx0 + delta_noise, h)
    fid, infid = _compare(a0, b0, a, b)
    return EvolutionResult(
        unitary=_su2(a, b), ideal=_su2(a0, b0), p_lz=float(abs(b) ** 2),
        fidelity=float(fid), infidelity=float(infid),
        a1_vector=r[-1].copy(), a2_vector=-q[-1].copy(),
        delta_noise=float(delta_noise), max_step=h,
        backend="cython" if k is _backend.compiled_kernels else "numpy",
    )


@dataclass
class MagnusTerms:
    """Sampled first and second Magnus vectors and the noiseless propagator.

    ``a1[i]`` is the error curve ``r(t_i)``; ``a2[i] = int_0^t r' x r dt``.
    """

    t: np.ndarray
    a1: np.ndarray
    a2: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    def tangent(self) -> np.ndarray:
        """Exact ``r'(t_i)`` from the propagator samples (unit norm)."""
        a, b = self.alpha, self.beta
        s = a * a - b * b
        return np.stack([s.real, s.imag, 2.0 * (np.conj(a) * b).real], axis=-1)


def magnus_terms(w: Waveform, max_step: float | None = None, backend: str | None = None) -> MagnusTerms:
    """First two Magnus vectors along the noiseless evolution of ``w``.

    The error curve starts at the origin with tangent +x, normal +y.
    """
    k = _backend.get(backend)
    h = default_max_step(w) if max_step is None else float(max_step)
    r, q, a, b = k.error_curve(np.ascontiguousarray(w.t), np.ascontiguousarray(w.omega), 0.5 * w.delta, h)
    return MagnusTerms(w.t.copy(), r, -q, a, b)


def gate_angle(u) -> float:
    """Angle ``phi`` of a z-rotation ``U ~ exp(i phi sz / 2)``, wrapped to (-pi, pi]."""
    u = np.asarray(u)
    phi = 2.0 * float(np.angle(u[0, 0]))
    return float(math.pi - (math.pi - phi) % (2 * math.pi))


def angle_distance(a: float, b: float) -> float:
    """Distance between two angles on the circle."""
    d = (a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


# ---------------------------------------------------------------------------
# batched metrics

METRICS = ("p_lz", "infidelity", "auto")


def _resolve_metric(w: Waveform, metric: str) -> str:
    if metric not in METRICS:
        raise InputError(f"metric must be one of {METRICS}")
    if metric == "auto":
        return "p_lz" if w.delta == 0 else "infidelity"
    return metric


def metric_values(w: Waveform, deltas, metric: str = "p_lz", max_step: float | None = None,
                  threads: int | None = None, backend: str | None = None) -> np.ndarray:
    """``p_lz`` or infidelity for each noise value in ``deltas``."""
    metric = _resolve_metric(w, metric)
    deltas = np.ascontiguousarray(np.asarray(deltas, dtype=float).ravel())
    if not np.all(np.isfinite(deltas)):
        raise InputError("noise values must be finite")
    k = _backend.get(backend)
    top = float(np.max(np.abs(deltas))) if deltas.size else 0.0
    h = default_max_step(w, top) if max_step is None else float(max_step)
    t, om = np.ascontiguousarray(w.t), np.ascontiguousarray(w.omega)
    hx0 = 0.5 * w.delta
    a0, b0 = k.propagate(t, om, hx0, h)

    def run(chunk):
        return k.propagate_batch(t, om, np.ascontiguousarray(hx0 + chunk), h)

    threads = _threads(threads)
    chunks = [c for c in np.array_split(deltas, max(1, min(threads, deltas.size))) if c.size]
    if len(chunks) > 1:
        with ThreadPoolExecutor(len(chunks)) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    a = np.concatenate([p[0] for p in parts]) if parts else np.zeros(0, complex)
    b = np.concatenate([p[1] for p in parts]) if parts else np.zeros(0, complex)
    if metric == "p_lz":
        return np.abs(b) ** 2
    return _compare(a0, b0, a, b)[1]


def _threads(threads):
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise InputError("threads must be >= 1")
    return int(threads)


def noise_average(w: Waveform, nm: NoiseModel, metric: str = "p_lz", max_step: float | None = None,
                  threads: int | None = None) -> tuple[float, float]:
    """Mean and standard error of ``metric`` over the draws of ``nm``."""
    vals = metric_values(w, nm.draws(), metric, max_step=max_step, threads=threads)
    mean = float(np.mean(vals))
    err = float(np.std(vals, ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
    return mean, err


# ---------------------------------------------------------------------------
# robustness classification


@dataclass
class Robustness:
    """Log-log slope of a noise metric and the resulting order (None if ambiguous)."""

    order: int | None
    slope: float
    deltas: np.ndarray
    values: np.ndarray
    metric: str

    @property
    def classified(self) -> bool:
        return self.order is not None


def classify_slope(slope: float, tol: float = 0.5) -> int | None:
    """Order ``k`` with ``|slope - (2k + 2)| <= tol``; orders 0 to 2."""
    k = round((slope - 2.0) / 2.0)
    if 0 <= k <= 2 and abs(slope - (2 * k + 2)) <= tol:
        return int(k)
    return None


def robustness_order(w: Waveform, metric: str = "infidelity", delta_range=(1e-4, 1e-2), n_points: int = 9,
                     max_step: float | None = None) -> Robustness:
    """Classify the leading noise order of ``w`` from a log-log slope.

    The default metric is the phase-insensitive infidelity, which also sees
    the z-directed second-order term of plane curves; ``p_lz`` alone does
    not.  ``delta_range`` is in units of ``1/T``.  Values that underflow to zero
    are dropped; fewer than three usable points leave the result unclassified.
    """
    lo, hi = delta_range
    if not (0 < lo < hi):
        raise InputError("delta_range must satisfy 0 < lo < hi")
    metric = _resolve_metric(w, metric)
    deltas = np.geomspace(lo, hi, n_points) / w.duration
    vals = metric_values(w, deltas, metric, max_step=max_step, threads=1)
    ok = vals > 0
    if ok.sum() < 3:
        return Robustness(None, float("nan"), deltas, vals, metric)
    slope = float(np.polyfit(np.log(deltas[ok]), np.log(vals[ok]), 1)[0])
    return Robustness(classify_slope(slope), slope, deltas, vals, metric)


# ---------------------------------------------------------------------------
# scaling analysis


@dataclass
class ScalingFit:
    """Quartic ``log(1 - p_lz) ~ c1 x + c2 x^2 + c3 x^3 + c4 x^4`` with ``x = (2 delta)^2 / v``."""

    coefficients: np.ndarray
    x: np.ndarray
    y: np.ndarray

    @property
    def c1(self) -> float:
        return float(self.coefficients[0])

    @property
    def c2(self) -> float:
        return float(self.coefficients[1])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return sum(c * x ** (k + 1) for k, c in enumerate(self.coefficients))


def quartic_fit(x, y) -> ScalingFit:
    """Least-squares quartic through the origin."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise InputError("x and y must be 1-D arrays of equal length")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise InputError("scaling data must be finite")
    a = np.column_stack([x, x**2, x**3, x**4])
    coef, _, rank, _ = np.linalg.lstsq(a, y, rcond=None)
    if rank < 4:
        raise SolverError(f"scaling fit is rank deficient (rank {rank})")
    return ScalingFit(coef, x, y)


def scaling_data(w: Waveform, v_list, delta: float = 1.0, reference_v: float = 1.0,
                 max_step: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """``x = (2 delta)^2 / v`` and ``log(1 - p_lz)`` for the family of ``w``.

    ``w`` is the member at sweep velocity ``reference_v``; the member at ``v``
    is the same shape on a time axis shrunk by ``sqrt(v / reference_v)``.
    """
    v_list = np.asarray(v_list, dtype=float)
    if np.any(v_list <= 0):
        raise InputError("sweep velocities must be positive")
    ys = []
    for v in v_list:
        wv = w.scaled(math.sqrt(reference_v / v))
        p = float(metric_values(wv, [delta], "p_lz", max_step=max_step, threads=1)[0])
        if p >= 1.0:
            raise SolverError(f"p_lz = 1 at v={v}; log(1 - p_lz) undefined")
        ys.append(math.log1p(-p))
    return (2 * delta) ** 2 / v_list, np.array(ys)


def scaling_fit(w: Waveform, v_list, delta: float = 1.0, reference_v: float = 1.0,
                max_step: float | None = None) -> ScalingFit:
    """Quartic scaling fit of ``log(1 - p_lz)`` across the family of ``w``."""
    x, y = scaling_data(w, v_list, delta, reference_v, max_step)
    return quartic_fit(x, y)
