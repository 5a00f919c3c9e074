"""Pulse extraction from curves and a catalog of reference pulses.

The error curve of a pulse is traversed at unit speed with time as arc
length; its signed curvature is ``-Omega`` and its torsion is ``-Delta``.
"""
from __future__ import annotations

import math

import numpy as np

from . import primitives
from .errors import ContractError, InputError
from .geometry import UNIT_SPEED_TOL, SampledCurve, frenet_data, speed_residual
from .waveform import Waveform, read_waveform_csv, write_waveform_csv

__all__ = [
    "Waveform", "read_waveform_csv", "write_waveform_csv", "NotConstantTorsionError",
    "TorsionSignError", "pulse_from_curve", "curve_from_pulse", "linear_pulse", "constant_pulse",
    "figure8_pulse", "two_spiral_pulse", "semicircle_pulse", "phase_gate_pulse", "CATALOG",
]

TORSION_TOL = 1e-2
PLANAR_TORSION = 1e-9  # |tau| / max|kappa| below this counts as a plane curve


class NotConstantTorsionError(ContractError):
    """Torsion varies by more than the allowed relative spread."""


class TorsionSignError(ContractError):
    """Positive torsion would need a negative gap; mirror the curve instead."""


def pulse_from_curve(curve: SampledCurve, torsion_tol: float = TORSION_TOL) -> Waveform:
    """``Omega(t) = -kappa(t)`` on the curve's own grid; ``Delta = -tau`` in 3D.

    Raises
    ------
    NotConstantTorsionError
        Relative torsion spread (away from inflections) above ``torsion_tol``.
    TorsionSignError
        Torsion is positive.
    """
    _, inv = frenet_data(curve)
    t = curve.t - curve.t[0]
    omega = -inv.curvature
    meta = {k: v for k, v in curve.meta.items() if isinstance(v, (str, int, float, bool))}
    meta["source"] = "curve"
    # finite-difference curvature leaves a small first-order residue; fit slopes above it
    meta.setdefault("verify_window", "0.01,0.3")
    if curve.dim == 2:
        return Waveform(t, omega, 0.0, meta)
    tau, spread = inv.torsion_spread()
    if abs(tau) <= PLANAR_TORSION * float(np.max(np.abs(inv.curvature))):
        return Waveform(t, omega, 0.0, meta)
    if spread > torsion_tol:
        raise NotConstantTorsionError(f"torsion varies by {spread:.3g} (relative), limit {torsion_tol}")
    if tau > 0:
        raise TorsionSignError(f"torsion {tau:.6g} > 0 gives a negative gap; mirror the curve (z -> -z)")
    meta["torsion_spread"] = spread
    return Waveform(t, omega, -tau, meta)


def curve_from_pulse(w: Waveform, max_step: float | None = None) -> SampledCurve:
    """Error curve of ``w`` (first Magnus vector), 2D when ``Delta = 0``.

    Flagged unit speed when the samples pass the speed check.
    """
    from .simulator import magnus_terms

    m = magnus_terms(w, max_step=max_step)
    pts = m.a1[:, :2] if w.delta == 0 else m.a1
    unit = w.n >= 4 and speed_residual(w.t, pts) <= UNIT_SPEED_TOL
    return SampledCurve(w.t.copy(), pts, is_unit_speed=unit, meta={"source": "pulse"})


def linear_pulse(v: float, T: float, centered: bool = True, n: int = 1001) -> Waveform:
    """``Omega = v (t - T/2)`` (centered) or ``v t``."""
    if not (v > 0 and T > 0):
        raise InputError("linear pulse needs v > 0 and T > 0")
    t = np.linspace(0.0, T, max(int(n), 2))
    om = v * (t - T / 2) if centered else v * t
    return Waveform(t, om, 0.0, {"builder": "linear", "v": v, "T": T, "centered": centered,
                                 "declared_order": 0})


def constant_pulse(area: float, T: float, n: int = 2) -> Waveform:
    """Constant ``Omega = area / T``; first-order robust when ``area`` is a multiple of 2 pi."""
    if not T > 0:
        raise InputError("constant pulse needs T > 0")
    turns = area / (2 * math.pi)
    order = 1 if area != 0 and abs(turns - round(turns)) < 1e-12 else 0
    t = np.linspace(0.0, T, max(int(n), 2))
    return Waveform(t, np.full_like(t, area / T), 0.0,
                    {"builder": "constant", "area": area, "T": T, "declared_order": order})


def figure8_pulse(v: float = 1.0) -> Waveform:
    """Exact triangle pulse of the zero-area figure-8."""
    return primitives.figure8_chain(v).pulse(meta={"builder": "figure8", "v": v, "declared_order": 2})


def two_spiral_pulse(v: float = 1.0, root: int = 0) -> Waveform:
    r = primitives.closure_roots(root + 1)[root]
    return primitives.two_spiral_chain(v, r).pulse(
        meta={"builder": "two-spiral", "v": v, "root": root, "declared_order": 1})


def semicircle_pulse(v: float = 1.0, smoothing=None) -> Waveform:
    """Semicircle sweep pulse; exact with jumps, or from the smoothed curve.

    ``smoothing`` is a :class:`~lzsweep.smoothing.SmoothingConfig`, ``True``
    for the default (step 0.01/sqrt(v), M=10, 7 points per join) or None.
    """
    if smoothing is None or smoothing is False:
        return primitives.semicircle_chain(v).pulse(
            meta={"builder": "semicircle", "v": v, "declared_order": 2})
    from .smoothing import SmoothingConfig, smooth_curve

    curve = primitives.build_semicircle_sweep(v)
    if smoothing is True:
        smoothing = SmoothingConfig.symmetric(0.01 / math.sqrt(v), 10, curve.meta["joins"], 7)
    w = pulse_from_curve(smooth_curve(curve, smoothing))
    w.meta.update({"builder": "semicircle-smoothed", "v": v, "declared_order": 2})
    return w


def phase_gate_pulse(phi, T: float = 1.0, square: bool | None = None) -> Waveform:
    """z-rotation pulse: the tabulated square sequence when available, else the general design."""
    tabulated = True
    try:
        primitives._gate_key(phi)
    except InputError:
        tabulated = False
    if square is None:
        square = tabulated
    if square:
        return primitives.build_phase_gate_square(phi, T)
    curve = primitives.build_phase_gate_general(float(phi), T)
    return curve.meta["chain"].pulse(meta={"builder": "phase-gate-general", "phi": float(phi), "T": T,
                                           "declared_order": 2})


CATALOG = {
    "linear": linear_pulse,
    "constant": constant_pulse,
    "figure8": figure8_pulse,
    "two-spiral": two_spiral_pulse,
    "semicircle": semicircle_pulse,
    "phase-gate": phase_gate_pulse,
}
