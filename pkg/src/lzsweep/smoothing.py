"""Remove samples around curve defects and refit with a degree-M spline.

A C1 curve with curvature jumps (or a spherical curve with cusps) is
sampled on a uniform grid, the samples within a few steps of each defect
are dropped, and each coordinate is interpolated through the survivors by a
B-spline of degree ``M`` (so C^(M-1) everywhere).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import interpolate

from .errors import ContractError, DomainError, InputError
from .geometry import SampledCurve, arc_length_reparameterize

MAX_REMOVED_FRACTION = 0.5


class OverSmoothingError(InputError):
    """Removal windows cover too much of the curve."""


@dataclass(frozen=True)
class SmoothingConfig:
    """Smoothing parameters.

    Parameters
    ----------
    step : float
        Grid spacing along the curve parameter.
    order : int
        Spline degree ``M`` (>= 2).
    removals : sequence of (loc, n_before, n_after)
        Defect positions with the number of grid points dropped on each side;
        the grid point nearest the defect is dropped as well.
    """

    step: float
    order: int = 3
    removals: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)):
            raise InputError("smoothing step must be positive")
        if self.order < 2:
            raise InputError("smoothing order must be >= 2")
        rem = []
        for item in self.removals:
            if len(item) != 3:
                raise InputError("each removal is (loc, n_before, n_after)")
            loc, nb, na = float(item[0]), int(item[1]), int(item[2])
            if nb < 0 or na < 0 or nb + na < 1:
                raise InputError("removal counts must be >= 0 and remove at least one point per side")
            rem.append((loc, nb, na))
        object.__setattr__(self, "removals", tuple(rem))

    @classmethod
    def symmetric(cls, step, order, locations, n_remove):
        """``n_remove`` points per defect, split evenly around it."""
        half = (int(n_remove) - 1) // 2
        extra = int(n_remove) - 1 - 2 * half
        return cls(step, order, tuple((loc, half, half + extra) for loc in locations))


def removal_mask(s, cfg: SmoothingConfig) -> np.ndarray:
    """True for grid samples that survive the removal windows."""
    s = np.asarray(s, dtype=float)
    keep = np.ones(len(s), dtype=bool)
    for loc, nb, na in cfg.removals:
        if not (s[0] <= loc <= s[-1]):
            raise DomainError(f"defect location {loc} outside [{s[0]}, {s[-1]}]")
        centre = int(np.argmin(np.abs(s - loc)))
        keep[max(centre - nb, 0):centre + na + 1] = False
    if (~keep).sum() > MAX_REMOVED_FRACTION * len(s):
        raise OverSmoothingError("removal windows cover more than half of the curve")
    return keep


def _fit(s, values, cfg: SmoothingConfig):
    keep = removal_mask(s, cfg)
    if keep.sum() <= cfg.order:
        raise OverSmoothingError("not enough samples left to fit")
    return interpolate.make_interp_spline(s[keep], values[keep], k=cfg.order), keep


def smooth_curve(curve: SampledCurve, cfg: SmoothingConfig) -> SampledCurve:
    """Smooth a plane or space curve through the removal-and-refit procedure.

    The fit uses a grid of spacing close to ``cfg.step``; the result is
    reparameterized to unit speed on the input curve's own sample count, so
    the output keeps the original resolution.
    """
    t0, t1 = curve.t[0], curve.t[-1]
    n = max(int(round((t1 - t0) / cfg.step)), cfg.order + 2)
    s = np.linspace(t0, t1, n + 1)
    pts = curve.evaluate(s)
    if not cfg.removals:
        spline = interpolate.make_interp_spline(s, pts, k=cfg.order)
        keep = np.ones(len(s), dtype=bool)
    else:
        spline, keep = _fit(s, pts, cfg)

    def ev(sq, nu=0):
        return spline(sq, nu)

    meta = dict(curve.meta)
    meta.update({"smoothing_step": float(s[1] - s[0]), "smoothing_order": cfg.order,
                 "removed": int((~keep).sum())})
    meta.pop("chain", None)
    fitted = SampledCurve(s, spline(s), is_unit_speed=False, evaluator=ev, meta=meta)
    return arc_length_reparameterize(fitted, n=curve.n)


class SphericalSpline:
    """Disk spline ``(x(s), y(s))`` lifted to the upper unit hemisphere."""

    def __init__(self, spline):
        self.spline = spline

    @property
    def knots(self) -> np.ndarray:
        return np.unique(self.spline.t)

    def __call__(self, s, nu: int = 0) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        p = self.spline(s)
        rr = np.sum(p * p, axis=-1)
        if np.any(rr >= 1.0):
            raise DomainError("smoothed binormal curve leaves the unit disk")
        z = np.sqrt(1.0 - rr)
        if nu == 0:
            return np.concatenate([p, z[..., None]], axis=-1)
        d1 = self.spline(s, 1)
        pd = np.sum(p * d1, axis=-1)
        z1 = -pd / z
        if nu == 1:
            return np.concatenate([d1, z1[..., None]], axis=-1)
        if nu == 2:
            d2 = self.spline(s, 2)
            z2 = -(np.sum(d1 * d1, axis=-1) + np.sum(p * d2, axis=-1) + z1 * z1) / z
            return np.concatenate([d2, z2[..., None]], axis=-1)
        raise ValueError("only derivatives up to order 2 are available")


def lift_to_sphere(xy) -> np.ndarray:
    """Points of the unit disk lifted to the upper hemisphere."""
    xy = np.asarray(xy, dtype=float)
    rr = np.sum(xy * xy, axis=-1)
    if np.any(rr >= 1.0):
        raise DomainError("point outside the open unit disk")
    return np.concatenate([xy, np.sqrt(1.0 - rr)[..., None]], axis=-1)


def smooth_spherical(curve: SampledCurve, cfg: SmoothingConfig) -> SampledCurve:
    """Smooth a curve on the upper unit hemisphere via its disk projection.

    Only ``x(s)`` and ``y(s)`` are refit; ``z`` is recomputed so every output
    sample lies on the sphere.  The output keeps the input parameter values.

    Raises
    ------
    ContractError
        Input not in 3D or not on the upper hemisphere.
    DomainError
        The fitted projection leaves the unit disk.
    """
    if curve.dim != 3:
        raise ContractError("spherical smoothing needs a 3-D curve")
    pts = curve.points
    if np.max(np.abs(np.linalg.norm(pts, axis=1) - 1.0)) > 1e-9 or np.any(pts[:, 2] <= 0):
        raise ContractError("input must lie on the open upper unit hemisphere")
    s = curve.t
    xy = pts[:, :2]
    if cfg.removals:
        spline, keep = _fit(s, xy, cfg)
    else:
        spline = interpolate.make_interp_spline(s, xy, k=cfg.order)
        keep = np.ones(len(s), dtype=bool)
    lifted = SphericalSpline(spline)
    meta = dict(curve.meta)
    meta.update({"smoothing_order": cfg.order, "removed": int((~keep).sum())})
    return SampledCurve(s, lifted(s), is_unit_speed=False, evaluator=lifted, meta=meta)
