"""Sampled plane and space curves and their differential invariants.

Conventions
-----------
Curves are sampled on a parameter grid ``t``; for unit-speed curves ``t`` is
arc length, which is also physical time for an error curve.  The initial
frame of an error curve is tangent x, normal y, binormal z, so a plane curve
lives in the xy-plane with binormal +z and its signed curvature is the usual
counterclockwise-positive one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np
from scipy import interpolate, spatial

from . import _backend
from .errors import ContractError, DegenerateError, InputError, ResolutionError
from .io import read_table, write_table

UNIT_SPEED_TOL = 1e-6
CURVATURE_FLOOR = 1e-8  # times 1/T
EXACT_TOL = 1e-12

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


# ---------------------------------------------------------------------------
# finite differences


def is_uniform(t, rtol=1e-9) -> bool:
    h = np.diff(t)
    return bool(np.all(np.abs(h - h.mean()) <= rtol * abs(h.mean())))


def derivative(f, t):
    """First derivative of samples ``f`` (along axis 0) with respect to ``t``.

    Uniform grids get the 4th-order central stencil in the interior and
    4th-order one-sided stencils on the two outermost samples at each end
    (torsion needs three nested derivatives, so lower-order ends pollute it);
    other grids fall back to 2nd-order non-uniform differences.
    """
    f = np.asarray(f, dtype=float)
    t = np.asarray(t, dtype=float)
    n = len(t)
    if n < 5:
        raise ResolutionError(f"need at least 5 samples for derivatives, got {n}")
    if not is_uniform(t):
        return np.gradient(f, t, axis=0, edge_order=2)
    h = (t[-1] - t[0]) / (n - 1)
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h)
    d[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / (12.0 * h)
    d[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / (12.0 * h)
    return d


def speed_residual(t, points) -> float:
    """Largest deviation from unit speed of a polyline.

    Chord lengths are corrected by the turning angle between neighbouring
    chords (chord = arc * sinc(psi/2) on a circle), so finely curved but
    exactly unit-speed samples are not penalised by the chord-arc gap.
    """
    p = np.asarray(points, dtype=float)
    dp = np.diff(p, axis=0)
    dt = np.diff(t)
    chord = np.linalg.norm(dp, axis=1)
    if len(chord) >= 2:
        u = dp / np.where(chord > 0, chord, 1.0)[:, None]
        turn = np.arccos(np.clip(np.einsum("ij,ij->i", u[:-1], u[1:]), -1.0, 1.0))
        k_vertex = turn / (0.5 * (dt[:-1] + dt[1:]))
        k_vertex = np.concatenate((k_vertex[:1], k_vertex, k_vertex[-1:]))
        psi = dt * 0.5 * (k_vertex[:-1] + k_vertex[1:])
        chord = chord / np.sinc(psi / (2.0 * np.pi))
    return float(np.max(np.abs(chord / dt - 1.0)))


# ---------------------------------------------------------------------------
# curve container


@dataclass(eq=False)
class SampledCurve:
    """Polyline samples of a curve in 2D or 3D.

    Parameters
    ----------
    t : array, shape (n,)
        Strictly increasing parameter values (arc length if unit speed).
    points : array, shape (n, dim)
        Sample positions, ``dim`` in {2, 3}.
    is_unit_speed : bool
        Declares ``t`` to be arc length; checked on construction.
    evaluator : callable, optional
        ``evaluator(s, nu)`` returning the ``nu``-th derivative of the exact
        curve at parameters ``s``.  Builders attach one when the curve is
        known analytically; otherwise a quintic spline through the samples
        is used on demand.
    meta : dict
        Free-form provenance (builder, parameters, defect locations, ...).
    """

    t: np.ndarray
    points: np.ndarray
    is_unit_speed: bool = False
    evaluator: Callable | None = field(default=None, repr=False)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        self.points = np.asarray(self.points, dtype=float)
        if self.t.ndim != 1 or self.points.ndim != 2 or len(self.t) != len(self.points):
            raise ContractError("t must be 1-D and points 2-D with matching length")
        if self.points.shape[1] not in (2, 3):
            raise ContractError(f"dimension must be 2 or 3, got {self.points.shape[1]}")
        if len(self.t) < 4:
            raise ResolutionError(f"need at least 4 samples, got {len(self.t)}")
        if not (np.all(np.isfinite(self.t)) and np.all(np.isfinite(self.points))):
            raise ContractError("non-finite sample")
        if np.any(np.diff(self.t) <= 0):
            raise ContractError("parameter values must be strictly increasing")
        if self.is_unit_speed:
            res = speed_residual(self.t, self.points)
            if res > UNIT_SPEED_TOL:
                raise ContractError(f"curve flagged unit speed but speed deviates by {res:.3g}")

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def n(self) -> int:
        return len(self.t)

    @property
    def length(self) -> float:
        """Parameter span ``t[-1] - t[0]`` (the arc length for unit-speed curves)."""
        return float(self.t[-1] - self.t[0])

    def points3(self) -> np.ndarray:
        if self.dim == 3:
            return self.points
        return np.column_stack([self.points, np.zeros(self.n)])

    def evaluate(self, s, nu: int = 0) -> np.ndarray:
        """Evaluate the curve (or a derivative) between samples."""
        if self.evaluator is not None:
            return self.evaluator(np.asarray(s, dtype=float), nu)
        spl = self.__dict__.get("_spline")
        if spl is None:
            spl = interpolate.make_interp_spline(self.t, self.points, k=min(5, self.n - 1))
            self.__dict__["_spline"] = spl
        return spl(np.asarray(s, dtype=float), nu)

    def replace(self, **changes) -> "SampledCurve":
        kw = dict(t=self.t, points=self.points, is_unit_speed=self.is_unit_speed,
                  evaluator=self.evaluator, meta=dict(self.meta))
        kw.update(changes)
        return SampledCurve(**kw)

    def transformed(self, rotation, translation=None) -> "SampledCurve":
        """Apply ``x -> R x + c`` to samples and evaluator."""
        rot = np.asarray(rotation, dtype=float)
        shift = np.zeros(self.dim) if translation is None else np.asarray(translation, dtype=float)
        ev = None
        if self.evaluator is not None:
            base = self.evaluator

            def ev(s, nu=0):
                out = base(s, nu) @ rot.T
                return out + shift if nu == 0 else out

        return self.replace(points=self.points @ rot.T + shift, evaluator=ev)


# ---------------------------------------------------------------------------
# Frenet data


class FrenetFrame(NamedTuple):
    tangent: np.ndarray
    normal: np.ndarray
    binormal: np.ndarray


@dataclass
class FrenetFrames:
    """Per-sample Frenet frames, arrays of shape (n, 3)."""

    tangent: np.ndarray
    normal: np.ndarray
    binormal: np.ndarray

    def __len__(self):
        return len(self.tangent)

    def __getitem__(self, i) -> FrenetFrame:
        return FrenetFrame(self.tangent[i], self.normal[i], self.binormal[i])


@dataclass
class CurveInvariants:
    """Signed curvature and torsion per sample.

    ``torsion_defined`` is False where ``|curvature| <= curvature_floor``;
    torsion there holds the last defined value.
    """

    curvature: np.ndarray
    torsion: np.ndarray
    torsion_defined: np.ndarray
    curvature_floor: float

    def inflection_mask(self, rel: float = 1e-2, pad: int = 2) -> np.ndarray:
        """Samples close to an inflection (``|k| < rel * max|k|``), widened by ``pad``."""
        k = np.abs(self.curvature)
        near = (k < rel * k.max()) | ~self.torsion_defined
        if pad:
            near = np.convolve(near.astype(int), np.ones(2 * pad + 1, dtype=int), mode="same") > 0
        return near

    def torsion_spread(self, rel: float = 1e-2, trim: int = 2) -> tuple[float, float]:
        """(median torsion, std/|median|) away from inflections and the ``trim`` end samples."""
        use = ~self.inflection_mask(rel)
        if trim:
            use[:trim] = False
            use[-trim:] = False
        if not np.any(use):
            raise DegenerateError("no samples with well-defined torsion")
        tau = self.torsion[use]
        med = float(np.median(tau))
        if med == 0.0:
            return 0.0, float(np.std(tau))
        return med, float(np.std(tau) / abs(med))


def _any_perpendicular(v):
    e = np.eye(3)[np.argmin(np.abs(v))]
    p = np.cross(v, e)
    return p / np.linalg.norm(p)


def frenet_data(curve: SampledCurve, initial_binormal=None) -> tuple[FrenetFrames, CurveInvariants]:
    """Frenet frames and signed curvature/torsion of a unit-speed curve.

    The global sign of (normal, binormal) in 3D is fixed at the first sample
    with nonzero curvature: the binormal there points along
    ``initial_binormal`` (default +z), which reproduces the plane-curve
    convention.  Afterwards the normal follows the continuity rule: it flips
    (and the curvature changes sign) where consecutive second derivatives
    have a negative dot product.

    Raises
    ------
    ContractError
        Curve not flagged unit speed.
    ResolutionError
        Fewer than 5 samples.
    """
    if not curve.is_unit_speed:
        raise ContractError("frenet_data requires a unit-speed curve (use arc_length_reparameterize)")
    if curve.n < 5:
        raise ResolutionError(f"need at least 5 samples, got {curve.n}")
    t = curve.t
    floor = CURVATURE_FLOOR / curve.length
    if curve.dim == 2:
        d1 = derivative(curve.points, t)
        speed = np.linalg.norm(d1, axis=1)
        tan2 = d1 / speed[:, None]
        phi = np.unwrap(np.arctan2(tan2[:, 1], tan2[:, 0]))
        kappa = derivative(phi, t)
        tangent = np.column_stack([tan2, np.zeros(curve.n)])
        normal = np.column_stack([-tan2[:, 1], tan2[:, 0], np.zeros(curve.n)])
        binormal = np.cross(tangent, normal)
        torsion = np.zeros(curve.n)
        defined = np.abs(kappa) > floor
        return FrenetFrames(tangent, normal, binormal), CurveInvariants(kappa, torsion, defined, floor)

    r = curve.points
    d1 = derivative(r, t)
    d2 = derivative(d1, t)
    d3 = derivative(d2, t)
    speed = np.linalg.norm(d1, axis=1)
    tangent = d1 / speed[:, None]
    c12 = np.cross(d1, d2)
    kabs = np.linalg.norm(c12, axis=1) / speed**3
    defined = kabs > floor
    perp = d2 - np.einsum("ij,ij->i", d2, tangent)[:, None] * tangent
    pn = np.linalg.norm(perp, axis=1)
    normal_u = np.zeros_like(r)
    ok = pn > 0
    normal_u[ok] = perp[ok] / pn[ok, None]

    ref = np.array([0.0, 0.0, 1.0]) if initial_binormal is None else np.asarray(initial_binormal, float)
    sign = np.ones(curve.n)
    idx = np.flatnonzero(defined)
    if idx.size:
        i0 = idx[0]
        b0 = np.cross(tangent[i0], normal_u[i0])
        s0 = -1.0 if np.dot(b0, ref) < 0 else 1.0
        flips = np.einsum("ij,ij->i", d2[1:], d2[:-1]) < 0
        steps = np.where(flips, -1.0, 1.0)
        cum = np.concatenate(([1.0], np.cumprod(steps)))
        sign = s0 * cum / cum[i0]
    normal = sign[:, None] * normal_u
    kappa = sign * kabs

    # carry the normal through zero-curvature samples
    last = None
    for i in range(curve.n):
        if defined[i]:
            last = normal[i]
        elif last is not None:
            v = last - np.dot(last, tangent[i]) * tangent[i]
            normal[i] = v / np.linalg.norm(v)
    if idx.size:
        first = normal[idx[0]]
        for i in range(idx[0] - 1, -1, -1):
            v = first - np.dot(first, tangent[i]) * tangent[i]
            normal[i] = v / np.linalg.norm(v)
    else:
        for i in range(curve.n):
            normal[i] = _any_perpendicular(tangent[i])
    binormal = np.cross(tangent, normal)

    tau = np.zeros(curve.n)
    den = np.einsum("ij,ij->i", c12, c12)
    tau[defined] = np.einsum("ij,ij->i", c12[defined], d3[defined]) / den[defined]
    if idx.size:
        filled = np.maximum.accumulate(np.where(defined, np.arange(curve.n), -1))
        filled[: idx[0]] = idx[0]
        tau = tau[filled]
    return FrenetFrames(tangent, normal, binormal), CurveInvariants(kappa, tau, defined, floor)


def integrate_frenet(t, curvature, torsion, frame0: FrenetFrame | None = None, origin=None) -> SampledCurve:
    """Rebuild a unit-speed space curve from its invariants.

    The frame is advanced by exact rotations about the midpoint Darboux
    vector ``tau*T + kappa*B`` and positions by the trapezoid rule.
    """
    t = np.asarray(t, dtype=float)
    k = np.asarray(curvature, dtype=float)
    tau = np.broadcast_to(np.asarray(torsion, dtype=float), t.shape)
    if frame0 is None:
        frame0 = FrenetFrame(np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), np.array([0, 0, 1.0]))
    F = np.array([frame0.tangent, frame0.normal, frame0.binormal], dtype=float)
    pos = np.zeros((len(t), 3))
    pos[0] = 0.0 if origin is None else origin
    tangents = np.empty((len(t), 3))
    tangents[0] = F[0]
    for i in range(len(t) - 1):
        h = t[i + 1] - t[i]
        km = 0.5 * (k[i] + k[i + 1])
        tm = 0.5 * (tau[i] + tau[i + 1])
        w = h * (tm * F[0] + km * F[2])
        ang = np.linalg.norm(w)
        if ang > 0:
            ax = w / ang
            c, s = np.cos(ang), np.sin(ang)
            F = F * c + np.cross(ax, F) * s + np.outer(F @ ax, ax) * (1 - c)
        tangents[i + 1] = F[0]
        pos[i + 1] = pos[i] + 0.5 * h * (tangents[i] + tangents[i + 1])
    return SampledCurve(t - t[0], pos, is_unit_speed=False)


# ---------------------------------------------------------------------------
# arc length


class _ArcLength:
    """Arc-length map of a parametric curve with Newton inversion."""

    def __init__(self, f: Callable, knots):
        self.f = f
        self.knots = np.asarray(knots, dtype=float)
        a, b = self.knots[:-1], self.knots[1:]
        self.cum = np.concatenate(([0.0], np.cumsum(self._integral(a, b))))
        self.total = float(self.cum[-1])

    def speed(self, u):
        return np.linalg.norm(self.f(u, 1), axis=-1)

    def _integral(self, a, b):
        mid = 0.5 * (a + b)
        half = 0.5 * (b - a)
        nodes = mid[:, None] + half[:, None] * _GL_X[None, :]
        sp = self.speed(nodes.ravel()).reshape(nodes.shape)
        return half * (sp @ _GL_W)

    def s_of_u(self, u):
        u = np.asarray(u, dtype=float)
        i = np.clip(np.searchsorted(self.knots, u, side="right") - 1, 0, len(self.knots) - 2)
        return self.cum[i] + self._integral(self.knots[i], u)

    def u_of_s(self, s):
        s = np.asarray(s, dtype=float)
        u = np.interp(s, self.cum, self.knots)
        lo, hi = self.knots[0], self.knots[-1]
        for _ in range(50):
            err = self.s_of_u(u) - s
            step = err / self.speed(u)
            u = np.clip(u - step, lo, hi)
            if np.max(np.abs(err)) <= 1e-14 * max(self.total, 1.0):
                break
        return u


def arc_length_reparameterize(curve: SampledCurve, step: float | None = None, n: int | None = None) -> SampledCurve:
    """Resample ``curve`` uniformly in arc length.

    The exact evaluator is used when present, otherwise a quintic spline
    through the samples.  By default the sample count is kept.  Unit-speed
    input without a requested grid is returned unchanged.

    Raises
    ------
    DegenerateError
        Speed below 1e-12 somewhere on the curve.
    """
    if curve.is_unit_speed and step is None and n is None:
        return curve
    f = curve.evaluate
    knots = curve.t
    probe = np.concatenate([knots, 0.5 * (knots[:-1] + knots[1:])])
    sp = np.linalg.norm(f(probe, 1), axis=-1)
    if np.min(sp) < 1e-12:
        bad = probe[np.argmin(sp)]
        raise DegenerateError(f"speed vanishes near parameter {bad:.6g}")
    al = _ArcLength(f, knots)
    total = al.total
    if n is None:
        n = curve.n if step is None else max(int(round(total / step)), 4) + 1
    s = np.linspace(0.0, total, n)
    u = al.u_of_s(s)
    u[0], u[-1] = knots[0], knots[-1]
    pts = f(u, 0)

    def ev(sq, nu=0):
        uq = al.u_of_s(sq)
        if nu == 0:
            return f(uq, 0)
        d1 = f(uq, 1)
        spd = np.linalg.norm(d1, axis=-1, keepdims=True)
        tan = d1 / spd
        if nu == 1:
            return tan
        if nu == 2:
            d2 = f(uq, 2)
            perp = d2 - np.sum(d2 * tan, axis=-1, keepdims=True) * tan
            return perp / spd**2
        raise ValueError("only derivatives up to order 2 are available")

    meta = dict(curve.meta)
    meta["reparameterized_from"] = float(curve.length)
    return SampledCurve(s, pts, is_unit_speed=True, evaluator=ev, meta=meta)


def arc_length(curve: SampledCurve) -> float:
    """Arc length by Gauss-Legendre quadrature of the interpolated speed."""
    return _ArcLength(curve.evaluate, curve.t).total


# ---------------------------------------------------------------------------
# global measures


def projected_areas(curve: SampledCurve, closed: bool = False) -> np.ndarray:
    """Signed areas ``1/2 sum r_i x r_{i+1}`` per coordinate axis.

    Open curves are summed as they stand (the integral of r x dr / 2);
    ``closed=True`` adds the chord from the last sample back to the first.
    """
    p = curve.points3()
    if closed:
        p = np.vstack([p, p[:1]])
    return 0.5 * np.sum(np.cross(p[:-1], p[1:]), axis=0)


def closure_defect(curve: SampledCurve) -> float:
    """Distance between the end points."""
    return float(np.linalg.norm(curve.points[-1] - curve.points[0]))


def hausdorff(a, b) -> float:
    """Symmetric Hausdorff distance between two point sets."""
    a = np.asarray(a.points if isinstance(a, SampledCurve) else a, dtype=float)
    b = np.asarray(b.points if isinstance(b, SampledCurve) else b, dtype=float)
    da = spatial.cKDTree(b).query(a)[0].max()
    db = spatial.cKDTree(a).query(b)[0].max()
    return float(max(da, db))


def relative_hausdorff(a, reference) -> float:
    """Hausdorff distance divided by the bounding-box diagonal of ``reference``."""
    ref = np.asarray(reference.points if isinstance(reference, SampledCurve) else reference)
    scale = np.linalg.norm(ref.max(axis=0) - ref.min(axis=0))
    return hausdorff(a, ref) / scale


def evolute(curve: SampledCurve) -> SampledCurve:
    """Centres of the osculating circles, ``r + n / kappa``.

    Raises
    ------
    DegenerateError
        A sample with zero curvature (the message names its parameter).
    """
    if curve.dim != 2:
        raise InputError("evolute is defined for plane curves")
    frames, inv = frenet_data(curve)
    k = inv.curvature
    bad = np.flatnonzero(np.abs(k) <= inv.curvature_floor)
    if bad.size:
        raise DegenerateError(f"zero curvature at t = {curve.t[bad[0]]:.6g}; evolute is singular")
    e = curve.points + frames.normal[:, :2] / k[:, None]
    return SampledCurve(curve.t, e, is_unit_speed=False, meta={"evolute_of": curve.meta.get("builder", "")})


def cusp_indices(curve: SampledCurve, closed: bool | None = None) -> np.ndarray:
    """Samples where the polyline direction reverses (consecutive chords at > 90 degrees).

    Closed curves (detected from the end points unless ``closed`` is given)
    are scanned cyclically, so a cusp at the seam is found too.
    """
    p = curve.points
    if closed is None:
        closed = closure_defect(curve) <= 1e-9 * max(np.ptp(p), 1e-300)
    if closed:
        q = p[:-1]
        d = np.roll(q, -1, axis=0) - q
        dots = np.einsum("ij,ij->i", np.roll(d, 1, axis=0), d)
        return np.flatnonzero(dots < 0)
    d = np.diff(p, axis=0)
    dots = np.einsum("ij,ij->i", d[:-1], d[1:])
    return np.flatnonzero(dots < 0) + 1


def curvature_is_monotone(curvature, strict: bool = True) -> bool:
    dk = np.diff(np.asarray(curvature, dtype=float))
    if strict:
        return bool(np.all(dk > 0) or np.all(dk < 0))
    return bool(np.all(dk >= 0) or np.all(dk <= 0))


def osculating_circles_nested(curve: SampledCurve, max_samples: int = 400) -> bool:
    """True if all osculating circles are pairwise nested (checked on a subsample)."""
    frames, inv = frenet_data(curve)
    idx = np.unique(np.linspace(0, curve.n - 1, min(curve.n, max_samples)).astype(int))
    k = inv.curvature[idx]
    if np.any(np.abs(k) <= inv.curvature_floor):
        return False
    rad = 1.0 / np.abs(k)
    cen = curve.points[idx] + frames.normal[idx, :2] / k[:, None]
    dist = np.linalg.norm(cen[:, None, :] - cen[None, :, :], axis=-1)
    gap = np.abs(rad[:, None] - rad[None, :])
    return bool(np.all(dist <= gap * (1 + 1e-9) + 1e-12))


# ---------------------------------------------------------------------------
# self-intersection


class Crossing(NamedTuple):
    i: int
    j: int
    t_a: float
    t_b: float
    point: np.ndarray


def _exact_orient(a, b, c):
    ax, ay = Fraction(a[0]), Fraction(a[1])
    v = (Fraction(b[0]) - ax) * (Fraction(c[1]) - ay) - (Fraction(b[1]) - ay) * (Fraction(c[0]) - ax)
    return (v > 0) - (v < 0)


def _on_segment(p, q, r):
    return min(p[0], q[0]) <= r[0] <= max(p[0], q[0]) and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])


def _exact_intersect(a, b, c, d) -> bool:
    o1 = _exact_orient(a, b, c)
    o2 = _exact_orient(a, b, d)
    o3 = _exact_orient(c, d, a)
    o4 = _exact_orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    return ((o1 == 0 and _on_segment(a, b, c)) or (o2 == 0 and _on_segment(a, b, d))
            or (o3 == 0 and _on_segment(c, d, a)) or (o4 == 0 and _on_segment(c, d, b)))


def self_intersections(curve: SampledCurve, merge: bool = True) -> list[Crossing]:
    """All crossings between non-adjacent polyline segments.

    A closed curve (end point equal to the start within 1e-9 of its length)
    treats its first and last segments as adjacent.  With ``merge`` the hits
    of one geometric crossing that touches a shared vertex are reported once.
    """
    if curve.dim != 2:
        raise InputError("self_intersects works on plane curves")
    xy = np.ascontiguousarray(curve.points, dtype=float)
    closed = closure_defect(curve) <= 1e-9 * max(curve.length, 1e-300)
    pairs, unsure = _backend.kernels.segment_crossings(xy, bool(closed), EXACT_TOL)
    hits = []
    for (i, j), u in zip(pairs, unsure):
        a, b, c, d = xy[i], xy[i + 1], xy[j], xy[j + 1]
        if u and not _exact_intersect(a, b, c, d):
            continue
        r, s = b - a, d - c
        den = r[0] * s[1] - r[1] * s[0]
        if den != 0:
            qa = ((c[0] - a[0]) * s[1] - (c[1] - a[1]) * s[0]) / den
            qb = ((c[0] - a[0]) * r[1] - (c[1] - a[1]) * r[0]) / den
        else:
            qa = qb = 0.0
        qa = min(max(qa, 0.0), 1.0)
        qb = min(max(qb, 0.0), 1.0)
        ta = curve.t[i] + qa * (curve.t[i + 1] - curve.t[i])
        tb = curve.t[j] + qb * (curve.t[j + 1] - curve.t[j])
        hits.append(Crossing(int(i), int(j), float(ta), float(tb), a + qa * r))
    if merge and hits:
        merged = [hits[0]]
        for h in hits[1:]:
            last = merged[-1]
            if abs(h.i - last.i) <= 1 and abs(h.j - last.j) <= 1:
                continue
            merged.append(h)
        hits = merged
    return hits


def self_intersects(curve: SampledCurve) -> tuple[bool, tuple[float, float] | None]:
    """Whether the plane polyline crosses itself, with the first parameter pair."""
    hits = self_intersections(curve)
    if not hits:
        return False, None
    return True, (hits[0].t_a, hits[0].t_b)


# ---------------------------------------------------------------------------
# CSV


def write_curve_csv(curve: SampledCurve, path, meta: dict | None = None) -> None:
    cols = {"t": curve.t, "x": curve.points[:, 0], "y": curve.points[:, 1]}
    if curve.dim == 3:
        cols["z"] = curve.points[:, 2]
    info = {k: v for k, v in curve.meta.items() if isinstance(v, (str, int, float))}
    info.update(meta or {})
    write_table(path, cols, info)


def read_curve_csv(path, unit_speed: bool | None = None) -> SampledCurve:
    """Read ``t,x,y[,z]``.  Unit speed is inferred unless given."""
    meta, cols = read_table(path, required=("t", "x", "y"), optional=("z",))
    pts = [cols["x"], cols["y"]] + ([cols["z"]] if "z" in cols else [])
    pts = np.column_stack(pts)
    if unit_speed is None:
        unit_speed = len(cols["t"]) >= 4 and speed_residual(cols["t"], pts) <= UNIT_SPEED_TOL
    return SampledCurve(cols["t"], pts, is_unit_speed=unit_speed, meta=meta)
