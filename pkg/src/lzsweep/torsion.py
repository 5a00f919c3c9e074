"""Closed constant-torsion space curves from zero-area binormal curves.

A curve on the unit sphere, used as binormal ``b(s)``, defines a space curve
of torsion ``tau`` through ``r(s) = (1/tau) int b x b' ds``.  The result is
closed exactly when ``int b x db = 0``.  The binormal here is the
two-fold symmetric template: two clothoid arcs in the unit disk joined by a
chord through the origin, lifted to the upper hemisphere and smoothed at
its two cusps.  Its three shape parameters are tuned so the smoothed curve
has zero area.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import interpolate

from .errors import DegenerateError, DomainError, InputError, SolverError
from .geometry import SampledCurve
from .optimize import nelder_mead
from .primitives import fresnel
from .pulses import pulse_from_curve
from .smoothing import SmoothingConfig, SphericalSpline, lift_to_sphere, smooth_spherical
from .waveform import Waveform

REFERENCE_PARAMS = (2.2237391, -0.2800000, -0.2280100)  # (t_f, x_a, y_a) at v = 10 tau^2
SPIRAL_SCALE = 1.0 / math.sqrt(5.0)
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)
SAMPLES_PER_UNIT = 2000  # output samples per 1/|tau| of duration


@dataclass
class BinormalTemplate:
    """Unsmoothed two-fold symmetric binormal curve (units with ``tau = 1``).

    ``disk`` holds the planar points, ``s`` the template parameter.  The
    planar speed is ``sqrt(v/10)`` everywhere, so the chord takes
    ``2 |(x_a, y_a)| / sqrt(v/10)``.
    """

    v: float
    t_f: float
    x_a: float
    y_a: float
    s: np.ndarray
    disk: np.ndarray
    cusps: tuple
    n_spiral: int
    n_chord: int

    @property
    def sphere(self) -> np.ndarray:
        return lift_to_sphere(self.disk)

    @property
    def cusp_locations(self) -> tuple:
        return tuple(float(self.s[i]) for i in self.cusps)

    @property
    def length(self) -> float:
        return float(self.s[-1])

    def curve(self) -> SampledCurve:
        return SampledCurve(self.s, self.sphere, is_unit_speed=False,
                            meta={"builder": "binormal-template", "v": self.v, "t_f": self.t_f,
                                  "x_a": self.x_a, "y_a": self.y_a})

    def symmetry_defect(self) -> float:
        """``max |b(s) + b(S - s)|`` over the planar samples."""
        return float(np.max(np.abs(self.disk + self.disk[::-1])))


def _grid_counts(v, t_f, x_a, y_a, ds):
    chord = 2.0 * math.hypot(x_a, y_a) / math.sqrt(v / 10.0)
    return max(int(round(t_f / ds)), 4), int(round(chord / ds))


def binormal_template(v: float, t_f: float, x_a: float, y_a: float, ds: float = 0.01,
                      n_spiral: int | None = None, n_chord: int | None = None) -> BinormalTemplate:
    """Build the binormal template.

    Each spiral arc is ``(C(w)/sqrt5 + x_a, S(w)/sqrt5 + y_a)`` with
    ``w = sqrt(v/2) (t_f - s)``; the second arc is the first rotated by pi
    and traversed backwards.  ``n_spiral`` / ``n_chord`` fix the sample
    counts (the solver keeps them constant while the parameters move).

    Raises
    ------
    DomainError
        A planar point at or beyond the unit circle.
    """
    if not (v > 0 and t_f > 0 and ds > 0):
        raise InputError("template needs v > 0, t_f > 0 and ds > 0")
    n1, n2 = _grid_counts(v, t_f, x_a, y_a, ds)
    n1 = n1 if n_spiral is None else int(n_spiral)
    n2 = n2 if n_chord is None else int(n_chord)
    speed = math.sqrt(v / 10.0)
    a = np.array([x_a, y_a])
    chord = 2.0 * math.hypot(x_a, y_a) / speed
    s1 = np.linspace(0.0, t_f, n1 + 1)
    c, sn = fresnel(math.sqrt(v / 2.0) * (t_f - s1))
    arc = np.column_stack([SPIRAL_SCALE * c + x_a, SPIRAL_SCALE * sn + y_a])
    if n2 > 0 and chord > 0:
        s2 = np.linspace(0.0, chord, n2 + 1)[1:-1]
        mid = a[None, :] * (1.0 - 2.0 * s2[:, None] / chord)
        s = np.concatenate([s1, t_f + s2, t_f + chord + s1])
        disk = np.concatenate([arc, mid, -arc[::-1]])
        cusps = (n1, n1 + len(s2) + 1)
    else:
        s = np.concatenate([s1, t_f + s1[1:]])
        disk = np.concatenate([arc, -arc[::-1][1:]])
        cusps = (n1, n1)
        n2 = 0
    if np.any(np.sum(disk * disk, axis=1) >= 1.0):
        raise DomainError("binormal template leaves the open unit disk")
    return BinormalTemplate(v, t_f, x_a, y_a, s, disk, cusps, n1, n2)


@dataclass
class AreaResidual:
    """``int b x db`` with the rule and sample count used to compute it."""

    value: np.ndarray
    rule: str
    n_samples: int

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.value))


def area_residual(curve: SampledCurve) -> AreaResidual:
    """Vector area of a spherical curve.

    Smoothed curves (spline evaluator) use 8-point Gauss-Legendre on every
    knot interval; plain samples use the exact polyline sum ``sum p_i x p_{i+1}``.
    """
    ev = curve.evaluator
    if isinstance(ev, SphericalSpline):
        kn = ev.knots
        kn = kn[(kn >= curve.t[0]) & (kn <= curve.t[-1])]
        a, b = kn[:-1], kn[1:]
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        s = (mid[:, None] + half[:, None] * _GL_X).ravel()
        w = (half[:, None] * _GL_W).ravel()
        val = np.sum(np.cross(ev(s), ev(s, 1)) * w[:, None], axis=0)
        return AreaResidual(val, "gauss-legendre-8", len(s))
    p = curve.points
    val = np.sum(np.cross(p[:-1], p[1:]), axis=0)
    return AreaResidual(val, "polyline", curve.n)


@dataclass(frozen=True)
class TemplateSmoothing:
    """Cusp smoothing of the template: spline order and points dropped per side."""

    order: int = 3
    spiral_side: int = 50
    chord_side: int = 34

    def config(self, tpl: BinormalTemplate, step: float) -> SmoothingConfig:
        c1, c2 = tpl.cusp_locations
        return SmoothingConfig(step, self.order, ((c1, self.spiral_side, self.chord_side),
                                                  (c2, self.chord_side, self.spiral_side)))


def smoothed_template(params, v: float, smoothing: TemplateSmoothing = TemplateSmoothing(),
                      ds: float = 0.01, counts=None) -> tuple[BinormalTemplate, SampledCurve]:
    t_f, x_a, y_a = (float(p) for p in params)
    n1, n2 = counts if counts is not None else (None, None)
    tpl = binormal_template(v, t_f, x_a, y_a, ds, n1, n2)
    return tpl, smooth_spherical(tpl.curve(), smoothing.config(tpl, ds))


@dataclass
class AreaBalanceResult:
    params: np.ndarray
    residual: AreaResidual
    iterations: int
    evaluations: int
    trace: list = field(default_factory=list)
    template: BinormalTemplate | None = None
    binormal: SampledCurve | None = None

    @property
    def t_f(self) -> float:
        return float(self.params[0])

    @property
    def x_a(self) -> float:
        return float(self.params[1])

    @property
    def y_a(self) -> float:
        return float(self.params[2])


def write_trace_csv(trace, path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["iter", "t_f", "x_a", "y_a", "residual"])
        for row in trace:
            out.writerow([row.iteration, *(repr(float(x)) for x in row.x), repr(float(row.f))])


def area_balance_solve(v: float = 10.0, initial=REFERENCE_PARAMS,
                       smoothing: TemplateSmoothing = TemplateSmoothing(), ds: float = 0.01,
                       max_iter: int = 500, target: float = 1e-7, stop: float | None = None,
                       trace_path=None, workers: int = 1) -> AreaBalanceResult:
    """Find ``(t_f, x_a, y_a)`` whose smoothed template has zero vector area.

    Nelder-Mead on ``||int b x db||`` with the smoothing inside the
    objective.  Sample counts are fixed from the initial guess.  The search
    stops once the residual falls below ``stop`` (default ``target * 1e-6``)
    or the simplex collapses.

    Raises
    ------
    InputError
        The initial guess gives an invalid template.
    SolverError
        Residual still above ``target`` after ``max_iter`` iterations.
    """
    x0 = np.asarray(initial, dtype=float)
    if x0.shape != (3,):
        raise InputError("initial guess must be (t_f, x_a, y_a)")
    tpl0, _ = smoothed_template(x0, v, smoothing, ds)
    counts = (tpl0.n_spiral, tpl0.n_chord)

    def objective(p):
        try:
            _, b = smoothed_template(p, v, smoothing, ds, counts)
        except (DomainError, InputError):
            return 1e3
        return area_residual(b).norm

    stop = target * 1e-6 if stop is None else stop
    res = nelder_mead(objective, x0, max_iter=max_iter, f_target=stop, xatol=1e-13, fatol=1e-18,
                      workers=workers)
    if trace_path is not None:
        write_trace_csv(res.trace, trace_path)
    tpl, b = smoothed_template(res.x, v, smoothing, ds, counts)
    resid = area_residual(b)
    if resid.norm > target:
        raise SolverError(f"area balance did not converge: residual {resid.norm:.3g} after {res.iterations} "
                          f"iterations", best=res.x, residual=resid.norm)
    return AreaBalanceResult(res.x, resid, res.iterations, res.evaluations, res.trace, tpl, b)


# ---------------------------------------------------------------------------
# constant-torsion integration


def _cumtrapz(y, x):
    out = np.zeros_like(y)
    dx = np.diff(x)
    out[1:] = np.cumsum(0.5 * dx.reshape((-1,) + (1,) * (y.ndim - 1)) * (y[1:] + y[:-1]), axis=0)
    return out


def _refine(u):
    fine = np.empty(2 * len(u) - 1)
    fine[0::2] = u
    fine[1::2] = 0.5 * (u[:-1] + u[1:])
    return fine


def _integrals(f, u, tau_eff):
    b, db = f(u, 0), f(u, 1)
    r = _cumtrapz(np.cross(b, db) / tau_eff, u)
    t = _cumtrapz(np.linalg.norm(db, axis=1) / abs(tau_eff), u)
    return r, t


def integrate_constant_torsion(b: SampledCurve, tau: float, n: int | None = None,
                               tol: float = 1e-8, max_doublings: int = 8) -> SampledCurve:
    """Space curve of torsion ``-|tau|`` with binormal ``b``.

    ``r(s) = (1/tau) int b x b' ds`` by cumulative trapezoid; the grid is
    doubled until the half-step result agrees to ``tol``.  The curve is then
    reparameterized by its arc length ``int |b'| / |tau| ds``, resampled
    uniformly (``n`` samples, default 2000 per ``1/|tau|``) through a
    quintic spline, and rotated so its frame at ``t = 0`` is (x, y, z).

    Raises
    ------
    DegenerateError
        ``tau == 0`` (use the plane-curve tools) or a vanishing binormal speed.
    """
    if tau == 0 or not math.isfinite(tau):
        raise DegenerateError("zero torsion: build a plane curve instead")
    if b.dim != 3:
        raise InputError("binormal curve must be 3-D")
    tau_eff = -abs(float(tau))
    f = b.evaluate
    u = b.t.copy()
    r, t = _integrals(f, u, tau_eff)
    for _ in range(max_doublings):
        fine = _refine(u)
        rf, tf = _integrals(f, fine, tau_eff)
        diff = max(float(np.max(np.abs(rf[0::2] - r))), float(np.max(np.abs(tf[0::2] - t))))
        u, r, t = fine, rf, tf
        if diff <= tol:
            break
    db = f(u, 1)
    if np.min(np.linalg.norm(db, axis=1)) < 1e-12:
        raise DegenerateError("binormal curve has vanishing speed")
    total = float(t[-1])
    n = int(math.ceil(total * abs(tau_eff) * SAMPLES_PER_UNIT)) + 1 if n is None else int(n)
    tt = np.linspace(0.0, total, n)
    spl = interpolate.make_interp_spline(t, r, k=5)
    u_of_t = interpolate.make_interp_spline(t, u, k=5)

    b0 = f(u[:1], 0)[0]
    d0 = db[0] / np.linalg.norm(db[0])
    n0 = d0  # normal at t = 0 for torsion -|tau|
    t0 = np.cross(n0, b0)
    rot = np.array([t0, n0, b0])
    if np.max(np.abs(rot @ rot.T - np.eye(3))) > 1e-8:
        raise DegenerateError("binormal and its derivative are not orthogonal")

    def ev(s, nu=0):
        return spl(np.asarray(s, dtype=float), nu) @ rot.T

    pts = ev(tt)
    meta = {"builder": "constant-torsion", "tau": tau_eff, "duration": total, "rotation": rot,
            "u_of_t": u_of_t, "binormal": b, "integration_samples": len(u)}
    return SampledCurve(tt, pts, is_unit_speed=True, evaluator=ev, meta=meta)


def extract_lz_pulse(r: SampledCurve, torsion_tol: float = 1e-2) -> Waveform:
    """``Omega = -kappa``, ``Delta = -tau`` of a constant-torsion curve."""
    w = pulse_from_curve(r, torsion_tol)
    w.meta["builder"] = r.meta.get("builder", "constant-torsion")
    return w


@dataclass
class TorsionDesign:
    solve: AreaBalanceResult
    curve: SampledCurve
    pulse: Waveform
    tau: float


def design_torsion_pulse(v: float = 10.0, tau: float = 1.0, initial=REFERENCE_PARAMS, **solve_kw) -> TorsionDesign:
    """Solve the template at ``v`` (units of tau^2), integrate and extract the pulse.

    The template lives in units with ``tau = 1``; the physical pulse for
    another ``tau`` is the same shape with time scaled by ``1/|tau|``.
    """
    sol = area_balance_solve(v, initial, **solve_kw)
    curve = integrate_constant_torsion(sol.binormal, tau)
    w = extract_lz_pulse(curve)
    w.meta.update({"builder": "torsion", "v": v, "t_f": sol.t_f, "x_a": sol.x_a, "y_a": sol.y_a,
                   "residual": sol.residual.norm, "declared_order": 1,
                   "verify_window": "1e-3,1e-1"})
    return TorsionDesign(sol, curve, w, tau)
