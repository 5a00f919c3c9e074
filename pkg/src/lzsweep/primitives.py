"""Analytic curve pieces, the closure-root solver and composite builders.

All builders return unit-speed plane curves in the error-curve frame:
they start at the origin heading along +x, so the simulator's first
Magnus term reproduces them directly.  Signed curvature is kappa = -Omega.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError, SolverError
from .geometry import SampledCurve
from .waveform import Waveform

SQRT_PI_8 = math.sqrt(math.pi / 8.0)
DEFAULT_DENSITY = 2000  # samples per 1/sqrt(v) of arc length
JUMP_WIDTH = 1e-9  # ramp width for pulse discontinuities, relative to T

# ---------------------------------------------------------------------------
# Fresnel integrals  C(w) = int_0^w cos(u^2) du,  S(w) = int_0^w sin(u^2) du

_SERIES_MAX = 3.0
_ASYMPTOTIC_MIN = 6.0
_GL20_X, _GL20_W = np.polynomial.legendre.leggauss(20)


def _fresnel_series(w):
    w = np.asarray(w, dtype=float)
    w2 = w * w
    w4 = w2 * w2
    c = np.zeros_like(w)
    s = np.zeros_like(w)
    term = w.copy()  # (-1)^n w^(4n+1) / (2n)!
    for n in range(40):
        c += term / (4 * n + 1)
        term_s = term * w2 / (2 * n + 1)  # (-1)^n w^(4n+3) / (2n+1)!
        s += term_s / (4 * n + 3)
        term = -term * w4 / ((2 * n + 1) * (2 * n + 2))
    return c, s


def _fresnel_asymptotic(w):
    # int_w^inf exp(i u^2) du ~ i exp(i w^2) / (2 w) * sum_m (2m-1)!! / (2 i w^2)^m
    w = np.asarray(w, dtype=float)
    x = 1.0 / (2j * w * w)
    total = np.ones_like(w, dtype=complex)
    term = np.ones_like(w, dtype=complex)
    best = np.abs(term)
    done = np.zeros(w.shape, dtype=bool)
    for m in range(1, 60):
        term = term * (2 * m - 1) * x
        mag = np.abs(term)
        grow = mag >= best
        done |= grow
        total = np.where(done, total, total + term)
        best = np.minimum(best, mag)
    tail = 1j * np.exp(1j * w * w) / (2.0 * w) * total
    val = SQRT_PI_8 * (1 + 1j) - tail
    return val.real, val.imag


def _fresnel_quadrature(w):
    # series value at the switch point plus composite Gauss-Legendre on [3, w]
    w = np.asarray(w, dtype=float)
    c0, s0 = _fresnel_series(np.array(_SERIES_MAX))
    panels = 16
    edges = _SERIES_MAX + (w[..., None] - _SERIES_MAX) * np.linspace(0.0, 1.0, panels + 1)
    a, b = edges[..., :-1], edges[..., 1:]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    u = mid[..., None] + half[..., None] * _GL20_X
    c = c0 + np.sum(half * np.sum(np.cos(u * u) * _GL20_W, axis=-1), axis=-1)
    s = s0 + np.sum(half * np.sum(np.sin(u * u) * _GL20_W, axis=-1), axis=-1)
    return c, s


def fresnel(w):
    """Unnormalized Fresnel integrals ``(C(w), S(w))``.

    ``C(w) = int_0^w cos(u^2) du`` and ``S(w) = int_0^w sin(u^2) du``; both
    tend to ``sqrt(pi/8)`` as ``w -> inf`` and are odd in ``w``.  Power series
    for ``|w| <= 3``, composite 20-point Gauss-Legendre up to 6, and the
    asymptotic expansion beyond; absolute error below 1e-13 everywhere.
    """
    w = np.asarray(w, dtype=float)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)
    a = np.abs(w)
    c = np.empty_like(a)
    s = np.empty_like(a)
    lo = a <= _SERIES_MAX
    hi = a >= _ASYMPTOTIC_MIN
    mid = ~(lo | hi)
    if lo.any():
        c[lo], s[lo] = _fresnel_series(a[lo])
    if mid.any():
        c[mid], s[mid] = _fresnel_quadrature(a[mid])
    if hi.any():
        c[hi], s[hi] = _fresnel_asymptotic(a[hi])
    sign = np.sign(w)
    c, s = sign * c, sign * s
    if scalar:
        return float(c[0]), float(s[0])
    return c, s


def euler_spiral(v, t):
    """Error curve of the linear sweep ``Omega = v t``.

    ``(x, y) = (int_0^t cos(v u^2 / 2) du, -int_0^t sin(v u^2 / 2) du)``.
    """
    if v <= 0:
        raise InputError("spiral velocity v must be positive")
    t = np.asarray(t, dtype=float)
    k = math.sqrt(2.0 / v)
    c, s = fresnel(t / k)
    return np.stack([k * np.asarray(c), -k * np.asarray(s)], axis=-1)


# ---------------------------------------------------------------------------
# closure roots


@dataclass(frozen=True)
class ClosureRoot:
    """``zeta = t sqrt(v)`` where the spiral's position is orthogonal to its tangent."""

    index: int
    zeta: float


def closure_residual(zeta):
    """``cos(z^2/2) C(z/sqrt2) + sin(z^2/2) S(z/sqrt2)``."""
    zeta = np.asarray(zeta, dtype=float)
    c, s = fresnel(zeta / math.sqrt(2.0))
    return np.cos(zeta**2 / 2) * c + np.sin(zeta**2 / 2) * s


def closure_roots(n_max: int, step: float = 0.01, zeta_max: float = 20.0) -> list[ClosureRoot]:
    """The ``n_max`` smallest positive roots of the closure equation.

    Sign changes are bracketed on a grid of spacing ``step`` and refined by
    bisection down to floating-point resolution.
    """
    if n_max < 1:
        raise InputError("n_max must be >= 1")
    roots: list[ClosureRoot] = []
    lo = step
    while len(roots) < n_max:
        grid = np.arange(lo, zeta_max + 0.5 * step, step)
        f = closure_residual(grid)
        for k in np.flatnonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0):
            a, b = float(grid[k]), float(grid[k + 1])
            fa = float(f[k])
            while b - a > 1e-14 * b:
                m = 0.5 * (a + b)
                fm = float(closure_residual(m))
                if fm == 0.0:
                    a = b = m
                    break
                if (fm > 0) == (fa > 0):
                    a, fa = m, fm
                else:
                    b = m
            roots.append(ClosureRoot(len(roots), 0.5 * (a + b)))
            if len(roots) == n_max:
                break
        lo, zeta_max = zeta_max, 2.0 * zeta_max
    return roots


def zeta0() -> float:
    return closure_roots(1)[0].zeta


# ---------------------------------------------------------------------------
# segments and chains


@dataclass(frozen=True)
class SegmentSpec:
    """One curve piece.

    kind : ``"euler_spiral"`` (``v``, ``t_range``, optional ``mirror``),
        ``"arc"`` (``radius``, ``angle``, ``orientation`` "ccw"/"cw") or
        ``"line"`` (``length``).  A spiral with ``t_range[1] < t_range[0]``
        is traversed backwards; ``mirror`` reflects it in the x-axis.
    placement : ``"auto_join"`` continues from the previous piece with a
        common tangent; ``(angle, (x, y))`` places the canonical piece by a
        rigid motion.
    """

    kind: str
    v: float | None = None
    t_range: tuple[float, float] | None = None
    mirror: bool = False
    radius: float | None = None
    angle: float | None = None
    orientation: str = "ccw"
    length: float | None = None
    placement: object = "auto_join"

    def __post_init__(self):
        if self.kind == "euler_spiral":
            if self.v is None or self.v <= 0:
                raise InputError("spiral needs v > 0")
            if self.t_range is None or self.t_range[0] == self.t_range[1]:
                raise InputError("spiral needs a non-empty t_range")
        elif self.kind == "arc":
            if self.radius is None or self.radius <= 0:
                raise InputError("arc needs radius > 0")
            if self.angle is None or self.angle <= 0:
                raise InputError("arc needs angle > 0")
            if self.orientation not in ("ccw", "cw"):
                raise InputError("arc orientation must be 'ccw' or 'cw'")
        elif self.kind == "line":
            if self.length is None or self.length <= 0:
                raise InputError("line needs length > 0")
        else:
            raise InputError(f"unknown segment kind {self.kind!r}")

    @classmethod
    def spiral(cls, v, t0, t1, mirror=False, placement="auto_join"):
        return cls("euler_spiral", v=v, t_range=(t0, t1), mirror=mirror, placement=placement)

    @classmethod
    def arc(cls, radius, angle, orientation="ccw", placement="auto_join"):
        return cls("arc", radius=radius, angle=angle, orientation=orientation, placement=placement)

    @classmethod
    def line(cls, length, placement="auto_join"):
        return cls("line", length=length, placement=placement)

    def clothoid(self):
        """Local description ``(length, kappa0, kappa1)`` with kappa(u) = kappa0 + kappa1 u."""
        if self.kind == "line":
            return self.length, 0.0, 0.0
        if self.kind == "arc":
            k = 1.0 / self.radius if self.orientation == "ccw" else -1.0 / self.radius
            return self.radius * self.angle, k, 0.0
        t0, t1 = self.t_range
        sgn = -1.0 if self.mirror else 1.0
        if t1 > t0:
            return t1 - t0, -sgn * self.v * t0, -sgn * self.v
        return t0 - t1, sgn * self.v * t0, -sgn * self.v

    def canonical_start(self):
        """Start point and heading of the unplaced piece."""
        if self.kind != "euler_spiral":
            return np.zeros(2), 0.0
        t0, t1 = self.t_range
        p = euler_spiral(self.v, t0)
        h = -self.v * t0 * t0 / 2.0
        if t1 < t0:
            h += math.pi
        if self.mirror:
            p = p * np.array([1.0, -1.0])
            h = -h
        return p, h


def _clothoid_points(p0, h0, k0, k1, u):
    """Position along a clothoid piece starting at ``p0`` with heading ``h0``."""
    u = np.asarray(u, dtype=float)
    if k1 == 0.0:
        if k0 == 0.0:
            return p0 + u[:, None] * np.array([math.cos(h0), math.sin(h0)])
        h = h0 + k0 * u
        return p0 + np.column_stack([np.sin(h) - math.sin(h0), math.cos(h0) - np.cos(h)]) / k0
    a = abs(k1) / 2.0
    sg = 1.0 if k1 > 0 else -1.0
    b = k0 / k1
    c = h0 - k0 * k0 / (2.0 * k1)
    ra = math.sqrt(a)
    if abs(b) * ra > 40.0:
        return _clothoid_quadrature(p0, h0, k0, k1, u)
    c1, s1 = fresnel(ra * (u + b))
    c0, s0 = fresnel(ra * b)
    ic = (np.asarray(c1) - c0) / ra
    is_ = (np.asarray(s1) - s0) / ra
    x = math.cos(c) * ic - sg * math.sin(c) * is_
    y = math.sin(c) * ic + sg * math.cos(c) * is_
    return p0 + np.column_stack([x, y])


def _clothoid_quadrature(p0, h0, k0, k1, u):
    order = np.argsort(u)
    us = u[order]
    edges = np.concatenate(([0.0], us))
    a, b = edges[:-1], edges[1:]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    nodes = mid[:, None] + half[:, None] * _GL20_X
    h = h0 + k0 * nodes + 0.5 * k1 * nodes * nodes
    dx = half * (np.cos(h) @ _GL20_W)
    dy = half * (np.sin(h) @ _GL20_W)
    out = np.empty((len(u), 2))
    out[order] = p0 + np.column_stack([np.cumsum(dx), np.cumsum(dy)])
    return out


class Chain:
    """Placed sequence of clothoid pieces with exact evaluation.

    Attributes
    ----------
    pieces : list of dict
        ``start`` (arc-length offset), ``length``, ``p0``, ``h0``, ``k0``, ``k1``.
    """

    def __init__(self, specs, start=(0.0, 0.0), heading=0.0):
        self.specs = list(specs)
        if not self.specs:
            raise InputError("empty segment list")
        self.pieces = []
        pos = np.asarray(start, dtype=float)
        head = float(heading)
        s = 0.0
        for spec in self.specs:
            length, k0, k1 = spec.clothoid()
            if spec.placement == "auto_join":
                p0, h0 = pos, head
            else:
                ang, shift = spec.placement
                cp, ch = spec.canonical_start()
                rot = np.array([[math.cos(ang), -math.sin(ang)], [math.sin(ang), math.cos(ang)]])
                p0 = rot @ cp + np.asarray(shift, dtype=float)
                h0 = ch + ang
            self.pieces.append(dict(start=s, length=length, p0=np.asarray(p0, float), h0=h0, k0=k0, k1=k1))
            pos = _clothoid_points(p0, h0, k0, k1, np.array([length]))[0]
            head = h0 + k0 * length + 0.5 * k1 * length * length
            s += length
        self.length = s
        self.end_point = pos
        self.end_heading = head

    def signed_area(self, panels: int = 8) -> float:
        """``1/2 int (x y' - y x') ds`` by composite Gauss-Legendre per piece."""
        total = 0.0
        for p in self.pieces:
            edges = p["start"] + np.linspace(0.0, p["length"], panels + 1)
            mid, half = 0.5 * (edges[:-1] + edges[1:]), 0.5 * np.diff(edges)
            s = (mid[:, None] + half[:, None] * _GL20_X).ravel()
            xy, d = self(s), self(s, nu=1)
            f = (xy[:, 0] * d[:, 1] - xy[:, 1] * d[:, 0]).reshape(panels, -1)
            total += 0.5 * float(np.sum(half * (f @ _GL20_W)))
        return total

    @property
    def joins(self) -> list[float]:
        """Arc-length positions of the interior piece boundaries."""
        return [p["start"] for p in self.pieces[1:]]

    def _locate(self, s):
        starts = np.array([p["start"] for p in self.pieces])
        return np.clip(np.searchsorted(starts, s, side="right") - 1, 0, len(self.pieces) - 1)

    def curvature(self, s):
        s = np.asarray(s, dtype=float)
        idx = self._locate(s)
        out = np.empty(s.shape)
        for i, p in enumerate(self.pieces):
            m = idx == i
            out[m] = p["k0"] + p["k1"] * (s[m] - p["start"])
        return out

    def heading(self, s):
        s = np.asarray(s, dtype=float)
        idx = self._locate(s)
        out = np.empty(s.shape)
        for i, p in enumerate(self.pieces):
            m = idx == i
            u = s[m] - p["start"]
            out[m] = p["h0"] + p["k0"] * u + 0.5 * p["k1"] * u * u
        return out

    def __call__(self, s, nu=0):
        s = np.asarray(s, dtype=float)
        flat = np.atleast_1d(s).ravel()
        if nu == 0:
            idx = self._locate(flat)
            out = np.empty((flat.size, 2))
            for i, p in enumerate(self.pieces):
                m = idx == i
                if m.any():
                    out[m] = _clothoid_points(p["p0"], p["h0"], p["k0"], p["k1"], flat[m] - p["start"])
        else:
            h = self.heading(flat)
            tan = np.column_stack([np.cos(h), np.sin(h)])
            nrm = np.column_stack([-np.sin(h), np.cos(h)])
            k = self.curvature(flat)
            if nu == 1:
                out = tan
            elif nu == 2:
                out = k[:, None] * nrm
            elif nu == 3:
                idx = self._locate(flat)
                k1 = np.array([self.pieces[i]["k1"] for i in idx])
                out = k1[:, None] * nrm - (k * k)[:, None] * tan
            else:
                raise ValueError("derivatives above order 3 are not provided")
        return out.reshape(s.shape + (2,)) if s.ndim else out[0]

    def sample(self, n: int | None = None, density: float | None = None, unit: float = 1.0,
               meta: dict | None = None) -> SampledCurve:
        """Uniform arc-length samples (``n`` points, or ``density`` per ``unit`` of length)."""
        if n is None:
            density = DEFAULT_DENSITY if density is None else density
            n = max(int(math.ceil(self.length / unit * density)), 8) + 1
        s = np.linspace(0.0, self.length, n)
        info = {"joins": self.joins}
        info.update(meta or {})
        curve = SampledCurve(s, self(s), is_unit_speed=True, evaluator=self, meta=info)
        curve.meta["chain"] = self
        return curve

    def pulse(self, jump_width: float = JUMP_WIDTH, samples_per_piece: int = 2, meta=None,
              delta: float = 0.0) -> Waveform:
        """Exact piecewise-linear Omega = -kappa.

        A curvature jump at a join becomes a linear ramp over
        ``jump_width * T`` centred on the join; the neighbouring nodes carry
        the exact curvature at the shifted positions, so the error is O(eps^2).
        """
        eps = jump_width * self.length
        n = len(self.pieces)
        jump = [False] * (n + 1)
        for i in range(1, n):
            prev, cur = self.pieces[i - 1], self.pieces[i]
            k_prev = prev["k0"] + prev["k1"] * prev["length"]
            jump[i] = abs(k_prev - cur["k0"]) > 1e-12 * max(1.0, abs(cur["k0"]))
        ts: list[float] = []
        for i, p in enumerate(self.pieces):
            a, b = p["start"], p["start"] + p["length"]
            nodes = np.linspace(a, b, max(samples_per_piece, 2))
            if jump[i]:
                nodes[0] = a + 0.5 * eps
            if jump[i + 1]:
                nodes[-1] = b - 0.5 * eps
            if i > 0 and not jump[i]:
                nodes = nodes[1:]
            ts.extend(nodes.tolist())
        ts_arr = np.array(ts)
        ts_arr[-1] = self.length
        # curvature of the piece that owns each node
        owner = np.clip(np.searchsorted([p["start"] for p in self.pieces], ts_arr, side="right") - 1, 0, n - 1)
        k0 = np.array([self.pieces[o]["k0"] for o in owner])
        k1 = np.array([self.pieces[o]["k1"] for o in owner])
        st = np.array([self.pieces[o]["start"] for o in owner])
        om = -(k0 + k1 * (ts_arr - st))
        info = {"builder": "chain", "duration": self.length}
        info.update(meta or {})
        return Waveform(ts_arr, om, delta, info)


# ---------------------------------------------------------------------------
# builders


def _root(root) -> ClosureRoot:
    if isinstance(root, ClosureRoot):
        return root
    return closure_roots(int(root) + 1)[int(root)]


def two_spiral_chain(v, root=0) -> Chain:
    z = _root(root).zeta
    t1 = z / math.sqrt(v)
    return Chain([SegmentSpec.spiral(v, 0.0, t1), SegmentSpec.spiral(v, t1, 0.0, mirror=True)])


def build_two_spiral_closed(v, root=0, density=DEFAULT_DENSITY) -> SampledCurve:
    """Two mirror-image spiral arcs joined where the position is orthogonal to the tangent.

    Length ``2 zeta / sqrt(v)``; the pulse is a triangle peaking at ``zeta sqrt(v)``.
    """
    r = _root(root)
    ch = two_spiral_chain(v, r)
    return ch.sample(density=density, unit=1 / math.sqrt(v),
                     meta={"builder": "two-spiral", "v": v, "root": r.index, "zeta": r.zeta,
                           "declared_order": 1})


def figure8_chain(v) -> Chain:
    t0 = zeta0() / math.sqrt(v)
    return Chain([SegmentSpec.spiral(v, -t0, t0, mirror=True), SegmentSpec.spiral(v, -t0, t0)])


def build_figure8(v, density=DEFAULT_DENSITY) -> SampledCurve:
    """Closed zero-area figure-8 of two centred spiral arcs, length ``4 zeta0 / sqrt(v)``."""
    return figure8_chain(v).sample(density=density, unit=1 / math.sqrt(v),
                                   meta={"builder": "figure8", "v": v, "declared_order": 2})


def semicircle_diameter(v) -> float:
    """Distance from the spiral origin to the point ``t = zeta0 / sqrt(v)``."""
    return float(np.linalg.norm(euler_spiral(v, zeta0() / math.sqrt(v))))


def semicircle_chain(v) -> Chain:
    z = zeta0()
    d = semicircle_diameter(v)
    t0 = z / math.sqrt(v)
    return Chain([
        SegmentSpec.arc(d / 2, math.pi, "ccw"),
        SegmentSpec.spiral(v, -t0, t0),
        SegmentSpec.arc(d / 2, math.pi, "cw"),
    ])


def build_semicircle_sweep(v, density=DEFAULT_DENSITY) -> SampledCurve:
    """Semicircle, centred spiral through the origin, semicircle back.

    Curvature jumps at the two joins (the curve is C1, not C2); the pulse
    runs from ``-2/d`` to ``+2/d`` with ``d`` the semicircle diameter.
    """
    ch = semicircle_chain(v)
    d = semicircle_diameter(v)
    return ch.sample(density=density, unit=1 / math.sqrt(v),
                     meta={"builder": "semicircle", "v": v, "d": d, "declared_order": 2})


PHASE_GATE_TABLES = {
    "pi/4": (
        (-12.8073, 0.490593), (0.0, 0.560359), (20.2711, 0.676594), (0.0, 0.725925),
        (20.2711, 0.76467), (0.0, 0.814001), (20.2711, 0.930231), (0.0, 1.0),
    ),
    "pi": (
        (-14.4221, 0.435664), (0.0, 0.538169), (14.4221, 0.683391), (0.0, 0.723423),
        (28.8442, 0.759728), (0.0, 0.782168), (28.8442, 0.854779), (-14.4221, 1.0),
    ),
}


def _gate_key(phi) -> str:
    if isinstance(phi, str):
        key = phi.replace(" ", "").lower()
        if key in PHASE_GATE_TABLES:
            return key
    else:
        for key, val in (("pi/4", math.pi / 4), ("pi", math.pi)):
            if abs(float(phi) - val) < 1e-9:
                return key
    raise DomainError(f"no tabulated square-pulse gate for phi={phi!r}; use build_phase_gate_general")


def build_phase_gate_square(phi, T: float = 1.0, jump_width: float = JUMP_WIDTH) -> Waveform:
    """Tabulated square-pulse z-rotation (``phi`` = pi/4 or pi) of duration ``T``.

    Heights and switching times are the six-digit table values; each switch
    becomes a linear ramp of width ``jump_width * T`` centred on the switch time.
    """
    key = _gate_key(phi)
    table = PHASE_GATE_TABLES[key]
    eps = jump_width * T
    ts, om = [0.0], [table[0][0] / T]
    for (h0, end), (h1, _) in zip(table[:-1], table[1:]):
        ts += [end * T - eps / 2, end * T + eps / 2]
        om += [h0 / T, h1 / T]
    ts.append(T)
    om.append(table[-1][0] / T)
    return Waveform(np.array(ts), np.array(om), 0.0,
                    {"builder": "phase-gate", "phi": key, "T": T, "declared_order": 2,
                     "verify_window": "0.05,0.3"})


def _gate_sides(phi, rho, b):
    """Corner turn, hook turn and the two closing sides of the gate loop."""
    lam = 0.5 * phi
    th = (2 * math.pi - phi + lam) / 3.0

    def e(h):
        return np.array([math.cos(h), math.sin(h)])

    def rarc(h):
        return rho * np.array([math.sin(h) - math.sin(h - th), math.cos(h - th) - math.cos(h)])

    larc = rho * np.array([math.sin(-3 * th + lam) - math.sin(-3 * th), math.cos(-3 * th) - math.cos(-3 * th + lam)])
    rhs = -(rarc(0) + rarc(-th) + rarc(-2 * th) + larc + b * (e(-th) + e(-2 * th)))
    s1, s4 = np.linalg.solve(np.column_stack([e(0), e(-3 * th)]), rhs)
    return th, lam, float(s1), float(s4)


def _gate_loop(phi, rho, b):
    """Loop of the general gate, from the origin heading +x back to the origin."""
    th, lam, s1, s4 = _gate_sides(phi, rho, b)
    specs = []
    if s1 > 0:
        specs.append(SegmentSpec.line(s1))
    specs.append(SegmentSpec.arc(rho, th, "cw"))
    for _ in range(2):
        if b > 0:
            specs.append(SegmentSpec.line(b))
        specs.append(SegmentSpec.arc(rho, th, "cw"))
    if s4 > 0:
        specs.append(SegmentSpec.line(s4))
    specs.append(SegmentSpec.arc(rho, lam, "ccw"))
    return specs, s1, s4


def _loop_area(specs):
    ch = Chain(specs)
    return ch.signed_area(), ch


def build_phase_gate_general(phi, T: float = 1.0, corner_fraction: float = 0.05,
                             n: int = 20001) -> SampledCurve:
    """Closed zero-area curve whose end tangent is rotated by ``phi``.

    A counterclockwise circle above the x-axis is followed by a clockwise
    rounded loop below it: three equal right-hand corners, a short left-hand
    hook of turn ``phi/2`` into the origin, and straight sides.  The loop's
    size is bisected so the corner radius equals ``corner_fraction * T``; the
    circle radius cancels the loop's area.  ``phi > pi`` uses the mirror
    image of the ``2 pi - phi`` design.

    Raises
    ------
    DomainError
        ``phi`` outside ``[0.01, 2 pi - 0.01]``.
    SolverError
        No loop size meets the corner-radius condition.
    """
    phi = float(phi)
    if not (0.01 <= phi <= 2 * math.pi - 0.01):
        raise DomainError("phi must lie in [0.01, 2*pi - 0.01]")
    mirror = phi > math.pi
    p = 2 * math.pi - phi if mirror else phi
    rho = 1.0

    def build(b):
        specs, s1, s4 = _gate_loop(p, rho, b)
        if min(s1, s4) < 0:
            return None
        area, _ = _loop_area(specs)
        radius = _bisect_radius(abs(area))
        total = 2 * math.pi * radius + Chain(specs).length
        return specs, radius, total

    def excess(b):
        out = build(b)
        return None if out is None else rho / out[2] - corner_fraction

    # s1, s4 are affine in b; start at the smallest b keeping both >= 0
    a1, a4 = _gate_sides(p, rho, 0.0)[2:]
    b1, b4 = _gate_sides(p, rho, 1.0)[2:]
    lo = max([0.0] + [-a / (b - a) for a, b in ((a1, b1), (a4, b4)) if a < 0 < b - a]) * (1 + 1e-12)
    hi = max(1.0, 2 * lo)
    while excess(hi) is not None and excess(hi) > 0 and hi < 1e6:
        hi *= 2.0
    f_lo, f_hi = excess(lo), excess(hi)
    if f_lo is None or f_hi is None or f_lo * f_hi > 0:
        raise SolverError(f"no loop size gives corner radius {corner_fraction} T for phi={phi}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f = excess(mid)
        if (f > 0) == (f_lo > 0):
            lo, f_lo = mid, f
        else:
            hi = mid
        if hi - lo < 1e-15 * hi:
            break
    specs, radius, total = build(0.5 * (lo + hi))
    scale = T / total
    full = [SegmentSpec.arc(radius * scale, 2 * math.pi, "ccw")] + [_scaled(s, scale) for s in specs]
    if mirror:
        full = [_mirrored(s) for s in full]
    ch = Chain(full)
    curve = ch.sample(n=n, meta={"builder": "phase-gate-general", "phi": phi, "T": T,
                                 "corner_radius": rho * scale, "circle_radius": radius * scale,
                                 "area_residual": ch.signed_area(), "declared_order": 2})
    return curve


def _bisect_radius(area, tol=1e-15):
    """Circle radius with ``pi R^2 = area`` by bisection."""
    lo, hi = 0.0, max(1.0, area)
    while math.pi * hi * hi < area:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.pi * mid * mid < area:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * hi:
            break
    return 0.5 * (lo + hi)


def _scaled(spec: SegmentSpec, k: float) -> SegmentSpec:
    if spec.kind == "line":
        return SegmentSpec.line(spec.length * k)
    if spec.kind == "arc":
        return SegmentSpec.arc(spec.radius * k, spec.angle, spec.orientation)
    raise InputError("only lines and arcs can be rescaled here")


def _mirrored(spec: SegmentSpec) -> SegmentSpec:
    if spec.kind == "arc":
        return SegmentSpec.arc(spec.radius, spec.angle, "cw" if spec.orientation == "ccw" else "ccw")
    return spec
