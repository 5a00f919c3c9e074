"""``lzsweep`` command-line tool.

Subcommands: design, smooth, simulate, sweep, verify, scaling, plot.
Exit codes: 0 success, 1 input error, 2 verification failure, 3 solver failure.
"""
from __future__ import annotations

import argparse
import ast
import math
import operator
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, geometry, primitives, pulses, simulator, svg, torsion
from .config import JobConfig, ensure_writable
from .errors import InputError, LZError, VerificationError
from .geometry import SampledCurve
from .io import read_table, write_table
from .smoothing import SmoothingConfig, smooth_curve, smooth_spherical
from .waveform import Waveform, read_waveform_csv, write_waveform_csv

BUILDERS = ("linear", "constant", "figure8", "two-spiral", "semicircle", "phase-gate", "torsion")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv,
        ast.USub: operator.neg, ast.UAdd: operator.pos}


def parse_number(text) -> float:
    """Float from plain arithmetic on numbers and ``pi`` (``"pi/4"``, ``"2*pi"``)."""
    if isinstance(text, (int, float)):
        return float(text)

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise ValueError(text)

    try:
        out = ev(ast.parse(str(text).strip(), mode="eval").body)
    except (ValueError, SyntaxError, ZeroDivisionError):
        raise InputError(f"cannot parse number {text!r}") from None
    if not math.isfinite(out):
        raise InputError(f"{text!r} is not finite")
    return out


def _floats(text):
    if text is None:
        return None
    if isinstance(text, (list, tuple)):
        return [parse_number(x) for x in text]
    return [parse_number(x) for x in str(text).replace(";", ",").split(",") if x.strip()]


def _grid(spec, name):
    """``lo,hi,n`` to a log-spaced grid."""
    vals = _floats(spec)
    if vals is None or len(vals) != 3 or not (0 < vals[0] < vals[1]) or vals[2] < 2:
        raise InputError(f"{name} must be 'lo,hi,n' with 0 < lo < hi and n >= 2")
    return np.geomspace(vals[0], vals[1], int(vals[2]))


def _positive(value, name):
    if value is None or not (value > 0 and math.isfinite(value)):
        raise InputError(f"{name} must be positive")
    return value


def _header(cfg: JobConfig, command: str, extra=None) -> dict:
    meta = {"lzsweep.version": __version__, "command": command}
    meta.update(cfg.provenance())
    meta.update(extra or {})
    return meta


def _scalars(meta):
    out = {}
    for k, v in meta.items():
        if isinstance(v, (bool, int, float, str, np.floating, np.integer)):
            out[k] = v
        elif isinstance(v, (list, tuple)) and all(isinstance(x, (int, float)) for x in v):
            out[k] = " ".join(repr(float(x)) for x in v)
    return out


def _out(args, cfg, section, key, default) -> Path:
    name = cfg.value(section, key, getattr(args, key, None), default)
    return ensure_writable(Path(name))


def _say(label, value):
    if isinstance(value, float):
        value = f"{value:.10g}"
    elif isinstance(value, np.ndarray):
        value = " ".join(f"{x:.6g}" for x in value)
    print(f"{label}: {value}")


# ---------------------------------------------------------------------------
# design


def _smoothing_from(cfg: JobConfig, args, curve: SampledCurve, default_step, default_order, default_points):
    step = cfg.value("smoothing", "step", getattr(args, "step", None), default_step, float)
    order = cfg.value("smoothing", "order", getattr(args, "order", None), default_order, int)
    remove = cfg.value("smoothing", "remove", getattr(args, "remove", None), None, "removals")
    if isinstance(remove, str):
        from .config import parse_removals

        remove = parse_removals(remove)
    if remove:
        return SmoothingConfig(_positive(step, "smoothing step"), order, remove)
    points = cfg.value("smoothing", "points", getattr(args, "points", None), default_points, int)
    joins = curve.meta.get("joins")
    if isinstance(joins, str):
        joins = [float(x) for x in joins.split()]
    if not joins:
        raise InputError("no removal list given and the curve carries no join locations")
    return SmoothingConfig.symmetric(_positive(step, "smoothing step"), order, joins, points)


def _with_gap(w: Waveform, args, cfg: JobConfig) -> Waveform:
    gap = cfg.value("design", "gap", args.gap, 0.0, float)
    if gap < 0:
        raise InputError("gap must be >= 0")
    if gap:
        # a gap adds no curvature, so the declared order no longer applies
        meta = {k: v for k, v in w.meta.items() if k != "declared_order"}
        meta["gap"] = gap
        return Waveform(w.t, w.omega, gap, meta)
    return w


def _design(args, cfg: JobConfig):
    builder = cfg.value("design", "builder", args.builder, None)
    if builder not in BUILDERS:
        raise InputError(f"builder must be one of {', '.join(BUILDERS)}")
    v = cfg.value("design", "v", args.v, 10.0 if builder == "torsion" else 1.0, float)
    _positive(v, "v")
    prefix = cfg.value("design", "prefix", args.prefix, builder)
    out_dir = Path(cfg.value("design", "out_dir", args.out_dir, "."))
    if not out_dir.is_dir():
        raise InputError(f"output directory {out_dir} does not exist")
    report = {}
    curve = None
    extra_files = {}
    if builder == "linear":
        T = _positive(cfg.value("design", "T", args.T, 10.0, float), "T")
        w = _with_gap(pulses.linear_pulse(v, T, n=cfg.value("design", "n", args.n, 2001, int)), args, cfg)
    elif builder == "constant":
        T = _positive(cfg.value("design", "T", args.T, 1.0, float), "T")
        area = parse_number(cfg.value("design", "area", args.area, "2*pi"))
        w = _with_gap(pulses.constant_pulse(area, T, n=cfg.value("design", "n", args.n, 2, int)), args, cfg)
    elif builder == "figure8":
        curve = primitives.build_figure8(v)
        w = pulses.figure8_pulse(v)
    elif builder == "two-spiral":
        root = cfg.value("design", "root", args.root, 0, int)
        if root < 0:
            raise InputError("root index must be >= 0")
        curve = primitives.build_two_spiral_closed(v, root)
        w = pulses.two_spiral_pulse(v, root)
        report["zeta"] = primitives.closure_roots(root + 1)[root].zeta
    elif builder == "semicircle":
        curve = primitives.build_semicircle_sweep(v)
        smooth = cfg.value("design", "smooth", True if args.smooth else None, False, bool)
        if smooth:
            sc = _smoothing_from(cfg, args, curve, 0.01 / math.sqrt(v), 10, 7)
            curve = smooth_curve(curve, sc)
            w = pulses.pulse_from_curve(curve)
            w.meta.update({"builder": "semicircle-smoothed", "v": v, "declared_order": 2})
        else:
            w = pulses.semicircle_pulse(v)
        report["diameter"] = primitives.semicircle_diameter(v)
    elif builder == "phase-gate":
        phi_text = cfg.value("design", "phi", args.phi, "pi/4")
        phi = parse_number(phi_text)
        T = _positive(cfg.value("design", "T", args.T, 1.0, float), "T")
        w = pulses.phase_gate_pulse(phi, T)
        if w.meta.get("builder") == "phase-gate-general":
            curve = primitives.build_phase_gate_general(phi, T)
        report["phi"] = phi
    else:
        tau = cfg.value("design", "tau", args.tau, 1.0, float)
        if tau == 0:
            raise InputError("tau must be nonzero")
        trace = out_dir / f"{prefix}_trace.csv"
        design = torsion.design_torsion_pulse(v, tau, workers=_threads(args, cfg), trace_path=trace)
        curve, w = design.curve, design.pulse
        report["residual"] = design.solve.residual.norm
        report["iterations"] = design.solve.iterations
        report["params"] = np.asarray(design.solve.params)
        report["torsion_spread"] = w.meta.get("torsion_spread", float("nan"))
        extra_files["trace"] = trace
        b = design.solve.binormal
        bpath = out_dir / f"{prefix}_binormal.csv"
        geometry.write_curve_csv(b.replace(meta={}), bpath, _header(cfg, "design"))
        extra_files["binormal"] = bpath
    if curve is None:
        curve = pulses.curve_from_pulse(w.refined(2001))
    header = _header(cfg, "design")
    cpath, wpath = out_dir / f"{prefix}_curve.csv", out_dir / f"{prefix}_pulse.csv"
    cmeta = dict(header)
    cmeta.update(_scalars({k: v for k, v in curve.meta.items() if k not in ("chain",)}))
    geometry.write_curve_csv(curve.replace(meta={}), cpath, cmeta)
    write_waveform_csv(w, wpath, header)

    print(f"builder: {builder}")
    _say("curve", str(cpath))
    _say("pulse", str(wpath))
    for k, p in extra_files.items():
        _say(k, str(p))
    _say("duration", w.duration)
    _say("closure_defect", geometry.closure_defect(curve))
    _say("projected_areas", geometry.projected_areas(curve))
    _say("peak_omega", float(np.max(np.abs(w.omega))))
    if w.delta:
        _say("gap_delta", w.delta)
    for k, val in report.items():
        _say(k, val)
    _say("declared_order", w.meta.get("declared_order", "none"))
    return 0


# ---------------------------------------------------------------------------
# smooth


def _smooth(args, cfg: JobConfig):
    src = cfg.value("smooth", "input", args.input, None)
    if src is None:
        raise InputError("smooth needs --input")
    curve = geometry.read_curve_csv(src)
    out = _out(args, cfg, "smooth", "out", str(Path(src).with_name(Path(src).stem + "_smoothed.csv")))
    header = _header(cfg, "smooth")
    on_sphere = curve.dim == 3 and np.max(np.abs(np.linalg.norm(curve.points, axis=1) - 1)) < 1e-9
    sc = _smoothing_from(cfg, args, curve, float(np.median(np.diff(curve.t))), 3, 7)
    smoothed = smooth_spherical(curve, sc) if on_sphere else smooth_curve(curve, sc)
    geometry.write_curve_csv(smoothed.replace(meta={}, evaluator=None), out, header)
    _say("curve", str(out))
    _say("removed", smoothed.meta.get("removed", 0))
    if not on_sphere:
        w = pulses.pulse_from_curve(smoothed)
        wpath = out.with_name(out.stem + "_pulse.csv")
        write_waveform_csv(w, wpath, header)
        _say("pulse", str(wpath))
        _say("closure_defect", geometry.closure_defect(smoothed))
        _say("projected_areas", geometry.projected_areas(smoothed))
    else:
        _say("area_residual", torsion.area_residual(smoothed).value)
    return 0


# ---------------------------------------------------------------------------
# simulate / sweep


def _threads(args, cfg):
    n = cfg.value("run", "threads", getattr(args, "threads", None), os.cpu_count() or 1, int)
    cfg.resolved.pop("run.threads")  # results do not depend on it; keep headers identical
    if n < 1:
        raise InputError("threads must be >= 1")
    return n


def _inputs(args, cfg, section):
    files = args.input or cfg.raw(section, "input")
    if not files:
        raise InputError(f"{section} needs --input")
    if isinstance(files, str):
        files = [f.strip() for f in files.split(",") if f.strip()]
    cfg.resolved[f"{section}.input"] = list(files)
    return [(Path(f), read_waveform_csv(f)) for f in files]


def _out_dir(args, cfg, section):
    d = Path(cfg.value(section, "out_dir", args.out_dir, "."))
    if not d.is_dir():
        raise InputError(f"output directory {d} does not exist")
    return d


def _simulate(args, cfg: JobConfig):
    inputs = _inputs(args, cfg, "simulate")
    out_dir = _out_dir(args, cfg, "simulate")
    deltas = cfg.value("simulate", "delta", _floats(args.delta), None, "floats")
    grid_t = cfg.value("simulate", "delta_T", args.delta_T, "1e-4,1e-1,13")
    threads = _threads(args, cfg)
    header = _header(cfg, "simulate")
    series = []
    for path, w in inputs:
        d = np.asarray(deltas, dtype=float) if deltas else np.concatenate([[0.0], _grid(grid_t, "delta_T") / w.duration])
        p = simulator.metric_values(w, d, "p_lz", threads=threads)
        infid = simulator.metric_values(w, d, "infidelity", threads=threads)
        out = out_dir / f"{path.stem}_results.csv"
        write_table(out, {"delta": d, "p_lz": p, "fidelity": 1.0 - infid}, header)
        _say("results", str(out))
        series.append((path.stem, d, p))
    if args.plot:
        pp = out_dir / "p_lz_vs_delta.svg"
        svg.line_plot(pp, series, "noise delta", "P_LZ", logx=True, logy=True)
        _say("plot", str(pp))
    return 0


def _sweep(args, cfg: JobConfig):
    inputs = _inputs(args, cfg, "sweep")
    out_dir = _out_dir(args, cfg, "sweep")
    sigmas = cfg.value("sweep", "sigma", _floats(args.sigma), None, "floats")
    grid_t = cfg.value("sweep", "sigma_T", args.sigma_T, "1e-3,1,13")
    n = cfg.value("noise", "samples", args.samples, 100, int)
    seed = cfg.value("noise", "seed", args.seed, 0, int)
    metric = cfg.value("sweep", "metric", args.metric, "p_lz")
    threads = _threads(args, cfg)
    header = _header(cfg, "sweep")
    series = []
    for path, w in inputs:
        s = np.asarray(sigmas, dtype=float) if sigmas else _grid(grid_t, "sigma_T") / w.duration
        means, errs = [], []
        for sig in s:
            m, e = simulator.noise_average(w, simulator.NoiseModel(float(sig), n, seed), metric, threads=threads)
            means.append(m)
            errs.append(e)
        out = out_dir / f"{path.stem}_sweep.csv"
        write_table(out, {"sigma_delta": s, f"mean_{metric}": means, "stderr": errs}, header)
        _say("sweep", str(out))
        series.append((path.stem, s, np.array(means)))
    if args.plot:
        pp = out_dir / f"mean_{metric}_vs_sigma.svg"
        svg.line_plot(pp, series, "sigma_delta", f"mean {metric}", logx=True, logy=True)
        _say("plot", str(pp))
    return 0


# ---------------------------------------------------------------------------
# verify


def _load_any(path):
    meta, cols = read_table(path)
    if "omega" in cols:
        return read_waveform_csv(path), None
    if "x" in cols and "y" in cols:
        curve = geometry.read_curve_csv(path)
        if not curve.is_unit_speed:
            curve = geometry.arc_length_reparameterize(curve, n=curve.n)
        return pulses.pulse_from_curve(curve), curve
    raise InputError(f"{path}: neither a waveform (t,omega) nor a curve (t,x,y[,z]) file")


def _verify(args, cfg: JobConfig):
    src = cfg.value("verify", "input", args.input, None)
    if src is None:
        raise InputError("verify needs --input")
    w, curve = _load_any(src)
    declared = cfg.value("verify", "order", args.order, None, int)
    if declared is None:
        raw = w.meta.get("declared_order")
        if raw is None:
            raise InputError("no declared order: pass --order or use a file with declared_order metadata")
        declared = int(float(raw))
    metric = cfg.value("verify", "metric", args.metric, "infidelity")
    # six-digit tables floor the second-order residue; such files carry a wider window
    default_window = _floats(w.meta.get("verify_window")) or [1e-4, 1e-2]
    window = cfg.value("verify", "window", _floats(args.window), default_window, "floats")
    if len(window) != 2:
        raise InputError("window must be 'lo,hi'")
    m = simulator.magnus_terms(w)
    T = w.duration
    _say("duration", T)
    _say("A1_norm", float(np.linalg.norm(m.a1[-1])))
    _say("A1_norm_over_T", float(np.linalg.norm(m.a1[-1])) / T)
    _say("A2_norm", float(np.linalg.norm(m.a2[-1])))
    if curve is None:
        # error curve on a dense grid that keeps every waveform node
        md = simulator.magnus_terms(w.refined(4001))
        _say("unit_speed_residual", geometry.speed_residual(md.t, md.a1))
    else:
        _say("unit_speed_residual", geometry.speed_residual(curve.t, curve.points))
    if w.delta == 0:
        _say("torsion", "planar")
    else:
        try:
            ec = curve if curve is not None else pulses.curve_from_pulse(w.refined(4001))
            tau, spread = geometry.frenet_data(ec)[1].torsion_spread()
            _say("torsion", tau)
            _say("torsion_spread", spread)
        except LZError as exc:
            _say("torsion", f"unavailable ({exc})")
    rob = simulator.robustness_order(w, metric, tuple(window))
    _say("metric", rob.metric)
    _say("slope", rob.slope)
    _say("measured_order", "unclassified" if rob.order is None else rob.order)
    _say("declared_order", declared)
    if rob.order is None:
        raise VerificationError(f"ambiguous robustness: measured slope {rob.slope:.3f}")
    if rob.order != declared:
        raise VerificationError(f"measured order {rob.order} (slope {rob.slope:.3f}) != declared {declared}")
    print("verified: yes")
    return 0


# ---------------------------------------------------------------------------
# scaling


def _scaling(args, cfg: JobConfig):
    out_dir = _out_dir(args, cfg, "scaling")
    x_max = _positive(cfg.value("scaling", "x_max", args.x_max, 1.0, float), "x_max")
    n = cfg.value("scaling", "points", args.points, 201, int)
    if n < 4:
        raise InputError("scaling needs at least 4 points")
    x = np.linspace(0.0, x_max, n + 1)[1:]
    header = _header(cfg, "scaling")
    analytic = cfg.value("scaling", "analytic", True if args.analytic else None, False, bool)
    if analytic:
        name = "infinite"
        y = -0.5 * math.pi * x
    else:
        src = cfg.value("scaling", "input", args.input, None)
        if src is None:
            raise InputError("scaling needs --input or --analytic")
        w = read_waveform_csv(src)
        ref_v = cfg.value("scaling", "reference_v", args.reference_v, float(w.meta.get("v", 1.0)), float)
        delta = _positive(cfg.value("scaling", "delta", args.delta, 1.0, float), "delta")
        v_list = (2 * delta) ** 2 / x
        x, y = simulator.scaling_data(w, v_list, delta, ref_v)
        name = Path(src).stem
    fit = simulator.quartic_fit(x, y)
    out = out_dir / f"{name}_scaling.csv"
    meta = dict(header)
    meta.update({f"c{k + 1}": repr(float(c)) for k, c in enumerate(fit.coefficients)})
    write_table(out, {"x": x, "log1m_plz": y}, meta)
    _say("scaling", str(out))
    for k, c in enumerate(fit.coefficients):
        _say(f"c{k + 1}", float(c))
    if args.plot:
        pp = out_dir / f"{name}_scaling.svg"
        svg.line_plot(pp, [(name, x, y), ("quartic fit", x, fit(x))], "x = (2 delta)^2 / v", "log(1 - P_LZ)")
        _say("plot", str(pp))
    return 0


# ---------------------------------------------------------------------------
# plot


def _plot(args, cfg: JobConfig):
    if not args.input:
        raise InputError("plot needs --input")
    out = ensure_writable(args.out)
    series = []
    xlabel = ylabel = ""
    for f in args.input:
        _, cols = read_table(f)
        names = list(cols)
        xc = args.x or names[0]
        yc = args.y or names[1]
        if xc not in cols or yc not in cols:
            raise InputError(f"{f}: columns {xc!r}/{yc!r} not found (have {', '.join(names)})")
        series.append((Path(f).stem, cols[xc], cols[yc]))
        xlabel, ylabel = xc, yc
    svg.line_plot(out, series, xlabel, ylabel, args.title or "", args.logx, args.logy)
    _say("plot", str(out))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="INI file with per-command sections; flags override it")
    common.add_argument("--threads", type=int, help="worker threads (default: all cores)")

    p = _Parser(prog="lzsweep", description="Design and verify noise-robust Landau-Zener pulses.")
    p.add_argument("--version", action="version", version=f"lzsweep {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    d = sub.add_parser("design", parents=[common], help="build a curve and its pulse")
    d.add_argument("--builder", choices=BUILDERS)
    d.add_argument("--v", type=float, help="sweep velocity (torsion: in units of tau^2)")
    d.add_argument("--T", type=float, help="duration (linear, constant, phase-gate)")
    d.add_argument("--n", type=int, help="samples (linear, constant)")
    d.add_argument("--root", type=int, help="closure root index (two-spiral)")
    d.add_argument("--area", help="pulse area, e.g. 2*pi (constant)")
    d.add_argument("--phi", help="rotation angle, e.g. pi/4 (phase-gate)")
    d.add_argument("--tau", type=float, help="torsion (torsion builder)")
    d.add_argument("--gap", type=float, help="constant gap Delta (linear, constant)")
    d.add_argument("--smooth", action="store_true", help="smooth the semicircle sweep")
    d.add_argument("--step", type=float, help="smoothing grid step")
    d.add_argument("--order", type=int, help="smoothing spline degree")
    d.add_argument("--points", type=int, help="points removed per join")
    d.add_argument("--remove", help="explicit removals [(loc, before, after), ...]")
    d.add_argument("--out-dir", dest="out_dir")
    d.add_argument("--prefix")

    s = sub.add_parser("smooth", parents=[common], help="remove-and-refit smoothing of a curve file")
    s.add_argument("--input")
    s.add_argument("--out")
    s.add_argument("--step", type=float)
    s.add_argument("--order", type=int)
    s.add_argument("--points", type=int, help="points removed per join (uses the file's join list)")
    s.add_argument("--remove", help="[(loc, before, after), ...]")

    m = sub.add_parser("simulate", parents=[common], help="P_LZ and fidelity versus noise")
    m.add_argument("--input", nargs="+")
    m.add_argument("--delta", help="comma list of noise values")
    m.add_argument("--delta-T", dest="delta_T", help="log grid 'lo,hi,n' of delta*T (default 1e-4,1e-1,13)")
    m.add_argument("--out-dir", dest="out_dir")
    m.add_argument("--plot", action="store_true")

    w = sub.add_parser("sweep", parents=[common], help="noise-averaged metric versus sigma")
    w.add_argument("--input", nargs="+")
    w.add_argument("--sigma", help="comma list of sigma_delta values")
    w.add_argument("--sigma-T", dest="sigma_T", help="log grid 'lo,hi,n' of sigma*T (default 1e-3,1,13)")
    w.add_argument("--samples", type=int)
    w.add_argument("--seed", type=int)
    w.add_argument("--metric", choices=simulator.METRICS)
    w.add_argument("--out-dir", dest="out_dir")
    w.add_argument("--plot", action="store_true")

    v = sub.add_parser("verify", parents=[common], help="check closure, areas and robustness order")
    v.add_argument("--input")
    v.add_argument("--order", type=int, help="declared order (default: file metadata)")
    v.add_argument("--metric", choices=simulator.METRICS)
    v.add_argument("--window", help="delta*T range 'lo,hi' for the slope fit")

    c = sub.add_parser("scaling", parents=[common], help="quartic fit of log(1 - P_LZ)")
    c.add_argument("--input")
    c.add_argument("--analytic", action="store_true", help="infinite-sweep reference instead of a file")
    c.add_argument("--reference-v", dest="reference_v", type=float)
    c.add_argument("--delta", type=float)
    c.add_argument("--x-max", dest="x_max", type=float)
    c.add_argument("--points", type=int)
    c.add_argument("--out-dir", dest="out_dir")
    c.add_argument("--plot", action="store_true")

    g = sub.add_parser("plot", parents=[common], help="SVG line plot of CSV columns")
    g.add_argument("--input", nargs="+")
    g.add_argument("--x")
    g.add_argument("--y")
    g.add_argument("--logx", action="store_true")
    g.add_argument("--logy", action="store_true")
    g.add_argument("--title")
    g.add_argument("--out", default="plot.svg")
    return p


COMMANDS = {"design": _design, "smooth": _smooth, "simulate": _simulate, "sweep": _sweep,
            "verify": _verify, "scaling": _scaling, "plot": _plot}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors, --help, --version
        return exc.code if isinstance(exc.code, int) else 1
    if args.command is None:
        parser.print_help(sys.stderr)
        return 1
    try:
        cfg = JobConfig.load(args.config)
        return COMMANDS[args.command](args, cfg)
    except LZError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
