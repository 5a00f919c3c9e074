"""Noise-robust Landau-Zener pulses from space curves.

Closed plane curves give first-order robust pulses, zero-area ones second
order; closed constant-torsion space curves give pulses with a finite gap.
"""
from importlib.metadata import PackageNotFoundError, version as _version

try:
    __version__ = _version("artifact")
except PackageNotFoundError:  # pragma: no cover - source checkout
    __version__ = "0.1.0"

from ._backend import NAME as BACKEND
from .errors import (ContractError, DegenerateError, DomainError, InputError, LZError, ResolutionError,
                     SolverError, StiffnessError, VerificationError)
from .geometry import (SampledCurve, arc_length, arc_length_reparameterize, closure_defect, evolute,
                       frenet_data, integrate_frenet, projected_areas, read_curve_csv, self_intersects,
                       write_curve_csv)
from .primitives import (Chain, SegmentSpec, build_figure8, build_phase_gate_general, build_phase_gate_square,
                         build_semicircle_sweep, build_two_spiral_closed, closure_roots, euler_spiral, fresnel)
from .pulses import (curve_from_pulse, constant_pulse, figure8_pulse, linear_pulse, phase_gate_pulse,
                     pulse_from_curve, semicircle_pulse, two_spiral_pulse)
from .simulator import (NoiseModel, evolve, gate_angle, magnus_terms, noise_average, robustness_order,
                        scaling_fit)
from .smoothing import SmoothingConfig, smooth_curve, smooth_spherical
from .torsion import area_balance_solve, design_torsion_pulse, extract_lz_pulse, integrate_constant_torsion
from .waveform import Waveform, read_waveform_csv, write_waveform_csv

__all__ = [name for name in dir() if not name.startswith("_")]
