import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lzsweep import geometry, primitives
from lzsweep.errors import ContractError, DomainError, InputError
from lzsweep.geometry import SampledCurve
from lzsweep.smoothing import (OverSmoothingError, SmoothingConfig, lift_to_sphere, removal_mask, smooth_curve,
                               smooth_spherical)


def test_config_validation():
    with pytest.raises(InputError):
        SmoothingConfig(0.0)
    with pytest.raises(InputError):
        SmoothingConfig(0.1, order=1)
    with pytest.raises(InputError):
        SmoothingConfig(0.1, 3, ((1.0, 2),))
    with pytest.raises(InputError):
        SmoothingConfig(0.1, 3, ((1.0, -1, 2),))
    with pytest.raises(InputError):
        SmoothingConfig(0.1, 3, ((1.0, 0, 0),))


@given(st.integers(2, 30))
def test_symmetric_split_counts(n):
    (loc, nb, na), = SmoothingConfig.symmetric(0.1, 3, [1.0], n).removals
    assert nb + na + 1 == n and 0 <= na - nb <= 1


@given(st.integers(0, 10), st.integers(0, 10), st.floats(0.2, 0.8))
def test_removal_mask_removes_window(nb, na, frac):
    if nb + na == 0:
        return
    s = np.linspace(0, 1, 101)
    m = removal_mask(s, SmoothingConfig(0.01, 3, ((frac, nb, na),)))
    centre = int(np.argmin(np.abs(s - frac)))
    assert (~m).sum() == nb + na + 1
    assert not m[centre - nb] and not m[centre + na]
    assert m[centre - nb - 1] and m[centre + na + 1]


def test_removal_errors():
    s = np.linspace(0, 1, 101)
    with pytest.raises(DomainError):
        removal_mask(s, SmoothingConfig(0.01, 3, ((2.0, 1, 1),)))
    with pytest.raises(OverSmoothingError):
        removal_mask(s, SmoothingConfig(0.01, 3, ((0.5, 30, 30),)))


def _kappa(c):
    return geometry.frenet_data(c)[1].curvature


@settings(max_examples=10)
@given(st.floats(0.3, 5), st.integers(3, 11), st.integers(3, 10))
def test_semicircle_smoothing_properties(v, order, npts):
    raw = primitives.build_semicircle_sweep(v, density=400)
    step = 0.01 / math.sqrt(v)
    cfg = SmoothingConfig.symmetric(step, order, raw.meta["joins"], npts)
    sm = smooth_curve(raw, cfg)
    assert sm.is_unit_speed and sm.n == raw.n
    assert sm.length == pytest.approx(raw.length, rel=1e-3)
    assert geometry.closure_defect(sm) < 1e-9 / math.sqrt(v)
    # never further than 10 steps from the input curve
    assert geometry.hausdorff(sm, raw) <= 10 * step
    # the curvature jump of 2/d at each join is gone: the spline is C^2 for order >= 3
    eps = 1e-7 / math.sqrt(v)
    for j in raw.meta["joins"]:
        k = np.linalg.norm(sm.evaluate(np.array([j - eps, j + eps]), 2), axis=1)
        assert abs(k[1] - k[0]) < 1e-3 * 2 / primitives.semicircle_diameter(v)


def test_smooth_input_is_reproduced():
    s = np.linspace(0, 2 * math.pi, 2001)
    c = SampledCurve(s, np.column_stack([np.sin(s), 1 - np.cos(s)]), is_unit_speed=True)
    sm = smooth_curve(c, SmoothingConfig(0.01, 5, ((2.0, 3, 3), (4.0, 2, 4))))
    assert geometry.hausdorff(sm, c) < 1e-9
    assert np.allclose(_kappa(sm), 1.0, atol=1e-6)


def test_spherical_smoothing_stays_on_sphere():
    s = np.linspace(0, 2, 401)
    xy = np.column_stack([0.5 * np.cos(3 * s) * s / 2, 0.4 * np.sin(2 * s)])
    xy[200:] += [0.05, 0.0]  # a kink
    c = SampledCurve(s, lift_to_sphere(xy))
    sm = smooth_spherical(c, SmoothingConfig(0.005, 3, ((1.0, 3, 3),)))
    assert np.array_equal(sm.t, c.t)
    assert np.allclose(np.linalg.norm(sm.points, axis=1), 1.0, atol=1e-15)
    d = sm.evaluate(s, 1)
    assert np.allclose(np.einsum("ij,ij->i", d, sm.points), 0.0, atol=1e-12)


def test_spherical_contract():
    s = np.linspace(0, 1, 20)
    with pytest.raises(ContractError):
        smooth_spherical(SampledCurve(s, np.column_stack([s, s])), SmoothingConfig(0.05))
    with pytest.raises(ContractError):
        smooth_spherical(SampledCurve(s, np.column_stack([s, s, s])), SmoothingConfig(0.05))
    with pytest.raises(DomainError):
        lift_to_sphere([[1.0, 0.1]])
