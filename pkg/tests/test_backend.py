import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lzsweep import _backend, geometry, pulses
from lzsweep.simulator import evolve, metric_values

cy = _backend.compiled_kernels
py = _backend.python_kernels
needs_compiled = pytest.mark.skipif(cy is None, reason="compiled kernels not built")


@needs_compiled
def test_compiled_backend_is_the_default():
    assert _backend.NAME == "cython" and _backend.get() is cy
    assert _backend.get("numpy") is py
    with pytest.raises(ValueError):
        _backend.get("fortran")


@needs_compiled
@settings(max_examples=20)
@given(st.floats(-3, 3), st.floats(0, 2), st.floats(-0.3, 0.3), st.integers(2, 40))
def test_propagators_agree(a, gap, noise, n):
    t = np.linspace(0, 4, n)
    om = np.ascontiguousarray(a * np.cos(1.7 * t))
    args = (t, om, 0.5 * gap + noise, 0.01)
    ac, bc = cy.propagate(*args)
    ap, bp = py.propagate(*args)
    assert abs(ac - ap) < 1e-12 and abs(bc - bp) < 1e-12
    rc, qc, _, _ = cy.error_curve(*args)
    rp, qp, _, _ = py.error_curve(*args)
    assert np.allclose(rc, rp, atol=1e-11) and np.allclose(qc, qp, atol=1e-11)


@needs_compiled
def test_batch_and_high_level_agree():
    w = pulses.semicircle_pulse(1.0)
    d = np.geomspace(1e-4, 1e-1, 16)
    assert np.allclose(metric_values(w, d, backend="cython"), metric_values(w, d, backend="numpy"),
                       rtol=1e-9, atol=1e-20)
    rc, rp = evolve(w, 0.05, backend="cython"), evolve(w, 0.05, backend="numpy")
    assert rc.backend == "cython" and rp.backend == "numpy"
    assert np.allclose(rc.unitary, rp.unitary, atol=1e-12)


@needs_compiled
@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=4, max_size=30), st.booleans())
def test_crossing_kernels_agree(pts, closed):
    xy = np.ascontiguousarray(np.array(pts, dtype=float))
    pc, fc = cy.segment_crossings(xy, closed, 1e-12)
    pp, fp = py.segment_crossings(xy, closed, 1e-12)
    assert sorted(map(tuple, np.asarray(pc).reshape(-1, 2))) == sorted(map(tuple, np.asarray(pp).reshape(-1, 2)))


def test_pure_python_fallback_selected_by_environment():
    code = ("from lzsweep import _backend, BACKEND, pulses\n"
            "from lzsweep.simulator import robustness_order\n"
            "print(_backend.NAME, BACKEND, robustness_order(pulses.figure8_pulse()).order)")
    env = dict(os.environ, LZSWEEP_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "numpy", "2"]


def test_fallback_geometry_matches(monkeypatch):
    s = np.linspace(0, 2 * np.pi, 801)
    eight = geometry.SampledCurve(s, np.column_stack([np.sin(s), np.sin(s) * np.cos(s)]))
    expected = geometry.self_intersects(eight)
    monkeypatch.setattr(_backend, "kernels", py)
    got = geometry.self_intersects(eight)
    assert got[0] == expected[0] and np.allclose(got[1], expected[1])
