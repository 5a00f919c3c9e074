import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize, rosen

import oracles
from lzsweep.errors import InputError
from lzsweep.optimize import initial_simplex, nelder_mead


def test_rosenbrock_matches_scipy():
    ours = nelder_mead(rosen, [-1.2, 1.0], max_iter=5000)
    ref = minimize(rosen, [-1.2, 1.0], method="Nelder-Mead", options=dict(xatol=1e-10, fatol=1e-14, maxiter=5000))
    assert ours.converged and ours.reason == "tolerance"
    assert np.allclose(ours.x, oracles.ROSENBROCK_MIN, atol=1e-8)
    assert np.allclose(ours.x, ref.x, atol=1e-8)


def test_thread_count_does_not_change_the_path():
    a = nelder_mead(rosen, [-1.2, 1.0, 0.5], max_iter=300)
    b = nelder_mead(rosen, [-1.2, 1.0, 0.5], max_iter=300, workers=4)
    assert np.array_equal(a.x, b.x) and a.evaluations == b.evaluations
    assert [r.f for r in a.trace] == [r.f for r in b.trace]


def test_target_stops_early_and_trace_is_monotone():
    r = nelder_mead(lambda x: float(np.sum(x**2)), [1.0, 2.0], f_target=1e-4)
    assert r.reason == "target" and r.f <= 1e-4
    fs = [row.f for row in r.trace]
    assert all(b <= a for a, b in zip(fs, fs[1:]))
    assert [row.iteration for row in r.trace] == list(range(len(fs)))


def test_max_iter_reports_not_converged():
    r = nelder_mead(rosen, [-1.2, 1.0], max_iter=5)
    assert not r.converged and r.reason == "max_iter" and r.iterations == 5


def test_bad_inputs():
    with pytest.raises(InputError):
        nelder_mead(rosen, [])
    with pytest.raises(InputError):
        nelder_mead(rosen, [1.0, 2.0], simplex=np.zeros((2, 2)))


def test_initial_simplex():
    s = initial_simplex([2.0, 0.0])
    assert np.allclose(s, [[2, 0], [2.1, 0], [2, 2.5e-4]])


# a coordinate like 1e-250 gets a 5 % step of 1e-251 and the simplex collapses in that
# direction; scipy shares this initial-simplex rule, so such starts are excluded
coord = st.floats(-3, 3).filter(lambda x: x == 0 or abs(x) > 1e-3)


@settings(max_examples=25)
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=4), st.lists(coord, min_size=4, max_size=4))
def test_finds_quadratic_minimum(centre, start):
    c = np.array(centre)
    x0 = np.array(start[: len(c)])
    w = np.arange(1.0, len(c) + 1)
    r = nelder_mead(lambda x: float(np.sum(w * (x - c) ** 2)), x0, max_iter=4000)
    assert np.allclose(r.x, c, atol=1e-6)
