import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

import oracles
from lzsweep import geometry, primitives as pr
from lzsweep.errors import DomainError, InputError
from lzsweep.simulator import angle_distance, evolve


def _scipy_fresnel(w):
    k = math.sqrt(2 / math.pi)
    s, c = special.fresnel(np.asarray(w) * k)
    return c / k, s / k


@pytest.mark.parametrize("w,c,s", oracles.FRESNEL)
def test_fresnel_against_mpmath(w, c, s):
    got = pr.fresnel(w)
    assert got[0] == pytest.approx(c, abs=1e-13) and got[1] == pytest.approx(s, abs=1e-13)
    neg = pr.fresnel(-w)
    assert neg == (-got[0], -got[1])


@given(st.floats(-40, 40))
def test_fresnel_against_scipy(w):
    c, s = pr.fresnel(np.array([w]))
    rc, rs = _scipy_fresnel(w)
    assert abs(c[0] - rc) < 1e-12 and abs(s[0] - rs) < 1e-12


def test_fresnel_limits():
    c, s = pr.fresnel(1e6)
    assert c == pytest.approx(math.sqrt(math.pi / 8), abs=1e-6)
    assert s == pytest.approx(math.sqrt(math.pi / 8), abs=1e-6)
    assert pr.fresnel(0.0) == (0.0, 0.0)


def test_closure_roots_against_mpmath():
    roots = pr.closure_roots(3)
    assert [r.index for r in roots] == [0, 1, 2]
    for r, ref in zip(roots, oracles.CLOSURE_ROOTS):
        assert r.zeta == pytest.approx(ref, abs=1e-12)
        assert abs(pr.closure_residual(r.zeta)) < 1e-13
    assert pr.zeta0() == roots[0].zeta
    with pytest.raises(InputError):
        pr.closure_roots(0)


def test_many_roots_are_increasing():
    z = [r.zeta for r in pr.closure_roots(12)]
    assert np.all(np.diff(z) > 0) and z[-1] > 8


@given(st.floats(0.05, 50))
def test_euler_spiral_is_unit_speed_with_curvature_minus_vt(v):
    T = 3 / math.sqrt(v)
    t = np.linspace(0, T, 3001)
    c = geometry.SampledCurve(t, pr.euler_spiral(v, t), is_unit_speed=True)
    k = geometry.frenet_data(c)[1].curvature
    assert np.allclose(k, -v * t, atol=1e-6 * v * T)
    with pytest.raises(InputError):
        pr.euler_spiral(-v, t)


def test_segment_validation():
    with pytest.raises(InputError):
        pr.SegmentSpec.arc(-1, 1)
    with pytest.raises(InputError):
        pr.SegmentSpec.arc(1, 1, "up")
    with pytest.raises(InputError):
        pr.SegmentSpec.spiral(1, 0.5, 0.5)
    with pytest.raises(InputError):
        pr.SegmentSpec.line(0)
    with pytest.raises(InputError):
        pr.SegmentSpec("blob")
    with pytest.raises(InputError):
        pr.Chain([])


@given(st.lists(st.sampled_from(["arc", "cw", "line", "spiral", "back"]), min_size=1, max_size=6))
def test_chain_is_c1_and_exact(kinds):
    specs = []
    for k in kinds:
        specs.append({"arc": pr.SegmentSpec.arc(0.7, 1.1), "cw": pr.SegmentSpec.arc(1.3, 0.8, "cw"),
                      "line": pr.SegmentSpec.line(0.4), "spiral": pr.SegmentSpec.spiral(2.0, -0.3, 0.9),
                      "back": pr.SegmentSpec.spiral(1.0, 1.0, 0.2, mirror=True)}[k])
    ch = pr.Chain(specs)
    j = np.array(ch.joins)
    if j.size:
        eps = 1e-9
        assert np.allclose(ch(j - eps), ch(j + eps), atol=1e-8)
        assert np.allclose(ch(j - eps, 1), ch(j + eps, 1), atol=1e-7)
    c = ch.sample(n=4001)
    assert c.is_unit_speed
    assert np.allclose(c.points[-1], ch.end_point, atol=1e-12)
    # the chain starts at the origin, so the closing chord adds no area
    poly = geometry.projected_areas(c, closed=True)[2]
    assert ch.signed_area() == pytest.approx(poly, abs=1e-5)


@settings(max_examples=15)
@given(st.floats(0.05, 20))
def test_closed_builders(v):
    tol = 1e-12 / math.sqrt(v) * 100
    for curve in (pr.build_figure8(v, density=200), pr.build_semicircle_sweep(v, density=200),
                  pr.build_two_spiral_closed(v, density=200)):
        ch = curve.meta["chain"]
        assert np.linalg.norm(ch.end_point) < tol
        assert curve.is_unit_speed
    assert abs(pr.figure8_chain(v).signed_area()) < 1e-12 / v
    assert abs(pr.semicircle_chain(v).signed_area()) < 1e-12 / v
    # the two-spiral closes with a nonzero area that scales like 1/v
    assert pr.two_spiral_chain(v).signed_area() * v == pytest.approx(pr.two_spiral_chain(1.0).signed_area(), rel=1e-9)


def test_figure8_and_two_spiral_lengths():
    z = oracles.CLOSURE_ROOTS[0]
    assert pr.figure8_chain(4.0).length == pytest.approx(4 * z / 2)
    assert pr.two_spiral_chain(4.0).length == pytest.approx(2 * z / 2)
    w = pr.two_spiral_chain(9.0).pulse()
    assert np.max(np.abs(w.omega)) == pytest.approx(z * 3, rel=1e-12)


def test_semicircle_geometry_against_mpmath():
    assert pr.semicircle_diameter(1.0) == pytest.approx(oracles.SEMICIRCLE_D, rel=1e-13)
    ch = pr.semicircle_chain(1.0)
    assert ch.length == pytest.approx(oracles.SEMICIRCLE_T, rel=1e-13)
    assert ch.pieces[0]["length"] == pytest.approx(oracles.SEMICIRCLE_TCIRC, rel=1e-13)
    w = ch.pulse()
    assert w.omega[0] == pytest.approx(-oracles.SEMICIRCLE_OMEGA, rel=1e-12)
    assert w.omega[-1] == pytest.approx(oracles.SEMICIRCLE_OMEGA, rel=1e-12)


@given(st.floats(0.01, 100))
def test_semicircle_scales_with_sqrt_v(v):
    assert pr.semicircle_diameter(v) * math.sqrt(v) == pytest.approx(oracles.SEMICIRCLE_D, rel=1e-12)


@given(st.floats(0.1, 10))
def test_chain_pulse_is_minus_curvature(v):
    ch = pr.figure8_chain(v)
    w = ch.pulse()
    assert np.allclose(w.omega, -ch.curvature(w.t), atol=1e-9 * v)
    assert w.duration == pytest.approx(ch.length)


def test_square_gates():
    for key in ("pi/4", "pi"):
        w = pr.build_phase_gate_square(key, T=2.0)
        assert w.duration == 2.0 and w.meta["declared_order"] == 2
        assert pr._gate_key(math.pi if key == "pi" else math.pi / 4) == key
    with pytest.raises(DomainError):
        pr.build_phase_gate_square(1.0)


@settings(max_examples=15)
@given(st.floats(0.01, 2 * math.pi - 0.01), st.floats(0.3, 5))
def test_general_gate_is_closed_zero_area_and_rotates_by_phi(phi, T):
    c = pr.build_phase_gate_general(phi, T)
    ch = c.meta["chain"]
    assert ch.length == pytest.approx(T, rel=1e-12)
    assert np.linalg.norm(ch.end_point) < 1e-9 * T
    assert abs(ch.signed_area()) < 1e-12 * T * T
    assert angle_distance(ch.end_heading, phi) < 1e-9
    assert c.meta["corner_radius"] == pytest.approx(0.05 * T, rel=1e-9)
    w = ch.pulse()
    assert angle_distance(-w.area(), phi) < 1e-9
    assert angle_distance(evolve(w).gate_angle, phi) < 1e-6


def test_general_gate_domain():
    with pytest.raises(DomainError):
        pr.build_phase_gate_general(0.001)
    with pytest.raises(DomainError):
        pr.build_phase_gate_general(2 * math.pi)
