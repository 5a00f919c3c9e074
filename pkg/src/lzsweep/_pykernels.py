"""Pure numpy implementation of the hot kernels.

Propagation
-----------
H(t) = a(t).sigma with a = (hx, 0, omega/2), omega linear between samples.
Every waveform interval is split into ``ceil(h / max_step)`` equal sub-steps.
A sub-step of length h uses the two-point 4th-order Magnus vector

    A = h/2 (a1 + a2) - sqrt(3)/6 h^2 (a1 x a2),

with a1, a2 taken at the Gauss points, and the exact exponential
exp(-i A.sigma).  Unitaries are stored as the SU(2) pair (alpha, beta),
U = [[alpha, -conj(beta)], [beta, conj(alpha)]].

Error curve
-----------
The tangent of r(t) is the Pauli vector of U0^dag sigma_x U0,
(Re(alpha^2 - beta^2), Im(alpha^2 - beta^2), 2 Re(conj(alpha) beta)).
It is integrated with 3-point Gauss-Legendre collocation inside each
sub-step; the same nodes give int r x r' dt.

Sequential products are replaced by a doubling scan, so everything is
vectorized.
"""
import numpy as np

_R3 = np.sqrt(3.0) / 6.0
_NODES = np.array([0.5 - np.sqrt(15.0) / 10.0, 0.5, 0.5 + np.sqrt(15.0) / 10.0])
_WEIGHTS = np.array([5.0, 8.0, 5.0]) / 18.0
_S15 = np.sqrt(15.0)
_COLLOC = np.array(
    [
        [5 / 36, 2 / 9 - _S15 / 15, 5 / 36 - _S15 / 30],
        [5 / 36 + _S15 / 24, 2 / 9, 5 / 36 - _S15 / 24],
        [5 / 36 + _S15 / 30, 2 / 9 + _S15 / 15, 5 / 36],
    ]
)


def _substeps(t, omega, max_step):
    h = np.diff(t)
    m = np.maximum(np.ceil(h / max_step).astype(np.intp), 1)
    owner = np.repeat(np.arange(len(h)), m)
    start = np.concatenate(([0], np.cumsum(m)[:-1]))
    k = np.arange(owner.size) - start[owner]
    frac_a = k / m[owner]
    frac_b = (k + 1) / m[owner]
    d_om = np.diff(omega)[owner]
    oa = omega[owner] + d_om * frac_a
    ob = omega[owner] + d_om * frac_b
    return (h / m)[owner], oa, ob, np.cumsum(m) - 1


def _step(hx, oa, ob, h):
    o1 = oa + (0.5 - _R3) * (ob - oa)
    o2 = oa + (0.5 + _R3) * (ob - oa)
    ax = h * hx
    ay = -0.5 * _R3 * h * h * hx * (o1 - o2)
    az = 0.25 * h * (o1 + o2)
    th = np.sqrt(ax * ax + ay * ay + az * az)
    safe = np.where(th > 1e-300, th, 1.0)
    s = np.where(th > 1e-300, np.sin(th) / safe, 1.0)
    return np.cos(th) - 1j * az * s, (ay - 1j * ax) * s


def _mul(sa, sb, a, b):
    # S . U for SU(2) pairs
    return sa * a - np.conj(sb) * b, sb * a + np.conj(sa) * b


def _prefix(a, b):
    """Inclusive scan: P_k = S_k ... S_0."""
    a = a.copy()
    b = b.copy()
    d = 1
    n = a.size
    while d < n:
        na, nb = _mul(a[d:], b[d:], a[:-d], b[:-d])
        a[d:] = na
        b[d:] = nb
        d *= 2
    nrm = np.sqrt(np.abs(a) ** 2 + np.abs(b) ** 2)
    return a / nrm, b / nrm


def _reduce(a, b):
    while a.size > 1:
        if a.size % 2:
            a = np.append(a, 1.0 + 0j)
            b = np.append(b, 0j)
        a, b = _mul(a[1::2], b[1::2], a[0::2], b[0::2])
    nrm = np.sqrt(abs(a[0]) ** 2 + abs(b[0]) ** 2)
    return complex(a[0] / nrm), complex(b[0] / nrm)


def propagate(t, omega, hx, max_step):
    h, oa, ob, _ = _substeps(np.asarray(t), np.asarray(omega), max_step)
    return _reduce(*_step(hx, oa, ob, h))


def propagate_batch(t, omega, hx, max_step):
    h, oa, ob, _ = _substeps(np.asarray(t), np.asarray(omega), max_step)
    out = [_reduce(*_step(x, oa, ob, h)) for x in np.asarray(hx)]
    alpha = np.array([o[0] for o in out], dtype=complex)
    beta = np.array([o[1] for o in out], dtype=complex)
    return alpha, beta


def _tangent(a, b):
    s = a * a - b * b
    return np.stack([s.real, s.imag, 2.0 * (np.conj(a) * b).real], axis=-1)


def error_curve(t, omega, hx, max_step):
    t = np.asarray(t)
    omega = np.asarray(omega)
    h, oa, ob, last = _substeps(t, omega, max_step)
    pa, pb = _prefix(*_step(hx, oa, ob, h))
    # propagator at the start of every sub-step
    ua = np.concatenate(([1.0 + 0j], pa[:-1]))
    ub = np.concatenate(([0j], pb[:-1]))
    tau = []
    for c in _NODES:
        sa, sb = _step(hx, oa, oa + c * (ob - oa), c * h)
        tau.append(_tangent(*_mul(sa, sb, ua, ub)))
    tau = np.stack(tau, axis=1)  # (steps, node, xyz)
    hh = h[:, None]
    dr = hh * np.einsum("j,sjl->sl", _WEIGHTS, tau)
    d = hh[:, :, None] * np.einsum("jm,sml->sjl", _COLLOC, tau)
    local = hh * np.einsum("j,sjl->sl", _WEIGHTS, np.cross(d, tau))
    r_end = np.cumsum(dr, axis=0)
    r_start = r_end - dr
    q_end = np.cumsum(np.cross(r_start, dr) + local, axis=0)
    n = t.size
    r = np.zeros((n, 3))
    q = np.zeros((n, 3))
    alpha = np.empty(n, dtype=complex)
    beta = np.empty(n, dtype=complex)
    r[1:] = r_end[last]
    q[1:] = q_end[last]
    alpha[0], beta[0] = 1.0, 0.0
    alpha[1:] = pa[last]
    beta[1:] = pb[last]
    return r, q, alpha, beta


def _orient(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def segment_crossings(xy, closed, tol, block=64):
    xy = np.asarray(xy, dtype=float)
    n = len(xy) - 1
    p, q = xy[:-1], xy[1:]
    lo = np.minimum(p, q)
    hi = np.maximum(p, q)
    pairs, flags = [], []
    for i0 in range(0, n, block):
        i = np.arange(i0, min(i0 + block, n))[:, None]
        j = np.arange(n)[None, :]
        keep = j >= i + 2
        if closed:
            keep &= ~((i == 0) & (j == n - 1))
        keep &= (hi[j, 0] >= lo[i, 0] - tol) & (lo[j, 0] <= hi[i, 0] + tol)
        keep &= (hi[j, 1] >= lo[i, 1] - tol) & (lo[j, 1] <= hi[i, 1] + tol)
        ii, jj = np.nonzero(keep)
        if ii.size == 0:
            continue
        ii = ii + i0
        a, b, c, e = p[ii], q[ii], p[jj], q[jj]
        d1 = _orient(a[:, 0], a[:, 1], b[:, 0], b[:, 1], c[:, 0], c[:, 1])
        d2 = _orient(a[:, 0], a[:, 1], b[:, 0], b[:, 1], e[:, 0], e[:, 1])
        d3 = _orient(c[:, 0], c[:, 1], e[:, 0], e[:, 1], a[:, 0], a[:, 1])
        d4 = _orient(c[:, 0], c[:, 1], e[:, 0], e[:, 1], b[:, 0], b[:, 1])
        unsure = (np.abs(d1) <= tol) | (np.abs(d2) <= tol) | (np.abs(d3) <= tol) | (np.abs(d4) <= tol)
        hit = ((d1 > 0) != (d2 > 0)) & ((d3 > 0) != (d4 > 0)) & ~unsure
        sel = unsure | hit
        pairs.append(np.stack([ii[sel], jj[sel]], axis=1))
        flags.append(unsure[sel])
    if not pairs:
        return np.zeros((0, 2), dtype=np.intp), np.zeros(0, dtype=bool)
    pairs = np.concatenate(pairs).astype(np.intp)
    flags = np.concatenate(flags)
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    return pairs[order], flags[order]
