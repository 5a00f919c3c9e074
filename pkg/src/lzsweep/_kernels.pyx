# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.

Same API as :mod:`lzsweep._pykernels`; see that module for the maths.
The propagator works on the SU(2) pair (alpha, beta) with
U = [[alpha, -conj(beta)], [beta, conj(alpha)]].
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, cos, sin, ceil, fabs

cnp.import_array()

cdef double R3 = 0.28867513459481287   # sqrt(3)/6
cdef double R15 = 0.3872983346207417   # sqrt(15)/10
cdef double GW0 = 5.0 / 18.0
cdef double GW1 = 8.0 / 18.0
# Gauss-Legendre collocation matrix: A[j][m] = int_0^{c_j} L_m
cdef double[3][3] GA = [
    [5.0 / 36.0, 2.0 / 9.0 - 0.2581988897471611, 5.0 / 36.0 - 0.12909944487358055],
    [5.0 / 36.0 + 0.16137430609197573, 2.0 / 9.0, 5.0 / 36.0 - 0.16137430609197573],
    [5.0 / 36.0 + 0.12909944487358055, 2.0 / 9.0 + 0.2581988897471611, 5.0 / 36.0],
]


cdef inline void _step(double hx, double oa, double ob, double h,
                       double *ar, double *ai, double *br, double *bi) noexcept nogil:
    # exp(-i A.sigma), A from the two-point 4th-order Magnus formula
    cdef double o1 = oa + (0.5 - R3) * (ob - oa)
    cdef double o2 = oa + (0.5 + R3) * (ob - oa)
    cdef double ax = h * hx
    cdef double ay = -0.5 * R3 * h * h * hx * (o1 - o2)
    cdef double az = 0.25 * h * (o1 + o2)
    cdef double th = sqrt(ax * ax + ay * ay + az * az)
    cdef double c = cos(th)
    cdef double s = 1.0
    if th > 1e-300:
        s = sin(th) / th
    ar[0] = c
    ai[0] = -az * s
    br[0] = ay * s
    bi[0] = -ax * s


cdef inline void _mul(double sar, double sai, double sbr, double sbi,
                      double *ar, double *ai, double *br, double *bi) noexcept nogil:
    # (alpha, beta) <- S . U
    cdef double nar = sar * ar[0] - sai * ai[0] - (sbr * br[0] + sbi * bi[0])
    cdef double nai = sar * ai[0] + sai * ar[0] - (sbr * bi[0] - sbi * br[0])
    cdef double nbr = sbr * ar[0] - sbi * ai[0] + (sar * br[0] + sai * bi[0])
    cdef double nbi = sbr * ai[0] + sbi * ar[0] + (sar * bi[0] - sai * br[0])
    cdef double nrm = 1.0 / sqrt(nar * nar + nai * nai + nbr * nbr + nbi * nbi)
    ar[0] = nar * nrm
    ai[0] = nai * nrm
    br[0] = nbr * nrm
    bi[0] = nbi * nrm


cdef inline void _tangent(double ar, double ai, double br, double bi, double *out) noexcept nogil:
    # Pauli components of U^dag sigma_x U
    out[0] = ar * ar - ai * ai - (br * br - bi * bi)
    out[1] = 2.0 * (ar * ai - br * bi)
    out[2] = 2.0 * (ar * br + ai * bi)


cdef void _propagate(const double[::1] t, const double[::1] om, double hx, double max_step,
                     double *ar, double *ai, double *br, double *bi) noexcept nogil:
    cdef Py_ssize_t i, k, m
    cdef double h, hs, oa, ob, sar, sai, sbr, sbi
    ar[0] = 1.0
    ai[0] = 0.0
    br[0] = 0.0
    bi[0] = 0.0
    for i in range(t.shape[0] - 1):
        h = t[i + 1] - t[i]
        m = <Py_ssize_t>ceil(h / max_step)
        if m < 1:
            m = 1
        hs = h / m
        for k in range(m):
            oa = om[i] + (om[i + 1] - om[i]) * (<double>k / m)
            ob = om[i] + (om[i + 1] - om[i]) * (<double>(k + 1) / m)
            _step(hx, oa, ob, hs, &sar, &sai, &sbr, &sbi)
            _mul(sar, sai, sbr, sbi, ar, ai, br, bi)


def propagate(double[::1] t, double[::1] omega, double hx, double max_step):
    cdef double ar, ai, br, bi
    with nogil:
        _propagate(t, omega, hx, max_step, &ar, &ai, &br, &bi)
    return complex(ar, ai), complex(br, bi)


def propagate_batch(double[::1] t, double[::1] omega, double[::1] hx, double max_step):
    cdef Py_ssize_t j, n = hx.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] alpha = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] beta = np.empty(n, dtype=np.complex128)
    cdef double ar, ai, br, bi
    for j in range(n):
        with nogil:
            _propagate(t, omega, hx[j], max_step, &ar, &ai, &br, &bi)
        alpha[j] = complex(ar, ai)
        beta[j] = complex(br, bi)
    return alpha, beta


def error_curve(double[::1] t, double[::1] omega, double hx, double max_step):
    cdef Py_ssize_t n = t.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] r_out = np.zeros((n, 3))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] q_out = np.zeros((n, 3))
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a_out = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] b_out = np.empty(n, dtype=np.complex128)
    cdef double[::1] rv
    cdef double[::1] qv
    cdef Py_ssize_t i, k, m, j, l
    cdef double h, hs, oa, ob, sar, sai, sbr, sbi
    cdef double ar = 1.0, ai = 0.0, br = 0.0, bi = 0.0
    cdef double par, pai, pbr, pbi
    cdef double[3] cnode, wnode, r, q, dr
    cdef double[3][3] tau
    cdef double[3][3] d
    cdef double cross0, cross1, cross2
    cnode[0] = 0.5 - R15
    cnode[1] = 0.5
    cnode[2] = 0.5 + R15
    wnode[0] = GW0
    wnode[1] = GW1
    wnode[2] = GW0
    for l in range(3):
        r[l] = 0.0
        q[l] = 0.0
    a_out[0] = 1.0
    b_out[0] = 0.0
    with nogil:
        for i in range(n - 1):
            h = t[i + 1] - t[i]
            m = <Py_ssize_t>ceil(h / max_step)
            if m < 1:
                m = 1
            hs = h / m
            for k in range(m):
                oa = omega[i] + (omega[i + 1] - omega[i]) * (<double>k / m)
                ob = omega[i] + (omega[i + 1] - omega[i]) * (<double>(k + 1) / m)
                for j in range(3):
                    _step(hx, oa, oa + cnode[j] * (ob - oa), cnode[j] * hs, &sar, &sai, &sbr, &sbi)
                    par = ar
                    pai = ai
                    pbr = br
                    pbi = bi
                    _mul(sar, sai, sbr, sbi, &par, &pai, &pbr, &pbi)
                    _tangent(par, pai, pbr, pbi, tau[j])
                for l in range(3):
                    dr[l] = hs * (wnode[0] * tau[0][l] + wnode[1] * tau[1][l] + wnode[2] * tau[2][l])
                for j in range(3):
                    for l in range(3):
                        d[j][l] = hs * (GA[j][0] * tau[0][l] + GA[j][1] * tau[1][l] + GA[j][2] * tau[2][l])
                # int r x rdot over the step = r_a x dr + sum_j w_j h d_j x tau_j
                cross0 = r[1] * dr[2] - r[2] * dr[1]
                cross1 = r[2] * dr[0] - r[0] * dr[2]
                cross2 = r[0] * dr[1] - r[1] * dr[0]
                for j in range(3):
                    cross0 += hs * wnode[j] * (d[j][1] * tau[j][2] - d[j][2] * tau[j][1])
                    cross1 += hs * wnode[j] * (d[j][2] * tau[j][0] - d[j][0] * tau[j][2])
                    cross2 += hs * wnode[j] * (d[j][0] * tau[j][1] - d[j][1] * tau[j][0])
                q[0] += cross0
                q[1] += cross1
                q[2] += cross2
                for l in range(3):
                    r[l] += dr[l]
                _step(hx, oa, ob, hs, &sar, &sai, &sbr, &sbi)
                _mul(sar, sai, sbr, sbi, &ar, &ai, &br, &bi)
            with gil:
                rv = r_out[i + 1]
                qv = q_out[i + 1]
                for l in range(3):
                    rv[l] = r[l]
                    qv[l] = q[l]
                a_out[i + 1] = complex(ar, ai)
                b_out[i + 1] = complex(br, bi)
    return r_out, q_out, a_out, b_out


cdef inline double _orient(double ax, double ay, double bx, double by, double cx, double cy) noexcept nogil:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def segment_crossings(double[:, ::1] xy, bint closed, double tol):
    """Candidate intersecting segment pairs ``(i, j)`` with ``j >= i + 2``.

    Returns ``(pairs, uncertain)``; ``uncertain[k]`` marks pairs where an
    orientation determinant is within ``tol`` of zero and needs an exact test.
    """
    cdef Py_ssize_t n = xy.shape[0] - 1
    cdef Py_ssize_t i, j
    cdef double d1, d2, d3, d4
    cdef double ax, ay, bx, by, cx, cy, ex, ey
    cdef double xmin1, xmax1, ymin1, ymax1
    cdef bint unsure
    pairs = []
    flags = []
    for i in range(n):
        ax = xy[i, 0]
        ay = xy[i, 1]
        bx = xy[i + 1, 0]
        by = xy[i + 1, 1]
        xmin1 = ax if ax < bx else bx
        xmax1 = bx if ax < bx else ax
        ymin1 = ay if ay < by else by
        ymax1 = by if ay < by else ay
        for j in range(i + 2, n):
            if closed and i == 0 and j == n - 1:
                continue
            cx = xy[j, 0]
            cy = xy[j, 1]
            ex = xy[j + 1, 0]
            ey = xy[j + 1, 1]
            if (cx < xmin1 - tol and ex < xmin1 - tol) or (cx > xmax1 + tol and ex > xmax1 + tol):
                continue
            if (cy < ymin1 - tol and ey < ymin1 - tol) or (cy > ymax1 + tol and ey > ymax1 + tol):
                continue
            d1 = _orient(ax, ay, bx, by, cx, cy)
            d2 = _orient(ax, ay, bx, by, ex, ey)
            d3 = _orient(cx, cy, ex, ey, ax, ay)
            d4 = _orient(cx, cy, ex, ey, bx, by)
            unsure = fabs(d1) <= tol or fabs(d2) <= tol or fabs(d3) <= tol or fabs(d4) <= tol
            if unsure:
                pairs.append((i, j))
                flags.append(True)
            elif ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
                pairs.append((i, j))
                flags.append(False)
    return np.array(pairs, dtype=np.intp).reshape(-1, 2), np.array(flags, dtype=bool)
