# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the hot numeric kernels.

Must stay in lockstep with suspind._kernels_py (the pure-Python
reference); the test suite asserts numerical agreement between the two.
"""

from libc.math cimport asinh, exp, fabs, hypot, log, sqrt

import numpy as np

BACKEND = "compiled"

cdef double M_QUARTER = 1.0e-7
cdef double VERTICAL_COS = 0.999999


cdef inline double _gmd(double d, double width) noexcept:
    cdef double r = width / d
    cdef double r2, acc, term
    cdef int k
    if r >= 1.0:
        return d
    r2 = r * r
    acc = 0.0
    term = 1.0
    for k in range(1, 9):
        term *= r2
        acc += term / (k * (2 * k + 1) * (2 * k + 2))
    return d * exp(-acc)


cdef inline double _f_parallel(double u, double d) noexcept:
    cdef double a = fabs(u)
    return a * asinh(a / d) - hypot(a, d)


cdef inline double _f_collinear(double u) noexcept:
    cdef double a = fabs(u)
    if a == 0.0:
        return 0.0
    return a * (log(2.0 * a) - 1.0)


def mutual_pair_sum(const long[::1] axis, const double[::1] lo,
                    const double[::1] hi, const double[::1] perp,
                    const double[::1] dirsign, double width,
                    bint use_gmd=True):
    """Signed pairwise mutual-inductance sum; see the Python twin."""
    cdef Py_ssize_t n = axis.shape[0]
    cdef Py_ssize_t i, j
    cdef double total = 0.0
    cdef double d, g, val
    cdef long ai
    cdef double li, hii, pi, si
    for i in range(n - 1):
        ai = axis[i]
        li = lo[i]
        hii = hi[i]
        pi = perp[i]
        si = dirsign[i]
        for j in range(i + 1, n):
            if ai != axis[j]:
                continue
            d = fabs(pi - perp[j])
            if d < 1e-15:
                if li < hi[j] and lo[j] < hii:
                    raise ValueError(
                        f"coincident overlapping parallel segments ({i}, {j})"
                    )
                val = (_f_collinear(hii - lo[j]) + _f_collinear(li - hi[j])
                       - _f_collinear(li - lo[j]) - _f_collinear(hii - hi[j]))
            else:
                g = _gmd(d, width) if use_gmd else d
                val = (_f_parallel(hii - lo[j], g) + _f_parallel(li - hi[j], g)
                       - _f_parallel(li - lo[j], g) - _f_parallel(hii - hi[j], g))
            total += 2.0 * M_QUARTER * si * dirsign[j] * val
    return total


cdef void _local_stiffness(double ea, double eiy, double eiz, double gj,
                           double L, double[12][12] k) noexcept:
    cdef double L2 = L * L
    cdef double L3 = L2 * L
    cdef double a, b
    cdef int r, c
    for r in range(12):
        for c in range(12):
            k[r][c] = 0.0

    k[0][0] = k[6][6] = ea / L
    k[0][6] = k[6][0] = -ea / L
    k[3][3] = k[9][9] = gj / L
    k[3][9] = k[9][3] = -gj / L

    a = 12.0 * eiz / L3
    b = 6.0 * eiz / L2
    k[1][1] = k[7][7] = a
    k[1][7] = k[7][1] = -a
    k[1][5] = k[5][1] = k[1][11] = k[11][1] = b
    k[5][7] = k[7][5] = k[7][11] = k[11][7] = -b
    k[5][5] = k[11][11] = 4.0 * eiz / L
    k[5][11] = k[11][5] = 2.0 * eiz / L

    a = 12.0 * eiy / L3
    b = 6.0 * eiy / L2
    k[2][2] = k[8][8] = a
    k[2][8] = k[8][2] = -a
    k[2][4] = k[4][2] = k[2][10] = k[10][2] = -b
    k[4][8] = k[8][4] = k[8][10] = k[10][8] = b
    k[4][4] = k[10][10] = 4.0 * eiy / L
    k[4][10] = k[10][4] = 2.0 * eiy / L


def assemble_stiffness(const double[:, ::1] coords, const long[:, ::1] conn,
                       const double[:, ::1] props):
    """Dense global stiffness assembly; see the Python twin."""
    cdef Py_ssize_t n = coords.shape[0]
    cdef Py_ssize_t m = conn.shape[0]
    K_arr = np.zeros((6 * n, 6 * n))
    cdef double[:, ::1] K = K_arr
    cdef double kl[12][12]
    cdef double kg[12][12]
    cdef double tmp[12][12]
    cdef double R[3][3]
    cdef double ex[3]
    cdef double ez[3]
    cdef double ref[3]
    cdef Py_ssize_t e, i, j, blk, r, c
    cdef long a, b
    cdef double dx, dy, dz, L, dot, nrm, s
    cdef Py_ssize_t gi[12]

    for e in range(m):
        a = conn[e, 0]
        b = conn[e, 1]
        dx = coords[b, 0] - coords[a, 0]
        dy = coords[b, 1] - coords[a, 1]
        dz = coords[b, 2] - coords[a, 2]
        L = sqrt(dx * dx + dy * dy + dz * dz)
        ex[0] = dx / L
        ex[1] = dy / L
        ex[2] = dz / L
        if fabs(ex[2]) < VERTICAL_COS:
            ref[0] = 0.0; ref[1] = 0.0; ref[2] = 1.0
        else:
            ref[0] = 1.0; ref[1] = 0.0; ref[2] = 0.0
        dot = ref[0] * ex[0] + ref[1] * ex[1] + ref[2] * ex[2]
        for i in range(3):
            ez[i] = ref[i] - dot * ex[i]
        nrm = sqrt(ez[0] * ez[0] + ez[1] * ez[1] + ez[2] * ez[2])
        for i in range(3):
            ez[i] /= nrm
        # rows of R: local x, y = z cross x, z
        R[0][0] = ex[0]; R[0][1] = ex[1]; R[0][2] = ex[2]
        R[1][0] = ez[1] * ex[2] - ez[2] * ex[1]
        R[1][1] = ez[2] * ex[0] - ez[0] * ex[2]
        R[1][2] = ez[0] * ex[1] - ez[1] * ex[0]
        R[2][0] = ez[0]; R[2][1] = ez[1]; R[2][2] = ez[2]

        _local_stiffness(props[e, 0], props[e, 1], props[e, 2], props[e, 3],
                         L, kl)

        # kg = T^T kl T with T = blockdiag(R, R, R, R)
        for i in range(12):
            blk = i // 3
            for j in range(12):
                s = 0.0
                for r in range(3):
                    s += kl[i][3 * (j // 3) + r] * R[r][j % 3]
                tmp[i][j] = s
        for i in range(12):
            for j in range(12):
                s = 0.0
                for r in range(3):
                    s += R[r][i % 3] * tmp[3 * (i // 3) + r][j]
                kg[i][j] = s

        for i in range(6):
            gi[i] = 6 * a + i
            gi[6 + i] = 6 * b + i
        for i in range(12):
            for j in range(12):
                K[gi[i], gi[j]] += kg[i][j]
    return K_arr
