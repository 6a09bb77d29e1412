"""Pure-Python/NumPy implementations of the hot numeric kernels.

This module is the reference implementation and the fallback used when the
compiled extension (suspind._kernels) is not available. Both backends
implement exactly the same math; suspind.kernels selects one at import.

Kernels:
  * mutual_pair_sum  - signed pairwise mutual-inductance sum over the
    axis-aligned winding segments (the O(n^2) inner loop of the
    inductance evaluation).
  * assemble_stiffness - dense global stiffness assembly of 3D
    Euler-Bernoulli frame elements (axial + torsion + two-plane bending).
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

# mu0 / 4pi
_M_QUARTER = 1.0e-7
_VERTICAL_COS = 0.999999


def _gmd(d: float, width: float) -> float:
    """Geometric mean distance of two equal coplanar parallel strips.

    Series correction in (width/d); falls back to the centerline distance
    when the series would diverge (d <= width, which a valid layout never
    produces for distinct turns).
    """
    r = width / d
    if r >= 1.0:
        return d
    r2 = r * r
    acc = 0.0
    term = 1.0
    for k in range(1, 9):
        term *= r2
        acc += term / (k * (2 * k + 1) * (2 * k + 2))
    return d * math.exp(-acc)


def _f_parallel(u: float, d: float) -> float:
    # Neumann antiderivative for parallel filaments; even in u by
    # construction so that mutual(i, j) == mutual(j, i) bitwise.
    a = abs(u)
    return a * math.asinh(a / d) - math.hypot(a, d)


def _f_collinear(u: float) -> float:
    a = abs(u)
    if a == 0.0:
        return 0.0
    return a * (math.log(2.0 * a) - 1.0)


def mutual_pair_sum(axis, lo, hi, perp, dirsign, width: float,
                    use_gmd: bool = True) -> float:
    """Sum of signed mutual inductances over all unordered segment pairs.

    Arguments are per-segment arrays: ``axis`` (0 for x-directed, 1 for
    y-directed), the axial interval [lo, hi], the perpendicular in-plane
    coordinate ``perp`` and the current direction sign ``dirsign``.
    Perpendicular pairs contribute exactly zero and are skipped.

    Raises ValueError for coincident overlapping parallel segments.
    """
    n = len(axis)
    total = 0.0
    for i in range(n - 1):
        ai = axis[i]
        li = lo[i]
        hi_i = hi[i]
        pi = perp[i]
        si = dirsign[i]
        for j in range(i + 1, n):
            if ai != axis[j]:
                continue
            d = abs(pi - perp[j])
            if d < 1e-15:
                if li < hi[j] and lo[j] < hi_i:
                    raise ValueError(
                        f"coincident overlapping parallel segments ({i}, {j})"
                    )
                val = (_f_collinear(hi_i - lo[j]) + _f_collinear(li - hi[j])
                       - _f_collinear(li - lo[j]) - _f_collinear(hi_i - hi[j]))
            else:
                g = _gmd(d, width) if use_gmd else d
                val = (_f_parallel(hi_i - lo[j], g) + _f_parallel(li - hi[j], g)
                       - _f_parallel(li - lo[j], g) - _f_parallel(hi_i - hi[j], g))
            total += 2.0 * _M_QUARTER * si * dirsign[j] * val
    return total


def local_stiffness(ea: float, eiy: float, eiz: float, gj: float,
                    length: float) -> np.ndarray:
    """12x12 Euler-Bernoulli space-frame element stiffness, local axes.

    DOF order per node: (ux, uy, uz, rx, ry, rz); bending about the local
    z axis couples (uy, rz) and bending about local y couples (uz, ry).
    """
    k = np.zeros((12, 12))
    L = length
    L2 = L * L
    L3 = L2 * L

    k[0, 0] = k[6, 6] = ea / L
    k[0, 6] = k[6, 0] = -ea / L
    k[3, 3] = k[9, 9] = gj / L
    k[3, 9] = k[9, 3] = -gj / L

    a = 12.0 * eiz / L3
    b = 6.0 * eiz / L2
    k[1, 1] = k[7, 7] = a
    k[1, 7] = k[7, 1] = -a
    k[1, 5] = k[5, 1] = k[1, 11] = k[11, 1] = b
    k[5, 7] = k[7, 5] = k[7, 11] = k[11, 7] = -b
    k[5, 5] = k[11, 11] = 4.0 * eiz / L
    k[5, 11] = k[11, 5] = 2.0 * eiz / L

    a = 12.0 * eiy / L3
    b = 6.0 * eiy / L2
    k[2, 2] = k[8, 8] = a
    k[2, 8] = k[8, 2] = -a
    k[2, 4] = k[4, 2] = k[2, 10] = k[10, 2] = -b
    k[4, 8] = k[8, 4] = k[8, 10] = k[10, 8] = b
    k[4, 4] = k[10, 10] = 4.0 * eiy / L
    k[4, 10] = k[10, 4] = 2.0 * eiy / L
    return k


def element_rotation(dx: float, dy: float, dz: float, length: float) -> np.ndarray:
    """Rotation matrix (rows = local x, y, z axes in global coordinates).

    Local z is aligned as closely as possible with global Z (the
    out-of-plane direction); vertical elements use global X as the
    reference instead.
    """
    ex = np.array([dx / length, dy / length, dz / length])
    ref = np.array([0.0, 0.0, 1.0]) if abs(ex[2]) < _VERTICAL_COS else np.array([1.0, 0.0, 0.0])
    ez = ref - np.dot(ref, ex) * ex
    ez /= np.linalg.norm(ez)
    ey = np.cross(ez, ex)
    return np.vstack((ex, ey, ez))


def assemble_stiffness(coords: np.ndarray, conn: np.ndarray,
                       props: np.ndarray) -> np.ndarray:
    """Assemble the dense global stiffness matrix.

    coords: (n, 3) node coordinates; conn: (m, 2) node indices;
    props: (m, 4) columns (EA, EIy, EIz, GJ). Returns the (6n, 6n)
    symmetric stiffness matrix.
    """
    n = coords.shape[0]
    K = np.zeros((6 * n, 6 * n))
    T = np.zeros((12, 12))
    for e in range(conn.shape[0]):
        a, b = int(conn[e, 0]), int(conn[e, 1])
        dx = coords[b, 0] - coords[a, 0]
        dy = coords[b, 1] - coords[a, 1]
        dz = coords[b, 2] - coords[a, 2]
        length = math.sqrt(dx * dx + dy * dy + dz * dz)
        R = element_rotation(dx, dy, dz, length)
        for blk in range(4):
            T[3 * blk:3 * blk + 3, 3 * blk:3 * blk + 3] = R
        kl = local_stiffness(props[e, 0], props[e, 1], props[e, 2],
                             props[e, 3], length)
        kg = T.T @ kl @ T
        idx = np.concatenate((np.arange(6 * a, 6 * a + 6),
                              np.arange(6 * b, 6 * b + 6)))
        K[np.ix_(idx, idx)] += kg
    return K
