# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: multilinear grid interpolation and rectangle-union
membership.  Semantics must match sphavg._kernels_py exactly; the pure
NumPy module is the reference implementation."""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor

cnp.import_array()


def eval_grid_1d(double[::1] values, double lo, double h, double[::1] px):
    cdef Py_ssize_t n = px.shape[0]
    cdef Py_ssize_t nv = values.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t k, i0
    cdef double s, f, a, b
    for k in range(n):
        s = (px[k] - lo) / h - 0.5
        i0 = <Py_ssize_t>floor(s)
        f = s - i0
        a = values[i0] if 0 <= i0 < nv else 0.0
        b = values[i0 + 1] if 0 <= i0 + 1 < nv else 0.0
        o[k] = (1.0 - f) * a + f * b
    return out


def eval_grid_2d(double[:, ::1] values, double lo0, double lo1,
                 double h0, double h1, double[::1] px, double[::1] py):
    cdef Py_ssize_t n = px.shape[0]
    cdef Py_ssize_t n0 = values.shape[0]
    cdef Py_ssize_t n1 = values.shape[1]
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t k, i0, j0
    cdef double s0, s1, f0, f1, v00, v01, v10, v11
    cdef bint a0, a1, b0, b1
    for k in range(n):
        s0 = (px[k] - lo0) / h0 - 0.5
        s1 = (py[k] - lo1) / h1 - 0.5
        i0 = <Py_ssize_t>floor(s0)
        j0 = <Py_ssize_t>floor(s1)
        f0 = s0 - i0
        f1 = s1 - j0
        a0 = 0 <= i0 < n0
        a1 = 0 <= i0 + 1 < n0
        b0 = 0 <= j0 < n1
        b1 = 0 <= j0 + 1 < n1
        v00 = values[i0, j0] if a0 and b0 else 0.0
        v01 = values[i0, j0 + 1] if a0 and b1 else 0.0
        v10 = values[i0 + 1, j0] if a1 and b0 else 0.0
        v11 = values[i0 + 1, j0 + 1] if a1 and b1 else 0.0
        o[k] = ((1.0 - f0) * ((1.0 - f1) * v00 + f1 * v01)
                + f0 * ((1.0 - f1) * v10 + f1 * v11))
    return out


def eval_grid_3d(double[:, :, ::1] values, double lo0, double lo1, double lo2,
                 double h0, double h1, double h2,
                 double[::1] px, double[::1] py, double[::1] pz):
    cdef Py_ssize_t n = px.shape[0]
    cdef Py_ssize_t n0 = values.shape[0]
    cdef Py_ssize_t n1 = values.shape[1]
    cdef Py_ssize_t n2 = values.shape[2]
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t k, i0, j0, k0, di, dj, dk
    cdef double s0, s1, s2, f0, f1, f2, acc, w, v
    for k in range(n):
        s0 = (px[k] - lo0) / h0 - 0.5
        s1 = (py[k] - lo1) / h1 - 0.5
        s2 = (pz[k] - lo2) / h2 - 0.5
        i0 = <Py_ssize_t>floor(s0)
        j0 = <Py_ssize_t>floor(s1)
        k0 = <Py_ssize_t>floor(s2)
        f0 = s0 - i0
        f1 = s1 - j0
        f2 = s2 - k0
        acc = 0.0
        for di in range(2):
            for dj in range(2):
                for dk in range(2):
                    if (0 <= i0 + di < n0 and 0 <= j0 + dj < n1
                            and 0 <= k0 + dk < n2):
                        v = values[i0 + di, j0 + dj, k0 + dk]
                    else:
                        v = 0.0
                    w = ((f0 if di else 1.0 - f0)
                         * (f1 if dj else 1.0 - f1)
                         * (f2 if dk else 1.0 - f2))
                    acc += w * v
        o[k] = acc
    return out


def rect_union_contains(double[::1] cx, double[::1] cy,
                        double[::1] ux, double[::1] uy,
                        double[::1] hl, double[::1] hw,
                        double[::1] px, double[::1] py):
    """1.0 where (px, py) lies in the union of rotated rectangles.

    Rectangle r has center (cx, cy), unit long-axis (ux, uy), half-length
    hl and half-width hw.
    """
    cdef Py_ssize_t n = px.shape[0]
    cdef Py_ssize_t m = cx.shape[0]
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t k, r
    cdef double dx, dy, a, b
    for k in range(n):
        for r in range(m):
            dx = px[k] - cx[r]
            dy = py[k] - cy[r]
            a = dx * ux[r] + dy * uy[r]
            if a > hl[r] or a < -hl[r]:
                continue
            b = -dx * uy[r] + dy * ux[r]
            if -hw[r] <= b <= hw[r]:
                o[k] = 1.0
                break
    return out
