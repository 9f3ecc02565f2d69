# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels (hot path).

Must stay arithmetically identical to _kernels_py: same distance
formula, same selection rank, same first-wins argmin.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt
from libc.stdlib cimport free, malloc

cnp.import_array()


cdef inline double _objective_at(
    double px,
    double py,
    const double[:, ::1] anchors,
    const double[::1] measurements,
    double* buf,
    Py_ssize_t m,
    Py_ssize_t discard,
) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double dx, dy, v
    for i in range(m):
        dx = px - anchors[i, 0]
        dy = py - anchors[i, 1]
        buf[i] = fabs(measurements[i] - sqrt(dx * dx + dy * dy))
    # insertion sort ascending; M is small (tens at most)
    for i in range(1, m):
        v = buf[i]
        j = i
        while j > 0 and buf[j - 1] > v:
            buf[j] = buf[j - 1]
            j -= 1
        buf[j] = v
    return buf[m - 1 - discard]


def _prepare(anchors, measurements, discard):
    anchors = np.ascontiguousarray(anchors, dtype=np.float64)
    measurements = np.ascontiguousarray(measurements, dtype=np.float64)
    if anchors.ndim != 2 or anchors.shape[1] != 2:
        raise ValueError("anchors must have shape (M, 2)")
    if measurements.shape != (anchors.shape[0],):
        raise ValueError("measurements must have shape (M,)")
    discard = int(discard)
    if not 0 <= discard <= anchors.shape[0] - 1:
        raise ValueError(
            f"discard must be in [0, {anchors.shape[0] - 1}], got {discard}"
        )
    return anchors, measurements, discard


def objective_batch(points, anchors, measurements, discard):
    """Percentile objective at each row of ``points``; returns (N,)."""
    anchors, measurements, discard = _prepare(anchors, measurements, discard)
    points = np.ascontiguousarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 2:
        raise ValueError("points must have shape (N, 2)")
    out = np.empty(points.shape[0])

    cdef const double[:, ::1] pts = points
    cdef const double[:, ::1] anc = anchors
    cdef const double[::1] y = measurements
    cdef double[::1] res = out
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t m = anc.shape[0]
    cdef Py_ssize_t d = discard
    cdef Py_ssize_t i
    cdef double* buf = <double*> malloc(m * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                res[i] = _objective_at(pts[i, 0], pts[i, 1], anc, y, buf, m, d)
    finally:
        free(buf)
    return out


def objective_argmin(points, anchors, measurements, discard):
    """(index, value) of the best candidate; first minimum wins."""
    anchors, measurements, discard = _prepare(anchors, measurements, discard)
    points = np.ascontiguousarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 2:
        raise ValueError("points must have shape (N, 2)")
    if points.shape[0] == 0:
        raise ValueError("no candidate points")

    cdef const double[:, ::1] pts = points
    cdef const double[:, ::1] anc = anchors
    cdef const double[::1] y = measurements
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t m = anc.shape[0]
    cdef Py_ssize_t d = discard
    cdef Py_ssize_t i, best_idx = 0
    cdef double val, best_val
    cdef double* buf = <double*> malloc(m * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            best_val = _objective_at(pts[0, 0], pts[0, 1], anc, y, buf, m, d)
            for i in range(1, n):
                val = _objective_at(pts[i, 0], pts[i, 1], anc, y, buf, m, d)
                if val < best_val:
                    best_val = val
                    best_idx = i
    finally:
        free(buf)
    return int(best_idx), float(best_val)


def lattice_argmin(double xmin, double ymin, nx, ny, double h,
                   anchors, measurements, discard):
    """Best point of the lattice (xmin + ix*h, ymin + iy*h).

    Flat index is row-major over (iy, ix); the first minimum wins.
    """
    anchors, measurements, discard = _prepare(anchors, measurements, discard)
    cdef Py_ssize_t cnx = int(nx)
    cdef Py_ssize_t cny = int(ny)
    if cnx < 1 or cny < 1 or h <= 0:
        raise ValueError("lattice requires nx, ny >= 1 and h > 0")

    cdef const double[:, ::1] anc = anchors
    cdef const double[::1] y = measurements
    cdef Py_ssize_t m = anc.shape[0]
    cdef Py_ssize_t d = discard
    cdef Py_ssize_t ix, iy, best_idx = 0
    cdef double px, py, val, best_val
    cdef double* buf = <double*> malloc(m * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            best_val = _objective_at(xmin, ymin, anc, y, buf, m, d)
            for iy in range(cny):
                py = ymin + iy * h
                for ix in range(cnx):
                    px = xmin + ix * h
                    val = _objective_at(px, py, anc, y, buf, m, d)
                    if val < best_val:
                        best_val = val
                        best_idx = iy * cnx + ix
    finally:
        free(buf)
    return int(best_idx), float(best_val)
