"""Pure-numpy evaluation kernels (fallback backend).

Semantics and arithmetic mirror the compiled backend exactly: same
distance formula, same selection rank, same first-wins argmin, so the
two backends agree bit for bit.  Evaluation is chunked to bound memory
on large lattices.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 1 << 18


def _as_inputs(anchors, measurements):
    anchors = np.ascontiguousarray(anchors, dtype=np.float64)
    measurements = np.ascontiguousarray(measurements, dtype=np.float64)
    if anchors.ndim != 2 or anchors.shape[1] != 2:
        raise ValueError("anchors must have shape (M, 2)")
    if measurements.shape != (anchors.shape[0],):
        raise ValueError("measurements must have shape (M,)")
    return anchors, measurements


def _check_discard(m: int, discard: int) -> int:
    discard = int(discard)
    if not 0 <= discard <= m - 1:
        raise ValueError(f"discard must be in [0, {m - 1}], got {discard}")
    return discard


def _eval_chunk(px, py, anchors, measurements, discard):
    dx = px[:, None] - anchors[None, :, 0]
    dy = py[:, None] - anchors[None, :, 1]
    dev = np.abs(measurements[None, :] - np.sqrt(dx * dx + dy * dy))
    k = anchors.shape[0] - 1 - discard
    return np.partition(dev, k, axis=1)[:, k]


def objective_batch(points, anchors, measurements, discard):
    """Percentile objective at each row of ``points``; returns (N,)."""
    anchors, measurements = _as_inputs(anchors, measurements)
    discard = _check_discard(anchors.shape[0], discard)
    points = np.ascontiguousarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 2:
        raise ValueError("points must have shape (N, 2)")
    n = points.shape[0]
    out = np.empty(n)
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        out[start:stop] = _eval_chunk(
            points[start:stop, 0],
            points[start:stop, 1],
            anchors,
            measurements,
            discard,
        )
    return out


def objective_argmin(points, anchors, measurements, discard):
    """(index, value) of the best candidate; first minimum wins."""
    values = objective_batch(points, anchors, measurements, discard)
    if values.size == 0:
        raise ValueError("no candidate points")
    idx = int(np.argmin(values))
    return idx, float(values[idx])


def lattice_argmin(xmin, ymin, nx, ny, h, anchors, measurements, discard):
    """Best point of the lattice (xmin + ix*h, ymin + iy*h).

    Flat index is row-major over (iy, ix); the first minimum wins.
    """
    anchors, measurements = _as_inputs(anchors, measurements)
    discard = _check_discard(anchors.shape[0], discard)
    nx = int(nx)
    ny = int(ny)
    if nx < 1 or ny < 1 or h <= 0:
        raise ValueError("lattice requires nx, ny >= 1 and h > 0")
    total = nx * ny
    best_idx = -1
    best_val = np.inf
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        flat = np.arange(start, stop, dtype=np.int64)
        iy, ix = np.divmod(flat, nx)
        px = xmin + ix * h
        py = ymin + iy * h
        vals = _eval_chunk(px, py, anchors, measurements, discard)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val = float(vals[i])
            best_idx = start + i
    return best_idx, best_val
