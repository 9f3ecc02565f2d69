"""Candidate-set construction for the percentile objective.

Every global minimizer of the percentile objective lies on the union of
the anchor singletons, the range circles, and the pairwise
equal-deviation curves; hyperbolic branches are truncated to a finite
parameter interval that provably still contains all minimizers.  This
module builds that set and discretizes it into the finite candidate list
the grid solver evaluates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Point2, Scenario, percentile
from .geometry import (
    Circle,
    CurveComponent,
    DegeneratePairError,
    Ellipse,
    HalfHyperbola,
    LocalFrame,
    PairCase,
    Singleton,
    build_local_frame,
    classify_pair,
)

ZERO_RADIUS_TOL_KM = 1e-12


@dataclass(frozen=True)
class MajorizerSet:
    """The full candidate-curve collection for one scenario."""

    components: tuple[CurveComponent, ...]
    norm_bound_km: float
    anchor_ref: Point2
    skipped_pairs: tuple[tuple[int, int, str], ...]


def norm_bound(scenario: Scenario, x_ref: Point2) -> float:
    """Radius bound on any global minimizer, anchored at a reference point.

    Any feasible point x_ref certifies that minimizers cannot beat its
    objective, which caps how far from the origin they can sit.
    """
    first = percentile(
        [
            abs(y - x_ref.distance_to(a))
            for a, y in zip(scenario.anchors, scenario.measurements)
        ],
        scenario.outlier_count,
    )
    second = max(
        a.norm() + y for a, y in zip(scenario.anchors, scenario.measurements)
    )
    return first + second


def truncation_bound(frame: LocalFrame, bound_km: float) -> float:
    """Hyperbolic parameter limit U that keeps all minimizers on |t| <= U.

    Derived from the norm bound: a point of the half-hyperbola with
    parameter t has cosh(t) <= u_hat, so U = arccosh(u_hat) via the log
    form.
    """
    c = frame.c
    if c <= 0.0:
        raise ValueError("truncation bound undefined for c = 0")
    if frame.k_h > 2.0 * c:
        raise ValueError(f"k_h={frame.k_h} > 2c={2.0 * c}: no hyperbola")
    if bound_km < 0.0:
        raise ValueError(f"norm bound must be >= 0, got {bound_km}")
    reach = bound_km + c + frame.anchor_lo().norm()
    u_hat = math.sqrt((reach * reach + (c * c - frame.k_h * frame.k_h / 4.0)) / (c * c))
    assert u_hat >= 1.0
    return math.log(u_hat + math.sqrt(u_hat * u_hat - 1.0))


def build_majorizer(scenario: Scenario, u_scale: float = 1.0) -> MajorizerSet:
    """All candidate curves for ``scenario``.

    Emits one singleton per anchor, one circle per anchor with a nonzero
    measurement, and the classified pair curves with per-pair hyperbola
    truncation.  Coincident-anchor pairs are skipped (their curves are
    undefined; dropping a component of a superset keeps it a superset).
    ``u_scale`` inflates the truncation bounds; 1.0 is the proven value
    and larger factors only add candidates (used by soundness checks).
    """
    if u_scale < 1.0:
        raise ValueError(f"u_scale must be >= 1, got {u_scale}")
    x_ref = scenario.mean_anchor()
    bound = norm_bound(scenario, x_ref)

    components: list[CurveComponent] = []
    for m, a in enumerate(scenario.anchors):
        components.append(Singleton(anchor_index=m, point=a))
    for m, (a, y) in enumerate(zip(scenario.anchors, scenario.measurements)):
        if y > ZERO_RADIUS_TOL_KM:
            components.append(Circle(anchor_index=m, center=a, radius=y))

    skipped: list[tuple[int, int, str]] = []
    n = scenario.m
    for i in range(n - 1):
        for j in range(i + 1, n):
            try:
                frame = build_local_frame(
                    scenario.anchors[i],
                    scenario.anchors[j],
                    scenario.measurements[i],
                    scenario.measurements[j],
                    indices=(i, j),
                )
            except DegeneratePairError:
                skipped.append((i, j, "coincident anchors"))
                continue
            case = classify_pair(frame)
            if case in (PairCase.ELLIPSE_ONLY, PairCase.BOTH):
                components.append(Ellipse(frame=frame))
            if case in (PairCase.HYPERBOLA_ONLY, PairCase.BOTH):
                u = u_scale * truncation_bound(frame, bound)
                components.append(HalfHyperbola(frame=frame, u=u))

    return MajorizerSet(
        components=tuple(components),
        norm_bound_km=bound,
        anchor_ref=x_ref,
        skipped_pairs=tuple(skipped),
    )


def candidate_blocks(
    majorizer: MajorizerSet, grid: int
) -> tuple[np.ndarray, list[tuple[CurveComponent, int, int]]]:
    """Sample every component; returns (points (N,2), blocks).

    Each block is (component, start, count) locating the component's
    samples in the flat point array.  Component order is the build order;
    grid order is increasing parameter index.
    """
    if grid < 2:
        raise ValueError(f"grid must be >= 2, got {grid}")
    blocks = []
    arrays = []
    offset = 0
    for comp in majorizer.components:
        pts = comp.sample(grid)
        arrays.append(pts)
        blocks.append((comp, offset, len(pts)))
        offset += len(pts)
    points = np.ascontiguousarray(np.concatenate(arrays, axis=0))
    return points, blocks


def discretize(majorizer: MajorizerSet, grid: int) -> list[Point2]:
    """The finite candidate list, in deterministic component/grid order."""
    points, _ = candidate_blocks(majorizer, grid)
    return [Point2(x, y) for x, y in points]


def _component_indices(comp: CurveComponent) -> tuple[int, int]:
    if isinstance(comp, (Singleton, Circle)):
        return comp.anchor_index, -1
    i, j = comp.frame.idx_hi, comp.frame.idx_lo
    return (i, j) if i < j else (j, i)


def describe_candidate(
    blocks: list[tuple[CurveComponent, int, int]], flat_index: int
) -> str:
    """Provenance tag for a flat candidate index, e.g. "ellipse[1,4]@12"."""
    for comp, start, count in blocks:
        if start <= flat_index < start + count:
            g = flat_index - start
            i, j = _component_indices(comp)
            if isinstance(comp, Singleton):
                return f"singleton[{i}]"
            if isinstance(comp, Circle):
                return f"circle[{i}]@{g}"
            return f"{comp.kind}[{i},{j}]@{g}"
    raise IndexError(f"candidate index {flat_index} out of range")


def export_candidates_csv(majorizer: MajorizerSet, grid: int, path) -> None:
    """Dump the discretized candidate set for plotting/debugging."""
    points, blocks = candidate_blocks(majorizer, grid)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("component_kind,pair_i,pair_j,grid_index,x_km,y_km\n")
        for comp, start, count in blocks:
            i, j = _component_indices(comp)
            for g in range(count):
                x, y = points[start + g]
                fh.write(f"{comp.kind},{i},{j},{g},{x!r},{y!r}\n")
