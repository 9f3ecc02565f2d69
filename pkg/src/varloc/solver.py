"""The RPTE grid solver and the brute-force lattice oracle."""

from __future__ import annotations

import math

from . import kernels
from .core import Estimate, Point2, Scenario, objective
from .majorizer import build_majorizer, candidate_blocks, describe_candidate, norm_bound

DEFAULT_GRID = 20
DEFAULT_LATTICE_BUDGET = 100_000_000


class LatticeBudgetError(RuntimeError):
    """Oracle lattice would exceed the candidate budget."""


def rpte(scenario: Scenario, grid: int = DEFAULT_GRID, u_scale: float = 1.0) -> Estimate:
    """Robust percentile target estimate: best point of the candidate set.

    Builds the majorizer curves, samples each with ``grid`` points, and
    returns the sample with the lowest percentile objective.  Ties go to
    the earliest candidate in the deterministic component/grid order.
    """
    maj = build_majorizer(scenario, u_scale=u_scale)
    points, blocks = candidate_blocks(maj, grid)
    idx, _ = kernels.objective_argmin(
        points,
        scenario.anchor_array(),
        scenario.measurement_array(),
        scenario.outlier_count,
    )
    point = Point2(points[idx, 0], points[idx, 1])
    return Estimate(
        point=point,
        objective=objective(point, scenario),
        provenance=describe_candidate(blocks, idx),
    )


def default_bbox(scenario: Scenario) -> tuple[float, float, float, float]:
    """Square circumscribing the minimizer-norm disk (mean-anchor bound)."""
    b = norm_bound(scenario, scenario.mean_anchor())
    return (-b, b, -b, b)


def oracle_grid(
    scenario: Scenario,
    h: float,
    bbox: tuple[float, float, float, float] | None = None,
    budget: int = DEFAULT_LATTICE_BUDGET,
) -> Estimate:
    """Exhaustive lattice search: best point of a pitch-h grid over bbox.

    Verification reference only.  The lattice is anchored at the bbox
    lower corner, so halving h yields a superset of the previous lattice.
    Ties go row-major-first.  Raises LatticeBudgetError when the lattice
    exceeds ``budget`` points.
    """
    if not (h > 0 and math.isfinite(h)):
        raise ValueError(f"lattice pitch must be positive, got {h}")
    if bbox is None:
        bbox = default_bbox(scenario)
    xmin, xmax, ymin, ymax = (float(v) for v in bbox)
    if not (xmax >= xmin and ymax >= ymin):
        raise ValueError(f"empty bbox {bbox}")
    nx = int(math.floor((xmax - xmin) / h)) + 1
    ny = int(math.floor((ymax - ymin) / h)) + 1
    if nx * ny > budget:
        raise LatticeBudgetError(
            f"lattice has {nx}*{ny} = {nx * ny} points, over budget {budget}"
        )
    idx, _ = kernels.lattice_argmin(
        xmin,
        ymin,
        nx,
        ny,
        h,
        scenario.anchor_array(),
        scenario.measurement_array(),
        scenario.outlier_count,
    )
    iy, ix = divmod(idx, nx)
    point = Point2(xmin + ix * h, ymin + iy * h)
    return Estimate(
        point=point,
        objective=objective(point, scenario),
        provenance="oracle",
    )
