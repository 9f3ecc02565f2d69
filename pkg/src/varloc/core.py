"""Problem-instance types and the percentile objective.

Lengths are kilometers throughout the library; report/CSV layers convert
to meters where noted.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class Point2:
    """A point in the plane, coordinates in km."""

    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", _check_finite("x", self.x))
        object.__setattr__(self, "y", _check_finite("y", self.y))

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y)

    def distance_to(self, other: "Point2") -> float:
        dx = self.x - other.x
        dy = self.y - other.y
        return math.sqrt(dx * dx + dy * dy)


@dataclass(frozen=True)
class Scenario:
    """One localization instance: anchors, range measurements, outlier count.

    ``outlier_count`` is the number L of measurements assumed to deviate
    arbitrarily from the range model; the objective ignores the L largest
    deviations.
    """

    anchors: tuple[Point2, ...]
    measurements: tuple[float, ...]
    outlier_count: int

    def __post_init__(self):
        anchors = tuple(self.anchors)
        measurements = tuple(float(y) for y in self.measurements)
        object.__setattr__(self, "anchors", anchors)
        object.__setattr__(self, "measurements", measurements)
        m = len(anchors)
        if m < 2:
            raise ValueError(f"need at least 2 anchors, got {m}")
        if len(measurements) != m:
            raise ValueError(
                f"{len(measurements)} measurements for {m} anchors"
            )
        for i, y in enumerate(measurements):
            _check_finite(f"measurements[{i}]", y)
            if y < 0:
                raise ValueError(f"measurements[{i}] = {y} is negative")
        if not 0 <= self.outlier_count <= m - 1:
            raise ValueError(
                f"outlier_count must be in [0, {m - 1}], got {self.outlier_count}"
            )

    @property
    def m(self) -> int:
        return len(self.anchors)

    def anchor_array(self):
        import numpy as np

        return np.array([(a.x, a.y) for a in self.anchors], dtype=float)

    def measurement_array(self):
        import numpy as np

        return np.array(self.measurements, dtype=float)

    def mean_anchor(self) -> Point2:
        m = len(self.anchors)
        return Point2(
            sum(a.x for a in self.anchors) / m,
            sum(a.y for a in self.anchors) / m,
        )

    def to_dict(self) -> dict:
        return {
            "anchors": [[a.x, a.y] for a in self.anchors],
            "measurements": list(self.measurements),
            "outlier_count": self.outlier_count,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        return cls(
            anchors=tuple(Point2(ax, ay) for ax, ay in data["anchors"]),
            measurements=tuple(data["measurements"]),
            outlier_count=int(data["outlier_count"]),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "Scenario":
        return cls.from_dict(json.loads(text))


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return Scenario.from_dict(json.load(fh))


def save_scenario(scenario: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(scenario.to_dict(), fh)
        fh.write("\n")


@dataclass(frozen=True)
class Estimate:
    """A located point, its percentile objective value, and where it came from.

    ``provenance`` names the producing candidate (component kind plus grid
    index) or estimator ("oracle", "srls", "gd").
    """

    point: Point2
    objective: float
    provenance: str

    def __post_init__(self):
        object.__setattr__(self, "objective", float(self.objective))
        if not (math.isfinite(self.objective) and self.objective >= 0):
            raise ValueError(f"objective must be >= 0, got {self.objective!r}")

    def to_dict(self) -> dict:
        return {
            "point_km": [self.point.x, self.point.y],
            "objective_km": self.objective,
            "provenance": self.provenance,
        }


def percentile(values: Iterable[float], discard: int) -> float:
    """The (discard+1)-th largest element of ``values``.

    Equivalently: the maximum after dropping the ``discard`` largest
    entries, so discard=0 gives the max and discard=M-1 the min.  The
    result is always an element of the input.
    """
    z = [float(v) for v in values]
    m = len(z)
    if m == 0:
        raise ValueError("percentile of an empty vector")
    if not 0 <= discard <= m - 1:
        raise ValueError(f"discard must be in [0, {m - 1}], got {discard}")
    for v in z:
        if not math.isfinite(v):
            raise ValueError(f"non-finite entry {v!r}")
    return heapq.nlargest(discard + 1, z)[-1]


def atom_deviation(x: Point2, anchor: Point2, y: float) -> float:
    """Absolute gap between the measured range and the actual distance."""
    y = _check_finite("y", y)
    if y < 0:
        raise ValueError(f"measurement {y} is negative")
    return abs(y - x.distance_to(anchor))


def objective(x: Point2, scenario: Scenario) -> float:
    """Percentile of the per-anchor deviations at ``x`` (km)."""
    devs = [
        atom_deviation(x, a, y)
        for a, y in zip(scenario.anchors, scenario.measurements)
    ]
    return percentile(devs, scenario.outlier_count)


def empirical_var(losses: Sequence[float], beta: float) -> float:
    """Empirical value-at-risk at confidence ``beta`` of observed losses.

    Requires (1-beta)*M to be an integer (within 1e-9): the empirical VaR
    is exactly a percentile of the losses only at those confidence levels.
    """
    z = [float(v) for v in losses]
    m = len(z)
    if m == 0:
        raise ValueError("empirical_var of an empty vector")
    if not (1.0 / m <= beta <= 1.0):
        raise ValueError(f"beta must be in [1/{m}, 1], got {beta}")
    discard_real = (1.0 - beta) * m
    discard = round(discard_real)
    if abs(discard_real - discard) > 1e-9:
        lo = math.floor(discard_real)
        hi = math.ceil(discard_real)
        admissible = sorted({1.0 - lo / m, 1.0 - hi / m}, reverse=True)
        raise ValueError(
            f"beta={beta} is not a multiple of 1/{m}; nearest admissible "
            f"values: {', '.join(repr(b) for b in admissible)}"
        )
    return percentile(z, discard)


def scalar_percentile_minimize(
    d: Sequence[float], discard: int
) -> tuple[float, float]:
    """Exact global minimizer of x -> percentile({|x - d_m|}, discard).

    Enumerates the finite candidate set (the data points and all pairwise
    midpoints), which provably contains a global minimizer when the data
    points are distinct.  Ties are broken toward the smallest x.
    """
    pts = [float(v) for v in d]
    if not pts:
        raise ValueError("empty data vector")
    m = len(pts)
    if not 0 <= discard <= m - 1:
        raise ValueError(f"discard must be in [0, {m - 1}], got {discard}")
    for v in pts:
        _check_finite("d entry", v)

    candidates = set(pts)
    for a, b in combinations(pts, 2):
        candidates.add((a + b) / 2.0)

    best_x = None
    best_val = None
    for x in sorted(candidates):
        val = percentile([abs(x - v) for v in pts], discard)
        if best_val is None or val < best_val:
            best_x, best_val = x, val
    return best_x, best_val
