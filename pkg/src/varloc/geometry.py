"""Equal-deviation geometry for anchor pairs.

For two anchors with measurements y_hi >= y_lo, the locus where the two
range deviations coincide is, in a translated/rotated local frame with
foci at (-c, 0) and (c, 0):

  * an ellipse (sum of focal distances = y_hi + y_lo), and/or
  * the half-hyperbola branch nearer the low anchor (difference of focal
    distances = y_hi - y_lo),

with the case decided by how the focal separation 2c compares to those
two constants.  The frame maps local (-c, 0) onto the high-measurement
anchor and (c, 0) onto the low one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import Point2


class DegeneratePairError(ValueError):
    """Anchor pair too close to define a local frame."""


COINCIDENT_TOL_KM = 1e-12


class PairCase(enum.Enum):
    ELLIPSE_ONLY = "ellipse_only"
    HYPERBOLA_ONLY = "hyperbola_only"
    BOTH = "both"


@dataclass(frozen=True)
class LocalFrame:
    """Translated/rotated coordinate system of one anchor pair.

    center is the anchor midpoint; angle is the polar angle of
    (low anchor - center); c is the focal half-distance; k_e and k_h are
    the sum and difference of the two measurements (high minus low).
    idx_hi / idx_lo are the caller's labels for the high- and
    low-measurement anchors.
    """

    center: Point2
    angle: float
    c: float
    k_e: float
    k_h: float
    idx_hi: int
    idx_lo: int

    def rotate(self, vx: float, vy: float) -> tuple[float, float]:
        """Apply the frame rotation to a local vector."""
        cos_t = math.cos(self.angle)
        sin_t = math.sin(self.angle)
        return cos_t * vx - sin_t * vy, sin_t * vx + cos_t * vy

    def to_global(self, vx: float, vy: float) -> Point2:
        rx, ry = self.rotate(vx, vy)
        return Point2(self.center.x + rx, self.center.y + ry)

    def anchor_hi(self) -> Point2:
        """Global position of the high-measurement anchor (focus (-c, 0))."""
        return self.to_global(-self.c, 0.0)

    def anchor_lo(self) -> Point2:
        """Global position of the low-measurement anchor (focus (c, 0))."""
        return self.to_global(self.c, 0.0)


def build_local_frame(
    a1: Point2,
    a2: Point2,
    y1: float,
    y2: float,
    indices: tuple[int, int] = (0, 1),
) -> LocalFrame:
    """Frame for the pair (a1, a2) with measurements (y1, y2).

    Swaps internally so the high-measurement anchor sits at the (-c, 0)
    focus.  ``indices`` supplies the labels recorded as idx_hi/idx_lo.
    Raises DegeneratePairError when the anchors (nearly) coincide, since
    the frame angle is undefined there.
    """
    if y1 < 0 or y2 < 0:
        raise ValueError("measurements must be nonnegative")
    if a1.distance_to(a2) < COINCIDENT_TOL_KM:
        raise DegeneratePairError(
            f"anchors {a1} and {a2} coincide within {COINCIDENT_TOL_KM} km"
        )
    if y2 > y1:
        hi, lo = a2, a1
        y_hi, y_lo = y2, y1
        idx_hi, idx_lo = indices[1], indices[0]
    else:
        hi, lo = a1, a2
        y_hi, y_lo = y1, y2
        idx_hi, idx_lo = indices[0], indices[1]
    center = Point2((a1.x + a2.x) / 2.0, (a1.y + a2.y) / 2.0)
    dx = lo.x - center.x
    dy = lo.y - center.y
    return LocalFrame(
        center=center,
        angle=math.atan2(dy, dx),
        c=math.sqrt(dx * dx + dy * dy),
        k_e=y_hi + y_lo,
        k_h=y_hi - y_lo,
        idx_hi=idx_hi,
        idx_lo=idx_lo,
    )


def classify_pair(frame: LocalFrame) -> PairCase:
    """Which equal-deviation curves the pair produces."""
    two_c = 2.0 * frame.c
    if two_c < frame.k_h:
        return PairCase.ELLIPSE_ONLY
    if two_c > frame.k_e:
        return PairCase.HYPERBOLA_ONLY
    return PairCase.BOTH


def _ellipse_minor(frame: LocalFrame) -> float:
    if 2.0 * frame.c > frame.k_e:
        raise ValueError(
            f"no ellipse for 2c={2.0 * frame.c} > k_e={frame.k_e}"
        )
    return math.sqrt(frame.k_e * frame.k_e / 4.0 - frame.c * frame.c)


def _hyperbola_minor(frame: LocalFrame) -> float:
    if frame.k_h > 2.0 * frame.c:
        raise ValueError(
            f"no hyperbola for k_h={frame.k_h} > 2c={2.0 * frame.c}"
        )
    if frame.c <= 0.0:
        raise ValueError("hyperbola requires c > 0")
    return math.sqrt(frame.c * frame.c - frame.k_h * frame.k_h / 4.0)


def ellipse_point(frame: LocalFrame, theta: float) -> Point2:
    """Point of the pair's ellipse at parameter angle theta."""
    b = _ellipse_minor(frame)
    return frame.to_global(
        frame.k_e / 2.0 * math.cos(theta), b * math.sin(theta)
    )


def hyperbola_point(frame: LocalFrame, t: float) -> Point2:
    """Point of the pair's half-hyperbola at hyperbolic parameter t.

    The branch is the one nearer the low anchor: distance to the high
    anchor minus distance to the low anchor equals k_h.
    """
    b = _hyperbola_minor(frame)
    return frame.to_global(frame.k_h / 2.0 * math.cosh(t), b * math.sinh(t))


def circle_point(center: Point2, radius: float, theta: float) -> Point2:
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    return Point2(
        center.x + radius * math.cos(theta),
        center.y + radius * math.sin(theta),
    )


def ellipse_points(frame: LocalFrame, thetas: np.ndarray) -> np.ndarray:
    """Vectorized ellipse samples, shape (n, 2)."""
    b = _ellipse_minor(frame)
    local_x = frame.k_e / 2.0 * np.cos(thetas)
    local_y = b * np.sin(thetas)
    return _to_global_batch(frame, local_x, local_y)


def hyperbola_points(frame: LocalFrame, ts: np.ndarray) -> np.ndarray:
    """Vectorized half-hyperbola samples, shape (n, 2)."""
    b = _hyperbola_minor(frame)
    local_x = frame.k_h / 2.0 * np.cosh(ts)
    local_y = b * np.sinh(ts)
    return _to_global_batch(frame, local_x, local_y)


def circle_points(center: Point2, radius: float, thetas: np.ndarray) -> np.ndarray:
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    out = np.empty((len(thetas), 2))
    out[:, 0] = center.x + radius * np.cos(thetas)
    out[:, 1] = center.y + radius * np.sin(thetas)
    return out


def _to_global_batch(frame, local_x, local_y) -> np.ndarray:
    cos_t = math.cos(frame.angle)
    sin_t = math.sin(frame.angle)
    out = np.empty((len(local_x), 2))
    out[:, 0] = frame.center.x + cos_t * local_x - sin_t * local_y
    out[:, 1] = frame.center.y + sin_t * local_x + cos_t * local_y
    return out


@dataclass(frozen=True)
class Singleton:
    """A lone candidate point (an anchor)."""

    anchor_index: int
    point: Point2

    kind = "singleton"

    def sample(self, grid: int) -> np.ndarray:
        return np.array([[self.point.x, self.point.y]])


@dataclass(frozen=True)
class Circle:
    """The range circle of one anchor."""

    anchor_index: int
    center: Point2
    radius: float

    kind = "circle"

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError(f"radius must be >= 0, got {self.radius}")

    def sample(self, grid: int) -> np.ndarray:
        return circle_points(self.center, self.radius, _theta_grid(grid))


@dataclass(frozen=True)
class Ellipse:
    """Equal-deviation ellipse of an anchor pair."""

    frame: LocalFrame

    kind = "ellipse"

    def __post_init__(self):
        if 2.0 * self.frame.c > self.frame.k_e:
            raise ValueError("ellipse requires 2c <= k_e")

    def sample(self, grid: int) -> np.ndarray:
        return ellipse_points(self.frame, _theta_grid(grid))


@dataclass(frozen=True)
class HalfHyperbola:
    """Equal-deviation half-hyperbola of an anchor pair, truncated to |t| <= u."""

    frame: LocalFrame
    u: float

    kind = "half_hyperbola"

    def __post_init__(self):
        if self.frame.k_h > 2.0 * self.frame.c:
            raise ValueError("half-hyperbola requires k_h <= 2c")
        if self.frame.c <= 0.0:
            raise ValueError("half-hyperbola requires c > 0")
        if self.u < 0.0:
            raise ValueError("truncation bound must be >= 0")

    def sample(self, grid: int) -> np.ndarray:
        return hyperbola_points(self.frame, _t_grid(self.u, grid))


CurveComponent = Union[Singleton, Circle, Ellipse, HalfHyperbola]


def _theta_grid(grid: int) -> np.ndarray:
    if grid < 2:
        raise ValueError(f"grid must be >= 2, got {grid}")
    g = np.arange(grid, dtype=float)
    # Endpoint duplication (theta=0 and 2*pi) is intentional.
    return 2.0 * math.pi * g / (grid - 1)


def _t_grid(u: float, grid: int) -> np.ndarray:
    if grid < 2:
        raise ValueError(f"grid must be >= 2, got {grid}")
    g = np.arange(grid, dtype=float)
    return -u + 2.0 * u * g / (grid - 1)
