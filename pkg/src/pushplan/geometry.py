"""Axis-aligned planar geometry used throughout the planner.

All objects on the table are axis-aligned rectangles that never rotate, so
every geometric question reduces to interval arithmetic on the two axes.
Lengths are meters.  Two conventions matter and are relied on everywhere:

* ``overlaps`` tests *interior* intersection: rectangles that merely share
  an edge or a corner do not overlap.
* ``contains`` is closed: an inner rectangle may touch the outer boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


@dataclass(frozen=True, slots=True)
class Vec2:
    """A point or displacement in the plane."""

    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


@dataclass(frozen=True, slots=True)
class HalfDims:
    """Half extents of a rectangular footprint along x (``a``) and y (``b``)."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (self.a > 0.0 and self.b > 0.0 and math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"half dims must be positive and finite, got a={self.a} b={self.b}")


@dataclass(frozen=True, slots=True)
class Rect:
    """Axis-aligned rectangle given by min and max corners."""

    lo: Vec2
    hi: Vec2

    def __post_init__(self) -> None:
        if self.lo.x > self.hi.x or self.lo.y > self.hi.y:
            raise ValueError(f"degenerate rect: lo={self.lo} hi={self.hi}")

    @property
    def center(self) -> Vec2:
        return Vec2((self.lo.x + self.hi.x) / 2.0, (self.lo.y + self.hi.y) / 2.0)

    @property
    def width(self) -> float:
        return self.hi.x - self.lo.x

    @property
    def height(self) -> float:
        return self.hi.y - self.lo.y


class Side(Enum):
    """A push travel direction, named for where the pusher comes in from.

    The value doubles as the serialized form.  ``unit`` is the direction the
    pusher (and anything it shoves) moves: LEFT travels in -x, RIGHT in +x,
    UP in +y, DOWN in -y.
    """

    LEFT = "left"
    RIGHT = "right"
    UP = "up"
    DOWN = "down"

    @property
    def unit(self) -> Vec2:
        return _SIDE_UNITS[self]

    @property
    def horizontal(self) -> bool:
        return self in (Side.LEFT, Side.RIGHT)

    @property
    def opposite(self) -> "Side":
        return _SIDE_OPPOSITES[self]


_SIDE_UNITS = {
    Side.LEFT: Vec2(-1.0, 0.0),
    Side.RIGHT: Vec2(1.0, 0.0),
    Side.UP: Vec2(0.0, 1.0),
    Side.DOWN: Vec2(0.0, -1.0),
}

_SIDE_OPPOSITES = {
    Side.LEFT: Side.RIGHT,
    Side.RIGHT: Side.LEFT,
    Side.UP: Side.DOWN,
    Side.DOWN: Side.UP,
}


def rect_from_center(center: Vec2, half: HalfDims) -> Rect:
    """Footprint of an object centered at ``center``."""
    return Rect(
        Vec2(center.x - half.a, center.y - half.b),
        Vec2(center.x + half.a, center.y + half.b),
    )


def translate(r: Rect, v: Vec2) -> Rect:
    return Rect(r.lo + v, r.hi + v)


def overlaps(r1: Rect, r2: Rect) -> bool:
    """True iff the rectangle interiors intersect (touching is not overlap)."""
    return (
        r1.lo.x < r2.hi.x
        and r2.lo.x < r1.hi.x
        and r1.lo.y < r2.hi.y
        and r2.lo.y < r1.hi.y
    )


def contains(outer: Rect, inner: Rect) -> bool:
    """True iff ``inner`` lies within ``outer``; boundary contact allowed."""
    return (
        outer.lo.x <= inner.lo.x
        and outer.lo.y <= inner.lo.y
        and inner.hi.x <= outer.hi.x
        and inner.hi.y <= outer.hi.y
    )


def sweep(r: Rect, side: Side, distance: float) -> Rect:
    """Bounding rectangle of ``r`` translated along ``side`` by up to ``distance``.

    Because motion is axis-aligned, the swept region is itself a rectangle:
    the union of start and end footprints and everything between.
    """
    if distance < 0.0:
        raise ValueError(f"sweep distance must be non-negative, got {distance}")
    moved = translate(r, side.unit * distance)
    return Rect(
        Vec2(min(r.lo.x, moved.lo.x), min(r.lo.y, moved.lo.y)),
        Vec2(max(r.hi.x, moved.hi.x), max(r.hi.y, moved.hi.y)),
    )


def axis_coord(p: Vec2, side: Side) -> float:
    """Coordinate of ``p`` along the travel axis, oriented so travel increases it."""
    u = side.unit
    return p.x * u.x + p.y * u.y


def perp_coord(p: Vec2, side: Side) -> float:
    """Coordinate of ``p`` across the travel axis."""
    return p.y if side.horizontal else p.x


def axis_extent(r: Rect, side: Side) -> tuple[float, float]:
    """Projection (near, far) of ``r`` onto the travel axis of ``side``.

    Oriented so that far > near in the direction of travel; hence
    ``axis_extent(r, s)[1] == -axis_extent(r, s.opposite)[0]``.
    """
    c1 = axis_coord(r.lo, side)
    c2 = axis_coord(r.hi, side)
    return (c1, c2) if c1 <= c2 else (c2, c1)
