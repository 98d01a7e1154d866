"""Bounding-box math: IoU, projected-interval gaps and separability."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from refgen.annotations import Axis, BBox

Ordering = Literal["a", "b", "equal"]


@dataclass(frozen=True)
class AxisSeparation:
    """Result of :func:`most_separative_axis`.

    ``separation`` is the signed gap between the projected intervals
    (negative values are overlap depth). ``ordering`` names the box whose
    interval lies lower on the axis, compared by interval midpoint.
    """

    axis: Axis
    separation: float
    ordering: Ordering


def iou(a: BBox, b: BBox) -> float:
    iw = min(a.x2, b.x2) - max(a.x, b.x)
    ih = min(a.y2, b.y2) - max(a.y, b.y)
    if iw <= 0 or ih <= 0:
        return 0.0
    inter = iw * ih
    union = a.area + b.area - inter
    if union <= 0:
        return 0.0
    return min(1.0, inter / union)


def gap(p: tuple[float, float], q: tuple[float, float]) -> float:
    """Signed distance between two closed intervals; negative when they overlap."""
    return max(q[0] - p[1], p[0] - q[1])


def _ordering(p: tuple[float, float], q: tuple[float, float]) -> Ordering:
    mp, mq = p[0] + p[1], q[0] + q[1]
    if mp < mq:
        return "a"
    if mq < mp:
        return "b"
    return "equal"


def most_separative_axis(a: BBox, b: BBox) -> AxisSeparation:
    """Pick the axis along which the two boxes are furthest apart.

    Ties go to the horizontal axis.
    """
    ha, hb = a.interval("horizontal"), b.interval("horizontal")
    va, vb = a.interval("vertical"), b.interval("vertical")
    hgap, vgap = gap(ha, hb), gap(va, vb)
    if vgap > hgap:
        return AxisSeparation("vertical", vgap, _ordering(va, vb))
    return AxisSeparation("horizontal", hgap, _ordering(ha, hb))


def separability(a: BBox, b: BBox, axis: Axis) -> float:
    """Overlap of the projections on ``axis`` relative to the shorter one.

    0 means the projections are disjoint or just touching, 1 means one
    contains the other.
    """
    p, q = a.interval(axis), b.interval(axis)
    overlap = min(p[1], q[1]) - max(p[0], q[0])
    shorter = min(p[1] - p[0], q[1] - q[0])
    if overlap <= 0 or shorter <= 0:
        return 0.0
    return min(1.0, overlap / shorter)
