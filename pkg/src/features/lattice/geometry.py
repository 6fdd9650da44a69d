"""
Exact planar predicates on rational coordinates.

Membership decisions that land on a shape's boundary must not depend on float rounding, so the
discretizer re-decides every near-tie here with Fraction arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Q = Fraction
QPoint = tuple[Fraction, Fraction]


def to_q(point: Sequence[float]) -> QPoint:
    return Q(point[0]), Q(point[1])


def _orient(a: QPoint, b: QPoint, c: QPoint) -> Fraction:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _on_segment(a: QPoint, b: QPoint, p: QPoint) -> bool:
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def segments_intersect(a: QPoint, b: QPoint, c: QPoint, d: QPoint) -> bool:
    o1, o2 = _orient(a, b, c), _orient(a, b, d)
    o3, o4 = _orient(c, d, a), _orient(c, d, b)
    if ((o1 > 0) != (o2 > 0)) and o1 != 0 and o2 != 0:
        if ((o3 > 0) != (o4 > 0)) and o3 != 0 and o4 != 0:
            return True
    if o1 == 0 and _on_segment(a, b, c):
        return True
    if o2 == 0 and _on_segment(a, b, d):
        return True
    if o3 == 0 and _on_segment(c, d, a):
        return True
    if o4 == 0 and _on_segment(c, d, b):
        return True
    return False


def polygon_is_simple(vertices: Sequence[Sequence[float]]) -> bool:
    pts = [to_q(v) for v in vertices]
    m = len(pts)
    if len(set(pts)) != m:
        return False
    edges = [(pts[i], pts[(i + 1) % m]) for i in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            if j == i + 1 or (i == 0 and j == m - 1):
                continue
            if segments_intersect(*edges[i], *edges[j]):
                return False
    # zero area means every vertex is collinear
    doubled = sum(
        pts[i][0] * pts[(i + 1) % m][1] - pts[(i + 1) % m][0] * pts[i][1]
        for i in range(m)
    )
    return doubled != 0


def point_in_polygon(p: QPoint, pts: Sequence[QPoint]) -> bool:
    """Crossing-number test; p must not lie on the boundary."""
    inside = False
    m = len(pts)
    for i in range(m):
        a, b = pts[i], pts[(i + 1) % m]
        if (a[1] > p[1]) != (b[1] > p[1]):
            cross_x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if p[0] < cross_x:
                inside = not inside
    return inside


def segment_meets_open_box(a: QPoint, b: QPoint, lo: QPoint, hi: QPoint) -> bool:
    """Liang-Barsky clip of segment ab against the box; True if it enters the open interior."""
    t0, t1 = Q(0), Q(1)
    dx, dy = b[0] - a[0], b[1] - a[1]
    for p, q in (
        (-dx, a[0] - lo[0]),
        (dx, hi[0] - a[0]),
        (-dy, a[1] - lo[1]),
        (dy, hi[1] - a[1]),
    ):
        if p == 0:
            if q < 0:
                return False
            continue
        r = q / p
        if p < 0:
            t0 = max(t0, r)
        else:
            t1 = min(t1, r)
        if t0 > t1:
            return False
    mid = (t0 + t1) / 2
    mx, my = a[0] + mid * dx, a[1] + mid * dy
    return lo[0] < mx < hi[0] and lo[1] < my < hi[1]


def box_inside_polygon(center: QPoint, half: Fraction, pts: Sequence[QPoint]) -> bool:
    """Whether the open square of half-side `half` around center lies in the polygon."""
    lo = (center[0] - half, center[1] - half)
    hi = (center[0] + half, center[1] + half)
    m = len(pts)
    for i in range(m):
        if segment_meets_open_box(pts[i], pts[(i + 1) % m], lo, hi):
            return False
    return point_in_polygon(center, pts)


def box_inside_disc(
    center: QPoint, half: Fraction, disc_center: QPoint, radius: Fraction
) -> bool:
    """Open square inside open disc iff its farthest corner is within the closed disc."""
    fx = abs(center[0] - disc_center[0]) + half
    fy = abs(center[1] - disc_center[1]) + half
    return fx * fx + fy * fy <= radius * radius
