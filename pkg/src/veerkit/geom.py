"""Exact segment geometry on an annulus chart.

All coordinates are Fractions; x is taken mod n (the chart
circumference) and y lives in [0, 1].  Segments are short (never more
than about one square wide), so wraparound is handled by testing the
three lifts x, x - n, x + n of one segment against the other.
"""

from __future__ import annotations

from fractions import Fraction

Point = tuple[Fraction, Fraction]


def cross2(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def seg_cross(a: Point, b: Point, c: Point, d: Point):
    """Proper transverse crossing of segments ab and cd.

    Returns (t, u, point) with the crossing at a + t*(b-a) = c + u*(d-c)
    and 0 < t < 1, 0 <= u <= 1, or None.  Parallel segments (including
    collinear overlaps) give None; use seg_overlap to detect those.
    The crossing may sit at an endpoint of cd but not of ab, so walking
    a path against a polyline counts a crossing at a shared polyline
    vertex once per path segment."""
    rx, ry = b[0] - a[0], b[1] - a[1]
    sx, sy = d[0] - c[0], d[1] - c[1]
    denom = rx * sy - ry * sx
    if denom == 0:
        return None
    qx, qy = c[0] - a[0], c[1] - a[1]
    t = (qx * sy - qy * sx) / denom
    u = (qx * ry - qy * rx) / denom
    if not (0 < t < 1 and 0 <= u <= 1):
        return None
    return t, u, (a[0] + t * rx, a[1] + t * ry)


def seg_overlap(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True when ab and cd are collinear and share more than a point."""
    if cross2(a, b, c) != 0 or cross2(a, b, d) != 0:
        return False
    lo1, hi1 = sorted((a, b))
    lo2, hi2 = sorted((c, d))
    return max(lo1, lo2) < min(hi1, hi2)


def shifts(n: int):
    return (Fraction(0), Fraction(n), Fraction(-n))


def poly_cross(path, seg_a: Point, seg_b: Point, n: int):
    """Crossings of a polyline path with the segment (seg_a, seg_b),
    as (i, t, u, point): path segment index, parameters, and the
    crossing point in the path's own lift."""
    out = []
    for i in range(len(path) - 1):
        a, b = path[i], path[i + 1]
        if a == b:
            continue
        for dx in shifts(n):
            c = (seg_a[0] + dx, seg_a[1])
            d = (seg_b[0] + dx, seg_b[1])
            hit = seg_cross(a, b, c, d)
            if hit is not None:
                out.append((i, hit[0], hit[1], hit[2]))
    return out


def poly_overlaps(path, seg_a: Point, seg_b: Point, n: int) -> bool:
    for i in range(len(path) - 1):
        a, b = path[i], path[i + 1]
        for dx in shifts(n):
            c = (seg_a[0] + dx, seg_a[1])
            d = (seg_b[0] + dx, seg_b[1])
            if seg_overlap(a, b, c, d):
                return True
    return False


def path_length(path) -> Fraction:
    """L1 length; exact and adequate for ordering points along a path."""
    total = Fraction(0)
    for a, b in zip(path, path[1:]):
        total += abs(b[0] - a[0]) + abs(b[1] - a[1])
    return total


def path_param(path, i: int, t: Fraction) -> Fraction:
    """L1 arclength of the point at parameter t on segment i."""
    total = path_length(path[: i + 1])
    a, b = path[i], path[i + 1]
    return total + t * (abs(b[0] - a[0]) + abs(b[1] - a[1]))


def in_box(p: Point, box, n: int) -> bool:
    x0, x1, y0, y1 = box
    y = p[1]
    if not y0 <= y <= y1:
        return False
    for dx in shifts(n):
        if x0 <= p[0] + dx <= x1:
            return True
    return False


def seg_meets_box(a: Point, b: Point, box, n: int) -> bool:
    """Whether segment ab meets the closed axis-aligned box."""
    x0, x1, y0, y1 = box
    corners = ((x0, y0), (x1, y0), (x1, y1), (x0, y1))
    for dx in shifts(n):
        aa = (a[0] + dx, a[1])
        bb = (b[0] + dx, b[1])
        if x0 <= aa[0] <= x1 and y0 <= aa[1] <= y1:
            return True
        if x0 <= bb[0] <= x1 and y0 <= bb[1] <= y1:
            return True
        for c, d in zip(corners, corners[1:] + corners[:1]):
            if seg_cross(aa, bb, c, d) is not None:
                return True
            if seg_overlap(aa, bb, c, d):
                return True
    return False
