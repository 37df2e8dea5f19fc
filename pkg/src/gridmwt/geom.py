"""Exact planar predicates and small point-set utilities.

Coordinates are any exact numeric type (``int`` or ``fractions.Fraction``);
nothing in this module ever rounds.  Segments are pairs of points and are
treated as *open*: their endpoints do not belong to them.
"""
from __future__ import annotations

import enum
import math
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import DegenerateInputError


class Point(NamedTuple):
    x: Fraction
    y: Fraction


Segment = tuple  # (Point, Point)


class Turn(enum.Enum):
    LEFT = 1
    RIGHT = -1
    COLLINEAR = 0


def cross(ax, ay, bx, by, cx, cy):
    """Twice the signed area of triangle abc on raw coordinates."""
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def orient(a, b, c) -> int:
    """Sign (-1, 0, 1) of the cross product (b - a) x (c - a)."""
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def orientation(a, b, c) -> Turn:
    return Turn(orient(a, b, c))


def squared_distance(a, b):
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    return dx * dx + dy * dy


def _strictly_between(p, a, b) -> bool:
    # p is known to be collinear with a and b
    if a[0] != b[0]:
        lo, hi = (a[0], b[0]) if a[0] < b[0] else (b[0], a[0])
        return lo < p[0] < hi
    lo, hi = (a[1], b[1]) if a[1] < b[1] else (b[1], a[1])
    return lo < p[1] < hi


def point_on_open_segment(p, s) -> bool:
    a, b = s
    return orient(a, b, p) == 0 and _strictly_between(p, a, b)


def segments_properly_intersect(s1, s2) -> bool:
    """True iff the two open segments share at least one point."""
    a, b = s1
    c, d = s2
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and o2 == 0:
        # all four collinear: compare open parameter intervals on a dominant axis
        k = 0 if a[0] != b[0] else 1
        lo1, hi1 = sorted((a[k], b[k]))
        lo2, hi2 = sorted((c[k], d[k]))
        return max(lo1, lo2) < min(hi1, hi2)
    if o1 == 0 and _strictly_between(c, a, b):
        return True
    if o2 == 0 and _strictly_between(d, a, b):
        return True
    if o3 == 0 and _strictly_between(a, c, d):
        return True
    if o4 == 0 and _strictly_between(b, c, d):
        return True
    return False


def as_point(p) -> Point:
    return Point(Fraction(p[0]), Fraction(p[1]))


def to_integer_coords(points: Sequence) -> tuple[list[tuple[int, int]], int]:
    """Scale rational points by their common denominator.

    Returns the integer points and the scale factor ``k``; every predicate in
    this module gives the same answer on either representation.
    """
    k = 1
    for p in points:
        for c in p:
            den = Fraction(c).denominator
            k = k * den // math.gcd(k, den)
    out = []
    for p in points:
        x = Fraction(p[0]) * k
        y = Fraction(p[1]) * k
        out.append((x.numerator, y.numerator))
    return out, k


def find_degeneracy(points: Sequence):
    """Return ``("duplicate", (i, j))``, ``("collinear", (i, j, k))`` or None."""
    ipts, _ = to_integer_coords(points)
    n = len(ipts)
    for i in range(n):
        xi, yi = ipts[i]
        seen: dict[tuple[int, int], int] = {}
        for j in range(i + 1, n):
            dx = ipts[j][0] - xi
            dy = ipts[j][1] - yi
            if dx == 0 and dy == 0:
                return "duplicate", (i, j)
            g = math.gcd(dx, dy)
            dx //= g
            dy //= g
            if dx < 0 or (dx == 0 and dy < 0):
                dx, dy = -dx, -dy
            if (dx, dy) in seen:
                return "collinear", (i, seen[(dx, dy)], j)
            seen[(dx, dy)] = j
    return None


class PointSet:
    """Ordered, pairwise distinct points in general position.

    Point ids are list indices.  Construction validates unless
    ``validate=False`` is passed (used for hand-made degenerate fixtures).
    """

    def __init__(self, points: Iterable, validate: bool = True):
        self.points: tuple[Point, ...] = tuple(as_point(p) for p in points)
        if validate:
            bad = find_degeneracy(self.points)
            if bad is not None:
                kind, idx = bad
                if kind == "duplicate":
                    raise DegenerateInputError(
                        f"duplicate points {idx[0]} and {idx[1]}", triple=idx
                    )
                raise DegenerateInputError(
                    f"collinear triple {idx}", triple=tuple(sorted(idx))
                )

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other):
        return isinstance(other, PointSet) and self.points == other.points

    def __repr__(self):
        return f"PointSet(n={len(self.points)})"


def convex_hull(ps) -> list[int]:
    """Counter-clockwise hull vertex indices, starting at the lowest-leftmost point."""
    pts = list(ps)
    if len(pts) < 3:
        raise DegenerateInputError("degenerate input: fewer than 3 points")
    order = sorted(range(len(pts)), key=lambda i: (pts[i][0], pts[i][1]))
    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and orient(pts[lower[-2]], pts[lower[-1]], pts[i]) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and orient(pts[upper[-2]], pts[upper[-1]], pts[i]) <= 0:
            upper.pop()
        upper.append(i)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateInputError("degenerate input: all points collinear")
    return hull


def closest_pair(ps) -> tuple[int, int, Fraction]:
    pts = list(ps)
    if len(pts) < 2:
        raise DegenerateInputError("closest pair needs at least 2 points")
    best = None
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = squared_distance(pts[i], pts[j])
            if best is None or d < best[2]:
                best = (i, j, d)
    return best


def diameter(ps):
    pts = list(ps)
    if len(pts) < 2:
        raise DegenerateInputError("diameter needs at least 2 points")
    return max(
        squared_distance(pts[i], pts[j])
        for i in range(len(pts))
        for j in range(i + 1, len(pts))
    )


def point_in_polygon(p, poly: Sequence) -> int:
    """Locate ``p`` against a closed polygon (possibly self-touching).

    Returns 1 strictly inside, 0 on the boundary, -1 outside.  Inside means
    non-zero winding number, which lets walks that trace a dangling edge out
    and back behave like the region they bound.
    """
    n = len(poly)
    wn = 0
    px, py = p[0], p[1]
    for i in range(n):
        a = poly[i]
        b = poly[(i + 1) % n]
        if a == b:
            continue
        if (a[0] == px and a[1] == py) or point_on_open_segment(p, (a, b)):
            return 0
        if a[1] <= py:
            if b[1] > py and cross(a[0], a[1], b[0], b[1], px, py) > 0:
                wn += 1
        elif b[1] <= py and cross(a[0], a[1], b[0], b[1], px, py) < 0:
            wn -= 1
    return 1 if wn != 0 else -1


def signed_area2(poly: Sequence):
    """Twice the signed area of a closed polygon (positive when counter-clockwise)."""
    s = 0
    n = len(poly)
    for i in range(n):
        a = poly[i]
        b = poly[(i + 1) % n]
        s += a[0] * b[1] - a[1] * b[0]
    return s


# --- q-weights -----------------------------------------------------------------
#
# An edge of squared length d2 has q-weight d2 ** (q / 2); q = inf means the
# bottleneck (largest edge).  Sums of square roots have no exact finite form, so
# comparisons escalate decimal precision and declare a tie only when the squared
# lengths coincide as multisets or no precision separates the two sums.

INF = math.inf
_PRECISIONS = (40, 80, 160, 320)


def _power_float(d2, q) -> float:
    if q == 2:
        return float(d2)
    return float(d2) ** (q / 2)


def power_sum_float(d2s: Iterable, q) -> float:
    """Float q-weight of a set of edges given by their squared lengths."""
    d2s = list(d2s)
    if not d2s:
        return 0.0
    if q == INF:
        return math.sqrt(float(max(d2s)))
    return math.fsum(_power_float(d, q) for d in d2s)


def power_sum_decimal(d2s: Iterable, q, prec: int = 50) -> Decimal:
    d2s = [Fraction(d) for d in d2s]
    with localcontext() as ctx:
        ctx.prec = prec
        if not d2s:
            return Decimal(0)
        if q == INF:
            m = max(d2s)
            return (Decimal(m.numerator) / Decimal(m.denominator)).sqrt()
        total = Decimal(0)
        for d in d2s:
            v = Decimal(d.numerator) / Decimal(d.denominator)
            if q % 2 == 0:
                total += v ** (q // 2)
            else:
                total += v ** (q // 2) * v.sqrt()
        return +total


def compare_power_sums(a: Sequence, b: Sequence, q) -> int:
    """Exact-as-possible sign of w'(a) - w'(b) for squared-length lists."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    if q == INF:
        ma = max(a) if a else Fraction(0)
        mb = max(b) if b else Fraction(0)
        return (ma > mb) - (ma < mb)
    if q % 2 == 0:
        half = q // 2
        sa = sum((x ** half for x in a), Fraction(0))
        sb = sum((x ** half for x in b), Fraction(0))
        return (sa > sb) - (sa < sb)
    if sorted(a) == sorted(b):
        return 0
    for prec in _PRECISIONS:
        da = power_sum_decimal(a, q, prec)
        db = power_sum_decimal(b, q, prec)
        diff = da - db
        scale = max(abs(da), abs(db), Decimal(1))
        if abs(diff) > scale * Decimal(10) ** (-(prec - 8)):
            return 1 if diff > 0 else -1
    return 0
