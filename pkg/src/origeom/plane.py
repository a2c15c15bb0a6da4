"""The analytic plane over constructible reals: points, projective lines,
and the incidence / orthogonality / betweenness / closer predicates.

Lines are coefficient triples (a, b, c) of ax + by + c = 0, stored in
canonical scale: the first nonzero coefficient is exactly 1 and every
coefficient is tower-canonicalized, so equal lines built from the same
coordinates are the identical object.
"""

from __future__ import annotations

from .errors import (
    CoincidentPoints,
    DegenerateLine,
    EqualLines,
    IsotropicAxis,
)
from .exactnum import (
    ClosureClass,
    canonical_value,
    cmp_value,
    eq_value,
    rational,
    sign_of,
    sqrt_nonneg,
    to_sexpr,
    zero,
)

R = rational


class Point:
    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x = canonical_value(x)
        self.y = canonical_value(y)

    def __repr__(self):
        return f"Point({to_sexpr(self.x)}, {to_sexpr(self.y)})"

    def same(self, other: "Point") -> bool:
        return eq_value(self.x, other.x) and eq_value(self.y, other.y)

    def closure_class(self) -> ClosureClass:
        return ClosureClass(max(self.x.cls, self.y.cls))


class Line:
    __slots__ = ("a", "b", "c")

    def __init__(self, a, b, c):
        coeffs = [canonical_value(a), canonical_value(b), canonical_value(c)]
        lead = None
        for i, v in enumerate(coeffs):
            if sign_of(v) != 0:
                lead = i
                break
        if lead is None:
            raise DegenerateLine("all line coefficients are zero")
        pivot = coeffs[lead]
        scaled = []
        for i, v in enumerate(coeffs):
            if i < lead:
                scaled.append(zero())
            elif i == lead:
                scaled.append(rational(1))
            else:
                scaled.append(canonical_value(v / pivot))
        self.a, self.b, self.c = scaled

    def __repr__(self):
        return (
            f"Line({to_sexpr(self.a)}, {to_sexpr(self.b)}, {to_sexpr(self.c)})"
        )

    def eval_at(self, p: Point):
        return self.a * p.x + self.b * p.y + self.c

    def contains(self, p: Point) -> bool:
        return sign_of(self.eval_at(p)) == 0

    def same(self, other: "Line") -> bool:
        # canonical scaling makes proportional triples identical values
        return (
            eq_value(self.a, other.a)
            and eq_value(self.b, other.b)
            and eq_value(self.c, other.c)
        )

    def is_parallel(self, other: "Line") -> bool:
        return sign_of(self.a * other.b - self.b * other.a) == 0

    def is_perp(self, other: "Line") -> bool:
        return sign_of(self.a * other.a + self.b * other.b) == 0

    def is_vertical(self) -> bool:
        return sign_of(self.b) == 0

    def slope_value(self):
        """-a/b, or None for vertical lines."""
        if self.is_vertical():
            return None
        return canonical_value(-self.a / self.b)

    def closure_class(self) -> ClosureClass:
        return ClosureClass(max(self.a.cls, self.b.cls, self.c.cls))


def is_isotropic(line: Line) -> bool:
    """a^2 + b^2 = 0; never true over formally real coordinates."""
    return sign_of(line.a * line.a + line.b * line.b) == 0


def line_through(p: Point, q: Point) -> Line:
    if p.same(q):
        raise CoincidentPoints("line through coincident points")
    return Line(p.y - q.y, q.x - p.x, p.x * q.y - q.x * p.y)


def intersect(l: Line, m: Line):
    """The unique common point, or None for parallel lines."""
    if l.same(m):
        raise EqualLines("intersection of equal lines")
    det = l.a * m.b - l.b * m.a
    if sign_of(det) == 0:
        return None
    x = (l.b * m.c - l.c * m.b) / det
    y = (l.c * m.a - l.a * m.c) / det
    return Point(x, y)


def parallel_through(p: Point, l: Line) -> Line:
    return Line(l.a, l.b, -(l.a * p.x + l.b * p.y))


def perpendicular_through(p: Point, l: Line) -> Line:
    # normal (a', b') = (-b, a) satisfies a a' + b b' = 0
    return Line(-l.b, l.a, l.b * p.x - l.a * p.y)


def midpoint(p: Point, q: Point) -> Point:
    half = R(1) / R(2)
    return Point((p.x + q.x) * half, (p.y + q.y) * half)


def reflect_point(p: Point, l: Line) -> Point:
    n2 = l.a * l.a + l.b * l.b
    if sign_of(n2) == 0:
        raise IsotropicAxis("reflection across an isotropic line")
    t = (R(2) * l.eval_at(p)) / n2
    return Point(p.x - t * l.a, p.y - t * l.b)


def perp_bisector(p: Point, q: Point) -> Line:
    if p.same(q):
        raise CoincidentPoints("perpendicular bisector of coincident points")
    # 2(q-p).X = |q|^2 - |p|^2
    a = R(2) * (q.x - p.x)
    b = R(2) * (q.y - p.y)
    c = (p.x * p.x + p.y * p.y) - (q.x * q.x + q.y * q.y)
    return Line(a, b, c)


def collinear(a: Point, b: Point, c: Point) -> bool:
    det = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    return sign_of(det) == 0


def between(a: Point, b: Point, c: Point) -> bool:
    """Strict betweenness: distinct, collinear, b inside segment ac.
    Vertical segments are ordered by y (projection argument)."""
    if a.same(b) or b.same(c) or a.same(c):
        return False
    if not collinear(a, b, c):
        return False
    if sign_of(c.x - a.x) != 0:
        s1 = cmp_value(b.x, a.x)
        s2 = cmp_value(c.x, b.x)
    else:
        s1 = cmp_value(b.y, a.y)
        s2 = cmp_value(c.y, b.y)
    return s1 != 0 and s1 == s2


def dist2(p: Point, q: Point):
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


def line_dist2_scaled(p: Point, l: Line):
    """(dist(p, l))^2 * (a^2+b^2) and the scale, as a pair, so comparisons
    stay square-root free."""
    e = l.eval_at(p)
    return e * e, l.a * l.a + l.b * l.b


def closer_analytic(a: Point, l: Line, b: Point) -> bool:
    """dist(a, l) <= dist(a, b), by squared distances only."""
    e2, n2 = line_dist2_scaled(a, l)
    return sign_of(e2 - dist2(a, b) * n2) <= 0


def foot_of_perpendicular(p: Point, l: Line) -> Point:
    n2 = l.a * l.a + l.b * l.b
    t = l.eval_at(p) / n2
    return Point(p.x - t * l.a, p.y - t * l.b)


def closer_synthetic(a: Point, l: Line, b: Point) -> bool:
    """The fold-based definition: some H on l and a fold m through a place
    H onto b' with b' between a and b, or b' = b."""
    if a.same(b):
        return l.contains(a)
    h0 = foot_of_perpendicular(a, l)
    if a.same(h0):
        # a lies on l: slide H along l to distance |ab| from a, then the
        # fold is the perpendicular bisector of H and b' = b
        return _exists_h_at_distance(a, l, b)
    # b' on ray a->b at distance |a h0|; fold = perp bisector of h0, b'
    ratio2 = dist2(a, h0) / dist2(a, b)
    t = sqrt_nonneg(ratio2)
    bp = Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
    if bp.same(b):
        return True
    if not bp.same(h0):
        fold = perp_bisector(h0, bp)
        assert fold.contains(a), "fold through a must bisect h0 b'"
        assert reflect_point(h0, fold).same(bp)
    return between(a, bp, b)


def _exists_h_at_distance(a: Point, l: Line, b: Point) -> bool:
    """Is there H on l with |aH| = |ab|? (circle-line intersection sign)."""
    r2 = dist2(a, b)
    e2, n2 = line_dist2_scaled(a, l)
    return sign_of(r2 * n2 - e2) >= 0


def closer(a: Point, l: Line, b: Point) -> bool:
    analytic = closer_analytic(a, l, b)
    synthetic = closer_synthetic(a, l, b)
    assert analytic == synthetic, "closer: analytic and synthetic disagree"
    return analytic
