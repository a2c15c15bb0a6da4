"""The seven fold operations as exact solvers.

Each operation returns a FoldResult: all candidate fold lines (0-3), sorted
by canonical slope with vertical folds last, plus a witness tag naming the
algebraic equation that was solved. Every returned line is post-checked: the
requested alignment must hold exactly under the sign engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    CoincidentPoints,
    IsotropicLine,
    PreconditionViolated,
)
from .exactnum import (
    canonical_value,
    cmp_value,
    rational,
    real_roots_cubic,
    sign_of,
    sqrt_nonneg,
)
from .plane import (
    Line,
    Point,
    dist2,
    intersect,
    is_isotropic,
    line_through,
    midpoint,
    perp_bisector,
    perpendicular_through,
    reflect_point,
)

R = rational


@dataclass
class FoldResult:
    lines: list = field(default_factory=list)
    witness: str = ""

    def __iter__(self):
        return iter(self.lines)

    def __len__(self):
        return len(self.lines)


def _slope_key(line: Line):
    return line.slope_value()  # None = vertical


def _sort_lines(lines):
    """Ascending canonical slope, vertical last; ties broken by the constant
    coefficient. Exact comparisons, insertion sort."""

    def less(u: Line, v: Line) -> bool:
        su, sv = _slope_key(u), _slope_key(v)
        if su is None and sv is None:
            return cmp_value(u.c, v.c) < 0
        if su is None:
            return False
        if sv is None:
            return True
        c = cmp_value(su, sv)
        if c != 0:
            return c < 0
        return cmp_value(u.c, v.c) < 0

    out = []
    for line in lines:
        if any(line.same(other) for other in out):
            continue
        i = 0
        while i < len(out) and less(out[i], line):
            i += 1
        out.insert(i, line)
    return out


def fold_h1(p1: Point, p2: Point) -> FoldResult:
    """Fold through both points."""
    if p1.same(p2):
        raise CoincidentPoints("fold_h1 needs distinct points")
    line = line_through(p1, p2)
    assert line.contains(p1) and line.contains(p2)
    return FoldResult([line], "linear")


def fold_h2(p1: Point, p2: Point) -> FoldResult:
    """Fold placing p1 onto p2: the perpendicular bisector."""
    if p1.same(p2):
        raise CoincidentPoints("fold_h2 needs distinct points")
    line = perp_bisector(p1, p2)
    assert reflect_point(p1, line).same(p2)
    return FoldResult([line], "linear")


def fold_h3(l1: Line, l2: Line) -> FoldResult:
    """Fold placing l1 onto l2: angle bisectors, midline, or the line itself
    for equal inputs (degenerate-equal, see module notes)."""
    if is_isotropic(l1) or is_isotropic(l2):
        raise IsotropicLine("fold_h3 needs non-isotropic lines")
    if l1.same(l2):
        return FoldResult([l1], "degenerate-equal")
    if l1.is_parallel(l2):
        # canonical scale gives parallel lines identical (a, b)
        mid_c = (l1.c + l2.c) / R(2)
        line = Line(l1.a, l1.b, mid_c)
        folds = [line]
        witness = "linear"
    else:
        n1 = sqrt_nonneg(l1.a * l1.a + l1.b * l1.b)
        n2 = sqrt_nonneg(l2.a * l2.a + l2.b * l2.b)
        folds = []
        for sgn in (1, -1):
            s = R(sgn)
            folds.append(
                Line(
                    l1.a * n2 + s * l2.a * n1,
                    l1.b * n2 + s * l2.b * n1,
                    l1.c * n2 + s * l2.c * n1,
                )
            )
        witness = "quadratic(positive)"
    for line in folds:
        _check_maps_line(l1, l2, line)
    return FoldResult(_sort_lines(folds), witness)


def _two_points_on(l: Line):
    if sign_of(l.b) != 0:
        xs = (R(0), R(1))
        return [Point(x, -(l.a * x + l.c) / l.b) for x in xs]
    ys = (R(0), R(1))
    return [Point(-(l.b * y + l.c) / l.a, y) for y in ys]


def _check_maps_line(l1: Line, l2: Line, fold: Line):
    for p in _two_points_on(l1):
        assert l2.contains(reflect_point(p, fold)), "fold must map l1 onto l2"


def fold_h4(p: Point, l: Line) -> FoldResult:
    """Fold through p orthogonal to l."""
    line = perpendicular_through(p, l)
    assert line.contains(p) and line.is_perp(l)
    return FoldResult([line], "linear")


def fold_h5(p1: Point, p2: Point, l1: Line) -> FoldResult:
    """Folds through p2 placing p1 onto l1: intersect the circle centered at
    p2 with radius |p2 p1| against l1. 2, 1, or 0 lines by discriminant."""
    if p1.same(p2):
        if l1.contains(p1):
            # every fold through p1 works; return the canonical one
            line = perpendicular_through(p1, l1)
            return FoldResult([line], "degenerate-pencil")
        return FoldResult([], "quadratic(negative)")
    r2 = dist2(p2, p1)
    n2 = l1.a * l1.a + l1.b * l1.b
    e = l1.eval_at(p2)
    disc = r2 * n2 - e * e
    s = sign_of(disc)
    if s < 0:
        return FoldResult([], "quadratic(negative)")
    witness = "quadratic(positive)" if s > 0 else "quadratic(zero)"
    foot_x = p2.x - e * l1.a / n2
    foot_y = p2.y - e * l1.b / n2
    offs = [R(0)] if s == 0 else [sqrt_nonneg(disc), -sqrt_nonneg(disc)]
    folds = []
    for t in offs:
        img = Point(foot_x - t * l1.b / n2, foot_y + t * l1.a / n2)
        assert l1.contains(img)
        fold = line_through(p1, p2) if img.same(p1) else perp_bisector(p1, img)
        assert fold.contains(p2)
        assert l1.contains(reflect_point(p1, fold))
        folds.append(fold)
    return FoldResult(_sort_lines(folds), witness)


def fold_h6(p1: Point, p2: Point, l1: Line, l2: Line) -> FoldResult:
    """Folds placing p1 onto l1 and p2 onto l2 (the common-tangent fold).

    Guards: p1 not on l1, p2 not on l2, l1 not parallel to l2, and the
    points or the lines distinct. The slope-parametrized elimination yields
    a cubic; a vertical candidate is solved separately as a linear problem.
    Degenerate families (e.g. coincident points with distinct lines) may
    admit folds beyond the slope-cubic solutions; only the cubic's are
    enumerated.
    """
    if l1.contains(p1):
        raise PreconditionViolated("p1 lies on l1")
    if l2.contains(p2):
        raise PreconditionViolated("p2 lies on l2")
    if l1.is_parallel(l2):
        raise PreconditionViolated("l1 parallel to l2")
    if p1.same(p2) and l1.same(l2):
        raise PreconditionViolated("points coincide and lines coincide")

    # reflection of (x0,y0) over y = m x + t, incidence on (a,b,c), cleared
    # of the 1+m^2 denominator:  Q(m) + t * 2(b - a m) = 0  with
    # Q(m) = (c - a x0 + b y0) m^2 + 2(a y0 + b x0) m + (c + a x0 - b y0)
    def q_coeffs(pt: Point, ln: Line):
        qa = ln.c - ln.a * pt.x + ln.b * pt.y
        qb = R(2) * (ln.a * pt.y + ln.b * pt.x)
        qc = ln.c + ln.a * pt.x - ln.b * pt.y
        return qa, qb, qc

    a1c, b1c, c1c = q_coeffs(p1, l1)
    a2c, b2c, c2c = q_coeffs(p2, l2)
    # eliminate t: Q1(m)(b2 - a2 m) - Q2(m)(b1 - a1 m) = 0
    k3 = canonical_value(l1.a * a2c - l2.a * a1c)
    k2 = canonical_value(
        a1c * l2.b - b1c * l2.a - (a2c * l1.b - b2c * l1.a)
    )
    k1 = canonical_value(
        b1c * l2.b - c1c * l2.a - (b2c * l1.b - c2c * l1.a)
    )
    k0 = canonical_value(c1c * l2.b - c2c * l1.b)

    slopes = []
    if sign_of(k3) != 0:
        roots = real_roots_cubic(k2 / k3, k1 / k3, k0 / k3)
        witness = f"cubic({len(roots)})"
        slopes = [root for root, _ in roots]
    elif sign_of(k2) != 0:
        disc = k1 * k1 - R(4) * k2 * k0
        sd = sign_of(disc)
        if sd < 0:
            witness = "quadratic(negative)"
        elif sd == 0:
            witness = "quadratic(zero)"
            slopes = [-k1 / (R(2) * k2)]
        else:
            witness = "quadratic(positive)"
            root_d = sqrt_nonneg(disc)
            slopes = [
                (-k1 - root_d) / (R(2) * k2),
                (-k1 + root_d) / (R(2) * k2),
            ]
    elif sign_of(k1) != 0:
        witness = "linear"
        slopes = [-k0 / k1]
    else:
        witness = "linear" if sign_of(k0) != 0 else "degenerate"
        slopes = []

    folds = []
    for m in slopes:
        den1 = l1.b - l1.a * m
        den2 = l2.b - l2.a * m
        q1 = (a1c * m + b1c) * m + c1c
        q2 = (a2c * m + b2c) * m + c2c
        if sign_of(den1) != 0:
            t = -q1 / (R(2) * den1)
        elif sign_of(den2) != 0:
            t = -q2 / (R(2) * den2)
        else:
            continue
        fold = Line(m, R(-1), t)
        if _h6_verify(p1, p2, l1, l2, fold):
            folds.append(fold)

    # vertical fold x = t: reflection (2t - x, y); linear in t when a1 != 0
    if sign_of(l1.a) != 0:
        t = (l1.a * p1.x - l1.b * p1.y - l1.c) / (R(2) * l1.a)
        fold = Line(R(1), R(0), -t)
        if _h6_verify(p1, p2, l1, l2, fold):
            folds.append(fold)

    return FoldResult(_sort_lines(folds), witness)


def _h6_verify(p1, p2, l1, l2, fold) -> bool:
    return l1.contains(reflect_point(p1, fold)) and l2.contains(
        reflect_point(p2, fold)
    )


def fold_h7(p: Point, l1: Line, l2: Line) -> FoldResult:
    """Fold orthogonal to l1 placing p onto l2: a linear problem, 0 or 1
    line (or a canonical representative of the degenerate pencil)."""
    # folds orthogonal to l1: -b1 x + a1 y + t = 0
    na, nb = -l1.b, l1.a
    n2 = na * na + nb * nb
    # reflect p over the fold and demand incidence on l2: linear in t
    # X' = p - 2 (n.p + t)/n2 * n
    np_ = na * p.x + nb * p.y
    # coefficient of t and constant in  l2.eval(X') * n2
    coef = R(-2) * (l2.a * na + l2.b * nb)
    const = (
        l2.a * (p.x * n2 - R(2) * np_ * na)
        + l2.b * (p.y * n2 - R(2) * np_ * nb)
        + l2.c * n2
    )
    if sign_of(coef) != 0:
        t = -const / coef
        fold = Line(na, nb, t)
        assert fold.is_perp(l1)
        assert l2.contains(reflect_point(p, fold))
        return FoldResult([fold], "linear")
    if sign_of(const) == 0:
        # every orthogonal fold works; canonical choice passes through p
        fold = Line(na, nb, -np_)
        assert fold.is_perp(l1) and fold.contains(p)
        assert l2.contains(reflect_point(p, fold))
        return FoldResult([fold], "degenerate-pencil")
    return FoldResult([], "linear")
