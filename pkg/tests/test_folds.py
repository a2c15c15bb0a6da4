"""Fold solvers: all seven operations, guards, post-checks, determinism."""

import random
from fractions import Fraction

import pytest

from origeom import folds as fo
from origeom import plane as pl
from origeom.errors import CoincidentPoints, PreconditionViolated
from origeom.exactnum import (
    eq_value,
    rational,
    sign_of,
    sqrt_nonneg,
    to_decimal,
)

from oracles import mp_value

R = rational


def P(x, y):
    return pl.Point(R(Fraction(x)), R(Fraction(y)))


def L(a, b, c):
    return pl.Line(R(Fraction(a)), R(Fraction(b)), R(Fraction(c)))


X_EQ = lambda v: L(1, 0, -Fraction(v))  # x = v
Y_EQ = lambda v: L(0, 1, -Fraction(v))  # y = v


def test_h1():
    res = fo.fold_h1(P(0, 0), P(1, 0))
    assert len(res) == 1 and res.lines[0].same(Y_EQ(0))
    res = fo.fold_h1(P(0, 0), P(0, 1))
    assert res.lines[0].same(X_EQ(0))
    res = fo.fold_h1(P(1, 2), P(3, 5))
    assert res.lines[0].same(pl.Line(R(3), R(-2), R(1)))
    with pytest.raises(CoincidentPoints):
        fo.fold_h1(P(1, 1), P(1, 1))


def test_h2():
    assert fo.fold_h2(P(0, 0), P(2, 0)).lines[0].same(X_EQ(1))
    assert fo.fold_h2(P(0, 0), P(0, 2)).lines[0].same(Y_EQ(1))
    res = fo.fold_h2(P(0, 0), P(2, 2))
    assert res.lines[0].same(pl.Line(R(1), R(1), R(-2)))
    assert pl.reflect_point(P(0, 0), res.lines[0]).same(P(2, 2))


def test_h3_intersecting():
    res = fo.fold_h3(X_EQ(0), Y_EQ(0))
    assert len(res) == 2
    got = {tuple((l.a.value, l.b.value, l.c.value)) for l in res.lines
           if hasattr(l.a, "value")}
    d1 = pl.Line(R(1), R(-1), R(0))
    d2 = pl.Line(R(1), R(1), R(0))
    assert any(l.same(d1) for l in res.lines)
    assert any(l.same(d2) for l in res.lines)


def test_h3_parallel_and_equal():
    res = fo.fold_h3(Y_EQ(0), Y_EQ(2))
    assert len(res) == 1 and res.lines[0].same(Y_EQ(1))
    res = fo.fold_h3(Y_EQ(0), Y_EQ(0))
    assert res.witness == "degenerate-equal"
    assert len(res) == 1 and res.lines[0].same(Y_EQ(0))


def test_h3_bisector_slope():
    # y=0 vs x-y=0: bisector slope tan(22.5 deg) = sqrt2 - 1
    res = fo.fold_h3(Y_EQ(0), L(1, -1, 0))
    assert len(res) == 2
    s2 = sqrt_nonneg(R(2))
    slopes = [l.slope_value() for l in res.lines]
    want_low = s2 - R(1)
    # the other bisector has the negative reciprocal slope
    want_high = R(-1) / want_low
    assert any(s is not None and eq_value(s, want_low) for s in slopes)
    assert any(s is not None and eq_value(s, want_high) for s in slopes)
    # reflection oracle on two points of l1 (checked inside fold_h3 too)
    for fold in res.lines:
        img = pl.reflect_point(P(3, 0), fold)
        assert sign_of(img.x - img.y) == 0


def test_h4():
    assert fo.fold_h4(P(0, 0), Y_EQ(0)).lines[0].same(X_EQ(0))
    assert fo.fold_h4(P(1, 1), X_EQ(0)).lines[0].same(Y_EQ(1))
    res = fo.fold_h4(P(2, 3), L(3, 4, 0))
    assert res.lines[0].same(pl.Line(R(4), R(-3), R(1)))


def test_h5_square_root_configuration():
    # fold placing (0,2) onto y=0 through (0, 1/2): images (+-x, 0), x^2 = 2
    res = fo.fold_h5(P(0, 2), P(0, Fraction(1, 2)), Y_EQ(0))
    assert len(res) == 2 and res.witness == "quadratic(positive)"
    for fold in res.lines:
        img = pl.reflect_point(P(0, 2), fold)
        assert sign_of(img.y) == 0
        assert sign_of(img.x * img.x - R(2)) == 0


def test_h5_empty_and_tangent():
    res = fo.fold_h5(P(0, 1), P(0, 3), Y_EQ(0))
    assert len(res) == 0 and res.witness == "quadratic(negative)"
    res = fo.fold_h5(P(0, 2), P(0, 1), Y_EQ(0))
    assert len(res) == 1 and res.witness == "quadratic(zero)"
    assert res.lines[0].same(Y_EQ(1))
    assert pl.reflect_point(P(0, 2), res.lines[0]).same(P(0, 0))


def test_h5_count_matches_discriminant_and_guard():
    rng = random.Random(505)
    for _ in range(500):
        p1 = P(rng.randint(-8, 8), rng.randint(-8, 8))
        p2 = P(rng.randint(-8, 8), rng.randint(-8, 8))
        if p1.same(p2):
            continue
        a, b = rng.randint(-3, 3), rng.randint(-3, 3)
        if (a, b) == (0, 0):
            a = 1
        l1 = L(a, b, rng.randint(-6, 6))
        res = fo.fold_h5(p1, p2, l1)
        guard = pl.closer(p2, l1, p1)
        assert (len(res) > 0) == guard
        if res.witness == "quadratic(positive)":
            assert len(res) == 2
        elif res.witness == "quadratic(zero)":
            assert len(res) == 1
        else:
            assert len(res) == 0
        for fold in res.lines:
            assert fold.contains(p2)
            assert l1.contains(pl.reflect_point(p1, fold))


def test_h6_doubling_the_cube():
    # fold meets the y axis at (0, s) with s^3 = 2
    res = fo.fold_h6(P(-1, 0), P(0, -2), X_EQ(1), Y_EQ(2))
    assert len(res) >= 1
    fold = res.lines[0]
    s = pl.intersect(fold, X_EQ(0)).y
    assert sign_of(s * s * s - R(2)) == 0
    assert to_decimal(s, 7) == "1.2599210"
    assert to_decimal(s, 25) == mp_value("mp.cbrt(2)", 25)


def test_h6_perfect_cube():
    # r = 8 gives s = 2 exactly
    res = fo.fold_h6(P(-1, 0), P(0, -8), X_EQ(1), Y_EQ(8))
    assert len(res) >= 1
    hit = False
    for fold in res.lines:
        s = pl.intersect(fold, X_EQ(0)).y
        if sign_of(s - R(2)) == 0:
            hit = True
    assert hit


def test_h6_guards():
    with pytest.raises(PreconditionViolated) as e:
        fo.fold_h6(P(1, 0), P(0, -2), X_EQ(1), Y_EQ(2))
    assert "p1" in str(e.value)
    with pytest.raises(PreconditionViolated):
        fo.fold_h6(P(-1, 0), P(0, 2), X_EQ(1), Y_EQ(2))
    with pytest.raises(PreconditionViolated):
        fo.fold_h6(P(-1, 0), P(0, -2), X_EQ(1), X_EQ(2))
    with pytest.raises(PreconditionViolated):
        fo.fold_h6(P(2, 0), P(2, 0), X_EQ(1), X_EQ(1))


def test_h6_verified_reflections():
    rng = random.Random(66)
    found_any = 0
    for _ in range(60):
        p1 = P(rng.randint(-6, 6), rng.randint(-6, 6))
        p2 = P(rng.randint(-6, 6), rng.randint(-6, 6))
        l1 = L(1, rng.randint(-3, 3), rng.randint(-5, 5))
        l2 = L(rng.randint(-3, 3), 1, rng.randint(-5, 5))
        if l1.contains(p1) or l2.contains(p2) or l1.is_parallel(l2):
            continue
        if p1.same(p2) and l1.same(l2):
            continue
        res = fo.fold_h6(p1, p2, l1, l2)
        found_any += len(res) > 0
        for fold in res.lines:
            assert l1.contains(pl.reflect_point(p1, fold))
            assert l2.contains(pl.reflect_point(p2, fold))
    assert found_any > 10


def test_h7():
    res = fo.fold_h7(P(0, 0), Y_EQ(0), X_EQ(2))
    assert len(res) == 1 and res.lines[0].same(X_EQ(1))
    res = fo.fold_h7(P(0, 0), X_EQ(0), Y_EQ(4))
    assert res.lines[0].same(Y_EQ(2))
    # (1,1), l1: y=0, l2: x-y=0 -> single fold, reflection lands on l2
    res = fo.fold_h7(P(1, 1), Y_EQ(0), L(1, -1, 0))
    assert len(res) == 1
    img = pl.reflect_point(P(1, 1), res.lines[0])
    assert sign_of(img.x - img.y) == 0
    # parallel lines, no solution
    res = fo.fold_h7(P(0, 5), Y_EQ(0), Y_EQ(2))
    assert len(res) == 0


def test_determinism():
    args = (P(0, 2), P(0, Fraction(1, 2)), Y_EQ(0))
    r1 = fo.fold_h5(*args)
    r2 = fo.fold_h5(*args)
    assert [id(l.a) for l in r1.lines] == [id(l.a) for l in r2.lines]
    assert [l.same(m) for l, m in zip(r1.lines, r2.lines)] == [True, True]


def test_result_ordering():
    res = fo.fold_h3(X_EQ(0), Y_EQ(0))
    slopes = [l.slope_value() for l in res.lines]
    assert all(s is not None for s in slopes)
    assert sign_of(slopes[1] - slopes[0]) > 0
