"""Independent oracles for derived expected values.

These never touch origeom internals: plain Fraction bisection, brute
enumeration, and mpmath at 256 bits for decimal references.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

MP_BITS = 256


def mp_value(expr_str: str, digits: int) -> str:
    """Evaluate an mpmath expression at 256-bit precision, rounded to
    ``digits`` fractional digits (half-even via mpmath nstr is not
    guaranteed, so round through Fraction)."""
    with mpmath.workprec(MP_BITS):
        v = eval(expr_str, {"mp": mpmath, "__builtins__": {}})
        f = Fraction(mpmath.nstr(v, 60, strip_zeros=False))
    scale = 10**digits
    scaled = f * scale
    q, rem = divmod(scaled.numerator, scaled.denominator)
    twice = 2 * rem
    if twice > scaled.denominator or (twice == scaled.denominator and q % 2):
        q += 1
    sign = "-" if q < 0 else ""
    q = abs(q)
    ip, fp = divmod(q, scale)
    return f"{sign}{ip}.{fp:0{digits}d}"


def mpf_of(expr_str: str):
    with mpmath.workprec(MP_BITS):
        return eval(expr_str, {"mp": mpmath, "__builtins__": {}})


def poly_eval(coeffs, x: Fraction) -> Fraction:
    """coeffs highest degree first."""
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * x + Fraction(c)
    return acc


def bisect_root(coeffs, lo: Fraction, hi: Fraction, bits: int = 200) -> tuple:
    """Bracketing bisection; returns (lo, hi) with hi-lo <= 2^-bits."""
    lo, hi = Fraction(lo), Fraction(hi)
    flo = poly_eval(coeffs, lo)
    assert flo != 0 and poly_eval(coeffs, hi) != 0
    sign_lo = 1 if flo > 0 else -1
    target = Fraction(1, 2**bits)
    while hi - lo > target:
        mid = (lo + hi) / 2
        fm = poly_eval(coeffs, mid)
        if fm == 0:
            return mid, mid
        if (1 if fm > 0 else -1) == sign_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def bisect_all_roots(coeffs, bound: int, bits: int = 200):
    """All real roots of a squarefree cubic by sign-change scanning."""
    grid = 4096
    pts = [Fraction(i * bound, grid // 2) - bound for i in range(grid + 1)]
    roots = []
    for a, b in zip(pts, pts[1:]):
        fa, fb = poly_eval(coeffs, a), poly_eval(coeffs, b)
        if fa == 0:
            roots.append((a, a))
        elif fa * fb < 0:
            roots.append(bisect_root(coeffs, a, b, bits))
    if poly_eval(coeffs, pts[-1]) == 0:
        roots.append((pts[-1], pts[-1]))
    return roots
