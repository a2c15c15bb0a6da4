"""Rational interval evaluation with directed rounding.

Bounds are Fractions on the dyadic grid 2^-bits. Enclosures are cached per
node and only ever shrink (new results are intersected with cached ones), so
refinement is monotone as the spec invariant requires.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import nodes as _n

_LOCK = _n._LOCK


def round_down(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(math.floor(x * scale), scale)


def round_up(x: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(-math.floor(-x * scale), scale)


def _sqrt_down(x: Fraction, bits: int) -> Fraction:
    if x <= 0:
        return Fraction(0)
    scale = 1 << (2 * bits)
    n = math.floor(x * scale)
    return Fraction(math.isqrt(n), 1 << bits)


def _sqrt_up(x: Fraction, bits: int) -> Fraction:
    if x <= 0:
        return Fraction(0)
    scale = 1 << (2 * bits)
    n = -math.floor(-x * scale)
    s = math.isqrt(n)
    if s * s < n:
        s += 1
    return Fraction(s, 1 << bits)


def _mul_iv(a, b, bits):
    lo1, hi1 = a
    lo2, hi2 = b
    products = (lo1 * lo2, lo1 * hi2, hi1 * lo2, hi1 * hi2)
    return round_down(min(products), bits), round_up(max(products), bits)


def _recip_iv(iv, bits):
    lo, hi = iv
    # caller guarantees 0 is excluded
    return round_down(1 / hi, bits), round_up(1 / lo, bits)


def refine(node, bits: int):
    """Enclosing interval of ``node`` with width roughly 2^-bits or better."""
    with _LOCK:
        if node._bits >= bits:
            return node._lo, node._hi
    lo, hi = _compute(node, bits)
    with _LOCK:
        if node._lo is not None:
            # keep monotonicity: intersect with the previous enclosure
            lo = max(lo, node._lo)
            hi = min(hi, node._hi)
        node._lo, node._hi, node._bits = lo, hi, bits
        return lo, hi


def _compute(node, bits: int):
    if isinstance(node, _n.Rat):
        return node.value, node.value
    work = bits + 4
    if isinstance(node, _n.Add):
        l = refine(node.left, work)
        r = refine(node.right, work)
        return round_down(l[0] + r[0], bits), round_up(l[1] + r[1], bits)
    if isinstance(node, _n.Sub):
        l = refine(node.left, work)
        r = refine(node.right, work)
        return round_down(l[0] - r[1], bits), round_up(l[1] - r[0], bits)
    if isinstance(node, _n.Mul):
        l = refine(node.left, work)
        r = refine(node.right, work)
        return _mul_iv(l, r, bits)
    if isinstance(node, _n.Div):
        l = refine(node.left, work)
        d = work
        while True:
            r = refine(node.right, d)
            if r[0] > 0 or r[1] < 0:
                break
            d *= 2
            if d > _n.default_policy().budget_bits * 64:
                from ..errors import UndecidedSign

                raise UndecidedSign(
                    f"denominator in {_n.to_sexpr(node)} refuses to separate", d
                )
        return _mul_iv(l, _recip_iv(r, work), bits)
    if isinstance(node, _n.Sqrt):
        c = refine(node.child, 2 * work)
        return _sqrt_down(c[0], bits), _sqrt_up(c[1], bits)
    if isinstance(node, _n.CubicRoot):
        return _refine_cubic_root(node, bits)
    raise TypeError(f"unknown node {node!r}")


# -- cubic root bracket refinement -------------------------------------------


def poly_sign_at(p, q, r, m: Fraction, exact_fallback=True) -> int:
    """Sign of m^3 + p m^2 + q m + r for a rational m; exact when needed."""
    rp = _n._rational_value(p)
    rq = _n._rational_value(q)
    rr = _n._rational_value(r)
    if rp is not None and rq is not None and rr is not None:
        v = m * m * m + rp * m * m + rq * m + rr
        return (v > 0) - (v < 0)
    bits = 64
    cap = _n.default_policy().budget_bits
    while bits <= cap:
        lp = refine(p, bits)
        lq = refine(q, bits)
        lr = refine(r, bits)
        m2 = m * m
        m3 = m2 * m
        lo = m3 + min(lp[0] * m2, lp[1] * m2) + min(lq[0] * m, lq[1] * m) + lr[0]
        hi = m3 + max(lp[0] * m2, lp[1] * m2) + max(lq[0] * m, lq[1] * m) + lr[1]
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2
    if not exact_fallback:
        from ..errors import UndecidedSign

        raise UndecidedSign("cubic evaluation", cap)
    mm = _n.rational(m)
    expr = mm * mm * mm + p * (mm * mm) + q * mm + r
    return _n.sign_of(expr)


def _refine_cubic_root(node, bits: int):
    target = Fraction(1, 1 << bits)
    with _LOCK:
        lo, hi, slo = node._bracket
    while hi - lo > target:
        mid = (lo + hi) / 2
        s = poly_sign_at(node.p, node.q, node.r, mid)
        if s == 0:
            lo = hi = mid
            break
        if s == slo:
            lo = mid
        else:
            hi = mid
    with _LOCK:
        blo, bhi, _ = node._bracket
        if lo >= blo and hi <= bhi:
            node._bracket = (lo, hi, slo)
    return lo, hi
