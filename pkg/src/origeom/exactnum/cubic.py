"""Real roots of monic cubics x^3 + p x^2 + q x + r over constructible
coefficients.

Repeated-root cases (zero discriminant) fold to rational functions of the
coefficients, and rational-coefficient cubics are scanned for rational roots
(then deflated to a quadratic), so CubicRoot nodes are only ever created for
squarefree cubics with no known root. Root isolation uses exact sign
evaluation at dyadic points between the critical points.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import UndecidedSign
from . import interval as _iv
from . import nodes as _n


def _factorize(n: int) -> dict:
    """Prime factorization by trial division + Pollard rho."""
    n = abs(n)
    factors: dict = {}

    def record(p):
        factors[p] = factors.get(p, 0) + 1

    for p in (2, 3, 5, 7, 11, 13):
        while n % p == 0:
            record(p)
            n //= p
    if n == 1:
        return factors

    def is_prime(m):
        if m < 2:
            return False
        for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
            if m % a == 0:
                return m == a
        d = m - 1
        s = 0
        while d % 2 == 0:
            d //= 2
            s += 1
        for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
            x = pow(a, d, m)
            if x in (1, m - 1):
                continue
            for _ in range(s - 1):
                x = x * x % m
                if x == m - 1:
                    break
            else:
                return False
        return True

    def rho(m):
        if m % 2 == 0:
            return 2
        c = 1
        while True:
            x = y = 2
            d = 1
            while d == 1:
                x = (x * x + c) % m
                y = (y * y + c) % m
                y = (y * y + c) % m
                d = math.gcd(abs(x - y), m)
            if d != m:
                return d
            c += 1

    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            record(m)
            continue
        d = rho(m)
        stack.append(d)
        stack.append(m // d)
    return factors


def _divisors(n: int):
    if n == 0:
        return []
    divs = [1]
    for p, e in _factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _rational_root(rp: Fraction, rq: Fraction, rr: Fraction):
    """A rational root of x^3 + rp x^2 + rq x + rr, or None."""
    if rr == 0:
        return Fraction(0)
    D = math.lcm(rp.denominator, rq.denominator, rr.denominator)
    # y = D x is a root of the monic integer cubic y^3 + A2 y^2 + A1 y + A0
    A2 = int(rp * D)
    A1 = int(rq * D * D)
    A0 = int(rr * D * D * D)
    for d in _divisors(A0):
        for y in (d, -d):
            if ((y + A2) * y + A1) * y + A0 == 0:
                return Fraction(y, D)
    return None


def _sorted_by_value(values):
    out = list(values)
    for i in range(1, len(out)):
        j = i
        while j > 0 and _n.cmp_value(out[j], out[j - 1]) < 0:
            out[j], out[j - 1] = out[j - 1], out[j]
            j -= 1
    return out


def _magnitude_bound(p, q, r) -> int:
    """Integer B with all roots strictly inside (-B, B) (Cauchy bound)."""
    m = Fraction(0)
    for coef in (p, q, r):
        lo, hi = _iv.refine(coef, 16)
        m = max(m, abs(lo), abs(hi))
    return int(math.floor(m)) + 2


def _separator(p, q, r, t_expr, want_sign: int) -> Fraction:
    """Dyadic point near the critical point t_expr where the cubic has
    want_sign; lands strictly between consecutive roots."""
    bits = 16
    cap = _n.default_policy().budget_bits * 16
    while bits <= cap:
        lo, hi = _iv.refine(t_expr, bits)
        mid = _iv.round_down((lo + hi) / 2, bits + 2)
        s = _iv.poly_sign_at(p, q, r, mid)
        if s == want_sign:
            return mid
        bits *= 2
    raise UndecidedSign("cubic root separation", cap)


def real_roots_cubic(p, q, r):
    """All real roots of x^3 + p x^2 + q x + r, ascending, as
    (root, multiplicity) pairs with multiplicities collapsed."""
    p = _n._coerce(p)
    q = _n._coerce(q)
    r = _n._coerce(r)
    disc = (
        18 * p * q * r
        - 4 * p * p * p * r
        + p * p * q * q
        - 4 * q * q * q
        - 27 * r * r
    )
    s_disc = _n.sign_of(disc)
    if s_disc == 0:
        # repeated roots are rational functions of the coefficients
        if _n.sign_of(p * p - 3 * q) == 0:
            return [(-p / 3, 3)]
        rho = (p * q - 9 * r) / (2 * (3 * q - p * p))
        sigma = -p - 2 * rho
        if _n.cmp_value(rho, sigma) < 0:
            return [(rho, 2), (sigma, 1)]
        return [(sigma, 1), (rho, 2)]
    count = 3 if s_disc > 0 else 1
    rp = _n._rational_value(p)
    rq = _n._rational_value(q)
    rr = _n._rational_value(r)
    scanned = False
    if rp is not None and rq is not None and rr is not None:
        scanned = True
        c = _rational_root(rp, rq, rr)
        if c is not None:
            cn = _n.rational(c)
            b = rp + c
            qdisc = b * b - 4 * (rq + c * b)
            if count == 1:
                return [(cn, 1)]
            root_d = _n.sqrt_nonneg(_n.rational(qdisc))
            r1 = (_n.rational(-b) - root_d) / 2
            r2 = (_n.rational(-b) + root_d) / 2
            return [(v, 1) for v in _sorted_by_value([cn, r1, r2])]
    B = _magnitude_bound(p, q, r)
    b_lo, b_hi = Fraction(-B), Fraction(B)
    if count == 1:
        node = _n._make_cubic_root(p, q, r, 0, 1, (b_lo, b_hi, -1))
        node.scanned = scanned
        return [(node, 1)]
    # three real roots: critical points t- < t+ separate them, f(t-) > 0 > f(t+)
    g = _n.sqrt_nonneg(p * p - 3 * q)
    d1 = _separator(p, q, r, (-p - g) / 3, 1)
    d2 = _separator(p, q, r, (-p + g) / 3, -1)
    brackets = [(b_lo, d1, -1), (d1, d2, 1), (d2, b_hi, -1)]
    out = []
    for i, br in enumerate(brackets):
        node = _n._make_cubic_root(p, q, r, i, 3, br)
        node.scanned = scanned
        out.append((node, 1))
    return out


def cubic_root_by_index(p, q, r, index: int):
    """The index-th (ascending) real root; interned fast path first."""
    p = _n._coerce(p)
    q = _n._coerce(q)
    r = _n._coerce(r)
    with _n._LOCK:
        node = _n._INTERN.get(("cubicroot", p, q, r, index))
    if node is not None:
        return node
    roots = real_roots_cubic(p, q, r)
    if not 0 <= index < len(roots):
        raise ValueError(f"cubic has {len(roots)} distinct real roots")
    return roots[index][0]
