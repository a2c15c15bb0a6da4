"""Symbolic normalization of constructible reals in radical towers.

A value is evaluated into a tower of extensions of Q: quadratic levels
(adjoin sqrt(d) for a tower element d) and cubic levels (adjoin the smallest
real root of a monic cubic with tower coefficients). Elements are nested
tuples of Fractions; an element is the zero of the tower iff all its leaves
are zero.

Soundness: a zero normal form always means the value is exactly zero,
because the generators genuinely satisfy their defining polynomials in R, so
evaluation is a ring homomorphism from the quotient ring onto the reals.
The converse (nonzero normal form means nonzero value) holds only when every
level is *certified* to be a proper field extension: quadratic levels by a
complete is-square test over the certified part below, cubic levels by the
rational-root scan done at node construction plus the degree argument
(an irreducible rational cubic stays irreducible over any 2-power tower).
Uncertified nonzero normal forms fall back to interval refinement.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import interval as _iv
from . import nodes as _n

_F0 = Fraction(0)
_F1 = Fraction(1)


class _TowerFail(Exception):
    """Normalization impossible (division failed, budget hit, etc.)."""


def _square_part(n: int):
    """n = k^2 * sf with sf squarefree; falls back to (1, n) if factoring
    looks too expensive."""
    if n <= 0:
        raise _TowerFail("square part of nonpositive integer")
    if n.bit_length() > 96:
        return 1, n
    from .cubic import _factorize

    k, sf = 1, 1
    for p, e in _factorize(n).items():
        k *= p ** (e // 2)
        if e % 2:
            sf *= p
    return k, sf


# try_sqrt verdicts
_FOUND = "found"
_NO = "no"
_UNKNOWN = "unknown"


class _Quad:
    __slots__ = ("d", "d_height", "gen_node", "certified", "canon_gen")
    kind = "quad"

    def __init__(self, d, d_height, gen_node, certified):
        self.d = d
        self.d_height = d_height
        self.gen_node = gen_node
        self.certified = certified
        self.canon_gen = None

    def arity(self):
        return 2


class _Cubic:
    __slots__ = ("P", "Q", "R", "c_height", "gen_node", "certified", "canon_gen")
    kind = "cubic"

    def __init__(self, P, Q, R, c_height, gen_node, certified):
        self.P = P
        self.Q = Q
        self.R = R
        self.c_height = c_height
        self.gen_node = gen_node
        self.certified = certified
        self.canon_gen = None

    def arity(self):
        return 3


class Normalizer:
    """One normalization context; towers are never shared between contexts."""

    def __init__(self, numeric_bits_cap: int | None = None):
        self.levels: list = []
        self.memo: dict = {}  # id(node) -> (height, elem)
        self.quad_keys: dict = {}  # trimmed radicand -> level index
        self.cubic_keys: dict = {}  # trimmed (P,Q,R) -> level index
        self.sqrt_memo: dict = {}  # (height, elem) -> verdict
        self.cap = numeric_bits_cap or _n.default_policy().budget_bits * 16

    # -- element algebra ---------------------------------------------------

    def zero(self, h):
        if h == 0:
            return _F0
        return tuple(self.zero(h - 1) for _ in range(self.levels[h - 1].arity()))

    def one(self, h):
        if h == 0:
            return _F1
        z = self.zero(h - 1)
        return (self.one(h - 1),) + (z,) * (self.levels[h - 1].arity() - 1)

    def lift(self, e, from_h, to_h):
        for h in range(from_h, to_h):
            z = self.zero(h)
            e = (e,) + (z,) * (self.levels[h].arity() - 1)
        return e

    def iszero(self, e):
        if isinstance(e, Fraction):
            return e == 0
        return all(self.iszero(c) for c in e)

    def trim(self, e, h):
        while h > 0 and all(self.iszero(c) for c in e[1:]):
            e = e[0]
            h -= 1
        return e, h

    def add(self, h, a, b):
        if h == 0:
            return a + b
        return tuple(self.add(h - 1, x, y) for x, y in zip(a, b))

    def sub(self, h, a, b):
        if h == 0:
            return a - b
        return tuple(self.sub(h - 1, x, y) for x, y in zip(a, b))

    def neg(self, h, a):
        if h == 0:
            return -a
        return tuple(self.neg(h - 1, x) for x in a)

    def scale(self, h, a, f: Fraction):
        if h == 0:
            return a * f
        return tuple(self.scale(h - 1, x, f) for x in a)

    def mul(self, h, a, b):
        if h == 0:
            return a * b
        level = self.levels[h - 1]
        if level.kind == "quad":
            a0, a1 = a
            b0, b1 = b
            d = self.lift(level.d, level.d_height, h - 1)
            t00 = self.mul(h - 1, a0, b0)
            t11 = self.mul(h - 1, a1, b1)
            t01 = self.mul(h - 1, a0, b1)
            t10 = self.mul(h - 1, a1, b0)
            return (
                self.add(h - 1, t00, self.mul(h - 1, t11, d)),
                self.add(h - 1, t01, t10),
            )
        # cubic: multiply polynomials of degree <= 2, reduce by
        # x^3 = -(P x^2 + Q x + R), x^4 = (P^2-Q) x^2 + (PQ-R) x + PR
        P = self.lift(level.P, level.c_height, h - 1)
        Q = self.lift(level.Q, level.c_height, h - 1)
        R = self.lift(level.R, level.c_height, h - 1)
        z = self.zero(h - 1)
        c = [z, z, z, z, z]
        for i, ai in enumerate(a):
            if self.iszero(ai):
                continue
            for j, bj in enumerate(b):
                if self.iszero(bj):
                    continue
                c[i + j] = self.add(h - 1, c[i + j], self.mul(h - 1, ai, bj))
        c3, c4 = c[3], c[4]
        if not self.iszero(c4):
            p2q = self.sub(h - 1, self.mul(h - 1, P, P), Q)
            pqr = self.sub(h - 1, self.mul(h - 1, P, Q), R)
            pr = self.mul(h - 1, P, R)
            c[2] = self.add(h - 1, c[2], self.mul(h - 1, c4, p2q))
            c[1] = self.add(h - 1, c[1], self.mul(h - 1, c4, pqr))
            c[0] = self.add(h - 1, c[0], self.mul(h - 1, c4, pr))
        if not self.iszero(c3):
            c[2] = self.sub(h - 1, c[2], self.mul(h - 1, c3, P))
            c[1] = self.sub(h - 1, c[1], self.mul(h - 1, c3, Q))
            c[0] = self.sub(h - 1, c[0], self.mul(h - 1, c3, R))
        return (c[0], c[1], c[2])

    def inv(self, h, a):
        if h == 0:
            if a == 0:
                raise _TowerFail("inverse of zero")
            return 1 / a
        level = self.levels[h - 1]
        if level.kind == "quad":
            a0, a1 = a
            if self.iszero(a1):
                return (self.inv(h - 1, a0), self.zero(h - 1))
            d = self.lift(level.d, level.d_height, h - 1)
            norm = self.sub(
                h - 1,
                self.mul(h - 1, a0, a0),
                self.mul(h - 1, self.mul(h - 1, a1, a1), d),
            )
            inv_norm = self.inv(h - 1, norm)
            return (
                self.mul(h - 1, a0, inv_norm),
                self.neg(h - 1, self.mul(h - 1, a1, inv_norm)),
            )
        return self._cubic_inv(h, a)

    def div(self, h, a, b):
        return self.mul(h, a, self.inv(h, b))

    # polynomial helpers over the field of height h-1 elements, used for
    # inverses modulo the cubic minimal polynomial

    def _poly_trim(self, h, p):
        while p and self.iszero(p[-1]):
            p.pop()
        return p

    def _poly_divmod(self, h, num, den):
        num = list(num)
        dlead_inv = self.inv(h, den[-1])
        deg_d = len(den) - 1
        quo = [self.zero(h)] * max(0, len(num) - deg_d)
        while len(num) - 1 >= deg_d and num:
            if self.iszero(num[-1]):
                num.pop()
                continue
            shift = len(num) - 1 - deg_d
            coef = self.mul(h, num[-1], dlead_inv)
            quo[shift] = coef
            for i in range(len(den)):
                num[shift + i] = self.sub(
                    h, num[shift + i], self.mul(h, coef, den[i])
                )
            num.pop()
        return quo, self._poly_trim(h, num)

    def _cubic_inv(self, h, a):
        level = self.levels[h - 1]
        hh = h - 1
        P = self.lift(level.P, level.c_height, hh)
        Q = self.lift(level.Q, level.c_height, hh)
        R = self.lift(level.R, level.c_height, hh)
        minpoly = [R, Q, P, self.one(hh)]
        apoly = self._poly_trim(hh, list(a))
        if not apoly:
            raise _TowerFail("inverse of zero")
        old_r, r = apoly, minpoly
        old_s, s = [self.one(hh)], []
        while r:
            q, rem = self._poly_divmod(hh, old_r, r)
            old_r, r = r, rem
            # old_s - q*s
            prod = [self.zero(hh)] * (len(q) + len(s))
            for i, qi in enumerate(q):
                for j, sj in enumerate(s):
                    prod[i + j] = self.add(hh, prod[i + j], self.mul(hh, qi, sj))
            new_s = [self.zero(hh)] * max(len(old_s), len(prod))
            for i, c in enumerate(old_s):
                new_s[i] = self.add(hh, new_s[i], c)
            for i, c in enumerate(prod):
                new_s[i] = self.sub(hh, new_s[i], c)
            old_s, s = s, self._poly_trim(hh, new_s)
        if len(old_r) != 1:
            raise _TowerFail("cubic minimal polynomial is reducible here")
        g_inv = self.inv(hh, old_r[0])
        out = [self.mul(hh, c, g_inv) for c in old_s]
        out += [self.zero(hh)] * (3 - len(out))
        return tuple(out[:3])

    # -- numeric evaluation of elements -------------------------------------

    def _elem_interval(self, e, h, bits):
        if h == 0:
            return e, e
        level = self.levels[h - 1]
        g = _iv.refine(level.gen_node, bits)
        lo, hi = self._elem_interval(e[-1], h - 1, bits)
        for c in reversed(e[:-1]):
            plo, phi = _iv._mul_iv((lo, hi), g, bits)
            clo, chi = self._elem_interval(c, h - 1, bits)
            lo, hi = clo + plo, chi + phi
        return lo, hi

    def elem_sign(self, e, h) -> int:
        e, h = self.trim(e, h)
        if isinstance(e, Fraction):
            return (e > 0) - (e < 0)
        bits = 64
        while bits <= self.cap:
            lo, hi = self._elem_interval(e, h, bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise _TowerFail("numeric sign of tower element undecided")

    # -- square detection ----------------------------------------------------

    def _chain_certified(self, h) -> bool:
        return all(level.certified for level in self.levels[:h])

    def try_sqrt(self, e, h):
        """Return (_FOUND, root) | (_NO,) | (_UNKNOWN,) for sqrt of e in the
        height-h tower; a found root is at height h. _NO only when conclusive.

        Must run at the full height even for elements living lower: a value
        like 2 can be the square of a genuinely height-h element, reached
        through the divide-by-radicand branch at each level.
        """
        e_t, h_t = self.trim(e, h)
        key = (h, h_t, e_t)
        hit = self.sqrt_memo.get(key)
        if hit is None:
            hit = self._try_sqrt_raw(self.lift(e_t, h_t, h), h)
            self.sqrt_memo[key] = hit
        return hit

    def _try_sqrt_raw(self, e, h):
        if h == 0:
            if e < 0:
                return (_NO,)
            p = _n._perfect_sqrt(e)
            if p is None:
                return (_NO,)
            return (_FOUND, p)
        level = self.levels[h - 1]
        conclusive = level.certified
        if level.kind == "quad":
            a, b = e
            d = self.lift(level.d, level.d_height, h - 1)
            if self.iszero(b):
                r = self.try_sqrt(a, h - 1)
                if r[0] == _FOUND:
                    return (_FOUND, (r[1], self.zero(h - 1)))
                unknown = r[0] == _UNKNOWN
                try:
                    ad = self.div(h - 1, a, d)
                except _TowerFail:
                    return (_UNKNOWN,)
                r2 = self.try_sqrt(ad, h - 1)
                if r2[0] == _FOUND:
                    return (_FOUND, (self.zero(h - 1), r2[1]))
                unknown = unknown or r2[0] == _UNKNOWN
                if unknown or not conclusive:
                    return (_UNKNOWN,)
                return (_NO,)
            norm = self.sub(
                h - 1,
                self.mul(h - 1, a, a),
                self.mul(h - 1, self.mul(h - 1, b, b), d),
            )
            rn = self.try_sqrt(norm, h - 1)
            if rn[0] == _NO:
                return (_NO,) if conclusive else (_UNKNOWN,)
            if rn[0] == _UNKNOWN:
                return (_UNKNOWN,)
            root_n = rn[1]
            unknown = False
            half = Fraction(1, 2)
            for er in (root_n, self.neg(h - 1, root_n)):
                cand_sq = self.scale(h - 1, self.add(h - 1, a, er), half)
                rx = self.try_sqrt(cand_sq, h - 1)
                if rx[0] == _UNKNOWN:
                    unknown = True
                    continue
                if rx[0] == _FOUND and not self.iszero(rx[1]):
                    x = rx[1]
                    try:
                        y = self.div(
                            h - 1, self.scale(h - 1, b, half), x
                        )
                    except _TowerFail:
                        unknown = True
                        continue
                    cand = (x, y)
                    if self.iszero(
                        self.sub(h, self.mul(h, cand, cand), e)
                    ):
                        return (_FOUND, cand)
            if unknown or not conclusive:
                return (_UNKNOWN,)
            return (_NO,)
        # cubic level
        c0, c1, c2 = e
        if self.iszero(c1) and self.iszero(c2):
            r = self.try_sqrt(c0, h - 1)
            if r[0] == _FOUND:
                return (_FOUND, (r[1], self.zero(h - 1), self.zero(h - 1)))
            if r[0] == _UNKNOWN or not conclusive:
                return (_UNKNOWN,)
            return (_NO,)
        return (_UNKNOWN,)

    # -- tower growth --------------------------------------------------------

    def _emit_raw(self, e, h):
        """Value-equal expression for an element, over the levels' gen nodes."""
        if h == 0:
            return _n.rational(e)
        level = self.levels[h - 1]
        g = level.gen_node
        expr = self._emit_raw(e[-1], h - 1)
        for c in reversed(e[:-1]):
            expr = _n.arith(
                "add", self._emit_raw(c, h - 1), _n.arith("mul", g, expr)
            )
        return expr

    def _sqrt_elem(self, e, h, gen_node=None):
        """sqrt of an element: fold into the tower or add a quadratic level.
        Returns the root element at the new current height."""
        e_t, eh = self.trim(e, h)
        coeff = _F1
        if isinstance(e_t, Fraction):
            if e_t == 0:
                return self.zero(self.height())
            # sqrt(a/b) = (1/b) sqrt(ab); split ab = k^2 * squarefree
            k, sf = _square_part(e_t.numerator * e_t.denominator)
            coeff = Fraction(k, e_t.denominator)
            if sf == 1:
                return self.lift(coeff, 0, self.height())
            e_t = Fraction(sf)
        key = (eh, e_t)
        idx = self.quad_keys.get(key)
        if idx is not None:
            unit = (self.zero(idx), self.one(idx))
            root = self.lift(unit, idx + 1, self.height())
        else:
            full_h = self.height()
            res = self.try_sqrt(self.lift(e_t, eh, full_h), full_h)
            if res[0] == _FOUND:
                root = res[1]
                s = self.elem_sign(root, full_h)
                if s < 0:
                    root = self.neg(full_h, root)
            else:
                certified = res[0] == _NO and self._chain_certified(full_h)
                level_gen = gen_node
                if level_gen is None or coeff != 1:
                    level_gen = _n._make_sqrt(
                        self._emit_raw(e_t, eh),
                        gen_node.cls if gen_node is not None
                        else _n.ClosureClass.EUCLIDEAN,
                    )
                level = _Quad(e_t, eh, level_gen, certified)
                self.levels.append(level)
                self.quad_keys[key] = self.height() - 1
                # memo entries store their own heights, nothing to invalidate
                root = (
                    self.zero(self.height() - 1),
                    self.one(self.height() - 1),
                )
        if coeff != 1:
            root = self.scale(self.height(), root, coeff)
        return root

    def height(self):
        return len(self.levels)

    def _cubic_level_for(self, node):
        pe, ph = self.trim(*self._eval_pair(node.p))
        qe, qh = self.trim(*self._eval_pair(node.q))
        re_, rh = self.trim(*self._eval_pair(node.r))
        key = ((ph, pe), (qh, qe), (rh, re_))
        idx = self.cubic_keys.get(key)
        if idx is not None:
            return idx
        ch = max(ph, qh, rh)
        P = self.lift(pe, ph, ch)
        Q = self.lift(qe, qh, ch)
        R = self.lift(re_, rh, ch)
        rational_coeffs = ch == 0
        pure_quad_below = all(lv.kind == "quad" for lv in self.levels)
        from .cubic import cubic_root_by_index

        gen_node = (
            node
            if node.index == 0
            else cubic_root_by_index(node.p, node.q, node.r, 0)
        )
        certified = (
            rational_coeffs
            and pure_quad_below
            and self._chain_certified(self.height())
            and gen_node.scanned
        )
        level = _Cubic(P, Q, R, ch, gen_node, certified)
        self.levels.append(level)
        self.cubic_keys[key] = self.height() - 1
        return self.height() - 1

    # -- expression evaluation ------------------------------------------------

    def _eval_pair(self, node):
        e = self.eval(node)
        return e, self.height()

    def eval(self, node):
        """Element (at current height) representing the node's value."""
        hit = self.memo.get(id(node))
        if hit is not None:
            h, e = hit
            if h < self.height():
                e = self.lift(e, h, self.height())
                self.memo[id(node)] = (self.height(), e)
            return e
        e = self._eval_raw(node)
        self.memo[id(node)] = (self.height(), e)
        return e

    def _eval_raw(self, node):
        if isinstance(node, _n.Rat):
            return self.lift(node.value, 0, self.height())
        if isinstance(node, (_n.Add, _n.Sub, _n.Mul, _n.Div)):
            self.eval(node.left)
            b = self.eval(node.right)
            # evaluating the right side may grow the tower; re-fetching the
            # left element through the memo lifts it to the current height
            a = self.eval(node.left)
            h = self.height()
            if isinstance(node, _n.Add):
                return self.add(h, a, b)
            if isinstance(node, _n.Sub):
                return self.sub(h, a, b)
            if isinstance(node, _n.Mul):
                return self.mul(h, a, b)
            return self.div(h, a, b)
        if isinstance(node, _n.Sqrt):
            e = self.eval(node.child)
            return self._sqrt_elem(e, self.height(), gen_node=node)
        if isinstance(node, _n.CubicRoot):
            idx = self._cubic_level_for(node)
            h0 = idx + 1
            rho = (self.zero(idx), self.one(idx), self.zero(idx))
            if node.index == 0:
                return self.lift(rho, h0, self.height())
            level = self.levels[idx]
            P = self.lift(level.P, level.c_height, h0)
            Q = self.lift(level.Q, level.c_height, h0)
            b = self.add(h0, P, rho)
            c = self.add(
                h0, Q, self.mul(h0, rho, self.add(h0, P, rho))
            )
            disc = self.sub(
                h0,
                self.mul(h0, b, b),
                self.scale(h0, c, Fraction(4)),
            )
            disc_l = self.lift(disc, h0, self.height())
            s = self._sqrt_elem(disc_l, self.height())
            h = self.height()
            b_l = self.lift(b, h0, h)
            half = Fraction(1, 2)
            if node.index == 1:
                return self.scale(
                    h, self.sub(h, self.neg(h, b_l), s), half
                )
            return self.scale(h, self.add(h, self.neg(h, b_l), s), half)
        raise _TowerFail(f"unknown node {node!r}")


def zero_status(node) -> str:
    """'zero' | 'nz' (certified nonzero) | 'unknown'."""
    try:
        ctx = Normalizer()
        e = ctx.eval(node)
    except (_TowerFail, RecursionError):
        return "unknown"
    e, h = ctx.trim(e, ctx.height())
    if ctx.iszero(e):
        return "zero"
    if ctx._chain_certified(h):
        return "nz"
    return "unknown"


# -- canonical re-emission ----------------------------------------------------


def _gen_depth(node) -> int:
    if isinstance(node, (_n.Add, _n.Sub, _n.Mul, _n.Div)):
        return max(_gen_depth(node.left), _gen_depth(node.right))
    if isinstance(node, _n.Sqrt):
        return 1 + _gen_depth(node.child)
    if isinstance(node, _n.CubicRoot):
        return 1 + max(_gen_depth(node.p), _gen_depth(node.q), _gen_depth(node.r))
    return 0


def _monomials(ctx, e, h):
    """dict: power-vector (one power per level position) -> Fraction."""
    if h == 0:
        return {(): e} if e != 0 else {}
    out = {}
    for i, c in enumerate(e):
        for pows, f in _monomials(ctx, c, h - 1).items():
            out[pows + (i,)] = f
    return out


def _canon_gen(ctx, idx, cache):
    if cache[idx] is not None:
        return cache[idx]
    level = ctx.levels[idx]
    if level.kind == "quad":
        d_expr = _emit_canonical(ctx, level.d, level.d_height, cache)
        node = _n._make_sqrt(d_expr, level.gen_node.cls)
    else:
        p_expr = _emit_canonical(ctx, level.P, level.c_height, cache)
        q_expr = _emit_canonical(ctx, level.Q, level.c_height, cache)
        r_expr = _emit_canonical(ctx, level.R, level.c_height, cache)
        from .cubic import cubic_root_by_index

        node = cubic_root_by_index(p_expr, q_expr, r_expr, 0)
    cache[idx] = node
    return node


def _flat_multiquad_ok(ctx, h):
    return all(
        lv.kind == "quad"
        and lv.d_height == 0
        and isinstance(lv.d, Fraction)
        and lv.d.denominator == 1
        and lv.d.numerator.bit_length() <= 96
        for lv in ctx.levels[:h]
    )


def _emit_flat_multiquad(ctx, e, h):
    """Basis-independent canonical form of a multiquadratic number over Q:
    sum of coeff * sqrt(squarefree), sorted by radicand."""
    terms: dict = {}
    for pows, f in _monomials(ctx, e, h).items():
        if f == 0:
            continue
        prod = 1
        for i, p in enumerate(pows):
            if p:
                prod *= int(ctx.levels[i].d)
        k, sf = _square_part(prod) if prod > 1 else (1, 1)
        terms[sf] = terms.get(sf, Fraction(0)) + f * k
    expr = None
    for sf in sorted(terms):
        c = terms[sf]
        if c == 0:
            continue
        if sf == 1:
            term = _n.rational(c)
        else:
            term = _n.arith(
                "mul",
                _n.rational(c),
                _n._make_sqrt(_n.rational(sf), _n.ClosureClass.EUCLIDEAN),
            )
        expr = term if expr is None else _n.arith("add", expr, term)
    return expr if expr is not None else _n.zero()


def _emit_canonical(ctx, e, h, cache):
    """Flat sorted polynomial over canonical generators: order-independent."""
    e, h = ctx.trim(e, h)
    if isinstance(e, Fraction):
        return _n.rational(e)
    if _flat_multiquad_ok(ctx, h):
        return _emit_flat_multiquad(ctx, e, h)
    monos = _monomials(ctx, e, h)
    gens = [_canon_gen(ctx, i, cache) for i in range(h)]
    keys = [_n.to_sexpr(g) for g in gens]
    order = sorted(range(h), key=lambda i: (_gen_depth(gens[i]), keys[i]))
    terms = []
    for pows, f in monos.items():
        if f == 0:
            continue
        sort_key = tuple(pows[i] for i in order)
        terms.append((sort_key, pows, f))
    terms.sort(key=lambda t: t[0])
    expr = None
    for _, pows, f in terms:
        term = _n.rational(f)
        for i in order:
            for _ in range(pows[i]):
                term = _n.arith("mul", term, gens[i])
        expr = term if expr is None else _n.arith("add", expr, term)
    return expr if expr is not None else _n.zero()


def _rref_radical_basis(sfs):
    """Canonical basis of squarefree integers spanning the same subgroup of
    Q*/(Q*)^2: row-reduce prime-exponent vectors over GF(2). The reduced
    echelon form of a subspace is unique, so the result does not depend on
    the input order."""
    from .cubic import _factorize

    primes = []
    vecs = []
    for sf in sfs:
        fac = _factorize(sf)
        for p in fac:
            if p not in primes:
                primes.append(p)
        vecs.append(fac)
    primes.sort()
    pos = {p: i for i, p in enumerate(primes)}
    rows = []
    for fac in vecs:
        mask = 0
        for p in fac:
            mask |= 1 << pos[p]
        rows.append(mask)
    basis = []  # kept sorted by pivot (lowest set bit)
    for row in rows:
        for b in basis:
            if row & (b & -b):
                row ^= b
        if row:
            basis.append(row)
            basis.sort(key=lambda m: m & -m)
            # full reduction: clear each pivot from the other rows
            for i in range(len(basis)):
                for j in range(len(basis)):
                    if i != j and basis[i] & (basis[j] & -basis[j]):
                        basis[i] ^= basis[j]
            basis.sort(key=lambda m: m & -m)
    out = []
    for mask in basis:
        v = 1
        for i, p in enumerate(primes):
            if mask & (1 << i):
                v *= p
        out.append(v)
    return sorted(out)


def canonical_value(node):
    """Value-equal node in canonical polynomial-over-radicals form.

    Two value-equal inputs whose radicals generate the same field come out
    as the identical interned node (for rational radicands, via a canonical
    GF(2) basis, even across different spanning sets). Falls back to the
    input unchanged when normalization is unavailable.
    """
    node = _n._coerce(node)
    if isinstance(node, _n.Rat):
        return node
    try:
        ctx = Normalizer()
        e = ctx.eval(node)
        e, h = ctx.trim(e, ctx.height())
        if isinstance(e, Fraction):
            return _n.rational(e)
        if _flat_multiquad_ok(ctx, h):
            return _emit_flat_multiquad(ctx, e, h)
        # pass 1 canonical gens, sorted by (nesting depth, canonical key)
        cache = [None] * ctx.height()
        pass1_gens = [_canon_gen(ctx, i, cache) for i in range(h)]
        rational_radicands = []
        others = []
        factor_cap = 1 << 96
        for g in pass1_gens:
            if (
                isinstance(g, _n.Sqrt)
                and isinstance(g.child, _n.Rat)
                and g.child.value.denominator == 1
                and 0 < g.child.value.numerator < factor_cap
            ):
                rational_radicands.append(int(g.child.value))
            else:
                others.append(g)
        seeds = [
            _n._make_sqrt(_n.rational(sf), _n.ClosureClass.EUCLIDEAN)
            for sf in _rref_radical_basis(rational_radicands)
        ]
        seeds += sorted(others, key=lambda g: (_gen_depth(g), _n.to_sexpr(g)))
        # pass 2: seed a fresh tower in canonical order (redundant gens fold),
        # then re-evaluate and emit
        ctx2 = Normalizer()
        cache2 = []
        for g in seeds:
            before = ctx2.height()
            if isinstance(g, _n.Sqrt):
                ctx2._sqrt_elem(ctx2.eval(g.child), ctx2.height(), gen_node=g)
            else:
                ctx2._cubic_level_for(g)
            cache2.extend([g] * (ctx2.height() - before))
        e2 = ctx2.eval(node)
        if ctx2.height() > len(cache2):
            cache2.extend([None] * (ctx2.height() - len(cache2)))
        e2, h2 = ctx2.trim(e2, ctx2.height())
        if isinstance(e2, Fraction):
            return _n.rational(e2)
        return _emit_canonical(ctx2, e2, h2, cache2)
    except (_TowerFail, RecursionError):
        return node
    except _n.UndecidedSign:
        return node


# -- real embeddings / total positivity ----------------------------------------


def _embed_interval(ctx, e, h, signs, bits):
    if h == 0:
        return e, e
    level = ctx.levels[h - 1]
    dlo, dhi = _embed_interval(
        ctx, ctx.lift(level.d, level.d_height, h - 1), h - 1, signs, 2 * bits
    )
    glo = _iv._sqrt_down(max(dlo, Fraction(0)), bits)
    ghi = _iv._sqrt_up(dhi, bits)
    if signs[h - 1] < 0:
        glo, ghi = -ghi, -glo
    g = (glo, ghi)
    lo, hi = _embed_interval(ctx, e[-1], h - 1, signs, bits)
    for c in reversed(e[:-1]):
        plo, phi = _iv._mul_iv((lo, hi), g, bits)
        clo, chi = _embed_interval(ctx, c, h - 1, signs, bits)
        lo, hi = clo + plo, chi + phi
    return lo, hi


def _embed_sign(ctx, e, h, signs, cap):
    bits = 64
    while bits <= cap:
        lo, hi = _embed_interval(ctx, e, h, signs, bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2
    raise _TowerFail("embedding sign undecided")


def real_embedding_signs(node):
    """Signs of the value under every real embedding of its (pure quadratic,
    certified) generating tower, or None when that structure is unavailable."""
    node = _n._coerce(node)
    try:
        ctx = Normalizer()
        e = ctx.eval(node)
        e, h = ctx.trim(e, ctx.height())
        if isinstance(e, Fraction):
            return [(e > 0) - (e < 0)]
        if not all(
            lv.kind == "quad" and lv.certified for lv in ctx.levels[:h]
        ):
            return None
        cap = ctx.cap
        results = []
        stack = [()]
        while stack:
            signs = stack.pop()
            depth = len(signs)
            if depth == h:
                results.append(_embed_sign(ctx, e, h, signs, cap))
                continue
            level = ctx.levels[depth]
            d = ctx.lift(level.d, level.d_height, depth)
            if ctx.iszero(d):
                return None
            s = _embed_sign(ctx, d, depth, signs, cap)
            if s < 0:
                continue  # no real embedding extends this branch
            stack.append(signs + (1,))
            stack.append(signs + (-1,))
        return results
    except (_TowerFail, RecursionError):
        return None


def totally_positive(node):
    """True/False when decidable over a certified pure quadratic tower,
    else None."""
    signs = real_embedding_signs(node)
    if signs is None:
        return None
    return all(s > 0 for s in signs)
