"""Expression nodes for constructible reals.

Values are immutable interned expression trees over the rationals, closed
under field operations, square roots of nonnegative values, and real roots
of cubics. Interning means structurally identical trees are the *same*
object, so structural equality is ``is`` and sign/interval caches are shared
process-wide. Numeric (value) equality is ``eq_value``/``sign_of``.
"""

from __future__ import annotations

import math
import threading
from enum import IntEnum
from fractions import Fraction

from ..errors import DivisionByZero, NegativeRadicand, UndecidedSign
from ..precision import PrecisionPolicy, default_policy


class ClosureClass(IntEnum):
    """Closure classes, totally ordered by inclusion of the generated field."""

    RATIONAL = 0
    PYTHAGOREAN = 1
    EUCLIDEAN = 2
    VIETA = 3

    def __str__(self):
        return self.name.lower()


_LOCK = threading.RLock()
_INTERN: dict = {}


class ConstructibleReal:
    """Base node. Instances are interned; do not construct subclasses directly."""

    __slots__ = ("cls", "_sign", "_lo", "_hi", "_bits", "__weakref__")

    kind = "?"

    def _init_caches(self):
        self._sign = None
        self._lo = None
        self._hi = None
        self._bits = -1

    # -- arithmetic sugar ---------------------------------------------------

    def __add__(self, other):
        return arith("add", self, _coerce(other))

    def __radd__(self, other):
        return arith("add", _coerce(other), self)

    def __sub__(self, other):
        return arith("sub", self, _coerce(other))

    def __rsub__(self, other):
        return arith("sub", _coerce(other), self)

    def __mul__(self, other):
        return arith("mul", self, _coerce(other))

    def __rmul__(self, other):
        return arith("mul", _coerce(other), self)

    def __truediv__(self, other):
        return arith("div", self, _coerce(other))

    def __rtruediv__(self, other):
        return arith("div", _coerce(other), self)

    def __neg__(self):
        return arith("sub", _ZERO, self)

    def __repr__(self):
        return f"<{type(self).__name__} {to_sexpr(self)}>"

    def sign(self) -> int:
        return sign_of(self)

    def approx(self, digits: int = 17) -> float:
        """Float preview; for rendering only, never for decisions."""
        return float(to_decimal(self, digits))


class Rat(ConstructibleReal):
    __slots__ = ("value",)
    kind = "rat"


class Add(ConstructibleReal):
    __slots__ = ("left", "right")
    kind = "add"


class Sub(ConstructibleReal):
    __slots__ = ("left", "right")
    kind = "sub"


class Mul(ConstructibleReal):
    __slots__ = ("left", "right")
    kind = "mul"


class Div(ConstructibleReal):
    __slots__ = ("left", "right")
    kind = "div"


class Sqrt(ConstructibleReal):
    __slots__ = ("child",)
    kind = "sqrt"


class CubicRoot(ConstructibleReal):
    """index-th real root, in ascending order, of x^3 + p x^2 + q x + r.

    Only created for squarefree cubics (nonzero discriminant); ``nroots`` is
    the number of distinct real roots (1 or 3). ``_bracket`` is a dyadic
    isolating interval (lo, hi, sign_of_f_at_lo), refined in place under the
    module lock and only ever shrunk.
    """

    __slots__ = ("p", "q", "r", "index", "nroots", "scanned", "_bracket")
    kind = "cubicroot"


def _intern(key, build):
    with _LOCK:
        node = _INTERN.get(key)
        if node is None:
            node = build()
            node._init_caches()
            _INTERN[key] = node
        return node


def _coerce(x) -> ConstructibleReal:
    if isinstance(x, ConstructibleReal):
        return x
    if isinstance(x, (int, Fraction)):
        return rational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to ConstructibleReal")


def rational(value) -> Rat:
    """Rational leaf; gcd and sign normalization come from Fraction."""
    f = Fraction(value)

    def build():
        node = Rat()
        node.value = f
        node.cls = ClosureClass.RATIONAL
        return node

    return _intern(("rat", f), build)


_ZERO = rational(0)
_ONE = rational(1)


def zero() -> Rat:
    return _ZERO


def one() -> Rat:
    return _ONE


def _binary(ctor, tag, a, b, cls):
    def build():
        node = ctor()
        node.left = a
        node.right = b
        node.cls = cls
        return node

    return _intern((tag, a, b, cls), build)


def arith(op: str, a: ConstructibleReal, b: ConstructibleReal) -> ConstructibleReal:
    """Field operation with rational folding and shallow identity folds."""
    a = _coerce(a)
    b = _coerce(b)
    ra = isinstance(a, Rat)
    rb = isinstance(b, Rat)
    if op == "add":
        if ra and rb:
            return rational(a.value + b.value)
        if ra and a.value == 0:
            return b
        if rb and b.value == 0:
            return a
        ctor, tag = Add, "add"
    elif op == "sub":
        if ra and rb:
            return rational(a.value - b.value)
        if rb and b.value == 0:
            return a
        if a is b:
            return _ZERO
        ctor, tag = Sub, "sub"
    elif op == "mul":
        if ra and rb:
            return rational(a.value * b.value)
        if ra:
            if a.value == 0:
                return _ZERO
            if a.value == 1:
                return b
        if rb:
            if b.value == 0:
                return _ZERO
            if b.value == 1:
                return a
        ctor, tag = Mul, "mul"
    elif op == "div":
        if rb:
            if b.value == 0:
                raise DivisionByZero("division by rational zero")
            if ra:
                return rational(a.value / b.value)
            if b.value == 1:
                return a
        else:
            if sign_of(b) == 0:
                raise DivisionByZero(f"division by zero value {to_sexpr(b)}")
        if a is b:
            return _ONE
        if ra and a.value == 0:
            return _ZERO
        ctor, tag = Div, "div"
    else:
        raise ValueError(f"unknown op {op!r}")
    cls = ClosureClass(max(a.cls, b.cls))
    return _binary(ctor, tag, a, b, cls)


def _rational_value(a: ConstructibleReal):
    """Fraction value if the whole tree is rational, else None."""
    if isinstance(a, Rat):
        return a.value
    # arith folds rational subtrees eagerly, so any non-Rat node is irrational
    # ... except trees built by the raw pyth_hyp shape; walk those.
    if isinstance(a, (Add, Sub, Mul, Div)):
        l = _rational_value(a.left)
        if l is None:
            return None
        r = _rational_value(a.right)
        if r is None:
            return None
        if isinstance(a, Add):
            return l + r
        if isinstance(a, Sub):
            return l - r
        if isinstance(a, Mul):
            return l * r
        if r == 0:
            return None
        return l / r
    return None


def _perfect_sqrt(f: Fraction):
    if f < 0:
        return None
    n, d = f.numerator, f.denominator
    sn, sd = math.isqrt(n), math.isqrt(d)
    if sn * sn == n and sd * sd == d:
        return Fraction(sn, sd)
    return None


def _is_two_square_shape(a: ConstructibleReal) -> bool:
    return (
        isinstance(a, Add)
        and isinstance(a.left, Mul)
        and isinstance(a.right, Mul)
        and a.left.left is a.left.right
        and a.right.left is a.right.right
    )


def _make_sqrt(child: ConstructibleReal, floor_cls: ClosureClass) -> ConstructibleReal:
    cls = ClosureClass(max(child.cls, floor_cls))

    def build():
        node = Sqrt()
        node.child = child
        node.cls = cls
        return node

    return _intern(("sqrt", child, cls), build)


def sqrt_nonneg(a: ConstructibleReal) -> ConstructibleReal:
    """Nonnegative square root; rejects negative radicands eagerly."""
    a = _coerce(a)
    floor_cls = (
        ClosureClass.PYTHAGOREAN if _is_two_square_shape(a) else ClosureClass.EUCLIDEAN
    )
    rv = _rational_value(a)
    if rv is not None:
        if rv < 0:
            raise NegativeRadicand(f"sqrt of negative rational {rv}")
        p = _perfect_sqrt(rv)
        if p is not None:
            return rational(p)
        return _make_sqrt(rational(rv), floor_cls)
    s = sign_of(a)
    if s < 0:
        raise NegativeRadicand(f"sqrt of negative value {to_sexpr(a)}")
    if s == 0:
        return _ZERO
    return _make_sqrt(a, floor_cls)


def pyth_hyp(x: ConstructibleReal, y: ConstructibleReal) -> ConstructibleReal:
    """sqrt(x^2 + y^2), staying inside the Pythagorean closure."""
    x = _coerce(x)
    y = _coerce(y)
    # build the sum-of-two-squares shape with raw nodes so sqrt_nonneg can
    # see it even when x, y are rational
    cls = ClosureClass(max(x.cls, y.cls))
    xx = _binary(Mul, "mul", x, x, cls) if not isinstance(x, Rat) else rational(x.value * x.value)
    yy = _binary(Mul, "mul", y, y, cls) if not isinstance(y, Rat) else rational(y.value * y.value)
    if isinstance(xx, Rat) and isinstance(yy, Rat):
        rv = xx.value + yy.value
        p = _perfect_sqrt(rv)
        if p is not None:
            return rational(p)
        return _make_sqrt(
            rational(rv), ClosureClass(max(cls, ClosureClass.PYTHAGOREAN))
        )
    child = _binary(Add, "add", xx, yy, cls)
    return _make_sqrt(child, ClosureClass(max(cls, ClosureClass.PYTHAGOREAN)))


def _make_cubic_root(p, q, r, index, nroots, bracket) -> CubicRoot:
    cls = ClosureClass.VIETA

    def build():
        node = CubicRoot()
        node.p = p
        node.q = q
        node.r = r
        node.index = index
        node.nroots = nroots
        node.scanned = False
        node._bracket = bracket
        node.cls = cls
        return node

    return _intern(("cubicroot", p, q, r, index), build)


# -- sign determination -----------------------------------------------------


def sign_of(a: ConstructibleReal, policy: PrecisionPolicy | None = None) -> int:
    """Exact sign in {-1, 0, +1}.

    Three stages: rational fold, symbolic tower normalization, adaptive
    interval refinement. Raises UndecidedSign when the budget runs out on a
    value whose normalization could not certify nonzero-ness.
    """
    a = _coerce(a)
    s = a._sign
    if s is not None:
        return s
    if isinstance(a, Rat):
        s = (a.value > 0) - (a.value < 0)
        a._sign = s
        return s
    if policy is None:
        policy = default_policy()

    from . import interval as _iv
    from . import tower as _tw

    verdict = None  # None: unknown, "nz": certified nonzero
    tried_symbolic = False
    for bits in policy.schedule():
        lo, hi = _iv.refine(a, bits)
        if lo > 0:
            a._sign = 1
            return 1
        if hi < 0:
            a._sign = -1
            return -1
        if not tried_symbolic:
            tried_symbolic = True
            verdict = _tw.zero_status(a)
            if verdict == "zero":
                a._sign = 0
                return 0
    if verdict == "nz":
        for bits in policy.certified_schedule():
            lo, hi = _iv.refine(a, bits)
            if lo > 0:
                a._sign = 1
                return 1
            if hi < 0:
                a._sign = -1
                return -1
    raise UndecidedSign(to_sexpr(a), policy.budget_bits)


def eq_value(a, b) -> bool:
    return sign_of(arith("sub", _coerce(a), _coerce(b))) == 0


def cmp_value(a, b) -> int:
    return sign_of(arith("sub", _coerce(a), _coerce(b)))


def is_zero(a) -> bool:
    return sign_of(_coerce(a)) == 0


# -- degree bound -----------------------------------------------------------


def degree_bound(a: ConstructibleReal) -> int:
    """Product of 2 per distinct sqrt node and 3 per distinct cubic-root node:
    an upper bound on [Q(a):Q]."""
    radicals = set()
    seen = set()
    stack = [_coerce(a)]
    while stack:
        n = stack.pop()
        if id(n) in seen:
            continue
        seen.add(id(n))
        if isinstance(n, (Add, Sub, Mul, Div)):
            stack.append(n.left)
            stack.append(n.right)
        elif isinstance(n, Sqrt):
            radicals.add((2, id(n)))
            stack.append(n.child)
        elif isinstance(n, CubicRoot):
            radicals.add((3, id(n)))
            stack.extend((n.p, n.q, n.r))
    bound = 1
    for deg, _ in radicals:
        bound *= deg
    return bound


# -- decimal rendering ------------------------------------------------------


def _round_half_even(scaled_num: int, den: int) -> int:
    """round(scaled_num / den) with ties to even; den > 0."""
    q, rem = divmod(scaled_num, den)
    twice = 2 * rem
    if twice > den or (twice == den and q % 2 == 1):
        q += 1
    return q


def _format_scaled(scaled: int, digits: int) -> str:
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    if digits == 0:
        return f"{sign}{scaled}"
    ip, fp = divmod(scaled, 10**digits)
    return f"{sign}{ip}.{fp:0{digits}d}"


def to_decimal(a: ConstructibleReal, digits: int = 30) -> str:
    """Decimal string with ``digits`` fractional digits, round-half-even."""
    a = _coerce(a)
    if digits < 0:
        raise ValueError("digits must be nonnegative")
    scale = 10**digits
    rv = _rational_value(a)
    if rv is not None:
        scaled = _round_half_even(rv.numerator * scale, rv.denominator)
        return _format_scaled(scaled, digits)

    from . import interval as _iv

    bits = max(64, int(digits * 3.33) + 32)
    while True:
        lo, hi = _iv.refine(a, bits)
        slo = _round_half_even(lo.numerator * scale, lo.denominator)
        shi = _round_half_even(hi.numerator * scale, hi.denominator)
        if slo == shi:
            return _format_scaled(slo, digits)
        bits *= 2
        if bits > default_policy().budget_bits * 64:
            raise UndecidedSign(f"decimal rounding of {to_sexpr(a)}", bits)


# -- s-expressions ----------------------------------------------------------


def to_sexpr(a: ConstructibleReal) -> str:
    a = _coerce(a)
    if isinstance(a, Rat):
        return str(a.value)
    if isinstance(a, Add):
        return f"(+ {to_sexpr(a.left)} {to_sexpr(a.right)})"
    if isinstance(a, Sub):
        return f"(- {to_sexpr(a.left)} {to_sexpr(a.right)})"
    if isinstance(a, Mul):
        return f"(* {to_sexpr(a.left)} {to_sexpr(a.right)})"
    if isinstance(a, Div):
        return f"(/ {to_sexpr(a.left)} {to_sexpr(a.right)})"
    if isinstance(a, Sqrt):
        return f"(sqrt {to_sexpr(a.child)})"
    if isinstance(a, CubicRoot):
        return (
            f"(cubicroot {a.index} {to_sexpr(a.p)} {to_sexpr(a.q)} {to_sexpr(a.r)})"
        )
    raise TypeError(f"unknown node {a!r}")


def _tokenize_sexpr(text: str):
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append(c)
            i += 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append(text[i:j])
            i = j
    return tokens


def from_sexpr(text: str) -> ConstructibleReal:
    """Parse the canonical s-expression serialization back into a value."""
    tokens = _tokenize_sexpr(text)
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of s-expression")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            head = tokens[pos]
            pos += 1
            args = []
            while tokens[pos] != ")":
                args.append(parse())
            pos += 1
            if head == "+":
                return arith("add", *args)
            if head == "-":
                return arith("sub", *args)
            if head == "*":
                return arith("mul", *args)
            if head == "/":
                return arith("div", *args)
            if head == "sqrt":
                return sqrt_nonneg(args[0])
            if head == "cubicroot":
                from .cubic import cubic_root_by_index

                idx = args[0]
                if not isinstance(idx, Rat) or idx.value.denominator != 1:
                    raise ValueError("cubicroot index must be an integer")
                return cubic_root_by_index(args[1], args[2], args[3], int(idx.value))
            raise ValueError(f"unknown s-expression head {head!r}")
        if tok == ")":
            raise ValueError("unbalanced s-expression")
        return rational(Fraction(tok))

    node = parse()
    if pos != len(tokens):
        raise ValueError("trailing tokens in s-expression")
    return node
