"""Exception hierarchy shared across the engine."""

from __future__ import annotations


class OrigeomError(Exception):
    """Base class for all engine errors."""


class UndecidedSign(OrigeomError):
    """Sign determination exhausted its bit budget without separating from zero.

    Never silently rounded: every raiser records the incident in
    ``undecided_counter`` so callers can report rates.
    """

    def __init__(self, what: str, bits: int):
        super().__init__(f"sign undecided after {bits} bits: {what}")
        self.what = what
        self.bits = bits
        undecided_counter.incidents += 1


class _UndecidedCounter:
    __slots__ = ("incidents",)

    def __init__(self):
        self.incidents = 0

    def reset(self):
        self.incidents = 0


#: process-wide instrumentation of UndecidedSign incidents
undecided_counter = _UndecidedCounter()


class DivisionByZero(OrigeomError):
    pass


class NegativeRadicand(OrigeomError):
    pass


class CoincidentPoints(OrigeomError):
    pass


class EqualLines(OrigeomError):
    pass


class DegenerateLine(OrigeomError):
    """All three line coefficients are zero."""


class IsotropicAxis(OrigeomError):
    """Reflection axis is orthogonal to itself."""


class IsotropicLine(OrigeomError):
    """Fold input line is orthogonal to itself."""


class PreconditionViolated(OrigeomError):
    """A fold guard failed; ``guard`` names which one."""

    def __init__(self, guard: str):
        super().__init__(f"precondition violated: {guard}")
        self.guard = guard


class ReducibleCubic(OrigeomError):
    """The cubic has a rational root, so no degree-3 certificate exists."""

    def __init__(self, root):
        super().__init__(f"cubic is reducible: rational root {root}")
        self.root = root


class SamplerExhausted(OrigeomError):
    """Rejection sampling hit its retry limit."""


class FrameChangeUnsupported(OrigeomError):
    """Frame pair needs an interpolation case beyond the implemented ones."""


class LogicSyntaxError(OrigeomError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class SortError(OrigeomError):
    """Formula is not well-sorted."""


class UnsupportedSymbol(OrigeomError):
    """Translation cannot handle this symbol for the requested target."""
