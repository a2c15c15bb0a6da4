"""Precision policy: how hard sign determination tries before giving up.

The default separation budget is 4096 bits and can be overridden with the
``ORIGEOM_BUDGET_BITS`` environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

ENV_BUDGET = "ORIGEOM_BUDGET_BITS"

DEFAULT_BUDGET_BITS = 4096
FAST_BITS = 64


def _env_budget() -> int:
    raw = os.environ.get(ENV_BUDGET)
    if raw is None:
        return DEFAULT_BUDGET_BITS
    try:
        bits = int(raw)
    except ValueError:
        return DEFAULT_BUDGET_BITS
    return max(64, bits)


@dataclass(frozen=True)
class PrecisionPolicy:
    """Escalation schedule for interval refinement.

    ``budget_bits`` is the separation budget: past it, sign_of raises
    UndecidedSign unless symbolic normalization already certified the value
    nonzero (then refinement may continue up to ``certified_factor`` times
    the budget before giving up defensively).
    """

    budget_bits: int = DEFAULT_BUDGET_BITS
    fast_bits: int = FAST_BITS
    certified_factor: int = 16

    def schedule(self):
        bits = self.fast_bits
        while bits < self.budget_bits:
            yield bits
            bits *= 2
        yield self.budget_bits

    def certified_schedule(self):
        bits = self.fast_bits
        cap = self.budget_bits * self.certified_factor
        while bits < cap:
            yield bits
            bits *= 2
        yield cap


_default = PrecisionPolicy(budget_bits=_env_budget())


def default_policy() -> PrecisionPolicy:
    return _default


def set_default_policy(policy: PrecisionPolicy) -> None:
    global _default
    _default = policy
