"""Exact cost values.

A cost is a nonnegative rational or positive infinity. Finite costs are
held as ``int`` when integral and as :class:`fractions.Fraction`
otherwise; infinity is ``math.inf``. Both finite representations hash and
compare consistently, and ``math.inf`` absorbs every finite addend, so
plain ``+``, ``sum`` and ``min`` give the usual cost semantics without any
rounding.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Union

INF = math.inf

Cost = Union[int, Fraction, float]

_COST_RE = re.compile(r"^\s*(\d+)(?:\s*/\s*(\d+))?\s*$")


class CostError(ValueError):
    """Raised for values that are not valid costs."""


def to_cost(value) -> Cost:
    """Normalize ``value`` to a canonical cost.

    Accepts ints, Fractions, ``math.inf`` and cost strings. Finite floats
    are rejected so that nothing inexact can slip into a cost table.
    """
    if isinstance(value, bool):
        raise CostError(f"not a cost: {value!r}")
    if isinstance(value, str):
        return parse_cost(value)
    if isinstance(value, float):
        if value == INF:
            return INF
        raise CostError(f"finite floats are not exact costs: {value!r}")
    if isinstance(value, int):
        if value < 0:
            raise CostError(f"negative cost: {value}")
        return value
    if isinstance(value, Fraction):
        if value < 0:
            raise CostError(f"negative cost: {value}")
        return value.numerator if value.denominator == 1 else value
    raise CostError(f"not a cost: {value!r}")


def parse_cost(text: str) -> Cost:
    """Parse ``"p"``, ``"p/q"`` or ``"inf"``."""
    stripped = text.strip().lower()
    if stripped in ("inf", "infinity", "∞"):
        return INF
    m = _COST_RE.match(stripped)
    if not m:
        raise CostError(f"malformed cost {text!r}")
    num = int(m.group(1))
    if m.group(2) is None:
        return num
    den = int(m.group(2))
    if den == 0:
        raise CostError(f"zero denominator in {text!r}")
    return to_cost(Fraction(num, den))


def format_cost(cost: Cost) -> str:
    """Inverse of :func:`parse_cost` on canonical values."""
    if cost == INF:
        return "inf"
    cost = to_cost(cost)
    if isinstance(cost, Fraction):
        return f"{cost.numerator}/{cost.denominator}"
    return str(cost)


def is_infinite(cost: Cost) -> bool:
    return cost == INF


def add_costs(costs: Iterable[Cost]) -> Cost:
    """Exact sum; the empty sum is 0."""
    total: Cost = 0
    for c in costs:
        if c == INF:
            return INF
        total += c
    return to_cost(total)
