"""Named two-sided inequality records shared by the verification suites."""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mpf


@dataclass(frozen=True)
class BoundCheck:
    """Outcome of a single inequality lhs <= rhs.

    ``slack`` is rhs - lhs; the check is satisfied exactly when slack >= 0.
    """

    name: str
    lhs: mpf
    rhs: mpf
    satisfied: bool
    slack: mpf


def bound_check(name, lhs, rhs) -> BoundCheck:
    lhs = mpf(lhs) if not isinstance(lhs, mpf) else lhs
    rhs = mpf(rhs) if not isinstance(rhs, mpf) else rhs
    slack = rhs - lhs
    return BoundCheck(name=name, lhs=lhs, rhs=rhs, satisfied=bool(slack >= 0), slack=slack)
