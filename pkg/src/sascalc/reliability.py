"""Error-rate aggregation for cooperating subsystems.

Independent error rates r_i in (0, 1) combine two ways. The collective
estimate assumes errors cancel unless every subsystem fails together:
1 - prod(r_i). The summed estimate charges every error in full: 1 - sum(r_i),
which can fall below zero once the rates sum past one; that state is
reported as saturated, never clamped. The gap sum - prod is the cancellation
effect and is strictly positive for two or more rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidRate


@dataclass(frozen=True)
class ErrorProfile:
    """Per-subsystem error rates, each strictly inside (0, 1)."""

    rates: tuple[float, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if not self.rates:
            raise InvalidRate(float("nan"), 0)
        for i, r in enumerate(self.rates):
            if not (0.0 < r < 1.0) or math.isnan(r):
                raise InvalidRate(r, i)
        if self.labels is not None and len(self.labels) != len(self.rates):
            raise ValueError("labels must match rates one to one")

    @classmethod
    def of(cls, rates: Iterable[float], labels: Sequence[str] | None = None) -> "ErrorProfile":
        return cls(tuple(float(r) for r in rates), tuple(labels) if labels else None)


@dataclass(frozen=True)
class SummedReliability:
    value: float
    saturated: bool


def collective_reliability(profile: ErrorProfile) -> float:
    """1 - prod(rates): failure only when every subsystem errs at once."""

    return 1.0 - math.prod(profile.rates)


def summed_reliability(profile: ErrorProfile) -> SummedReliability:
    """1 - sum(rates), flagged saturated when the rates sum past one.

    The value is reported as computed, negative included; clamping would
    hide exactly the regime the flag exists to expose.
    """

    total = math.fsum(profile.rates)
    return SummedReliability(value=1.0 - total, saturated=total > 1.0)


def cancellation_delta(profile: ErrorProfile) -> float:
    """sum(rates) - prod(rates): how much cancellation buys.

    Equals collective minus summed reliability. Zero for a single rate,
    strictly positive for two or more rates in (0, 1).
    """

    return math.fsum(profile.rates) - math.prod(profile.rates)
