"""Min-max scaling of a sequence onto [0, 1] and its exact inverse."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable


class DegenerateScalingError(ValueError):
    """Raised when min == max, so the min-max map is undefined."""


@dataclass(frozen=True)
class ScalingParams:
    min: float
    max: float

    def __post_init__(self):
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise ValueError(f"scaling bounds must be finite, got ({self.min}, {self.max})")
        if not self.max > self.min:
            raise DegenerateScalingError(
                f"max must exceed min for min-max scaling, got min={self.min} max={self.max}"
            )

    @property
    def span(self) -> float:
        return self.max - self.min

    def to_dict(self) -> dict:
        return {"min": self.min, "max": self.max}


def fit_minmax(values: Iterable[float]) -> ScalingParams:
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("cannot fit min-max scaling to an empty sequence")
    if not all(math.isfinite(v) for v in vals):
        raise ValueError("min-max scaling requires finite values")
    lo, hi = min(vals), max(vals)
    if lo == hi:
        raise DegenerateScalingError(f"all {len(vals)} values equal {lo}; normalization undefined")
    return ScalingParams(lo, hi)


def normalize(x, p: ScalingParams):
    """Map ``x`` (scalar or array) with ``(x - min) / (max - min)``.

    Values outside the fitted range are not clamped, so future years land
    above 1.
    """
    return (x - p.min) / p.span


def denormalize(x_prime, p: ScalingParams):
    return x_prime * p.span + p.min
