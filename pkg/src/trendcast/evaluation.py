"""Goodness-of-fit statistics and per-series model selection."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .regression import ModelKind, TrainedModel, predict

R2_TIE_TOL = 1e-9


class UndefinedMetricError(ValueError):
    pass


@dataclass(frozen=True)
class FitMetrics:
    kind: ModelKind
    r_squared: float
    rmse: float

    def __post_init__(self):
        if not self.rmse >= 0:
            raise ValueError(f"rmse must be non-negative, got {self.rmse}")
        if self.r_squared > 1 + 1e-12:
            raise ValueError(f"r_squared cannot exceed 1, got {self.r_squared}")

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "r_squared": self.r_squared, "rmse": self.rmse}


@dataclass(frozen=True)
class ModelChoice:
    candidates: tuple
    selected: ModelKind
    skipped: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not self.candidates:
            raise ValueError("a model choice needs at least one candidate")
        if self.selected not in {c.kind for c in self.candidates}:
            raise ValueError(f"selected kind {self.selected} is not among the candidates")

    def metrics_for(self, kind: ModelKind) -> FitMetrics:
        return next(c for c in self.candidates if c.kind is kind)

    @property
    def best(self) -> FitMetrics:
        return self.metrics_for(self.selected)


def _pair(actual, predicted):
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.shape != p.shape or a.ndim != 1:
        raise ValueError(f"length mismatch: {a.shape} vs {p.shape}")
    if a.size == 0:
        raise ValueError("metrics need at least one observation")
    return a, p


def r_squared(actual, predicted) -> float:
    a, p = _pair(actual, predicted)
    tss = float(np.sum((a - a.mean()) ** 2))
    if tss == 0:
        raise UndefinedMetricError("R^2 is undefined for a constant actual sequence")
    rss = float(np.sum((a - p) ** 2))
    return 1.0 - rss / tss


def rmse(actual, predicted) -> float:
    a, p = _pair(actual, predicted)
    return math.sqrt(float(np.mean((p - a) ** 2)))


def evaluate(model: TrainedModel, series) -> FitMetrics:
    """R^2 and RMSE of ``model`` on ``series``, both in the series' own units."""
    fitted = predict(model, series.years)
    return FitMetrics(model.kind, r_squared(series.values, fitted), rmse(series.values, fitted))


def select_model(choices, skipped=()) -> ModelChoice:
    """Highest R^2 wins; near-ties go to lower RMSE, then to the simpler family."""
    choices = tuple(choices)
    if not choices:
        raise ValueError("no candidates to select from")
    top = max(c.r_squared for c in choices)
    tied = [c for c in choices if top - c.r_squared <= R2_TIE_TOL]
    best = min(tied, key=lambda c: (c.rmse, c.kind.order))
    return ModelChoice(choices, best.kind, tuple(skipped))
