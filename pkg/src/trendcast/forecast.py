"""Extrapolating fitted trends to future years."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .regression import TrainedModel, predict

PAPER_YEARS = (2025, 2030, 2035)


@dataclass(frozen=True)
class ForecastRequest:
    years: tuple

    def __post_init__(self):
        years = tuple(int(y) for y in self.years)
        if not years:
            raise ValueError("forecast request needs at least one year")
        if any(b <= a for a, b in zip(years, years[1:])):
            raise ValueError(f"forecast years must be strictly ascending, got {years}")
        object.__setattr__(self, "years", years)

    def check_beyond(self, last_training_year: int) -> None:
        if self.years[0] <= last_training_year:
            raise ValueError(
                f"forecast year {self.years[0]} is not after the last training year "
                f"{last_training_year}"
            )

    @classmethod
    def parse(cls, text: str) -> "ForecastRequest":
        return cls(tuple(int(t) for t in text.split(",") if t.strip()))


@dataclass(frozen=True)
class ForecastRow:
    parameter_id: int
    parameter_name: str
    predictions: dict

    def __post_init__(self):
        if not self.predictions:
            raise ValueError("forecast row has no predictions")
        if not all(math.isfinite(v) for v in self.predictions.values()):
            raise ValueError(f"non-finite forecast for parameter {self.parameter_id}")

    def to_dict(self) -> dict:
        return {
            "parameter_id": self.parameter_id,
            "parameter_name": self.parameter_name,
            "predictions": {str(y): v for y, v in self.predictions.items()},
        }


def forecast(model: TrainedModel, request: ForecastRequest) -> dict[int, float]:
    return {year: float(predict(model, year)) for year in request.years}


def forecast_table(selected, request: ForecastRequest) -> list[ForecastRow]:
    """One row per ``(series, model)`` pair, ordered by parameter id.

    Every requested year must lie after the series' last observation.
    """
    rows = []
    for series, model in sorted(selected, key=lambda pair: pair[0].id):
        request.check_beyond(int(series.years[-1]))
        rows.append(ForecastRow(series.id, series.name, forecast(model, request)))
    return rows
