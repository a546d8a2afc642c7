"""End-to-end pipeline and the rendered outputs (metrics table, forecast table,
plot data, JSON report)."""
from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .evaluation import FitMetrics, ModelChoice, evaluate, select_model
from .forecast import PAPER_YEARS, ForecastRequest, ForecastRow, forecast_table
from .ingest import SelectionRules, TimeSeries, parse_long_csv, parse_wide_csv, select_series
from .regression import (
    DomainError,
    ModelKind,
    TrainedModel,
    TrainingConfig,
    dumps_exact,
    fit,
    fit_oracle,
    predict,
)

log = logging.getLogger(__name__)

SCI_THRESHOLD = 1e8
FORMATS = {"markdown": "md", "csv": "csv", "json": "json"}


class EmptySelectionError(ValueError):
    """No series survived the selection rules."""


@dataclass(frozen=True)
class PipelineConfig:
    input_path: str
    input_layout: str = "long"
    selection: SelectionRules = field(default_factory=SelectionRules)
    training: TrainingConfig = field(default_factory=TrainingConfig)
    forecast_years: tuple = PAPER_YEARS
    output_dir: str = "out"
    table_format: str = "markdown"
    decimal_places: int = 3

    def __post_init__(self):
        if self.input_layout not in ("long", "wide"):
            raise ValueError(f"input_layout must be 'long' or 'wide', got {self.input_layout!r}")
        if self.table_format not in FORMATS:
            raise ValueError(f"table_format must be one of {sorted(FORMATS)}, got {self.table_format!r}")
        if self.decimal_places < 0:
            raise ValueError("decimal_places must be non-negative")
        object.__setattr__(self, "forecast_years", ForecastRequest(self.forecast_years).years)


@dataclass(frozen=True)
class SeriesReport:
    series: TimeSeries
    choice: ModelChoice
    forecast: ForecastRow
    model: TrainedModel
    candidates: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.model.kind is not self.choice.selected:
            raise ValueError("serialized model kind differs from the selected kind")

    @property
    def id(self) -> int:
        return self.series.id

    def to_dict(self) -> dict:
        return {
            "parameter_id": self.series.id,
            "parameter_name": self.series.name,
            "unit": self.series.unit,
            "n_points": len(self.series),
            "first_year": int(self.series.years[0]),
            "last_year": int(self.series.years[-1]),
            "choice": {
                "selected": self.choice.selected.value,
                "candidates": [c.to_dict() for c in self.choice.candidates],
                "skipped": [{"kind": k.value, "reason": why} for k, why in self.choice.skipped],
            },
            "forecast": self.forecast.to_dict(),
            "model": self.model.to_dict(),
        }


def load_dataset(path, layout: str = "long"):
    text = Path(path).read_text(encoding="utf-8-sig")
    return parse_wide_csv(text) if layout == "wide" else parse_long_csv(text)


def fit_candidates(series: TimeSeries, training: TrainingConfig | None = None, oracle: bool = False):
    """Fit every applicable family to ``series``.

    Returns ``(models, metrics, skipped)``; the exponential family is skipped
    when the series has a non-positive value. ``oracle=True`` swaps gradient
    descent for the closed-form least-squares weights.
    """
    models, metrics, skipped = {}, [], []
    for kind in ModelKind:
        try:
            model = fit_oracle(series, kind) if oracle else fit(series, kind, training)
        except DomainError as exc:
            skipped.append((kind, str(exc)))
            log.info("series %d: skipping %s (%s)", series.id, kind.value, exc)
            continue
        models[kind] = model
        metrics.append(evaluate(model, series))
    return models, metrics, skipped


def analyse_series(series: TimeSeries, training: TrainingConfig, request: ForecastRequest) -> SeriesReport:
    models, metrics, skipped = fit_candidates(series, training)
    choice = select_model(metrics, skipped)
    model = models[choice.selected]
    (row,) = forecast_table([(series, model)], request)
    return SeriesReport(series, choice, row, model, models)


def run_pipeline(config: PipelineConfig) -> list[SeriesReport]:
    dataset = load_dataset(config.input_path, config.input_layout)
    selected = select_series(dataset, config.selection)
    if not selected:
        raise EmptySelectionError(
            f"no series in {config.input_path} passed the selection rules {config.selection}"
        )
    request = ForecastRequest(config.forecast_years)
    reports = [analyse_series(s, config.training, request) for s in selected]
    return sorted(reports, key=lambda r: r.id)


def round_half_away(x: float, places: int) -> str:
    q = Decimal(1).scaleb(-places)
    d = Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_UP)
    if d == 0:
        d = abs(d)
    return f"{d:f}"


def format_value(x: float, places: int = 3) -> str:
    """Fixed point, or ``1.509e+09`` style once ``|x| >= 1e8``."""
    if abs(x) >= SCI_THRESHOLD:
        return f"{x:.3e}"
    return round_half_away(x, places)


def _markdown(header, rows) -> str:
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _render(header, rows, fmt, md_header=None):
    if fmt == "markdown":
        return _markdown(md_header or header, rows)
    if fmt == "csv":
        return _csv(header, rows)
    if fmt == "json":
        return json.dumps([dict(zip(header, row)) for row in rows], indent=2) + "\n"
    raise ValueError(f"unknown table format {fmt!r}")


def render_metrics_table(reports, fmt: str = "markdown", decimal_places: int = 3) -> str:
    """Selected-model R^2 and RMSE per series, one row each."""
    if not reports:
        raise ValueError("nothing to render")
    rows = []
    for r in sorted(reports, key=lambda r: r.id):
        best = r.choice.best
        rows.append([
            str(r.id),
            round_half_away(best.r_squared, decimal_places),
            round_half_away(best.rmse, decimal_places),
            best.kind.value,
        ])
    header = ["parameter", "r_squared", "rmse", "model_type"]
    md_header = ["Parameter number", "R-squared score", "Root-mean-square error", "Model Type"]
    return _render(header, rows, fmt, md_header)


def render_forecast_table(reports, fmt: str = "markdown", decimal_places: int = 3) -> str:
    if not reports:
        raise ValueError("nothing to render")
    reports = sorted(reports, key=lambda r: r.id)
    years = list(reports[0].forecast.predictions)
    rows = [
        [str(r.id)] + [format_value(r.forecast.predictions[y], decimal_places) for y in years]
        for r in reports
    ]
    header = ["parameter"] + [str(y) for y in years]
    return _render(header, rows, fmt, ["Parameter number"] + header[1:])


def emit_plot_series(report: SeriesReport, series: TimeSeries, output_dir) -> list[Path]:
    """Write ``plot_<id>.csv`` with actual/fitted rows then forecast rows."""
    out = Path(output_dir)
    path = out / f"plot_{series.id}.csv"
    fitted = predict(report.model, series.years)
    rows = [[int(y), repr(float(v)), repr(float(f))] for (y, v), f in zip(series.points, fitted)]
    rows += [[y, "", repr(float(v))] for y, v in report.forecast.predictions.items()]
    try:
        out.mkdir(parents=True, exist_ok=True)
        path.write_text(_csv(["year", "actual", "fitted"], rows), encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write plot data to {path}: {exc}") from exc
    return [path]


def report_document(reports) -> dict:
    return {"series": [r.to_dict() for r in sorted(reports, key=lambda r: r.id)]}


def write_outputs(reports, output_dir, fmt: str = "markdown", decimal_places: int = 3) -> list[Path]:
    """Write report.json, metrics/forecast tables, model and plot files."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    ext = FORMATS[fmt]
    written = []

    def put(name, text):
        p = out / name
        p.write_text(text, encoding="utf-8")
        written.append(p)

    put("report.json", dumps_exact(report_document(reports)) + "\n")
    put(f"metrics.{ext}", render_metrics_table(reports, fmt, decimal_places))
    put(f"forecast.{ext}", render_forecast_table(reports, fmt, decimal_places))
    for r in sorted(reports, key=lambda r: r.id):
        put(f"model_{r.id}.json", r.model.to_json() + "\n")
        written += emit_plot_series(r, r.series, out)
    return written


def series_to_dict(series: TimeSeries) -> dict:
    return {
        "parameter_id": series.id,
        "parameter_name": series.name,
        "unit": series.unit,
        "points": [[y, v] for y, v in series.points],
    }


def series_from_dict(d: dict) -> TimeSeries:
    return TimeSeries(d["parameter_id"], d["parameter_name"], d.get("unit", ""), tuple(map(tuple, d["points"])))


def choice_from_dict(d: dict) -> ModelChoice:
    return ModelChoice(
        tuple(FitMetrics(ModelKind.parse(c["kind"]), c["r_squared"], c["rmse"]) for c in d["candidates"]),
        ModelKind.parse(d["selected"]),
        tuple((ModelKind.parse(s["kind"]), s["reason"]) for s in d.get("skipped", ())),
    )
