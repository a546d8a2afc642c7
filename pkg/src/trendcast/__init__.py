"""Trend fitting and forecasting for annual indicator series.

Linear, quadratic and exponential trends are fitted by gradient descent on
min-max-normalized data, checked against closed-form least squares, ranked by
R^2 / RMSE and extrapolated to future years.
"""
from importlib import resources
from pathlib import Path

from .evaluation import FitMetrics, ModelChoice, evaluate, r_squared, rmse, select_model
from .forecast import ForecastRequest, ForecastRow, forecast, forecast_table
from .ingest import (
    ParseError,
    RawDataset,
    SelectionRules,
    TimeSeries,
    parse_long_csv,
    parse_wide_csv,
    render_long_csv,
    select_series,
)
from .regression import (
    DesignMatrix,
    DivergenceError,
    DomainError,
    ModelKind,
    NumericalError,
    SingularSystemError,
    TrainedModel,
    TrainingConfig,
    features,
    fit,
    fit_oracle,
    gradient_descent,
    hypothesis,
    loss,
    loss_gradient,
    ols_fit,
    predict,
)
from .report import PipelineConfig, SeriesReport, run_pipeline, write_outputs
from .scaling import DegenerateScalingError, ScalingParams, denormalize, fit_minmax, normalize

__version__ = "0.1.0"


def fixture_path() -> Path:
    """Path of the bundled 17-indicator synthetic dataset (long CSV layout)."""
    return Path(str(resources.files(__package__) / "data" / "india_indicators.csv"))
