"""Trend model families, squared-error loss, gradient descent and a closed-form oracle.

All three families are linear in their weights once the inputs are mapped
into the normalized training space:

* linear       ``w0 + w1*x``
* quadratic    ``w0 + w1*x + w2*x**2``
* exponential  ``A * B**x``, trained as ``ln y = ln A + x ln B`` on
  min-max-normalized log targets.

``x`` is always the min-max-normalized year; the quadratic feature squares the
normalized year, never the raw one.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .scaling import ScalingParams, denormalize, fit_minmax, normalize


class NumericalError(RuntimeError):
    """Base class for failures of the numerical machinery."""


class DivergenceError(NumericalError):
    pass


class SingularSystemError(NumericalError):
    pass


class DomainError(ValueError):
    """Input lies outside the domain of a model family (e.g. log of y <= 0)."""


class ModelKind(enum.Enum):
    LINEAR = "Linear"
    QUADRATIC = "Quadratic"
    EXPONENTIAL = "Exponential"

    @property
    def n_weights(self) -> int:
        return 3 if self is ModelKind.QUADRATIC else 2

    @property
    def order(self) -> int:
        # simpler models first; used as the last tie-breaker during selection
        return list(ModelKind).index(self)

    @classmethod
    def parse(cls, name: str) -> "ModelKind":
        for kind in cls:
            if kind.value.lower() == name.strip().lower():
                return kind
        raise ValueError(f"unknown model kind {name!r}")


@dataclass(frozen=True)
class TrainingConfig:
    """Gradient descent settings.

    Training stops at ``max_iterations``, or once the largest gradient
    component is at most ``gradient_tol``, or (when ``convergence_tol`` is
    positive) once the loss changes by at most ``convergence_tol`` in a step.
    """

    learning_rate: float = 0.1
    max_iterations: int = 200_000
    convergence_tol: float = 0.0
    gradient_tol: float = 1e-12

    def __post_init__(self):
        if not self.learning_rate > 0 or not math.isfinite(self.learning_rate):
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError(f"max_iterations must be a positive integer, got {self.max_iterations}")
        if self.convergence_tol < 0 or self.gradient_tol < 0:
            raise ValueError("tolerances must be non-negative")


@dataclass(frozen=True)
class DesignMatrix:
    rows: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        targets = np.asarray(self.targets, dtype=float)
        if rows.ndim != 2:
            raise ValueError("design rows must form a 2-D array with rows of equal length")
        if targets.shape != (rows.shape[0],):
            raise ValueError(
                f"{rows.shape[0]} feature rows but {targets.size} targets"
            )
        if rows.shape[0] < rows.shape[1]:
            raise ValueError(
                f"underdetermined system: {rows.shape[0]} samples for {rows.shape[1]} weights"
            )
        if not (np.all(np.isfinite(rows)) and np.all(np.isfinite(targets))):
            raise ValueError("design matrix entries must be finite")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "targets", targets)

    @property
    def n_samples(self) -> int:
        return self.rows.shape[0]

    @property
    def n_features(self) -> int:
        return self.rows.shape[1]


def features(kind: ModelKind, x_norm):
    """Feature vector for one normalized year, or a matrix for an array of them."""
    x = np.asarray(x_norm, dtype=float)
    one = np.ones_like(x)
    if kind is ModelKind.QUADRATIC:
        cols = (one, x, x * x)
    else:
        cols = (one, x)
    return np.stack(cols, axis=-1)


def _check_lengths(weights, n: int) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.shape != (n,):
        raise ValueError(f"expected {n} weights, got shape {w.shape}")
    return w


def hypothesis(weights, feats) -> float:
    f = np.asarray(feats, dtype=float)
    w = _check_lengths(weights, f.shape[-1])
    return f @ w


def loss(weights, m: DesignMatrix) -> float:
    w = _check_lengths(weights, m.n_features)
    r = m.rows @ w - m.targets
    return float(r @ r) / (2 * m.n_samples)


def loss_gradient(weights, m: DesignMatrix) -> np.ndarray:
    w = _check_lengths(weights, m.n_features)
    r = m.rows @ w - m.targets
    return m.rows.T @ r / m.n_samples


@dataclass
class DescentResult:
    weights: np.ndarray
    loss: float
    iterations: int
    history: list = field(repr=False, default_factory=list)


# a step counts as a loss increase only beyond this relative margin; smaller
# rises are rounding noise once the loss has flattened out
_INCREASE_RTOL = 1e-10
_MAX_INCREASES = 5


def gradient_descent(m: DesignMatrix, config: TrainingConfig | None = None) -> DescentResult:
    """Batch gradient descent on the half mean squared error, from zero weights.

    Raises DivergenceError after five consecutive loss increases, or on a
    non-finite loss.
    """
    config = config or TrainingConfig()
    X, y, n = m.rows, m.targets, m.n_samples
    lr = config.learning_rate
    w = np.zeros(m.n_features)

    r = X @ w - y
    J = float(r @ r) / (2 * n)
    history = [J]
    increases = 0
    it = 0
    while it < config.max_iterations:
        g = X.T @ r / n
        if float(np.max(np.abs(g))) <= config.gradient_tol:
            break
        w = w - lr * g
        it += 1
        r = X @ w - y
        J_new = float(r @ r) / (2 * n)
        if not math.isfinite(J_new):
            raise DivergenceError(
                f"non-finite loss at iteration {it} (learning_rate={lr}); reduce the learning rate"
            )
        history.append(J_new)
        if J_new > J * (1 + _INCREASE_RTOL):
            increases += 1
            if increases >= _MAX_INCREASES:
                raise DivergenceError(
                    f"loss increased on {increases} consecutive iterations "
                    f"(iteration {it}, loss {J_new:.6g}, learning_rate={lr}); "
                    "the learning rate is too large"
                )
        else:
            increases = 0
        converged = config.convergence_tol > 0 and abs(J - J_new) <= config.convergence_tol
        J = J_new
        if converged:
            break
    return DescentResult(w, J, it, history)


def ols_fit(m: DesignMatrix) -> np.ndarray:
    """Solve the normal equations by Gaussian elimination with partial pivoting."""
    X, y = m.rows, m.targets
    a = X.T @ X
    b = X.T @ y
    k = a.shape[0]
    aug = np.column_stack([a, b])
    scale = max(float(np.max(np.abs(a))), np.finfo(float).tiny)
    for col in range(k):
        piv = col + int(np.argmax(np.abs(aug[col:, col])))
        if abs(aug[piv, col]) <= 1e-12 * scale:
            raise SingularSystemError(
                f"normal equations are singular (column {col} is linearly dependent)"
            )
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        for row in range(col + 1, k):
            factor = aug[row, col] / aug[col, col]
            aug[row, col:] -= factor * aug[col, col:]
    w = np.zeros(k)
    for row in range(k - 1, -1, -1):
        w[row] = (aug[row, k] - aug[row, row + 1:k] @ w[row + 1:]) / aug[row, row]
    return w


@dataclass(frozen=True)
class TrainedModel:
    kind: ModelKind
    weights: tuple
    x_scale: ScalingParams
    y_scale: ScalingParams
    training_loss: float

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        if len(w) != self.kind.n_weights:
            raise ValueError(f"{self.kind.value} needs {self.kind.n_weights} weights, got {len(w)}")
        if not all(math.isfinite(v) for v in w):
            raise ValueError("weights must be finite")
        if not self.training_loss >= 0:
            raise ValueError("training_loss must be non-negative")
        object.__setattr__(self, "weights", w)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "weights": list(self.weights),
            "x_scale": self.x_scale.to_dict(),
            "y_scale": self.y_scale.to_dict(),
            "training_loss": self.training_loss,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainedModel":
        return cls(
            kind=ModelKind.parse(d["kind"]),
            weights=tuple(d["weights"]),
            x_scale=ScalingParams(float(d["x_scale"]["min"]), float(d["x_scale"]["max"])),
            y_scale=ScalingParams(float(d["y_scale"]["min"]), float(d["y_scale"]["max"])),
            training_loss=float(d["training_loss"]),
        )

    def to_json(self) -> str:
        return dumps_exact(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "TrainedModel":
        return cls.from_dict(json.loads(text))


def dumps_exact(obj, indent: int | None = 2) -> str:
    """Serialize to JSON with every float written to 17 significant digits.

    Keys keep insertion order so output is byte-stable.
    """

    def enc(o, level):
        if isinstance(o, bool) or o is None:
            return json.dumps(o)
        if isinstance(o, (float, np.floating)):
            f = float(o)
            if not math.isfinite(f):
                raise ValueError(f"cannot serialize non-finite float {f}")
            return format(f, ".17g")
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, str):
            return json.dumps(o, ensure_ascii=False)
        if isinstance(o, dict):
            items = [(json.dumps(str(k), ensure_ascii=False), enc(v, level + 1)) for k, v in o.items()]
            if not items:
                return "{}"
            if indent is None:
                return "{" + ", ".join(f"{k}: {v}" for k, v in items) + "}"
            pad = " " * (indent * (level + 1))
            body = ",\n".join(f"{pad}{k}: {v}" for k, v in items)
            return "{\n" + body + "\n" + " " * (indent * level) + "}"
        if isinstance(o, (list, tuple, np.ndarray)):
            parts = [enc(v, level + 1) for v in o]
            if not parts:
                return "[]"
            return "[" + ", ".join(parts) + "]"
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return enc(obj, 0)


def design_for(kind: ModelKind, years: Sequence[int], values: Sequence[float]):
    """Build the normalized training problem for one series.

    Returns ``(DesignMatrix, x_scale, y_scale)``.
    """
    years = np.asarray(years, dtype=float)
    values = np.asarray(values, dtype=float)
    if kind is ModelKind.EXPONENTIAL:
        if np.any(values <= 0):
            bad = values[values <= 0][0]
            raise DomainError(
                f"exponential model needs strictly positive values, found {bad:g}"
            )
        targets = np.log(values)
    else:
        targets = values
    x_scale = fit_minmax(years)
    y_scale = fit_minmax(targets)
    m = DesignMatrix(features(kind, normalize(years, x_scale)), normalize(targets, y_scale))
    return m, x_scale, y_scale


def fit(series, kind: ModelKind, config: TrainingConfig | None = None) -> TrainedModel:
    """Train one model family on a TimeSeries by gradient descent."""
    m, x_scale, y_scale = design_for(kind, series.years, series.values)
    result = gradient_descent(m, config)
    return TrainedModel(kind, tuple(result.weights), x_scale, y_scale, result.loss)


def fit_oracle(series, kind: ModelKind) -> TrainedModel:
    """Same pipeline as :func:`fit` but with closed-form least-squares weights."""
    m, x_scale, y_scale = design_for(kind, series.years, series.values)
    w = ols_fit(m)
    return TrainedModel(kind, tuple(w), x_scale, y_scale, loss(w, m))


def predict(model: TrainedModel, year):
    """Prediction in original units for a raw year (scalar or array)."""
    x = normalize(np.asarray(year, dtype=float), model.x_scale)
    v = features(model.kind, x) @ np.asarray(model.weights)
    out = denormalize(v, model.y_scale)
    if model.kind is ModelKind.EXPONENTIAL:
        out = np.exp(out)
    return float(out) if np.ndim(out) == 0 else out
