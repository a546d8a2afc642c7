"""
Gradient descent against the normal equations
==============================================

Every model family is linear in its weights, so the closed-form least-squares
solution is a ground truth for gradient descent. Here we train the quadratic
model for the bundled population series both ways.
"""

import numpy as np

from trendcast import ModelKind, TrainingConfig, fixture_path, gradient_descent, ols_fit
from trendcast import parse_long_csv, select_series
from trendcast.regression import design_for

series = select_series(parse_long_csv(fixture_path().read_text()))
population = next(s for s in series if s.name == "Population, total")
m, x_scale, y_scale = design_for(ModelKind.QUADRATIC, population.years, population.values)
print(m.n_samples, "samples,", m.n_features, "features")

# %%
result = gradient_descent(m)
exact = ols_fit(m)
print("iterations:", result.iterations)
print("gradient descent:", result.weights)
print("normal equations:", exact)
print("max gap:", np.max(np.abs(result.weights - exact)))

# %%
# The loss falls fast at first, then crawls along the poorly conditioned
# direction of the quadratic term.
history = np.array(result.history)
for it in (0, 10, 100, 1000, 10000, len(history) - 1):
    print(f"{it:>6}  {history[it]:.3e}")

# %%
# Too large a step makes the loss blow up; training aborts instead of
# returning garbage weights.
try:
    gradient_descent(m, TrainingConfig(learning_rate=5.0))
except RuntimeError as exc:
    print(type(exc).__name__, exc)
