"""
Min-max scaling of years and values
===================================

Years around 2000 and values in the millions live on very different scales.
Both are mapped onto [0, 1] before training; future years simply land above 1.
"""

import numpy as np

from trendcast import fit_minmax, normalize, denormalize

years = np.arange(1960, 2021)
x_scale = fit_minmax(years)
print(x_scale)

# %%
# The observed range maps onto [0, 1], a forecast year extrapolates past it.
print(normalize(np.array([1960, 1990, 2020, 2035]), x_scale))

# %%
# The inverse is exact up to rounding.
values = 4.5e8 * 1.02 ** (years - 1960)
y_scale = fit_minmax(values)
back = denormalize(normalize(values, y_scale), y_scale)
print("max round-trip error:", np.max(np.abs(back - values) / values))

# %%
# A constant series has no min-max map.
try:
    fit_minmax([2.8, 2.8, 2.8])
except ValueError as exc:
    print("rejected:", exc)
