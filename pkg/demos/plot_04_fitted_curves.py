"""
Actual versus fitted and forecast values
========================================

Draws the plot-data files for a few indicators with matplotlib. Run
``plot_03_select_and_forecast.py`` first, or the CLI::

    trendcast run --input src/trendcast/data/india_indicators.csv --out demo_output
"""

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

out = Path("demo_output")
ids = [1, 3, 7, 16]

fig, axes = plt.subplots(2, 2, figsize=(10, 7))
for ax, pid in zip(axes.flat, ids):
    rows = list(csv.DictReader((out / f"plot_{pid}.csv").open()))
    train = [r for r in rows if r["actual"]]
    future = [r for r in rows if not r["actual"]]
    ax.plot([int(r["year"]) for r in train], [float(r["actual"]) for r in train], "o", ms=3, label="actual")
    ax.plot([int(r["year"]) for r in train], [float(r["fitted"]) for r in train], "-", label="fitted")
    ax.plot([int(r["year"]) for r in future], [float(r["fitted"]) for r in future], "s--", label="forecast")
    ax.set_title(f"parameter {pid}")
    ax.legend(fontsize=8)

fig.tight_layout()
fig.savefig(out / "fits.png", dpi=120)
print("saved", out / "fits.png")
