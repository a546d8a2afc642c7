"""Regenerate the bundled synthetic indicator fixture.

The values are NOT World Bank data. They are smooth trends with magnitudes
in the range of the India climate indicators, plus seeded multiplicative
noise, so that every code path of the pipeline has something realistic to
chew on. Run from the repository root:

    python tools/make_fixture.py
"""
import csv
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "trendcast" / "data" / "india_indicators.csv"


def lin(a, b):
    return lambda t: a + b * t


def quad(a, b, c):
    return lambda t: a + b * t + c * t * t


def expo(a, rate):
    return lambda t: a * np.exp(rate * t)


# name, first year, last year, trend in t = year - first, relative noise
SERIES = [
    ("Forest area (sq. km)", 1990, 2020, lin(639_000, 2_570), 0.002),
    ("Agricultural irrigated land (% of total agricultural land)", 2001, 2016, lin(32.5, 0.36), 0.015),
    ("Cereal yield (kg per hectare)", 1961, 2018, quad(950, 18, 0.42), 0.03),
    ("Access to electricity (% of population)", 1993, 2019, quad(49, 0.9, 0.035), 0.02),
    ("CO2 intensity (kg per kg of oil equivalent energy use)", 1971, 2014, lin(1.25, 0.031), 0.02),
    ("CO2 emissions from gaseous fuel consumption (kt)", 1970, 2016, quad(0, 0, 55.0), 0.05),
    ("CO2 emissions (kt)", 1960, 2016, expo(125_000, 0.052), 0.03),
    ("CO2 emissions from liquid fuel consumption (kt)", 1960, 2016, expo(24_000, 0.058), 0.04),
    ("CO2 emissions (metric tons per capita)", 1960, 2016, expo(0.28, 0.033), 0.03),
    ("CO2 emissions from solid fuel consumption (kt)", 1960, 2016, expo(95_000, 0.05), 0.04),
    ("Total greenhouse gas emissions (kt of CO2 equivalent)", 1970, 2012, expo(820_000, 0.031), 0.02),
    ("HFC gas emissions (thousand metric tons of CO2 equivalent)", 1990, 2010, lin(3_100, 690), 0.03),
    ("Methane emissions (kt of CO2 equivalent)", 1970, 2012, lin(455_000, 4_600), 0.015),
    ("Nitrous oxide emissions (thousand metric tons of CO2 equivalent)", 1970, 2012, expo(102_000, 0.021), 0.02),
    ("Annual freshwater withdrawals, total (billion cubic meters)", 1975, 2017, expo(380, 0.017), 0.02),
    ("Population, total", 1960, 2020, quad(450_000_000, 12_500_000, 54_000), 0.002),
    ("Urban population", 1960, 2020, quad(80_000_000, 2_300_000, 72_000), 0.004),
]

# rejected by the default selection rules
REJECTED = [
    ("Land area where elevation is below 5 meters (% of total land area)", [(1990, 2.8), (2000, 2.8), (2010, 2.8)]),
    ("Disaster risk reduction progress score (1-5 scale; 5=best)", [(2011, 3.5)]),
]


def main():
    rng = np.random.default_rng(20220101)
    rows = []
    for name, y0, y1, trend, noise in SERIES:
        years = np.arange(y0, y1 + 1)
        values = trend(years - y0) * np.exp(rng.normal(0.0, noise, years.size))
        rows += [(name, int(y), repr(float(f"{v:.6g}"))) for y, v in zip(years, values)]
        # a reported-but-blank year just past the end, as in real exports
        rows.append((name, y1 + 1, ""))
    for name, pts in REJECTED:
        rows += [(name, y, v) for y, v in pts]
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["indicator", "year", "value"])
        writer.writerows(rows)
    print(f"wrote {len(rows)} records to {OUT}")


if __name__ == "__main__":
    main()
