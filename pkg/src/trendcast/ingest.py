"""Reading indicator CSV files and choosing which series to model."""
from __future__ import annotations

import csv
import io
import logging
import math
import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

log = logging.getLogger(__name__)

LONG_HEADER = ("indicator", "year", "value")
YEAR_MIN, YEAR_MAX = 1900, 2100


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class Record(NamedTuple):
    indicator: str
    year: int
    value: float | None


@dataclass(frozen=True)
class RawDataset:
    records: tuple

    def __post_init__(self):
        recs = tuple(Record(*r) for r in self.records)
        for r in recs:
            if not r.indicator.strip():
                raise ValueError("indicator name must be non-empty")
            if not YEAR_MIN <= r.year <= YEAR_MAX:
                raise ValueError(f"year {r.year} outside [{YEAR_MIN}, {YEAR_MAX}]")
        object.__setattr__(self, "records", recs)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


@dataclass(frozen=True)
class TimeSeries:
    id: int
    name: str
    unit: str
    points: tuple

    def __post_init__(self):
        pts = tuple((int(y), float(v)) for y, v in self.points)
        if not pts:
            raise ValueError(f"series {self.name!r} has no points")
        years = [y for y, _ in pts]
        if any(b <= a for a, b in zip(years, years[1:])):
            raise ValueError(f"series {self.name!r}: years must be strictly ascending")
        if not all(math.isfinite(v) for _, v in pts):
            raise ValueError(f"series {self.name!r}: values must be finite")
        object.__setattr__(self, "points", pts)

    @property
    def years(self) -> np.ndarray:
        return np.array([y for y, _ in self.points], dtype=int)

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.points], dtype=float)

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class SelectionRules:
    min_points: int = 5
    reject_constant: bool = True
    include_names: tuple | None = None

    def __post_init__(self):
        if self.min_points < 2:
            raise ValueError("min_points must be at least 2")
        if self.include_names is not None:
            object.__setattr__(self, "include_names", tuple(self.include_names))


def _text(source) -> str:
    if isinstance(source, str):
        return source
    if isinstance(source, bytes):
        return source.decode("utf-8-sig")
    return source.read()


def _parse_year(token: str, line: int) -> int:
    tok = token.strip()
    if not re.fullmatch(r"[+-]?\d+", tok):
        raise ParseError(f"year {token!r} is not an integer", line)
    year = int(tok)
    if not YEAR_MIN <= year <= YEAR_MAX:
        raise ParseError(f"year {year} outside [{YEAR_MIN}, {YEAR_MAX}]", line)
    return year


def _parse_value(token: str, line: int) -> float | None:
    tok = token.strip()
    if not tok:
        return None
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(f"value {token!r} is not numeric", line) from None
    if not math.isfinite(v):
        raise ParseError(f"value {token!r} is not finite", line)
    return v


def parse_long_csv(source) -> RawDataset:
    """Parse ``indicator,year,value`` rows. Blank values become ``None``.

    Names containing commas must be double-quoted, as the csv module writes them.
    """
    reader = csv.reader(io.StringIO(_text(source).lstrip("\ufeff")))
    header = next(reader, None)
    if header is None or tuple(c.strip() for c in header) != LONG_HEADER:
        raise ParseError(f"expected header 'indicator,year,value', got {','.join(header or [])!r}", 1)
    records = []
    for row in reader:
        lineno = reader.line_num
        if not any(c.strip() for c in row):
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", lineno)
        name = row[0].strip()
        if not name:
            raise ParseError("empty indicator name", lineno)
        records.append(Record(name, _parse_year(row[1], lineno), _parse_value(row[2], lineno)))
    return RawDataset(tuple(records))


_YEAR_RE = re.compile(r"\s*(\d{4})(?:\.0+)?\s*")


def parse_wide_csv(source) -> RawDataset:
    """Parse one-row-per-indicator tables with one column per year.

    Accepts both a minimal ``indicator,1990,1991,...`` header and the World
    Bank download layout (metadata lines above the header, ``Country Name``
    style columns before the year block, trailing empty column). The
    indicator name is taken from an ``Indicator Name`` column when present,
    otherwise from the first column.
    """
    rows = list(csv.reader(io.StringIO(_text(source).lstrip("\ufeff"))))
    header_idx = None
    for i, row in enumerate(rows):
        if len(row) >= 2 and any(_YEAR_RE.fullmatch(c) for c in row[1:]):
            header_idx = i
            break
    if header_idx is None:
        raise ParseError("no header row with year columns found")
    header = rows[header_idx]
    header_line = header_idx + 1

    first_year = next(j for j in range(1, len(header)) if _YEAR_RE.fullmatch(header[j]))
    lowered = [h.strip().lower() for h in header[:first_year]]
    name_col = lowered.index("indicator name") if "indicator name" in lowered else 0

    year_cols: dict[int, int] = {}
    for j in range(first_year, len(header)):
        cell = header[j]
        if not cell.strip() and j == len(header) - 1:
            continue  # trailing delimiter
        m = _YEAR_RE.fullmatch(cell)
        if not m:
            raise ParseError(f"column header {cell!r} is not a year", header_line)
        year = _parse_year(m.group(1), header_line)
        if year in year_cols.values():
            raise ParseError(f"duplicate year column {year}", header_line)
        year_cols[j] = year

    records = []
    for i in range(header_idx + 1, len(rows)):
        row = rows[i]
        lineno = i + 1
        if not any(c.strip() for c in row):
            continue
        name = row[name_col].strip() if name_col < len(row) else ""
        if not name:
            raise ParseError("empty indicator name", lineno)
        for j, year in year_cols.items():
            if j >= len(row):
                continue
            v = _parse_value(row[j], lineno)
            if v is not None:
                records.append(Record(name, year, v))
    return RawDataset(tuple(records))


def _matches(name: str, patterns: Iterable[str]) -> bool:
    for pat in patterns:
        pat = pat.strip()
        if pat.endswith("*"):
            if name.startswith(pat[:-1]):
                return True
        elif name == pat:
            return True
    return False


_UNIT_RE = re.compile(r"\(([^()]*)\)\s*$")


def unit_of(name: str) -> str:
    """Unit text in a trailing parenthetical, e.g. ``Forest area (sq. km)``."""
    m = _UNIT_RE.search(name)
    return m.group(1).strip() if m else ""


def select_series(dataset: RawDataset, rules: SelectionRules | None = None) -> list[TimeSeries]:
    """Group records into series and keep those usable for trend fitting.

    Series are numbered 1..k in order of first appearance among survivors.
    """
    rules = rules or SelectionRules()
    grouped: dict[str, dict[int, float]] = {}
    for rec in dataset:
        name = rec.indicator.strip()
        pts = grouped.setdefault(name, {})
        if rec.value is None:
            continue
        if rec.year in pts:
            log.warning("duplicate record for %r in %d; keeping the last value", name, rec.year)
        pts[rec.year] = rec.value

    out = []
    for name, pts in grouped.items():
        if rules.include_names is not None and not _matches(name, rules.include_names):
            continue
        if len(pts) < rules.min_points:
            log.info("dropping %r: %d points < %d", name, len(pts), rules.min_points)
            continue
        if rules.reject_constant and len(set(pts.values())) == 1:
            log.info("dropping %r: constant series", name)
            continue
        out.append(TimeSeries(len(out) + 1, name, unit_of(name), tuple(sorted(pts.items()))))
    return out


def render_long_csv(dataset: RawDataset | Sequence[Record]) -> str:
    """Inverse of :func:`parse_long_csv`; values are written with ``repr``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(LONG_HEADER)
    for name, year, value in dataset:
        writer.writerow([name, year, "" if value is None else repr(float(value))])
    return buf.getvalue()
