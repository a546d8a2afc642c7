"""Command line front end.

    trendcast fit --input data.csv --layout long --out results/
    trendcast forecast --models results/ --years 2025,2030,2035 --out results/
    trendcast report --out results/ --format markdown
    trendcast run --input data.csv --out results/      # all three

Every option can also come from a flat ``key=value`` file given with
``--config``; command-line flags take precedence. Exit status is 0 on
success, 1 for bad input and 2 for numerical failures.
"""
from __future__ import annotations

import argparse
import json
import logging
import shutil
import sys
from pathlib import Path

from .forecast import PAPER_YEARS, ForecastRequest, ForecastRow, forecast_table
from .ingest import ParseError, SelectionRules, select_series
from .regression import NumericalError, TrainedModel, TrainingConfig, dumps_exact
from .report import (
    FORMATS,
    EmptySelectionError,
    SeriesReport,
    choice_from_dict,
    fit_candidates,
    load_dataset,
    series_from_dict,
    series_to_dict,
    write_outputs,
)
from .evaluation import select_model

log = logging.getLogger("trendcast")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2
FITS_FILE = "fits.json"
FORECAST_FILE = "forecast.json"

_defaults = TrainingConfig()


def _years(text: str) -> tuple:
    return ForecastRequest.parse(text).years


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _names(text) -> list:
    return [t.strip() for t in str(text).split(";") if t.strip()]


# dest: (flag, type, default, help)
OPTIONS = {
    "input": ("--input", str, None, "indicator CSV file"),
    "layout": ("--layout", str, "long", "CSV layout: long or wide"),
    "min_points": ("--min-points", int, SelectionRules().min_points, "minimum observations per series"),
    "reject_constant": ("--reject-constant", _bool, True, "drop constant series (true/false)"),
    "include": ("--include", _names, None, "';'-separated indicator names, '*' as trailing wildcard"),
    "lr": ("--lr", float, _defaults.learning_rate, "gradient descent learning rate"),
    "iters": ("--iters", int, _defaults.max_iterations, "maximum gradient descent iterations"),
    "tol": ("--tol", float, _defaults.convergence_tol, "stop when the loss changes by at most this (0 disables)"),
    "grad_tol": ("--grad-tol", float, _defaults.gradient_tol, "stop when every gradient component is at most this"),
    "models": ("--models", str, None, "directory written by 'fit'"),
    "years": ("--years", _years, PAPER_YEARS, "comma-separated forecast years"),
    "out": ("--out", str, None, "output directory"),
    "format": ("--format", str, "markdown", "table format: markdown, csv or json"),
    "decimals": ("--decimals", int, 3, "decimal places in rendered tables"),
}

COMMANDS = {
    "fit": ["input", "layout", "min_points", "reject_constant", "include", "lr", "iters", "tol", "grad_tol", "out"],
    "forecast": ["models", "years", "out"],
    "report": ["out", "format", "decimals"],
    "run": ["input", "layout", "min_points", "reject_constant", "include", "lr", "iters", "tol",
            "grad_tol", "years", "out", "format", "decimals"],
}
REQUIRED = {"fit": ["input", "out"], "forecast": ["models", "out"], "report": ["out"], "run": ["input", "out"]}


class UsageError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trendcast", description="Fit, select and forecast indicator trends.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, dests in COMMANDS.items():
        p = sub.add_parser(cmd)
        p.add_argument("--config", help="flat key=value file with defaults for any option")
        for dest in dests:
            flag, typ, default, help_ = OPTIONS[dest]
            p.add_argument(flag, dest=dest, type=typ, default=None, help=f"{help_} (default: {default})")
    return parser


def read_config(path) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (t.strip() for t in line.split("=", 1))
        dest = key.lstrip("-").replace("-", "_")
        if dest not in OPTIONS:
            raise UsageError(f"{path}:{lineno}: unknown option {key!r}")
        values[dest] = value
    return values


def resolve(args) -> dict:
    """Merge command line, config file and built-in defaults, in that order."""
    file_values = read_config(args.config) if args.config else {}
    opts = {}
    for dest in COMMANDS[args.command]:
        flag, typ, default, _ = OPTIONS[dest]
        value = getattr(args, dest)
        if value is None and dest in file_values:
            value = typ(file_values[dest])
        opts[dest] = default if value is None else value
    missing = [OPTIONS[d][0] for d in REQUIRED[args.command] if opts[d] is None]
    if missing:
        raise UsageError(f"{args.command}: missing required option(s) {', '.join(missing)}")
    if "layout" in opts and opts["layout"] not in ("long", "wide"):
        raise UsageError(f"--layout must be long or wide, got {opts['layout']!r}")
    if "format" in opts and opts["format"] not in FORMATS:
        raise UsageError(f"--format must be one of {', '.join(FORMATS)}, got {opts['format']!r}")
    return opts


def cmd_fit(opts) -> list:
    rules = SelectionRules(opts["min_points"], opts["reject_constant"], opts["include"])
    training = TrainingConfig(opts["lr"], opts["iters"], opts["tol"], opts["grad_tol"])
    selected = select_series(load_dataset(opts["input"], opts["layout"]), rules)
    if not selected:
        raise EmptySelectionError(f"no series in {opts['input']} passed the selection rules")
    out = Path(opts["out"])
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for series in selected:
        models, metrics, skipped = fit_candidates(series, training)
        choice = select_model(metrics, skipped)
        log.info("%d %s: %s", series.id, series.name, choice.selected.value)
        (out / f"model_{series.id}.json").write_text(models[choice.selected].to_json() + "\n", encoding="utf-8")
        entries.append({
            **series_to_dict(series),
            "choice": {
                "selected": choice.selected.value,
                "candidates": [c.to_dict() for c in choice.candidates],
                "skipped": [{"kind": k.value, "reason": r} for k, r in choice.skipped],
            },
        })
    (out / FITS_FILE).write_text(dumps_exact({"series": entries}) + "\n", encoding="utf-8")
    return entries


def _load_fits(directory: Path):
    path = directory / FITS_FILE
    if not path.exists():
        raise FileNotFoundError(f"{path} not found; run 'fit' first")
    doc = json.loads(path.read_text(encoding="utf-8"))
    out = []
    for entry in doc["series"]:
        series = series_from_dict(entry)
        model = TrainedModel.from_json((directory / f"model_{series.id}.json").read_text(encoding="utf-8"))
        out.append((series, choice_from_dict(entry["choice"]), model))
    return out


def cmd_forecast(opts) -> list:
    src, out = Path(opts["models"]), Path(opts["out"])
    fits = _load_fits(src)
    request = ForecastRequest(opts["years"])
    rows = forecast_table([(s, m) for s, _, m in fits], request)
    out.mkdir(parents=True, exist_ok=True)
    if src.resolve() != out.resolve():
        shutil.copy(src / FITS_FILE, out / FITS_FILE)
        for s, _, _ in fits:
            shutil.copy(src / f"model_{s.id}.json", out / f"model_{s.id}.json")
    doc = {"years": list(request.years), "rows": [r.to_dict() for r in rows]}
    (out / FORECAST_FILE).write_text(dumps_exact(doc) + "\n", encoding="utf-8")
    return rows


def cmd_report(opts) -> list:
    out = Path(opts["out"])
    fits = _load_fits(out)
    path = out / FORECAST_FILE
    if not path.exists():
        raise FileNotFoundError(f"{path} not found; run 'forecast' first")
    rows = {
        r["parameter_id"]: ForecastRow(
            r["parameter_id"], r["parameter_name"], {int(y): float(v) for y, v in r["predictions"].items()}
        )
        for r in json.loads(path.read_text(encoding="utf-8"))["rows"]
    }
    reports = [SeriesReport(s, c, rows[s.id], m) for s, c, m in fits]
    return write_outputs(reports, out, opts["format"], opts["decimals"])


def cmd_run(opts) -> list:
    cmd_fit(opts)
    cmd_forecast({"models": opts["out"], "years": opts["years"], "out": opts["out"]})
    return cmd_report(opts)


HANDLERS = {"fit": cmd_fit, "forecast": cmd_forecast, "report": cmd_report, "run": cmd_run}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        HANDLERS[args.command](resolve(args))
    except NumericalError as exc:
        print(f"trendcast: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ParseError, EmptySelectionError, UsageError, OSError, ValueError, KeyError) as exc:
        print(f"trendcast: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
