"""Machine-readable result files: CSV time series, JSON summaries.

Output is byte-stable for fixed inputs: floats are written with repr
(shortest round-trip form) and JSON keys are sorted. Files are written to
a temp path and renamed into place, so a failed write leaves nothing
behind.
"""

from __future__ import annotations

import enum
import json
import os
from pathlib import Path

import numpy as np

from .errors import OutputError
from .harness import AGGREGATE_FIELDS, RunSummary, SweepTable
from .metrics import CSV_FIELDS, RunSeries

SERIES_CSV = "series.csv"
SUMMARY_JSON = "summary.json"
SWEEP_CSV = "sweep.csv"
SWEEP_JSON = "sweep.json"

_SWEEP_COLUMNS = (
    ("parameter", "value", "n_runs", "seed_base", "died_count", "state_majority")
    + tuple(f"{f}_{stat}" for f in AGGREGATE_FIELDS for stat in ("mean", "stderr"))
)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _jsonable(obj):
    if isinstance(obj, enum.Enum):
        return obj.name
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _write_text(path: Path, text: str) -> Path:
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        try:
            if tmp.exists():
                tmp.unlink()
        except OSError:
            pass
        raise OutputError(f"failed to write {path}: {exc}") from exc
    return path


def series_to_csv(series: RunSeries) -> str:
    lines = [",".join(CSV_FIELDS)]
    for i in range(len(series)):
        lines.append(
            ",".join(
                (
                    _fmt(series.t[i]),
                    _fmt(series.S[i]),
                    _fmt(series.n_c[i]),
                    _fmt(series.E_total[i]),
                    _fmt(series.E_max[i]),
                    _fmt(series.E_min[i]),
                    _fmt(series.generated[i]),
                    _fmt(series.forwarded[i]),
                    _fmt(series.arrived[i]),
                )
            )
        )
    return "\n".join(lines) + "\n"


def summary_to_json(summary: RunSummary) -> str:
    return json.dumps(_jsonable(summary.__dict__), sort_keys=True, indent=2) + "\n"


def sweep_to_csv(table: SweepTable) -> str:
    lines = [",".join(_SWEEP_COLUMNS)]
    for row in table.rows():
        lines.append(",".join(_fmt(row.get(col)) for col in _SWEEP_COLUMNS))
    return "\n".join(lines) + "\n"


def sweep_to_json(table: SweepTable) -> str:
    rows = []
    for row, cell in zip(table.rows(), table.cells):
        full = dict(row)
        full["config"] = cell.config
        full["thresholds"] = cell.summaries[0].thresholds if cell.summaries else None
        full["seeds"] = list(range(cell.seed_base, cell.seed_base + cell.n_runs))
        rows.append(full)
    return json.dumps(_jsonable(rows), sort_keys=True, indent=2) + "\n"


def emit_outputs(obj, out_dir) -> list[Path]:
    """Write `obj` (RunSeries, RunSummary or SweepTable) under out_dir.

    Returns the paths written. Raises OutputError on I/O failure, leaving
    no partial files.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create output directory {out}: {exc}") from exc
    if isinstance(obj, RunSeries):
        return [_write_text(out / SERIES_CSV, series_to_csv(obj))]
    if isinstance(obj, RunSummary):
        return [_write_text(out / SUMMARY_JSON, summary_to_json(obj))]
    if isinstance(obj, SweepTable):
        return [
            _write_text(out / SWEEP_CSV, sweep_to_csv(obj)),
            _write_text(out / SWEEP_JSON, sweep_to_json(obj)),
        ]
    raise TypeError(f"emit_outputs cannot handle {type(obj).__name__}")
