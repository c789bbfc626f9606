"""CSV and JSON writers for experiment results.

Both formats carry the same records. Floats are written with ``repr`` (the
shortest text that round-trips), lines end in LF, and nothing time- or
host-dependent goes into the output, so identical runs give identical bytes.
CSV metadata lives in a ``<name>.meta.json`` sidecar.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import sys
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .core import Model
from .experiments import ConvergenceTable, RunResult

RABI_COLUMNS = ("tau", "method", "re_a", "im_a", "re_b", "im_b", "prob_a", "prob_b")
JC_COLUMNS = ("tau", "method", "n", "re_a", "im_a", "re_b", "im_b", "prob_a", "prob_b")
SWEEP_COLUMNS = ("epsilon", "method", "max_error_a", "time_of_max_a", "ratio_to_next")
ELISION_THRESHOLD = 1e-12
FORMATS = ("csv", "json")


def _f(x) -> float:
    return float(x)


def _kept_channels(traj):
    """Channels whose amplitudes reach ``ELISION_THRESHOLD`` somewhere, and the rest."""
    peak = np.maximum(np.abs(traj.a).max(axis=0), np.abs(traj.b).max(axis=0))
    kept, elided = [], []
    for col, n in enumerate(traj.channels):
        (kept if peak[col] >= ELISION_THRESHOLD else elided).append((col, n))
    return kept, [n for _, n in elided]


def records(result: RunResult):
    """Rows of the result as tuples in column order, plus the elided channels per method."""
    ladder = result.spec.model is Model.JAYNES_CUMMINGS
    rows = []
    elided = {}
    for label, traj in result.trajectories.items():
        tau = traj.times
        pa, pb = traj.prob_a, traj.prob_b
        if not ladder:
            for i in range(len(tau)):
                a, b = complex(traj.a[i]), complex(traj.b[i])
                rows.append((_f(tau[i]), label, a.real, a.imag, b.real, b.imag,
                             _f(pa[i]), _f(pb[i])))
            continue
        kept, gone = _kept_channels(traj)
        if gone:
            elided[label] = gone
        for i in range(len(tau)):
            for col, n in kept:
                a, b = complex(traj.a[i, col]), complex(traj.b[i, col])
                rows.append((_f(tau[i]), label, int(n), a.real, a.imag, b.real, b.imag,
                             _f(pa[i, col]), _f(pb[i, col])))
    return (JC_COLUMNS if ladder else RABI_COLUMNS), rows, elided


def _jsonable(obj):
    if dataclasses.is_dataclass(obj):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def metadata(result: RunResult, elided: dict) -> dict:
    spec = result.spec
    p, g, cfg = spec.params, spec.grid, spec.integrator
    meta = {
        "name": spec.name,
        "model": spec.model.value,
        "methods": [m.label for m in spec.methods],
        "delta": p.delta,
        "big_delta": p.big_delta,
        "epsilon": p.epsilon,
        "grid": {"t_start": g.t_start, "t_end": g.t_end, "n_samples": g.n_samples,
                 "spacing": g.spacing.value},
        "integrator": {"rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol,
                       "max_step": cfg.resolved_max_step(p.big_delta)},
    }
    if spec.model is Model.JAYNES_CUMMINGS:
        meta["n_max_requested"] = spec.n_max
        meta["elision_threshold"] = ELISION_THRESHOLD
        meta["elided_channels"] = elided
    traj_meta = {k: t.meta for k, t in result.trajectories.items() if t.meta}
    if traj_meta:
        meta["trajectories"] = traj_meta
    if result.report is not None:
        meta["errors"] = {k: dataclasses.asdict(v) for k, v in result.report.errors.items()}
    return _jsonable(meta)


def _csv_text(columns: Iterable[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _json_text(columns, rows, meta: Optional[dict]) -> str:
    doc = {"columns": list(columns), "records": [dict(zip(columns, r)) for r in rows]}
    if meta is not None:
        doc = {"metadata": meta, **doc}
    return json.dumps(doc, indent=1) + "\n"


def _write(path, text: str) -> None:
    if str(path) == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta.json")


def emit(result: RunResult, path, fmt: str = "csv") -> list:
    """Write ``result`` to ``path`` (``"-"`` for stdout); returns the paths written.

    Raises :class:`OSError` when the destination cannot be written.
    """
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    columns, rows, elided = records(result)
    meta = metadata(result, elided)
    if fmt == "json":
        _write(path, _json_text(columns, rows, meta))
        return [] if str(path) == "-" else [Path(path)]
    _write(path, _csv_text(columns, rows))
    if str(path) == "-":
        return []
    side = sidecar_path(path)
    _write(side, json.dumps(meta, indent=1, sort_keys=True) + "\n")
    return [Path(path), side]


def emit_table(table: ConvergenceTable, path, fmt: str = "csv") -> list:
    """Write an epsilon sweep table."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    rows = [(r.epsilon, r.method, r.max_error_a, r.time_of_max_a, r.ratio_to_next)
            for r in table.rows]
    text = _csv_text(SWEEP_COLUMNS, rows) if fmt == "csv" else _json_text(SWEEP_COLUMNS, rows, None)
    _write(path, text)
    return [] if str(path) == "-" else [Path(path)]


def load_records(path) -> list:
    """Read records back from a CSV or JSON file written by :func:`emit`."""
    path = Path(path)
    if path.suffix == ".json":
        return json.loads(path.read_text(encoding="utf-8"))["records"]
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            rec = {}
            for k, v in row.items():
                if k == "method":
                    rec[k] = v
                elif k == "n":
                    rec[k] = int(v)
                else:
                    rec[k] = float(v) if v != "" else None
            out.append(rec)
    return out
