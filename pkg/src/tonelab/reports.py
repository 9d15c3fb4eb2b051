"""Run configuration and deterministic report files.

Reports are JSON with sorted keys and a fixed float format, so the bytes
depend only on the effective configuration and the build. Output paths are
not echoed into the reports; two runs that differ only in where they write
produce identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, kernels

OUT_ENV = "TONELAB_OUT_DIR"


@dataclass
class RunConfig:
    command: str
    c: float | None = None
    dim: int | None = None
    radius: float | None = None
    grid: int | None = None
    tol: float = 1e-8
    seed: int = 7
    trials: int = 50
    format: str = "json"
    out: str | None = None
    extra: dict = field(default_factory=dict)

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d

    def out_dir(self) -> Path | None:
        """``--out`` wins; otherwise ``$TONELAB_OUT_DIR``; otherwise no files."""
        if self.out:
            return Path(self.out)
        env = os.environ.get(OUT_ENV)
        return Path(env) if env else None


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_clean(v) for v in x.tolist()]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def build_document(config: RunConfig, result: dict) -> dict:
    return {
        "tool": "tonelab",
        "version": __version__,
        "kernel_backend": kernels.BACKEND,
        "config": config.echo(),
        "result": result,
    }


def emit_report(config: RunConfig, results: list[dict], sweep_rows: list[dict] | None = None,
                out_dir: Path | None = None) -> list[Path]:
    """Write one JSON file per result plus ``index.csv`` (and ``sweep.csv`` for corpora).

    Raises :class:`OSError` when the directory cannot be created or written.
    """
    out_dir = config.out_dir() if out_dir is None else Path(out_dir)
    if out_dir is None:
        return []
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    index = io.StringIO()
    w = csv.writer(index, lineterminator="\n")
    w.writerow(["file", "check", "theorem", "verdict", "margin"])
    for k, res in enumerate(results):
        name = f"{config.command}_{k:03d}_{res.get('check', res.get('source', 'report'))}.json"
        path = out_dir / name
        path.write_text(dumps(build_document(config, res)))
        written.append(path)
        w.writerow([name, res.get("check", res.get("source", "")), res.get("theorem", ""),
                    res.get("verdict", ""), _fmt(res.get("margin", res.get("margin_lower", "")))])
    (out_dir / "index.csv").write_text(index.getvalue())
    written.append(out_dir / "index.csv")
    if sweep_rows is not None:
        path = out_dir / f"{config.command}_sweep.csv"
        path.write_text(rows_to_csv(sweep_rows))
        written.append(path)
    return written


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    return x


def rows_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: _fmt(v) for k, v in row.items()})
    return buf.getvalue()
