"""Tabular export: CSV with a commented provenance block, or a JSON run file.

CSV files are UTF-8, comma-separated, '.'-decimal, scientific notation with
14 significant digits, and start with '#'-prefixed provenance comments
(tool version, config hash, timestamp).  Re-exporting the same run differs
only in the timestamp line.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import IoError

_FMT = "{:.14e}"


def _provenance_lines(config_hash: str | None, extra: dict | None) -> list[str]:
    lines = [f"# chiralpoint {__version__}"]
    if config_hash:
        lines.append(f"# config-hash: {config_hash}")
    for key, value in (extra or {}).items():
        lines.append(f"# {key}: {value}")
    lines.append(f"# exported: {time.strftime('%Y-%m-%dT%H:%M:%S%z')}")
    return lines


def _format_cell(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if value is None:
        return ""
    return _FMT.format(float(value))


def write_csv(path: str | Path, columns: list[str], rows,
              config_hash: str | None = None,
              extra_provenance: dict | None = None) -> Path:
    """Write rows (iterable of sequences) under a header + provenance block."""
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            for line in _provenance_lines(config_hash, extra_provenance):
                fh.write(line + "\n")
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(_format_cell(v) for v in row) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path


def write_json(path: str | Path, payload: dict,
               config_hash: str | None = None) -> Path:
    """Write a single structured run file embedding config and results."""
    path = Path(path)
    doc = {
        "tool": "chiralpoint",
        "version": __version__,
        "config_hash": config_hash,
        "exported": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        **payload,
    }

    def default(obj):
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, (np.floating, np.integer)):
            return obj.item()
        if isinstance(obj, complex):
            return {"re": obj.real, "im": obj.imag}
        raise TypeError(f"not JSON-serialisable: {type(obj)}")

    try:
        path.write_text(json.dumps(doc, indent=2, default=default) + "\n",
                        encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    return path
