"""Small CSV reader/writer shared by all file formats.

Files are plain comma-separated tables with a single header row.  Lines
starting with ``#`` before the header carry ``key=value`` metadata.
"""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .errors import InputError


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_table(path, columns: dict, meta: dict | None = None) -> None:
    """Write equal-length columns to ``path`` with an optional ``#`` header."""
    names = list(columns)
    data = [np.asarray(columns[k]) for k in names]
    n = len(data[0])
    if any(len(d) != n for d in data):
        raise InputError("columns have different lengths")
    lines = []
    for key, value in (meta or {}).items():
        text = str(value)
        if "\n" in text:
            raise InputError(f"metadata value for {key!r} spans lines")
        lines.append(f"#{key}={text}")
    lines.append(",".join(names))
    for i in range(n):
        lines.append(",".join(_fmt(d[i]) for d in data))
    Path(path).write_text("\n".join(lines) + "\n")


def read_table(path, required=(), optional=()):
    """Parse a table written by :func:`write_table`.

    Returns
    -------
    meta : dict
        ``#key=value`` pairs (values kept as strings).
    columns : dict
        Column name -> float array (all columns when neither ``required``
        nor ``optional`` is given).

    Raises
    ------
    InputError
        Missing file, missing columns, ragged rows or non-finite values;
        the message carries the offending line number.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None
    meta: dict[str, str] = {}
    header = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if header is None and "=" in line:
                key, _, value = line[1:].partition("=")
                meta[key.strip()] = value.strip()
            continue
        if header is None:
            header = [h.strip() for h in line.split(",")]
            continue
        fields = line.split(",")
        if len(fields) != len(header):
            raise InputError(f"{path}:{lineno}: expected {len(header)} fields, got {len(fields)}")
        try:
            values = [float(f) for f in fields]
        except ValueError:
            raise InputError(f"{path}:{lineno}: non-numeric field") from None
        if not all(math.isfinite(v) for v in values):
            raise InputError(f"{path}:{lineno}: non-finite value")
        rows.append(values)
    if header is None:
        raise InputError(f"{path}: no header row")
    missing = [c for c in required if c not in header]
    if missing:
        raise InputError(f"{path}: missing column(s) {', '.join(missing)}")
    arr = np.array(rows, dtype=float).reshape(-1, len(header))
    wanted = set(required) | set(optional)
    cols = {name: arr[:, k] for k, name in enumerate(header) if not wanted or name in wanted}
    return meta, cols
