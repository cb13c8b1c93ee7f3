"""Delimited text helpers shared by every stage.

Output files start with ``#`` comment lines carrying run metadata; readers
skip them. Floats are written with ``repr`` so they re-load bit-exactly.
"""

from __future__ import annotations

import csv
import hashlib
import io as _io
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

TIMESTAMP_PREFIX = "# created:"


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(float(value))
    try:
        import numpy as np

        if isinstance(value, np.floating):
            return repr(float(value))
        if isinstance(value, np.integer):
            return str(int(value))
        if isinstance(value, np.bool_):
            return "true" if value else "false"
    except ImportError:  # pragma: no cover
        pass
    return str(value)


def parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def metadata_header(meta: Mapping[str, object] | None) -> list[str]:
    """Comment lines for a file header; the timestamp line goes last."""
    if not meta:
        return []
    lines = [f"# {k}: {fmt(v)}" for k, v in meta.items() if k != "created"]
    created = meta.get("created") or datetime.now(timezone.utc).isoformat(timespec="seconds")
    lines.append(f"{TIMESTAMP_PREFIX} {created}")
    return lines


def write_table(
    path: str | Path,
    columns: Sequence[str],
    rows: Iterable[Sequence],
    meta: Mapping[str, object] | None = None,
    delimiter: str = ",",
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    buf = _io.StringIO()
    for line in metadata_header(meta):
        buf.write(line + "\n")
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path


def _uncommented(handle) -> Iterator[str]:
    for line in handle:
        if not line.startswith("#"):
            yield line


def read_table(path: str | Path, delimiter: str = ",") -> tuple[list[str], list[list[str]]]:
    """Return (header, rows), skipping comment lines. Raises OSError if unreadable."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(_uncommented(fh), delimiter=delimiter)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            return [], []
        return header, [row for row in reader]


def strip_timestamp(text: str) -> str:
    return "\n".join(line for line in text.splitlines() if not line.startswith(TIMESTAMP_PREFIX))


def digest(items: Mapping[str, object]) -> str:
    canon = "\n".join(f"{k}={fmt(items[k])}" for k in sorted(items))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]
