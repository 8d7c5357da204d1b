"""Machine-readable report emission: versioned JSON and delimited CSV.

Reports are deterministic byte-for-byte for identical inputs and seed, and
are written atomically (temp file + rename in the target directory).
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from typing import List, Optional

REPORT_VERSION = 1
FORMATS = ("json", "csv")


def _entry_sort_key(entry: dict):
    t = entry.get("t")
    return (entry.get("id", ""), t if t is not None else -1.0, entry.get("variant", ""))


def build_report(entries: List[dict]) -> dict:
    return {"version": REPORT_VERSION,
            "checks": sorted(entries, key=_entry_sort_key)}


def render_json(report: dict) -> bytes:
    return (json.dumps(report, sort_keys=True, indent=2) + "\n").encode("utf-8")


def render_csv(report: dict) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["check", "t", "metric", "value", "verdict"])
    for entry in report["checks"]:
        t = entry.get("t")
        writer.writerow([
            entry["id"],
            "" if t is None else repr(float(t)),
            entry.get("metric", ""),
            "" if entry.get("value") is None else repr(float(entry["value"])),
            entry["verdict"],
        ])
    return buf.getvalue().encode("utf-8")


def write_atomic(path: str, data: bytes):
    if os.path.exists(path) and not os.path.isfile(path):
        raise ValueError(f"refusing to replace non-regular file {path!r}")
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".sgspec-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_report(entries: List[dict], fmt: str, path: Optional[str] = None) -> bytes:
    """Render the report in the requested format; write atomically if path given."""
    if not entries:
        raise ValueError("refusing to emit an empty report")
    if fmt not in FORMATS:
        raise ValueError(f"unknown report format {fmt!r}; expected one of {FORMATS}")
    report = build_report(entries)
    data = render_json(report) if fmt == "json" else render_csv(report)
    if path is not None:
        write_atomic(path, data)
    return data
