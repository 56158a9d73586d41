"""Recursive project scanning.

Walks a directory tree, analyzes every .js file independently, applies the
short-name filter, and merges results in a deterministic (path, line) order.
Unreadable or unparseable files produce diagnostics and are skipped; the scan
itself keeps going.
"""

from __future__ import annotations

import fnmatch
import os
from dataclasses import dataclass
from pathlib import Path

from flowlens.flows import FlowRecord, QueryFamily, filter_short_names
from flowlens.taint.analysis import analyze_module
from flowlens.taint.jsparse import JsSyntaxError
from flowlens.taint.sinks import SinkCatalog, default_catalog

DEFAULT_IGNORE_DIRS = ("node_modules", ".git")

_SINK_ORDER_VALUES = ("CmdInj", "CodeInj", "XSS", "PathTrav", "Logging",
                      "None")


@dataclass(frozen=True)
class ScanDiagnostic:
    file: str
    message: str


def _ignored(rel_path: str, patterns: tuple[str, ...]) -> bool:
    return any(fnmatch.fnmatch(rel_path, pat) for pat in patterns)


def scan_project(
    root: str | Path,
    family: QueryFamily,
    catalog: SinkCatalog | None = None,
    project: str | None = None,
    ignore: tuple[str, ...] = (),
) -> tuple[list[FlowRecord], list[ScanDiagnostic]]:
    """Scan every .js file under ``root`` for one query family.

    Returns (records, diagnostics); records are short-name filtered and
    sorted by (file, line, name, sink type, sink line).
    """
    root_path = Path(root)
    if not root_path.is_dir():
        raise NotADirectoryError(f"scan root {root_path} is not a directory")
    if catalog is None:
        catalog = default_catalog()
    if project is None:
        project = root_path.resolve().name

    files: list[str] = []
    for dirpath, dirnames, filenames in os.walk(root_path):
        dirnames[:] = sorted(d for d in dirnames if d not in DEFAULT_IGNORE_DIRS)
        for name in sorted(filenames):
            if not name.endswith(".js"):
                continue
            rel = os.path.relpath(os.path.join(dirpath, name), root_path)
            rel = rel.replace(os.sep, "/")
            if _ignored(rel, ignore):
                continue
            files.append(rel)
    files.sort()

    records: list[FlowRecord] = []
    diagnostics: list[ScanDiagnostic] = []
    for rel in files:
        full = root_path / rel
        try:
            source = full.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            diagnostics.append(ScanDiagnostic(rel, f"unreadable: {exc}"))
            continue
        try:
            records.extend(
                analyze_module(source, family, catalog, file=rel,
                               project=project))
        except JsSyntaxError as exc:
            diagnostics.append(ScanDiagnostic(rel, f"parse failed: {exc}"))
            continue

    filtered = filter_short_names(records)
    filtered.sort(key=lambda r: (r.file, r.line, r.source_name,
                                 _SINK_ORDER_VALUES.index(r.sink_type.value),
                                 r.sink_line or 0))
    return filtered, diagnostics


def sink_summary(records: list[FlowRecord]) -> dict[str, int]:
    """Per-sink-type record counts in a fixed display order."""
    counts = {value: 0 for value in _SINK_ORDER_VALUES}
    for record in records:
        counts[record.sink_type.value] += 1
    return {k: v for k, v in counts.items() if v}
