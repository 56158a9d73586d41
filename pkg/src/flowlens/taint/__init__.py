"""Lightweight overapproximate taint analysis for JavaScript.

Parses a pragmatic ES subset (functions, CommonJS/ES exports, assignments,
calls, member access, template literals, containers, control flow) and tracks
taint from API parameters, parameter properties, and logged variables to a
data-driven sink catalog. Deliberately imprecise: anything containing a
tainted subexpression is tainted; a later classification stage decides which
flows are worth reporting.
"""

from flowlens.taint.analysis import analyze_module, find_sources, propagate
from flowlens.taint.jsparse import JsSyntaxError, parse_module
from flowlens.taint.scan import ScanDiagnostic, scan_project
from flowlens.taint.sinks import (
    SinkCatalog,
    SinkSpec,
    default_catalog,
    load_catalog,
)

__all__ = [
    "analyze_module",
    "find_sources",
    "propagate",
    "parse_module",
    "JsSyntaxError",
    "scan_project",
    "ScanDiagnostic",
    "SinkCatalog",
    "SinkSpec",
    "default_catalog",
    "load_catalog",
]
