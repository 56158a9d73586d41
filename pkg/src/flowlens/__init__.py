"""flowlens: bimodal taint analysis for JavaScript.

Stage one extracts overapproximate source-to-sink flows with a lightweight
static taint engine; stage two classifies each flow as expected or unexpected
from its natural-language context (identifier names, doc comments) using one
of several interchangeable models. Only unexpected flows are reported.
"""

__version__ = "0.1.0"
