"""Quantitative attack-defense tree workbench.

Build or import attack-defense tree models, run exact and PAC bottom-up
analyses over probability, cost and delay, estimate leaf quantities from
samples, and compile models to model-checker inputs.
"""

from .analysis import DOMAINS, analyze, leaf_valuation
from .core import (
    AdtError,
    AdtGraph,
    BasicEvent,
    Diagnostic,
    Gate,
    PacParams,
    QuantAnnotation,
    feedback,
    has_errors,
    merge,
    topo_order,
    validate,
    with_annotation,
)
from .benchgen import gen_benchmark
from .dot import DotParseError, emit_dot, parse_dot
from .adtool_xml import emit_adtool_xml, parse_adtool_xml
from .estimation import EstimateRequest, estimate_gaussian, normal_quantile
from .export_prism import ExportArtifact, export_prism
from .export_uppaal import export_uppaal
from .pac import PacValue, analyze_pac
from .samples import SampleSeries, parse_csv_samples

__version__ = "0.1.0"

__all__ = [
    "AdtError",
    "AdtGraph",
    "BasicEvent",
    "Diagnostic",
    "DotParseError",
    "DOMAINS",
    "EstimateRequest",
    "ExportArtifact",
    "Gate",
    "PacParams",
    "PacValue",
    "QuantAnnotation",
    "SampleSeries",
    "analyze",
    "analyze_pac",
    "emit_adtool_xml",
    "emit_dot",
    "estimate_gaussian",
    "export_prism",
    "export_uppaal",
    "feedback",
    "gen_benchmark",
    "has_errors",
    "leaf_valuation",
    "merge",
    "normal_quantile",
    "parse_adtool_xml",
    "parse_csv_samples",
    "parse_dot",
    "topo_order",
    "validate",
    "with_annotation",
    "__version__",
]
