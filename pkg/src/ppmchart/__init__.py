"""PPMChart: replay, chart and mine logs of process-model editing operations.

The library turns a recorded modeling session (one timestamped operation per
model element edit) into:

* a reconstructed model state at any point of the session (`replay`),
* a right-aligned one-hour dotted chart with fixed colors, graph-based
  sort orders and filters (`chart`, `render`),
* graph metrics over the finished model: distance-from-start values,
  create-order values and block detection (`graphmetrics`),
* per-session analytics: size and duration, chunked working, move and
  creation profiles, block construction orders (`patterns`).

`gateway` exposes all of it as a CLI (`ppmchart`) and an HTTP service.
"""

from .chart import ChartConfig, PPMChart, SortOrder, build_chart
from .oplog import (
    ElementType,
    LogParseError,
    ModelingEvent,
    OperationClass,
    OperationKind,
    Session,
    classify_operation,
    element_type_of,
    parse_tabular_log,
    parse_xml_log,
    serialize_tabular,
    validate_session,
)
from .patterns import PatternReport, analyze
from .render import render_overview, render_svg
from .replay import ProcessModelState, alive_elements, final_model, replay, replay_at

__version__ = "0.1.0"

__all__ = [
    "ChartConfig",
    "ElementType",
    "LogParseError",
    "ModelingEvent",
    "OperationClass",
    "OperationKind",
    "PPMChart",
    "PatternReport",
    "ProcessModelState",
    "Session",
    "SortOrder",
    "alive_elements",
    "analyze",
    "build_chart",
    "classify_operation",
    "element_type_of",
    "final_model",
    "parse_tabular_log",
    "parse_xml_log",
    "render_overview",
    "render_svg",
    "replay",
    "replay_at",
    "serialize_tabular",
    "validate_session",
]
