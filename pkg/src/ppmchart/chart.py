"""Build the dotted-chart model: timelines, dots, window, sorts, filters.

One horizontal line per model element, one colored dot per operation, all of
it right-aligned inside a one-hour window ending at the session's last
operation.  Colors are a fixed function of the operation kind so charts of
different sessions can be compared at a glance.  Filters remove element
types, operation classes or kinds, or whole timelines that contain a given
class; the window anchor never moves under filtering, keeping filtered and
unfiltered views on the same time scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum, unique

from . import graphmetrics
from .oplog import (
    ElementType,
    OperationClass,
    OperationKind,
    Session,
    classify_operation,
    element_type_of,
)
from .replay import final_model


@unique
class SortOrder(Enum):
    FIRST_EVENT = "first_event"
    DISTANCE_FROM_START = "distance_from_start"
    CREATE_ORDER_FROM_START = "create_order_from_start"


class ChartError(ValueError):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


# Fixed kind -> palette-key mapping.  Reconnect renders as a single dot with
# its own key even though it classifies as create+delete for analytics.
_COLOR_KEYS: dict[OperationKind, str] = {
    OperationKind.CREATE_START_EVENT: "create.event",
    OperationKind.CREATE_END_EVENT: "create.event",
    OperationKind.CREATE_ACTIVITY: "create.activity",
    OperationKind.CREATE_XOR: "create.gateway",
    OperationKind.CREATE_AND: "create.gateway",
    OperationKind.CREATE_EDGE: "create.edge",
    OperationKind.MOVE_START_EVENT: "move.node",
    OperationKind.MOVE_END_EVENT: "move.node",
    OperationKind.MOVE_ACTIVITY: "move.node",
    OperationKind.MOVE_XOR: "move.node",
    OperationKind.MOVE_AND: "move.node",
    OperationKind.MOVE_EDGE_LABEL: "move.edge",
    OperationKind.CREATE_EDGE_BENDPOINT: "move.edge",
    OperationKind.MOVE_EDGE_BENDPOINT: "move.edge",
    OperationKind.DELETE_EDGE_BENDPOINT: "move.edge",
    OperationKind.DELETE_START_EVENT: "delete.node",
    OperationKind.DELETE_END_EVENT: "delete.node",
    OperationKind.DELETE_ACTIVITY: "delete.node",
    OperationKind.DELETE_XOR: "delete.node",
    OperationKind.DELETE_AND: "delete.node",
    OperationKind.DELETE_EDGE: "delete.edge",
    OperationKind.NAME_ACTIVITY: "name",
    OperationKind.RENAME_ACTIVITY: "name",
    OperationKind.NAME_EDGE: "name",
    OperationKind.RENAME_EDGE: "name",
    OperationKind.RECONNECT_EDGE: "reconnect",
}

PALETTE_KEYS: frozenset[str] = frozenset(_COLOR_KEYS.values())


def color_key_of(kind: OperationKind) -> str:
    """Fixed palette key for an operation kind; same input, same key."""
    return _COLOR_KEYS[kind]


@dataclass(frozen=True)
class Dot:
    """One operation on the chart.  ``x`` None means before the window."""

    timestamp: int
    kind: OperationKind
    color_key: str
    x: float | None

    @property
    def out_of_window(self) -> bool:
        return self.x is None

    @property
    def classes(self) -> frozenset[OperationClass]:
        return classify_operation(self.kind)


@dataclass(frozen=True)
class Timeline:
    element_id: str
    element_type: ElementType
    dots: tuple[Dot, ...]
    first_op: int
    deleted: bool


@dataclass(frozen=True)
class TimeWindow:
    t_start_ms: int
    t_end_ms: int
    seconds: float


@dataclass(frozen=True)
class ChartConfig:
    sort: SortOrder = SortOrder.FIRST_EVENT
    window_seconds: float = 3600.0
    width: float = 1000.0
    hidden_element_types: frozenset[ElementType] = frozenset()
    hidden_operation_classes: frozenset[OperationClass] = frozenset()
    hidden_kinds: frozenset[OperationKind] = frozenset()
    hide_elements_with_class: frozenset[OperationClass] = frozenset()

    def __post_init__(self) -> None:
        if self.window_seconds <= 0:
            raise ChartError("BAD_WINDOW", "window_seconds must be positive")
        if self.width <= 0:
            raise ChartError("BAD_WIDTH", "width must be positive")


@dataclass(frozen=True)
class PPMChart:
    """The chart value: filtered timelines plus the unfiltered base.

    ``unfiltered_timelines`` carries the full chart in the same order, so the
    overview panel and re-filtering never lose dots.  ``sort_values`` is
    populated when a graph sort is active.
    """

    session_id: str
    config: ChartConfig
    timelines: tuple[Timeline, ...]
    unfiltered_timelines: tuple[Timeline, ...]
    window: TimeWindow
    sort_values: dict[str, graphmetrics.SortValue] = field(default_factory=dict)


def dot_x(timestamp_ms: int, window: TimeWindow, width: float) -> float | None:
    """Map a timestamp into chart coordinates, right-aligned.

    The last operation lands exactly at ``width``; anything before the
    window start is out of window (None), flagged rather than dropped.
    """
    if timestamp_ms < window.t_start_ms:
        return None
    elapsed_ms = window.t_end_ms - timestamp_ms
    return width * (1.0 - elapsed_ms / (window.seconds * 1000.0))


def build_chart(session: Session, config: ChartConfig | None = None) -> PPMChart:
    """Assemble the chart for a session under the given configuration."""
    if config is None:
        config = ChartConfig()
    if not session.events:
        raise ChartError("EMPTY_SESSION", "cannot chart a session with no events")

    t_end = session.events[-1].timestamp
    window = TimeWindow(
        t_start_ms=t_end - round(config.window_seconds * 1000),
        t_end_ms=t_end,
        seconds=config.window_seconds,
    )

    by_element: dict[str, list[Dot]] = {}
    first_ops: dict[str, int] = {}
    types: dict[str, ElementType] = {}
    for event in session.events:
        dot = Dot(
            timestamp=event.timestamp,
            kind=event.kind,
            color_key=color_key_of(event.kind),
            x=dot_x(event.timestamp, window, config.width),
        )
        by_element.setdefault(event.element_id, []).append(dot)
        first_ops.setdefault(event.element_id, event.timestamp)
        types.setdefault(event.element_id, element_type_of(event.kind))

    timelines = [
        Timeline(
            element_id=eid,
            element_type=types[eid],
            dots=tuple(dots),
            first_op=first_ops[eid],
            deleted=any(OperationClass.DELETE in d.classes for d in dots),
        )
        for eid, dots in by_element.items()
    ]

    sort_values: dict[str, graphmetrics.SortValue] = {}
    if config.sort is SortOrder.FIRST_EVENT:
        timelines.sort(key=lambda t: t.first_op)  # stable: ties keep appearance order
    else:
        model = final_model(session)
        if config.sort is SortOrder.DISTANCE_FROM_START:
            sort_values = graphmetrics.distance_values(model, first_ops)
        else:
            sort_values = graphmetrics.create_order_values(model, first_ops)
        fallback = {
            eid: graphmetrics.SortValue(eid, None, first_ops[eid]) for eid in by_element
        }
        timelines.sort(key=lambda t: sort_values.get(t.element_id, fallback[t.element_id]).sort_key())

    chart = PPMChart(
        session_id=session.session_id,
        config=config,
        timelines=tuple(timelines),
        unfiltered_timelines=tuple(timelines),
        window=window,
        sort_values=sort_values,
    )
    return apply_filters(chart, config)


def _dot_hidden(dot: Dot, config: ChartConfig) -> bool:
    return bool(dot.classes & config.hidden_operation_classes) or dot.kind in config.hidden_kinds


def apply_filters(chart: PPMChart, config: ChartConfig) -> PPMChart:
    """Apply the configured filters to the chart's current timelines.

    Filter predicates are evaluated against the timelines as given: a
    timeline disappears when its element type is hidden, when it contains a
    dot of a hide-elements-with class, or when all its dots are filtered
    away.  Survivor order is untouched and the window anchor is not
    recomputed.
    """
    kept: list[Timeline] = []
    for timeline in chart.timelines:
        if timeline.element_type in config.hidden_element_types:
            continue
        if any(dot.classes & config.hide_elements_with_class for dot in timeline.dots):
            continue
        dots = tuple(d for d in timeline.dots if not _dot_hidden(d, config))
        if not dots:
            continue
        kept.append(replace(timeline, dots=dots))
    return replace(chart, timelines=tuple(kept), config=config)


def chart_to_json_dict(chart: PPMChart) -> dict:
    """The documented, versioned chart JSON consumed by the gateway and UI."""

    def timeline_dict(t: Timeline) -> dict:
        sv = chart.sort_values.get(t.element_id)
        return {
            "element_id": t.element_id,
            "element_type": t.element_type.value,
            "first_op": t.first_op,
            "deleted": t.deleted,
            "sort_value": None if sv is None or sv.value is None else sv.value,
            "dots": [
                {
                    "timestamp": d.timestamp,
                    "kind": d.kind.value,
                    "color_key": d.color_key,
                    "x": d.x,
                    "out_of_window": d.out_of_window,
                }
                for d in t.dots
            ],
        }

    cfg = chart.config
    return {
        "schema": "ppmchart.chart/1",
        "session_id": chart.session_id,
        "config": {
            "sort": cfg.sort.value,
            "window_seconds": cfg.window_seconds,
            "width": cfg.width,
            "hide_types": sorted(t.value for t in cfg.hidden_element_types),
            "hide_ops": sorted(c.value for c in cfg.hidden_operation_classes),
            "hide_kinds": sorted(k.value for k in cfg.hidden_kinds),
            "hide_elements_with": sorted(c.value for c in cfg.hide_elements_with_class),
        },
        "window": {
            "t_start_ms": chart.window.t_start_ms,
            "t_end_ms": chart.window.t_end_ms,
            "seconds": chart.window.seconds,
        },
        "timelines": [timeline_dict(t) for t in chart.timelines],
        "overview_timelines": [timeline_dict(t) for t in chart.unfiltered_timelines],
    }
