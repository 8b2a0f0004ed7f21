"""Modeling-operation event logs: taxonomy, parsing and validation.

A modeling session is a timestamp-ordered sequence of editing operations,
each acting on exactly one model element (node or edge).  Two ingestion
formats are supported:

* an XML log where operations on the same element are bundled in one
  ``<trace>`` whose ``name`` is the element id, and
* a flat CSV with one operation per row.

Both produce the same :class:`Session` value.  Validation is separate from
parsing: :func:`validate_session` reports lifecycle anomalies (operations
before creation, after deletion, edges with missing endpoints) as
diagnostics instead of failing.
"""

from __future__ import annotations

import csv
import io
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum, unique


@unique
class OperationKind(Enum):
    """The closed set of 24 recordable editing operations."""

    CREATE_START_EVENT = "CREATE_START_EVENT"
    CREATE_END_EVENT = "CREATE_END_EVENT"
    CREATE_ACTIVITY = "CREATE_ACTIVITY"
    CREATE_XOR = "CREATE_XOR"
    CREATE_AND = "CREATE_AND"
    CREATE_EDGE = "CREATE_EDGE"
    RECONNECT_EDGE = "RECONNECT_EDGE"
    MOVE_START_EVENT = "MOVE_START_EVENT"
    MOVE_END_EVENT = "MOVE_END_EVENT"
    MOVE_ACTIVITY = "MOVE_ACTIVITY"
    MOVE_XOR = "MOVE_XOR"
    MOVE_AND = "MOVE_AND"
    MOVE_EDGE_LABEL = "MOVE_EDGE_LABEL"
    CREATE_EDGE_BENDPOINT = "CREATE_EDGE_BENDPOINT"
    MOVE_EDGE_BENDPOINT = "MOVE_EDGE_BENDPOINT"
    DELETE_EDGE_BENDPOINT = "DELETE_EDGE_BENDPOINT"
    DELETE_START_EVENT = "DELETE_START_EVENT"
    DELETE_END_EVENT = "DELETE_END_EVENT"
    DELETE_ACTIVITY = "DELETE_ACTIVITY"
    DELETE_XOR = "DELETE_XOR"
    DELETE_AND = "DELETE_AND"
    DELETE_EDGE = "DELETE_EDGE"
    NAME_ACTIVITY = "NAME_ACTIVITY"
    RENAME_ACTIVITY = "RENAME_ACTIVITY"
    NAME_EDGE = "NAME_EDGE"
    RENAME_EDGE = "RENAME_EDGE"


@unique
class OperationClass(Enum):
    """Coarse operation family used for coloring, filtering and analytics."""

    CREATE = "create"
    MOVE = "move"
    DELETE = "delete"
    NAME = "name"


@unique
class ElementType(Enum):
    """The six model-element types a session can touch."""

    START_EVENT = "start_event"
    END_EVENT = "end_event"
    ACTIVITY = "activity"
    XOR_GATEWAY = "xor_gateway"
    AND_GATEWAY = "and_gateway"
    EDGE = "edge"


_CREATE = frozenset({OperationClass.CREATE})
_MOVE = frozenset({OperationClass.MOVE})
_DELETE = frozenset({OperationClass.DELETE})
_NAME = frozenset({OperationClass.NAME})

# Bendpoint operations count as moving the edge; reconnect counts as both
# deleting and creating one.
_CLASS_TABLE: dict[OperationKind, frozenset[OperationClass]] = {
    OperationKind.CREATE_START_EVENT: _CREATE,
    OperationKind.CREATE_END_EVENT: _CREATE,
    OperationKind.CREATE_ACTIVITY: _CREATE,
    OperationKind.CREATE_XOR: _CREATE,
    OperationKind.CREATE_AND: _CREATE,
    OperationKind.CREATE_EDGE: _CREATE,
    OperationKind.RECONNECT_EDGE: frozenset({OperationClass.CREATE, OperationClass.DELETE}),
    OperationKind.MOVE_START_EVENT: _MOVE,
    OperationKind.MOVE_END_EVENT: _MOVE,
    OperationKind.MOVE_ACTIVITY: _MOVE,
    OperationKind.MOVE_XOR: _MOVE,
    OperationKind.MOVE_AND: _MOVE,
    OperationKind.MOVE_EDGE_LABEL: _MOVE,
    OperationKind.CREATE_EDGE_BENDPOINT: _MOVE,
    OperationKind.MOVE_EDGE_BENDPOINT: _MOVE,
    OperationKind.DELETE_EDGE_BENDPOINT: _MOVE,
    OperationKind.DELETE_START_EVENT: _DELETE,
    OperationKind.DELETE_END_EVENT: _DELETE,
    OperationKind.DELETE_ACTIVITY: _DELETE,
    OperationKind.DELETE_XOR: _DELETE,
    OperationKind.DELETE_AND: _DELETE,
    OperationKind.DELETE_EDGE: _DELETE,
    OperationKind.NAME_ACTIVITY: _NAME,
    OperationKind.RENAME_ACTIVITY: _NAME,
    OperationKind.NAME_EDGE: _NAME,
    OperationKind.RENAME_EDGE: _NAME,
}

_TYPE_TABLE: dict[OperationKind, ElementType] = {
    OperationKind.CREATE_START_EVENT: ElementType.START_EVENT,
    OperationKind.MOVE_START_EVENT: ElementType.START_EVENT,
    OperationKind.DELETE_START_EVENT: ElementType.START_EVENT,
    OperationKind.CREATE_END_EVENT: ElementType.END_EVENT,
    OperationKind.MOVE_END_EVENT: ElementType.END_EVENT,
    OperationKind.DELETE_END_EVENT: ElementType.END_EVENT,
    OperationKind.CREATE_ACTIVITY: ElementType.ACTIVITY,
    OperationKind.MOVE_ACTIVITY: ElementType.ACTIVITY,
    OperationKind.DELETE_ACTIVITY: ElementType.ACTIVITY,
    OperationKind.NAME_ACTIVITY: ElementType.ACTIVITY,
    OperationKind.RENAME_ACTIVITY: ElementType.ACTIVITY,
    OperationKind.CREATE_XOR: ElementType.XOR_GATEWAY,
    OperationKind.MOVE_XOR: ElementType.XOR_GATEWAY,
    OperationKind.DELETE_XOR: ElementType.XOR_GATEWAY,
    OperationKind.CREATE_AND: ElementType.AND_GATEWAY,
    OperationKind.MOVE_AND: ElementType.AND_GATEWAY,
    OperationKind.DELETE_AND: ElementType.AND_GATEWAY,
    OperationKind.CREATE_EDGE: ElementType.EDGE,
    OperationKind.RECONNECT_EDGE: ElementType.EDGE,
    OperationKind.DELETE_EDGE: ElementType.EDGE,
    OperationKind.MOVE_EDGE_LABEL: ElementType.EDGE,
    OperationKind.CREATE_EDGE_BENDPOINT: ElementType.EDGE,
    OperationKind.MOVE_EDGE_BENDPOINT: ElementType.EDGE,
    OperationKind.DELETE_EDGE_BENDPOINT: ElementType.EDGE,
    OperationKind.NAME_EDGE: ElementType.EDGE,
    OperationKind.RENAME_EDGE: ElementType.EDGE,
}


def classify_operation(kind: OperationKind) -> frozenset[OperationClass]:
    """Map an operation to its class set.

    Total over all 24 kinds.  Every kind maps to exactly one class except
    RECONNECT_EDGE, which counts as both a delete and a create of the edge.
    """
    return _CLASS_TABLE[kind]


def element_type_of(kind: OperationKind) -> ElementType:
    """Map an operation to the type of element it acts on.

    Total over all 24 kinds; bendpoint and edge-label operations act on the
    edge itself.
    """
    return _TYPE_TABLE[kind]


@unique
class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@unique
class DiagnosticCode(Enum):
    """Closed set of diagnostic message codes, assertable in tests."""

    MALFORMED_XML = "MALFORMED_XML"
    UNKNOWN_OPERATION = "UNKNOWN_OPERATION"
    ID_TRACE_MISMATCH = "ID_TRACE_MISMATCH"
    MISSING_ID = "MISSING_ID"
    MISSING_TIMESTAMP = "MISSING_TIMESTAMP"
    BAD_TIMESTAMP = "BAD_TIMESTAMP"
    MISSING_COLUMN = "MISSING_COLUMN"
    BAD_PAYLOAD = "BAD_PAYLOAD"
    NO_CREATE_FIRST = "NO_CREATE_FIRST"
    OP_AFTER_DELETE = "OP_AFTER_DELETE"
    ID_REUSED = "ID_REUSED"
    EDGE_ENDPOINT_MISSING = "EDGE_ENDPOINT_MISSING"
    NON_MONOTONE_TIMESTAMP = "NON_MONOTONE_TIMESTAMP"


@dataclass(frozen=True)
class LogDiagnostic:
    """One finding about a log, anchored to an event index or a trace name."""

    severity: Severity
    code: DiagnosticCode
    message: str
    event_index: int | None = None
    trace: str | None = None

    def __post_init__(self) -> None:
        if self.event_index is None and self.trace is None:
            raise ValueError("diagnostic must cite an event index or a trace")

    def to_json_dict(self) -> dict:
        return {
            "severity": self.severity.value,
            "code": self.code.value,
            "message": self.message,
            "event_index": self.event_index,
            "trace": self.trace,
        }


class LogParseError(Exception):
    """Raised when a log cannot be turned into a Session at all."""

    def __init__(self, diagnostics: list[LogDiagnostic]):
        self.diagnostics = diagnostics
        first = diagnostics[0] if diagnostics else None
        super().__init__(first.message if first else "unparseable log")


@dataclass(frozen=True)
class ModelingEvent:
    """One timestamped operation on one model element.

    ``timestamp`` is milliseconds since the epoch (UTC).  Payload fields are
    optional: third-party logs may omit coordinates, endpoints or labels and
    downstream features degrade gracefully.
    """

    element_id: str
    kind: OperationKind
    timestamp: int
    x: float | None = None
    y: float | None = None
    source_id: str | None = None
    target_id: str | None = None
    label: str | None = None
    bendpoint: int | None = None

    def __post_init__(self) -> None:
        if not self.element_id:
            raise ValueError("element_id must be non-empty")

    @property
    def classes(self) -> frozenset[OperationClass]:
        return classify_operation(self.kind)

    @property
    def element_type(self) -> ElementType:
        return element_type_of(self.kind)


@dataclass(frozen=True)
class Session:
    """An ordered modeling session.

    Events are sorted by timestamp; ties keep their original file order so
    charts are deterministic.
    """

    session_id: str
    events: tuple[ModelingEvent, ...]
    source_format: str = "memory"

    @classmethod
    def build(
        cls, session_id: str, events: list[ModelingEvent], source_format: str = "memory"
    ) -> "Session":
        ordered = sorted(events, key=lambda e: e.timestamp)  # stable
        return cls(session_id=session_id, events=tuple(ordered), source_format=source_format)


# --- timestamp handling -------------------------------------------------

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def parse_timestamp_ms(text: str) -> int:
    """Parse an ISO-8601 timestamp (or raw integer milliseconds) to epoch ms.

    Naive timestamps are read as UTC.  Raises ValueError on anything else.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty timestamp")
    try:
        return int(text)
    except ValueError:
        pass
    normalized = text.replace("Z", "+00:00") if text.endswith("Z") else text
    dt = datetime.fromisoformat(normalized)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return round((dt - _EPOCH).total_seconds() * 1000)


def format_timestamp_ms(ms: int) -> str:
    """Render epoch milliseconds as ISO-8601 UTC with millisecond precision."""
    dt = datetime.fromtimestamp(ms / 1000.0, tz=timezone.utc)
    return dt.isoformat(timespec="milliseconds").replace("+00:00", "Z")


# --- XML ingestion ------------------------------------------------------

_XML_FLOAT_KEYS = ("x", "y")


def parse_xml_log(data: bytes) -> Session:
    """Parse the trace-bundled XML log format.

    Layout: ``<process id>`` holding ``<trace name=ELEMENT_ID>`` elements,
    each a list of ``<event>`` with a ``<name>`` child (the operation) and
    ``<attribute key=...>`` children.  ``id`` and ``timestamp`` attributes
    are required; ``x``, ``y``, ``source``, ``target``, ``label`` and
    ``bendpoint`` are optional.

    Raises LogParseError with all collected diagnostics on malformed XML,
    unknown operation names, an event id differing from its trace name, or
    missing/bad timestamps.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise LogParseError(
            [
                LogDiagnostic(
                    Severity.ERROR,
                    DiagnosticCode.MALFORMED_XML,
                    f"not well-formed XML: {exc}",
                    trace="<document>",
                )
            ]
        ) from exc

    session_id = root.get("id", "") or "unnamed"
    errors: list[LogDiagnostic] = []
    events: list[ModelingEvent] = []
    index = 0
    for trace_el in root.iter("trace"):
        trace_name = trace_el.get("name", "")
        for event_el in trace_el.iter("event"):
            name_el = event_el.find("name")
            op_name = (name_el.text or "").strip() if name_el is not None else ""
            attrs = {
                a.get("key", ""): (a.text or "").strip()
                for a in event_el.iter("attribute")
            }

            kind = None
            try:
                kind = OperationKind(op_name)
            except ValueError:
                errors.append(
                    LogDiagnostic(
                        Severity.ERROR,
                        DiagnosticCode.UNKNOWN_OPERATION,
                        f"unknown operation name {op_name!r}",
                        event_index=index,
                        trace=trace_name,
                    )
                )

            event_id = attrs.get("id")
            if event_id is None:
                errors.append(
                    LogDiagnostic(
                        Severity.ERROR,
                        DiagnosticCode.MISSING_ID,
                        "event has no id attribute",
                        event_index=index,
                        trace=trace_name,
                    )
                )
            elif event_id != trace_name:
                errors.append(
                    LogDiagnostic(
                        Severity.ERROR,
                        DiagnosticCode.ID_TRACE_MISMATCH,
                        f"event id {event_id!r} differs from trace name {trace_name!r}",
                        event_index=index,
                        trace=trace_name,
                    )
                )

            ts_text = attrs.get("timestamp")
            timestamp = None
            if ts_text is None:
                errors.append(
                    LogDiagnostic(
                        Severity.ERROR,
                        DiagnosticCode.MISSING_TIMESTAMP,
                        "event has no timestamp attribute",
                        event_index=index,
                        trace=trace_name,
                    )
                )
            else:
                try:
                    timestamp = parse_timestamp_ms(ts_text)
                except ValueError:
                    errors.append(
                        LogDiagnostic(
                            Severity.ERROR,
                            DiagnosticCode.BAD_TIMESTAMP,
                            f"unparseable timestamp {ts_text!r}",
                            event_index=index,
                            trace=trace_name,
                        )
                    )

            payload: dict = {}
            try:
                for key in _XML_FLOAT_KEYS:
                    if attrs.get(key):
                        payload[key] = float(attrs[key])
                if attrs.get("bendpoint"):
                    payload["bendpoint"] = int(attrs["bendpoint"])
            except ValueError:
                errors.append(
                    LogDiagnostic(
                        Severity.ERROR,
                        DiagnosticCode.BAD_PAYLOAD,
                        "non-numeric x/y/bendpoint attribute",
                        event_index=index,
                        trace=trace_name,
                    )
                )
            if attrs.get("source"):
                payload["source_id"] = attrs["source"]
            if attrs.get("target"):
                payload["target_id"] = attrs["target"]
            if "label" in attrs:
                payload["label"] = attrs["label"]

            if kind is not None and timestamp is not None and trace_name:
                events.append(
                    ModelingEvent(
                        element_id=trace_name, kind=kind, timestamp=timestamp, **payload
                    )
                )
            index += 1

    if errors:
        raise LogParseError(errors)
    return Session.build(session_id, events, source_format="xml")


# --- tabular ingestion --------------------------------------------------

CSV_COLUMNS = (
    "timestamp",
    "element_id",
    "operation",
    "x",
    "y",
    "source",
    "target",
    "label",
    "bendpoint",
)


def parse_tabular_log(data: bytes, session_id: str = "session") -> Session:
    """Parse the flat CSV log format (header required, empty cells absent).

    Produces a Session semantically identical to the XML path and
    round-trips with serialize_tabular.
    """
    text = data.decode("utf-8-sig")
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    errors: list[LogDiagnostic] = []
    for col in CSV_COLUMNS:
        if col not in header:
            errors.append(
                LogDiagnostic(
                    Severity.ERROR,
                    DiagnosticCode.MISSING_COLUMN,
                    f"missing required column {col!r}",
                    event_index=0,
                )
            )
    if errors:
        raise LogParseError(errors)

    events: list[ModelingEvent] = []
    for index, row in enumerate(reader):
        element_id = (row.get("element_id") or "").strip()
        if not element_id:
            errors.append(
                LogDiagnostic(
                    Severity.ERROR,
                    DiagnosticCode.MISSING_ID,
                    "row has no element_id",
                    event_index=index,
                )
            )
        op_name = (row.get("operation") or "").strip()
        kind = None
        try:
            kind = OperationKind(op_name)
        except ValueError:
            errors.append(
                LogDiagnostic(
                    Severity.ERROR,
                    DiagnosticCode.UNKNOWN_OPERATION,
                    f"unknown operation name {op_name!r}",
                    event_index=index,
                )
            )
        timestamp = None
        try:
            timestamp = parse_timestamp_ms(row.get("timestamp") or "")
        except ValueError:
            errors.append(
                LogDiagnostic(
                    Severity.ERROR,
                    DiagnosticCode.BAD_TIMESTAMP,
                    f"unparseable timestamp {row.get('timestamp')!r}",
                    event_index=index,
                )
            )

        payload: dict = {}
        try:
            if (row.get("x") or "").strip():
                payload["x"] = float(row["x"])
            if (row.get("y") or "").strip():
                payload["y"] = float(row["y"])
            if (row.get("bendpoint") or "").strip():
                payload["bendpoint"] = int(row["bendpoint"])
        except ValueError:
            errors.append(
                LogDiagnostic(
                    Severity.ERROR,
                    DiagnosticCode.BAD_PAYLOAD,
                    "non-numeric x/y/bendpoint cell",
                    event_index=index,
                )
            )
        if (row.get("source") or "").strip():
            payload["source_id"] = row["source"].strip()
        if (row.get("target") or "").strip():
            payload["target_id"] = row["target"].strip()
        if row.get("label"):
            payload["label"] = row["label"]

        if kind is not None and timestamp is not None and element_id:
            events.append(
                ModelingEvent(
                    element_id=element_id, kind=kind, timestamp=timestamp, **payload
                )
            )

    if errors:
        raise LogParseError(errors)
    return Session.build(session_id, events, source_format="csv")


def serialize_tabular(session: Session) -> bytes:
    """Write a Session back to the CSV schema; inverse of parse_tabular_log."""

    def fmt_float(v: float | None) -> str:
        if v is None:
            return ""
        return repr(v)

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for e in session.events:
        writer.writerow(
            [
                format_timestamp_ms(e.timestamp),
                e.element_id,
                e.kind.value,
                fmt_float(e.x),
                fmt_float(e.y),
                e.source_id or "",
                e.target_id or "",
                e.label if e.label is not None else "",
                "" if e.bendpoint is None else str(e.bendpoint),
            ]
        )
    return out.getvalue().encode("utf-8")


# --- lifecycle validation -----------------------------------------------


def validate_session(session: Session) -> list[LogDiagnostic]:
    """Check the implicit lifecycle contracts of a session.

    Errors: a non-create first operation on an element, an operation on a
    deleted element, a CREATE_EDGE whose declared endpoints were never
    created or are deleted at that point, and non-monotone timestamps.
    Re-creating a deleted id is a warning (ID_REUSED): its events share one
    timeline.  An empty result means the session is clean.
    """
    diags: list[LogDiagnostic] = []
    seen: set[str] = set()
    dead: set[str] = set()
    previous_ts: int | None = None

    for index, event in enumerate(session.events):
        if previous_ts is not None and event.timestamp < previous_ts:
            diags.append(
                LogDiagnostic(
                    Severity.ERROR,
                    DiagnosticCode.NON_MONOTONE_TIMESTAMP,
                    "timestamp decreases relative to previous event",
                    event_index=index,
                    trace=event.element_id,
                )
            )
        previous_ts = event.timestamp

        classes = event.classes
        eid = event.element_id
        if eid not in seen:
            if OperationClass.CREATE not in classes:
                diags.append(
                    LogDiagnostic(
                        Severity.ERROR,
                        DiagnosticCode.NO_CREATE_FIRST,
                        f"first operation on {eid!r} is {event.kind.value}, not a create",
                        event_index=index,
                        trace=eid,
                    )
                )
            seen.add(eid)
        elif eid in dead:
            if OperationClass.CREATE in classes:
                diags.append(
                    LogDiagnostic(
                        Severity.WARNING,
                        DiagnosticCode.ID_REUSED,
                        f"id {eid!r} re-created after deletion; events share one timeline",
                        event_index=index,
                        trace=eid,
                    )
                )
                dead.discard(eid)
            else:
                diags.append(
                    LogDiagnostic(
                        Severity.ERROR,
                        DiagnosticCode.OP_AFTER_DELETE,
                        f"{event.kind.value} on {eid!r} after its deletion",
                        event_index=index,
                        trace=eid,
                    )
                )

        if event.kind is OperationKind.CREATE_EDGE:
            for endpoint in (event.source_id, event.target_id):
                if endpoint is None:
                    continue
                if endpoint not in seen or endpoint in dead:
                    diags.append(
                        LogDiagnostic(
                            Severity.ERROR,
                            DiagnosticCode.EDGE_ENDPOINT_MISSING,
                            f"edge {eid!r} references {endpoint!r}, "
                            "which does not exist at this point",
                            event_index=index,
                            trace=eid,
                        )
                    )

        if OperationClass.DELETE in classes and OperationClass.CREATE not in classes:
            dead.add(eid)
        elif OperationClass.CREATE in classes:
            dead.discard(eid)

    return diags
