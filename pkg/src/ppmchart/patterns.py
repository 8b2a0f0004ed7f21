"""Session analytics: size, pauses, ordering habits, block construction.

Everything here is a deterministic function of the session.  The source
material presents these modeling styles as visual exemplars only; the
numeric thresholds that turn them into classifiers are quantified below in
one constants table so experiments can vary them.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from enum import Enum, unique

from .graphmetrics import Block, create_order_values, detect_blocks
from .oplog import ElementType, OperationClass, Session
from .replay import alive_elements, final_model

# Classifier constants.  The pause threshold in particular differs between
# slower and quicker modelers, hence the Auto rule scales with the session.
IMMEDIATE_MOVE_LAG_SECONDS = 60.0
END_BATCH_MOVE_FRACTION = 0.5
FINAL_QUARTER_FRACTION = 0.75
CHUNK_MIN_THRESHOLD_SECONDS = 30.0
CHUNK_MEDIAN_GAP_FACTOR = 5.0

_GATEWAYS = (ElementType.XOR_GATEWAY, ElementType.AND_GATEWAY)


@unique
class MoveStyle(Enum):
    IMMEDIATE_MOVER = "immediate_mover"
    END_BATCH_MOVER = "end_batch_mover"
    CONTINUOUS_MOVER = "continuous_mover"
    NO_MOVES = "no_moves"


@unique
class CreationStyle(Enum):
    NODES_THEN_EDGES = "nodes_then_edges"
    NODES_THEN_GATEWAYS_THEN_EDGES = "nodes_then_gateways_then_edges"
    INTERLEAVED = "interleaved"


@unique
class BlockOrderStyle(Enum):
    LEFT_TO_RIGHT = "left_to_right"
    ACTIVITIES_GATEWAYS_EDGES = "activities_gateways_edges"
    ACTIVITIES_THEN_GATEWAYS_AND_EDGES = "activities_then_gateways_and_edges"
    ALL_NODES_THEN_EDGES = "all_nodes_then_edges"
    OTHER = "other"


@dataclass(frozen=True)
class SessionMetrics:
    created_element_count: int
    final_alive_count: int
    deleted_count: int
    total_event_count: int
    duration_seconds: float
    class_event_counts: dict[OperationClass, int]


@dataclass(frozen=True)
class Chunk:
    """A maximal run of operations without a pause at/above the threshold."""

    start_index: int
    end_index: int
    start_ts: int
    end_ts: int
    preceding_pause_seconds: float

    @property
    def size(self) -> int:
        return self.end_index - self.start_index + 1


@dataclass(frozen=True)
class MoveProfile:
    create_to_move_lag_seconds: dict[str, float]
    median_lag_seconds: float | None
    final_quarter_move_fraction: float | None
    style: MoveStyle


@dataclass(frozen=True)
class CreationProfile:
    creation_sequence: tuple[ElementType, ...]
    edge_lag_index: float
    gateway_lag_index: float
    style: CreationStyle


@dataclass(frozen=True)
class BlockConstructionOrder:
    block: Block
    member_creation_order: tuple[tuple[str, ElementType], ...]
    style: BlockOrderStyle


@dataclass(frozen=True)
class PatternReport:
    session_id: str
    metrics: SessionMetrics
    chunks: tuple[Chunk, ...]
    move_profile: MoveProfile
    creation_profile: CreationProfile
    block_orders: tuple[BlockConstructionOrder, ...]


def session_metrics(session: Session) -> SessionMetrics:
    """Size and duration dimensions of one modeling session."""
    events = session.events
    class_counts = {cls: 0 for cls in OperationClass}
    for e in events:
        for cls in e.classes:
            class_counts[cls] += 1
    model = final_model(session)
    alive = len(alive_elements(model))
    dead = sum(1 for n in model.nodes.values() if not n.alive) + sum(
        1 for e in model.edges.values() if not e.alive
    )
    duration = (events[-1].timestamp - events[0].timestamp) / 1000.0 if events else 0.0
    return SessionMetrics(
        created_element_count=len({e.element_id for e in events}),
        final_alive_count=alive,
        deleted_count=dead,
        total_event_count=len(events),
        duration_seconds=duration,
        class_event_counts=class_counts,
    )


def detect_chunks(session: Session, threshold_seconds: float | None = None) -> list[Chunk]:
    """Greedy left-to-right segmentation at inter-event pauses.

    A new chunk starts whenever the gap to the previous event is at least
    the threshold.  ``None`` selects the Auto rule:
    max(CHUNK_MIN_THRESHOLD_SECONDS, CHUNK_MEDIAN_GAP_FACTOR * median gap).
    """
    events = session.events
    if not events:
        return []
    gaps = [
        (b.timestamp - a.timestamp) / 1000.0 for a, b in zip(events, events[1:])
    ]
    if threshold_seconds is None:
        median_gap = statistics.median(gaps) if gaps else 0.0
        threshold_seconds = max(
            CHUNK_MIN_THRESHOLD_SECONDS, CHUNK_MEDIAN_GAP_FACTOR * median_gap
        )
    if threshold_seconds <= 0:
        raise ValueError("threshold_seconds must be positive")

    chunks: list[Chunk] = []
    start = 0
    for i, gap in enumerate(gaps):
        if gap >= threshold_seconds:
            chunks.append(_chunk(events, start, i, chunks))
            start = i + 1
    chunks.append(_chunk(events, start, len(events) - 1, chunks))
    return chunks


def _chunk(events, start: int, end: int, previous: list[Chunk]) -> Chunk:
    pause = 0.0
    if previous:
        pause = (events[start].timestamp - previous[-1].end_ts) / 1000.0
    return Chunk(
        start_index=start,
        end_index=end,
        start_ts=events[start].timestamp,
        end_ts=events[end].timestamp,
        preceding_pause_seconds=pause,
    )


def _first_create_ts(session: Session) -> dict[str, int]:
    """First Create-class timestamp per element (first event as fallback)."""
    first: dict[str, int] = {}
    fallback: dict[str, int] = {}
    for e in session.events:
        fallback.setdefault(e.element_id, e.timestamp)
        if OperationClass.CREATE in e.classes:
            first.setdefault(e.element_id, e.timestamp)
    return {**fallback, **first}


def move_profile(session: Session) -> MoveProfile:
    """How the modeler used move operations, with a coarse style tag.

    End-batch movers do at least END_BATCH_MOVE_FRACTION of their moves
    after the last create; immediate movers relocate elements within
    IMMEDIATE_MOVE_LAG_SECONDS of creating them.
    """
    events = session.events
    moves = [e for e in events if OperationClass.MOVE in e.classes]
    if not moves:
        return MoveProfile({}, None, None, MoveStyle.NO_MOVES)

    created = _first_create_ts(session)
    lags: dict[str, float] = {}
    for e in moves:
        if e.element_id not in lags:
            lags[e.element_id] = (e.timestamp - created[e.element_id]) / 1000.0
    median_lag = statistics.median(lags.values())

    t_first, t_last = events[0].timestamp, events[-1].timestamp
    quarter_start = t_first + FINAL_QUARTER_FRACTION * (t_last - t_first)
    final_quarter = sum(1 for e in moves if e.timestamp >= quarter_start) / len(moves)

    create_ts = [e.timestamp for e in events if OperationClass.CREATE in e.classes]
    last_create = max(create_ts) if create_ts else float("-inf")
    after_last_create = sum(1 for e in moves if e.timestamp > last_create) / len(moves)

    if after_last_create >= END_BATCH_MOVE_FRACTION:
        style = MoveStyle.END_BATCH_MOVER
    elif median_lag <= IMMEDIATE_MOVE_LAG_SECONDS:
        style = MoveStyle.IMMEDIATE_MOVER
    else:
        style = MoveStyle.CONTINUOUS_MOVER
    return MoveProfile(lags, median_lag, final_quarter, style)


def _creation_ranks(session: Session) -> tuple[list[str], dict[str, int], dict[str, ElementType]]:
    """Elements in first-creation order, their ranks, and their types."""
    order: list[str] = []
    types: dict[str, ElementType] = {}
    for e in session.events:
        if OperationClass.CREATE in e.classes and e.element_id not in types:
            order.append(e.element_id)
            types[e.element_id] = e.element_type
    return order, {eid: i for i, eid in enumerate(order)}, types


def creation_profile(session: Session) -> CreationProfile:
    """Order in which element types were brought onto the canvas.

    The lag indices measure, normalized by the number of created elements,
    how far edge creations trail the later of their endpoints and how far
    gateway creations trail their adjacent non-gateway nodes; 0 means no
    lag, values approach 1 when everything else came first.
    """
    order, ranks, types = _creation_ranks(session)
    total = len(order)
    sequence = tuple(
        e.element_type for e in session.events if OperationClass.CREATE in e.classes
    )

    endpoint_of: dict[str, tuple[str | None, str | None]] = {}
    for e in session.events:
        if e.element_type is ElementType.EDGE and (e.source_id or e.target_id):
            if e.element_id not in endpoint_of:
                endpoint_of[e.element_id] = (e.source_id, e.target_id)

    edge_lags: list[float] = []
    neighbor_max: dict[str, int] = {}
    for eid, (src, tgt) in endpoint_of.items():
        if eid not in ranks:
            continue
        endpoint_ranks = [ranks[n] for n in (src, tgt) if n is not None and n in ranks]
        if len(endpoint_ranks) == 2:
            edge_lags.append(max(0, ranks[eid] - max(endpoint_ranks)) / total)
        for n in (src, tgt):
            if n is None or n not in types or types[n] in _GATEWAYS:
                continue
            other = tgt if n == src else src
            if other is not None and other in types and types[other] in _GATEWAYS:
                prev = neighbor_max.get(other, -1)
                neighbor_max[other] = max(prev, ranks[n])

    gateway_lags = [
        max(0, ranks[g] - neighbor_max[g]) / total
        for g in neighbor_max
        if g in ranks
    ]

    edge_lag = sum(edge_lags) / len(edge_lags) if edge_lags else 0.0
    gateway_lag = sum(gateway_lags) / len(gateway_lags) if gateway_lags else 0.0

    node_ranks = [ranks[x] for x in order if types[x] not in _GATEWAYS and types[x] is not ElementType.EDGE]
    gw_ranks = [ranks[x] for x in order if types[x] in _GATEWAYS]
    e_ranks = [ranks[x] for x in order if types[x] is ElementType.EDGE]

    if gw_ranks and _precedes(node_ranks, gw_ranks) and _precedes(gw_ranks, e_ranks):
        style = CreationStyle.NODES_THEN_GATEWAYS_THEN_EDGES
    elif _precedes(node_ranks + gw_ranks, e_ranks):
        style = CreationStyle.NODES_THEN_EDGES
    else:
        style = CreationStyle.INTERLEAVED
    return CreationProfile(sequence, edge_lag, gateway_lag, style)


def _precedes(left: list[int], right: list[int]) -> bool:
    if not left or not right:
        return True
    return max(left) < min(right)


def block_construction_orders(session: Session) -> list[BlockConstructionOrder]:
    """One creation-order record per detected block, with its style tag."""
    model = final_model(session)
    blocks = detect_blocks(model)
    if not blocks:
        return []

    order, ranks, types = _creation_ranks(session)
    values = create_order_values(model)

    def member_type(eid: str) -> ElementType:
        if eid in model.nodes:
            return model.nodes[eid].element_type
        if eid in model.edges:
            return ElementType.EDGE
        return types.get(eid, ElementType.EDGE)

    results: list[BlockConstructionOrder] = []
    for block in blocks:
        members = sorted(block.members, key=lambda m: (ranks.get(m, len(order)), m))
        sequence = tuple((m, member_type(m)) for m in members)
        results.append(
            BlockConstructionOrder(
                block=block,
                member_creation_order=sequence,
                style=_block_style(members, [member_type(m) for m in members], values),
            )
        )
    return results


def _block_style(members: list[str], member_types: list[ElementType], values) -> BlockOrderStyle:
    member_values = [values[m] for m in members if m in values]
    if len(member_values) == len(members) and all(not v.unreachable for v in member_values):
        ordered = [v.value for v in member_values]
        if all(a <= b for a, b in zip(ordered, ordered[1:])):
            return BlockOrderStyle.LEFT_TO_RIGHT

    act_ranks = [i for i, t in enumerate(member_types) if t not in _GATEWAYS and t is not ElementType.EDGE]
    gw_ranks = [i for i, t in enumerate(member_types) if t in _GATEWAYS]
    e_ranks = [i for i, t in enumerate(member_types) if t is ElementType.EDGE]

    if _precedes(act_ranks, gw_ranks) and _precedes(gw_ranks, e_ranks):
        return BlockOrderStyle.ACTIVITIES_GATEWAYS_EDGES
    if _precedes(act_ranks, gw_ranks + e_ranks):
        return BlockOrderStyle.ACTIVITIES_THEN_GATEWAYS_AND_EDGES
    if _precedes(act_ranks + gw_ranks, e_ranks):
        return BlockOrderStyle.ALL_NODES_THEN_EDGES
    return BlockOrderStyle.OTHER


def analyze(session: Session, chunk_threshold_seconds: float | None = None) -> PatternReport:
    """The full analytics bundle for one session."""
    return PatternReport(
        session_id=session.session_id,
        metrics=session_metrics(session),
        chunks=tuple(detect_chunks(session, chunk_threshold_seconds)),
        move_profile=move_profile(session),
        creation_profile=creation_profile(session),
        block_orders=tuple(block_construction_orders(session)),
    )


def report_to_json_dict(report: PatternReport) -> dict:
    m = report.metrics
    mp = report.move_profile
    cp = report.creation_profile
    return {
        "schema": "ppmchart.patterns/1",
        "session_id": report.session_id,
        "metrics": {
            "created_element_count": m.created_element_count,
            "final_alive_count": m.final_alive_count,
            "deleted_count": m.deleted_count,
            "total_event_count": m.total_event_count,
            "duration_seconds": m.duration_seconds,
            "class_event_counts": {c.value: n for c, n in m.class_event_counts.items()},
        },
        "chunks": [
            {
                "start_index": c.start_index,
                "end_index": c.end_index,
                "start_ts": c.start_ts,
                "end_ts": c.end_ts,
                "preceding_pause_seconds": c.preceding_pause_seconds,
                "size": c.size,
            }
            for c in report.chunks
        ],
        "move_profile": {
            "create_to_move_lag_seconds": mp.create_to_move_lag_seconds,
            "median_lag_seconds": mp.median_lag_seconds,
            "final_quarter_move_fraction": mp.final_quarter_move_fraction,
            "style": mp.style.value,
        },
        "creation_profile": {
            "creation_sequence": [t.value for t in cp.creation_sequence],
            "edge_lag_index": cp.edge_lag_index,
            "gateway_lag_index": cp.gateway_lag_index,
            "style": cp.style.value,
        },
        "block_orders": [
            {
                "split_id": b.block.split_id,
                "join_id": b.block.join_id,
                "gateway_type": b.block.gateway_type.value,
                "members": sorted(b.block.members),
                "member_creation_order": [
                    {"element_id": eid, "element_type": t.value}
                    for eid, t in b.member_creation_order
                ],
                "style": b.style.value,
            }
            for b in report.block_orders
        ],
    }


CSV_HEADER = (
    "session_id",
    "created_element_count",
    "final_alive_count",
    "deleted_count",
    "total_event_count",
    "duration_seconds",
    "create_events",
    "move_events",
    "delete_events",
    "name_events",
    "chunk_count",
    "median_create_to_move_lag_seconds",
    "final_quarter_move_fraction",
    "move_style",
    "edge_lag_index",
    "gateway_lag_index",
    "creation_style",
    "block_count",
    "block_styles",
)


def report_to_csv_row(report: PatternReport) -> tuple:
    """One flat row per session for corpus-level statistics."""
    m = report.metrics
    mp = report.move_profile
    cp = report.creation_profile
    return (
        report.session_id,
        m.created_element_count,
        m.final_alive_count,
        m.deleted_count,
        m.total_event_count,
        m.duration_seconds,
        m.class_event_counts[OperationClass.CREATE],
        m.class_event_counts[OperationClass.MOVE],
        m.class_event_counts[OperationClass.DELETE],
        m.class_event_counts[OperationClass.NAME],
        len(report.chunks),
        "" if mp.median_lag_seconds is None else mp.median_lag_seconds,
        "" if mp.final_quarter_move_fraction is None else mp.final_quarter_move_fraction,
        mp.style.value,
        cp.edge_lag_index,
        cp.gateway_lag_index,
        cp.style.value,
        len(report.block_orders),
        ";".join(b.style.value for b in report.block_orders),
    )
