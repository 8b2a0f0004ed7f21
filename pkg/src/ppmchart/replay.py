"""Deterministic reconstruction of the model state from a session prefix.

Applying the operations of a session in order rebuilds what stood on the
modeling canvas at any point in time.  Deleted elements are retained with
``alive=False`` because their timelines still appear in charts; deleting a
node does not cascade to its edges (the log is the source of truth and
editors record edge deletions explicitly).
"""

from __future__ import annotations

from dataclasses import dataclass

from .oplog import ElementType, ModelingEvent, OperationKind, Session, element_type_of

_NODE_CREATE = {
    OperationKind.CREATE_START_EVENT,
    OperationKind.CREATE_END_EVENT,
    OperationKind.CREATE_ACTIVITY,
    OperationKind.CREATE_XOR,
    OperationKind.CREATE_AND,
}
_NODE_MOVE = {
    OperationKind.MOVE_START_EVENT,
    OperationKind.MOVE_END_EVENT,
    OperationKind.MOVE_ACTIVITY,
    OperationKind.MOVE_XOR,
    OperationKind.MOVE_AND,
}
_NODE_DELETE = {
    OperationKind.DELETE_START_EVENT,
    OperationKind.DELETE_END_EVENT,
    OperationKind.DELETE_ACTIVITY,
    OperationKind.DELETE_XOR,
    OperationKind.DELETE_AND,
}
_NODE_NAME = {OperationKind.NAME_ACTIVITY, OperationKind.RENAME_ACTIVITY}
_EDGE_NAME = {OperationKind.NAME_EDGE, OperationKind.RENAME_EDGE}


@dataclass(frozen=True)
class NodeState:
    id: str
    element_type: ElementType
    position: tuple[float, float] | None = None
    label: str | None = None
    alive: bool = True


@dataclass(frozen=True)
class EdgeState:
    id: str
    source_id: str | None = None
    target_id: str | None = None
    bendpoints: tuple[tuple[float, float], ...] = ()
    label: str | None = None
    label_position: tuple[float, float] | None = None
    alive: bool = True


@dataclass(frozen=True)
class ProcessModelState:
    """Snapshot of the model after some prefix of the session.

    ``applied_count`` is the number of events consumed; ``skipped_count``
    tallies those that could not apply (operation on an element the replay
    has never seen, or a bendpoint index that does not exist).
    """

    nodes: dict[str, NodeState]
    edges: dict[str, EdgeState]
    applied_count: int = 0
    skipped_count: int = 0


class _Replayer:
    """Mutable working state; frozen into a ProcessModelState when done."""

    def __init__(self) -> None:
        self.nodes: dict[str, dict] = {}
        self.edges: dict[str, dict] = {}
        self.consumed = 0
        self.skipped = 0

    def apply(self, event: ModelingEvent) -> None:
        self.consumed += 1
        kind = event.kind
        eid = event.element_id
        pos = (event.x, event.y) if event.x is not None and event.y is not None else None

        if kind in _NODE_CREATE:
            self.edges.pop(eid, None)
            self.nodes[eid] = {
                "element_type": element_type_of(kind),
                "position": pos,
                "label": None,
                "alive": True,
            }
        elif kind in _NODE_MOVE:
            node = self.nodes.get(eid)
            if node is None:
                self.skipped += 1
            elif pos is not None:
                node["position"] = pos
        elif kind in _NODE_DELETE:
            node = self.nodes.get(eid)
            if node is None:
                self.skipped += 1
            else:
                node["alive"] = False
        elif kind in _NODE_NAME:
            node = self.nodes.get(eid)
            if node is None:
                self.skipped += 1
            elif event.label is not None:
                node["label"] = event.label
        elif kind is OperationKind.CREATE_EDGE:
            self.nodes.pop(eid, None)
            self.edges[eid] = {
                "source_id": event.source_id,
                "target_id": event.target_id,
                "bendpoints": [],
                "label": None,
                "label_position": None,
                "alive": True,
            }
        elif kind is OperationKind.RECONNECT_EDGE:
            edge = self.edges.get(eid)
            if edge is None:
                self.skipped += 1
            else:
                if event.source_id is not None:
                    edge["source_id"] = event.source_id
                if event.target_id is not None:
                    edge["target_id"] = event.target_id
        elif kind is OperationKind.DELETE_EDGE:
            edge = self.edges.get(eid)
            if edge is None:
                self.skipped += 1
            else:
                edge["alive"] = False
        elif kind in _EDGE_NAME:
            edge = self.edges.get(eid)
            if edge is None:
                self.skipped += 1
            elif event.label is not None:
                edge["label"] = event.label
        elif kind is OperationKind.MOVE_EDGE_LABEL:
            edge = self.edges.get(eid)
            if edge is None:
                self.skipped += 1
            elif pos is not None:
                edge["label_position"] = pos
        elif kind is OperationKind.CREATE_EDGE_BENDPOINT:
            edge = self.edges.get(eid)
            if edge is None:
                self.skipped += 1
            elif pos is not None:
                points = edge["bendpoints"]
                at = len(points) if event.bendpoint is None else min(max(event.bendpoint, 0), len(points))
                points.insert(at, pos)
        elif kind is OperationKind.MOVE_EDGE_BENDPOINT:
            edge = self.edges.get(eid)
            if edge is None:
                self.skipped += 1
            else:
                points = edge["bendpoints"]
                idx = event.bendpoint
                if idx is None or not 0 <= idx < len(points) or pos is None:
                    self.skipped += 1
                else:
                    points[idx] = pos
        elif kind is OperationKind.DELETE_EDGE_BENDPOINT:
            edge = self.edges.get(eid)
            if edge is None:
                self.skipped += 1
            else:
                points = edge["bendpoints"]
                idx = event.bendpoint
                if idx is None or not 0 <= idx < len(points):
                    self.skipped += 1
                else:
                    del points[idx]

    def freeze(self) -> ProcessModelState:
        nodes = {
            nid: NodeState(id=nid, **fields) for nid, fields in self.nodes.items()
        }
        edges = {
            eid: EdgeState(
                id=eid,
                source_id=f["source_id"],
                target_id=f["target_id"],
                bendpoints=tuple(f["bendpoints"]),
                label=f["label"],
                label_position=f["label_position"],
                alive=f["alive"],
            )
            for eid, f in self.edges.items()
        }
        return ProcessModelState(
            nodes=nodes, edges=edges, applied_count=self.consumed, skipped_count=self.skipped
        )


def replay(session: Session, upto: int | None = None) -> ProcessModelState:
    """Rebuild the model after the first ``upto`` events (all, if omitted)."""
    events = session.events
    if upto is None:
        upto = len(events)
    if not 0 <= upto <= len(events):
        raise ValueError(f"upto must be within [0, {len(events)}], got {upto}")
    r = _Replayer()
    for event in events[:upto]:
        r.apply(event)
    return r.freeze()


def replay_at(session: Session, timestamp_ms: int) -> ProcessModelState:
    """Rebuild the model as of a wall-clock instant (events with ts <= it)."""
    r = _Replayer()
    for event in session.events:
        if event.timestamp > timestamp_ms:
            break
        r.apply(event)
    return r.freeze()


def final_model(session: Session) -> ProcessModelState:
    """The model at the end of the session; replay of every event."""
    return replay(session, len(session.events))


def alive_elements(model: ProcessModelState) -> set[str]:
    """Ids of all elements currently on the canvas."""
    ids = {nid for nid, n in model.nodes.items() if n.alive}
    ids.update(eid for eid, e in model.edges.items() if e.alive)
    return ids


def model_to_json_dict(model: ProcessModelState) -> dict:
    """The documented JSON shape served by the /model endpoint."""
    return {
        "schema": "ppmchart.model/1",
        "nodes": [
            {
                "id": n.id,
                "element_type": n.element_type.value,
                "x": None if n.position is None else n.position[0],
                "y": None if n.position is None else n.position[1],
                "label": n.label,
                "alive": n.alive,
            }
            for n in model.nodes.values()
        ],
        "edges": [
            {
                "id": e.id,
                "source": e.source_id,
                "target": e.target_id,
                "bendpoints": [list(p) for p in e.bendpoints],
                "label": e.label,
                "label_position": None if e.label_position is None else list(e.label_position),
                "alive": e.alive,
            }
            for e in model.edges.values()
        ],
        "applied_count": model.applied_count,
        "skipped_count": model.skipped_count,
        "alive_count": len(alive_elements(model)),
    }
