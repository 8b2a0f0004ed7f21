"""Graph-based sort values and block detection on a reconstructed model.

The two chart sort orders rank elements by how far into the model they sit:
the value of a node is the length of the longest non-iterative (simple)
directed path reaching it from a start event, summing geometric edge
lengths.  Longest simple path is NP-hard in general, so the search carries
an expansion budget; models from modeling experiments (well under a hundred
elements) never get near it, and on overflow we fall back to shortest-path
distances and mark the values approximate.

A block is a split gateway, the matching same-type join that reconverges
every path leaving the split, and everything in between, with no other way
in or out of the enclosed region.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from .oplog import ElementType
from .replay import EdgeState, ProcessModelState

DEFAULT_SEARCH_BUDGET = 1_000_000

_GATEWAY_TYPES = (ElementType.XOR_GATEWAY, ElementType.AND_GATEWAY)


class UnanchoredEdgeError(ValueError):
    """Edge endpoints unknown or absent from the model; caller excludes it."""

    code = "UNANCHORED_EDGE"


class _BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class SortValue:
    """Rank of one element under a graph sort.

    ``value`` None means unreachable; unreachable elements sort after every
    finite value, among themselves by first-operation timestamp.  The paper
    leaves ties open, so the final tiebreak is the element id.
    """

    element_id: str
    value: float | None
    tiebreak: int = 0
    approximate: bool = False

    @property
    def unreachable(self) -> bool:
        return self.value is None

    def sort_key(self) -> tuple:
        return (
            self.value is None,
            self.value if self.value is not None else 0.0,
            self.tiebreak,
            self.element_id,
        )


@dataclass(frozen=True)
class Block:
    split_id: str
    join_id: str
    gateway_type: ElementType
    members: frozenset[str]


def edge_length(edge: EdgeState, model: ProcessModelState) -> float:
    """Geometric length of an edge's polyline in the final layout.

    Measures source position, bendpoints in order, target position.  When
    either endpoint has no recorded position the edge counts as one hop
    (length 1).  Unknown or missing endpoints raise UnanchoredEdgeError.
    """
    if edge.source_id is None or edge.target_id is None:
        raise UnanchoredEdgeError(f"edge {edge.id!r} has unknown endpoints")
    src = model.nodes.get(edge.source_id)
    tgt = model.nodes.get(edge.target_id)
    if src is None or tgt is None:
        raise UnanchoredEdgeError(f"edge {edge.id!r} references nodes not in the model")
    if src.position is None or tgt.position is None:
        return 1.0
    points = [src.position, *edge.bendpoints, tgt.position]
    return sum(math.dist(a, b) for a, b in zip(points, points[1:]))


@dataclass
class _Graph:
    """Alive, fully anchored subgraph used for all path work."""

    adjacency: dict[str, list[tuple[str, str, float]]] = field(default_factory=dict)
    reverse: dict[str, list[tuple[str, str, float]]] = field(default_factory=dict)
    start_ids: list[str] = field(default_factory=list)
    end_ids: set[str] = field(default_factory=set)
    edge_ids: set[str] = field(default_factory=set)


def _build_graph(model: ProcessModelState) -> _Graph:
    g = _Graph()
    for nid, node in model.nodes.items():
        if not node.alive:
            continue
        g.adjacency.setdefault(nid, [])
        g.reverse.setdefault(nid, [])
        if node.element_type is ElementType.START_EVENT:
            g.start_ids.append(nid)
        elif node.element_type is ElementType.END_EVENT:
            g.end_ids.add(nid)
    for eid, edge in model.edges.items():
        if not edge.alive:
            continue
        try:
            length = edge_length(edge, model)
        except UnanchoredEdgeError:
            continue
        src, tgt = edge.source_id, edge.target_id
        if src not in g.adjacency or tgt not in g.adjacency:
            continue  # endpoint deleted
        g.adjacency[src].append((eid, tgt, length))
        g.reverse[tgt].append((eid, src, length))
        g.edge_ids.add(eid)
    for nid in g.adjacency:
        g.adjacency[nid].sort()
        g.reverse[nid].sort()
    return g


def _longest_from(
    graph: _Graph, source: str, best: dict[str, float], budget: list[int]
) -> None:
    """Exhaustive simple-path DFS from one source, folding maxima into best."""
    best[source] = max(best.get(source, 0.0), 0.0)
    # stack holds (node, dist, iterator over outgoing edges); visited is the
    # node set of the current path.
    visited = {source}
    stack = [(source, 0.0, iter(graph.adjacency[source]))]
    while stack:
        node, dist, edges = stack[-1]
        advanced = False
        for _, nxt, length in edges:
            if nxt in visited:
                continue
            budget[0] -= 1
            if budget[0] < 0:
                raise _BudgetExceeded
            nd = dist + length
            if nd > best.get(nxt, -math.inf):
                best[nxt] = nd
            visited.add(nxt)
            stack.append((nxt, nd, iter(graph.adjacency[nxt])))
            advanced = True
            break
        if not advanced:
            stack.pop()
            visited.discard(node)


def _shortest_from(graph: _Graph, source: str) -> dict[str, float]:
    dist = {source: 0.0}
    heap = [(0.0, source)]
    while heap:
        d, node = heapq.heappop(heap)
        if d > dist.get(node, math.inf):
            continue
        for _, nxt, length in graph.adjacency[node]:
            nd = d + length
            if nd < dist.get(nxt, math.inf):
                dist[nxt] = nd
                heapq.heappush(heap, (nd, nxt))
    return dist


def _node_values(
    model: ProcessModelState, budget: int = DEFAULT_SEARCH_BUDGET
) -> tuple[dict[str, float], bool]:
    """Longest-simple-path value per reachable alive node, plus overflow flag."""
    graph = _build_graph(model)
    best: dict[str, float] = {}
    remaining = [budget]
    try:
        for start in graph.start_ids:
            _longest_from(graph, start, best, remaining)
        return best, False
    except _BudgetExceeded:
        best = {}
        for start in graph.start_ids:
            for node, d in _shortest_from(graph, start).items():
                if d > best.get(node, -math.inf):
                    best[node] = d
        return best, True


def _assemble(
    model: ProcessModelState,
    node_values: dict[str, float],
    approximate: bool,
    edge_rule,
    first_ops: dict[str, int] | None,
) -> dict[str, SortValue]:
    first_ops = first_ops or {}
    values: dict[str, SortValue] = {}
    for nid, node in model.nodes.items():
        v = node_values.get(nid) if node.alive else None
        values[nid] = SortValue(nid, v, first_ops.get(nid, 0), approximate and v is not None)
    for eid, edge in model.edges.items():
        v = None
        if edge.alive and edge.source_id is not None and edge.target_id is not None:
            sv = node_values.get(edge.source_id)
            tv = node_values.get(edge.target_id)
            src = model.nodes.get(edge.source_id)
            tgt = model.nodes.get(edge.target_id)
            alive_ends = src is not None and tgt is not None and src.alive and tgt.alive
            if alive_ends and sv is not None and tv is not None:
                v = edge_rule(sv, tv)
        values[eid] = SortValue(eid, v, first_ops.get(eid, 0), approximate and v is not None)
    return values


def distance_values(
    model: ProcessModelState,
    first_ops: dict[str, int] | None = None,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> dict[str, SortValue]:
    """Distance-from-start sort values for every element of the model.

    Nodes get the longest simple-path length from any start event (start
    events themselves 0); edges average their endpoint values.  Deleted,
    unreachable and unanchored elements are unreachable.
    """
    node_values, approximate = _node_values(model, budget)
    return _assemble(model, node_values, approximate, lambda s, t: (s + t) / 2.0, first_ops)


def create_order_values(
    model: ProcessModelState,
    first_ops: dict[str, int] | None = None,
    budget: int = DEFAULT_SEARCH_BUDGET,
) -> dict[str, SortValue]:
    """Create-order sort values: like distance, but an edge sorts after both
    of its endpoints (max of endpoint values plus one)."""
    node_values, approximate = _node_values(model, budget)
    return _assemble(model, node_values, approximate, lambda s, t: max(s, t) + 1.0, first_ops)


def distance_from_start(element_id: str, model: ProcessModelState) -> SortValue:
    """Distance-from-start value of one element (tiebreak left to callers
    that own the session timestamps)."""
    values = distance_values(model)
    if element_id not in values:
        raise KeyError(element_id)
    return values[element_id]


def create_order_value(element_id: str, model: ProcessModelState) -> SortValue:
    """Create-order value of one element."""
    values = create_order_values(model)
    if element_id not in values:
        raise KeyError(element_id)
    return values[element_id]


# --- block detection ------------------------------------------------------


def _maximal_paths(graph: _Graph, source: str, budget: list[int]) -> list[list[str]]:
    """All maximal simple paths leaving source, as alternating
    node/edge-id sequences [n0, e0, n1, e1, ..., nk]."""
    paths: list[list[str]] = []
    visited = {source}
    path: list[str] = [source]
    stack = [iter(graph.adjacency[source])]
    while stack:
        advanced = False
        for eid, nxt, _ in stack[-1]:
            if nxt in visited:
                continue
            budget[0] -= 1
            if budget[0] < 0:
                raise _BudgetExceeded
            visited.add(nxt)
            path.extend((eid, nxt))
            stack.append(iter(graph.adjacency[nxt]))
            advanced = True
            break
        if not advanced:
            if _is_maximal(graph, path, visited):
                paths.append(list(path))
            stack.pop()
            if len(path) > 1:
                visited.discard(path[-1])
                del path[-2:]
    return paths


def _is_maximal(graph: _Graph, path: list[str], visited: set[str]) -> bool:
    tail = path[-1]
    return all(nxt in visited for _, nxt, _ in graph.adjacency[tail])


def _region_members(paths: list[list[str]], join: str) -> frozenset[str] | None:
    """Union of elements on split-to-join prefixes; None if a path misses the
    join or hits an end event first."""
    members: set[str] = set()
    for path in paths:
        if join not in path:
            return None
        cut = path.index(join)
        members.update(path[: cut + 1])
    return frozenset(members)


def _single_entry_exit(graph: _Graph, members: frozenset[str], split: str, join: str) -> bool:
    for nid in members:
        if nid in graph.edge_ids:
            continue
        if nid != split:
            if any(eid not in members for eid, _, _ in graph.reverse[nid]):
                return False
        if nid != join:
            if any(eid not in members for eid, _, _ in graph.adjacency[nid]):
                return False
    return True


def detect_blocks(
    model: ProcessModelState, budget: int = DEFAULT_SEARCH_BUDGET
) -> list[Block]:
    """Find all blocks of the final model, outermost criteria per split.

    For every alive gateway with at least two outgoing edges, search for the
    unique same-type join gateway that every maximal simple path from the
    split reaches before any end event, such that the enclosed region has no
    other entry or exit edges.  Splits without such a join yield nothing;
    nested blocks are each reported.  Results are ordered by the split's
    distance from start.
    """
    graph = _build_graph(model)
    node_types = {
        nid: model.nodes[nid].element_type for nid in graph.adjacency if nid in model.nodes
    }
    blocks: list[Block] = []
    for split, stype in sorted(node_types.items()):
        if stype not in _GATEWAY_TYPES or len(graph.adjacency[split]) < 2:
            continue
        try:
            paths = _maximal_paths(graph, split, [budget])
        except _BudgetExceeded:
            continue
        candidates = [
            nid
            for nid, ntype in node_types.items()
            if nid != split and ntype is stype and len(graph.reverse[nid]) >= 2
        ]
        found: list[frozenset[str]] = []
        joins: list[str] = []
        for join in sorted(candidates):
            members = _region_members(paths, join)
            if members is None:
                continue
            if _pass_through_end(paths, join, graph):
                continue
            if not _single_entry_exit(graph, members, split, join):
                continue
            found.append(members)
            joins.append(join)
        if found:
            # several valid reconvergences can exist in chains of joins; the
            # nearest one (smallest region) is the block's join
            best = min(range(len(found)), key=lambda i: (len(found[i]), joins[i]))
            blocks.append(
                Block(
                    split_id=split,
                    join_id=joins[best],
                    gateway_type=stype,
                    members=found[best],
                )
            )

    order = distance_values(model)
    blocks.sort(key=lambda b: order[b.split_id].sort_key())
    return blocks


def _pass_through_end(paths: list[list[str]], join: str, graph: _Graph) -> bool:
    """True if some path meets an end event strictly before the join."""
    for path in paths:
        cut = path.index(join)
        if any(nid in graph.end_ids for nid in path[:cut]):
            return True
    return False
