"""Acceptance suite: one test per criterion, summarized after the run.

Empirical corpus results are out of reach (the source data is not
available), so acceptance is property-based plus exact structural checks on
hand-built fixtures.
"""

import random
import xml.etree.ElementTree as ET

from click.testing import CliRunner

from bruteforce import brute_create_order_values, brute_distance_values, random_model
from conftest import diamond_events, ev, make_session
from genmodel import random_session
from ppmchart.chart import ChartConfig, SortOrder, apply_filters, build_chart
from ppmchart.gateway.cli import main as cli_main
from ppmchart.graphmetrics import create_order_values, detect_blocks, distance_values
from ppmchart.oplog import (
    ElementType,
    OperationClass,
    OperationKind,
    classify_operation,
    parse_xml_log,
)
from ppmchart.patterns import (
    BlockOrderStyle,
    CreationStyle,
    MoveStyle,
    block_construction_orders,
    creation_profile,
    detect_chunks,
    move_profile,
)
from ppmchart.replay import final_model

K = OperationKind
C = OperationClass
SVG_NS = "{http://www.w3.org/2000/svg}"

# Table 1 columns, with the bendpoint (*) and reconnect (**) notes applied.
TABLE_1 = {
    "CREATE_START_EVENT": {C.CREATE},
    "CREATE_END_EVENT": {C.CREATE},
    "CREATE_ACTIVITY": {C.CREATE},
    "CREATE_XOR": {C.CREATE},
    "CREATE_AND": {C.CREATE},
    "CREATE_EDGE": {C.CREATE},
    "RECONNECT_EDGE": {C.CREATE, C.DELETE},
    "MOVE_START_EVENT": {C.MOVE},
    "MOVE_END_EVENT": {C.MOVE},
    "MOVE_ACTIVITY": {C.MOVE},
    "MOVE_XOR": {C.MOVE},
    "MOVE_AND": {C.MOVE},
    "MOVE_EDGE_LABEL": {C.MOVE},
    "CREATE_EDGE_BENDPOINT": {C.MOVE},
    "MOVE_EDGE_BENDPOINT": {C.MOVE},
    "DELETE_EDGE_BENDPOINT": {C.MOVE},
    "DELETE_START_EVENT": {C.DELETE},
    "DELETE_END_EVENT": {C.DELETE},
    "DELETE_ACTIVITY": {C.DELETE},
    "DELETE_XOR": {C.DELETE},
    "DELETE_AND": {C.DELETE},
    "DELETE_EDGE": {C.DELETE},
    "NAME_ACTIVITY": {C.NAME},
    "RENAME_ACTIVITY": {C.NAME},
    "NAME_EDGE": {C.NAME},
    "RENAME_EDGE": {C.NAME},
}


def _xml_for(op_name: str) -> bytes:
    return (
        f'<process id="p"><trace name="x1"><event><name>{op_name}</name>'
        f'<attribute key="id">x1</attribute>'
        f'<attribute key="timestamp">1970-01-01T00:00:00.000Z</attribute>'
        f"</event></trace></process>"
    ).encode()


def test_taxonomy_exactness():
    """Every Table 1 name parses and classifies per the columns and notes;
    anything else is rejected."""
    assert len(TABLE_1) == len(OperationKind)
    for name, expected in TABLE_1.items():
        session = parse_xml_log(_xml_for(name))
        kind = session.events[0].kind
        assert kind.value == name
        assert classify_operation(kind) == frozenset(expected), name
    duals = [k for k in OperationKind if len(classify_operation(k)) != 1]
    assert duals == [K.RECONNECT_EDGE]
    try:
        parse_xml_log(_xml_for("CREATE_SWIMLANE"))
    except Exception:
        pass
    else:
        raise AssertionError("a name outside the taxonomy must be rejected")


def test_replay_oracle():
    """100/100 seeded synthetic sessions replay to their ground-truth model
    field for field."""
    failures = []
    for seed in range(100):
        session, expected = random_session(seed, max_events=200)
        assert len(session.events) <= 200
        if final_model(session) != expected:
            failures.append(seed)
    assert failures == [], f"replay mismatch for seeds {failures}"


def test_sort_value_oracle():
    """On 50 random geometric models, sort values match the brute-force
    simple-path enumerator exactly, with the documented edge rules."""
    rng = random.Random(1234)
    for _ in range(50):
        model = random_model(rng, max_nodes=12)
        distance = distance_values(model)
        create = create_order_values(model)

        assert {k: v.value for k, v in distance.items()} == brute_distance_values(model)
        assert {k: v.value for k, v in create.items()} == brute_create_order_values(model)

        for eid, edge in model.edges.items():
            if distance[eid].value is None:
                continue
            sv = distance[edge.source_id].value
            tv = distance[edge.target_id].value
            assert distance[eid].value == (sv + tv) / 2.0
            cs = create[edge.source_id].value
            ct = create[edge.target_id].value
            assert create[eid].value == max(cs, ct) + 1.0


def test_chart_geometry():
    """Right alignment is exact, the half-window dot sits at width/2, and
    the FirstEvent sort is non-decreasing in first-op timestamps."""
    for seed in range(20):
        session, _ = random_session(seed)
        chart = build_chart(session)
        xs = [d.x for t in chart.unfiltered_timelines for d in t.dots if d.x is not None]
        assert max(xs) == chart.config.width  # exact, no tolerance
        firsts = [t.first_op for t in chart.timelines]
        assert firsts == sorted(firsts)

    t_end = 7_200_000
    session = make_session(
        [
            ev("a", K.CREATE_ACTIVITY, t_end - 1_800_000),
            ev("b", K.CREATE_ACTIVITY, t_end),
        ]
    )
    chart = build_chart(session)
    half = chart.timelines[0].dots[0].x
    assert abs(half - chart.config.width / 2) <= 1e-9


def test_filter_soundness():
    """Surviving dots are exactly the non-matching ones; hide-deleted drops
    exactly the timelines containing a Delete-class dot; the empty config is
    the identity."""
    rng = random.Random(77)
    for seed in range(10):
        session, _ = random_session(seed)
        base = build_chart(session)

        assert apply_filters(base, base.config) == base

        deleted = apply_filters(
            base, ChartConfig(hide_elements_with_class=frozenset({C.DELETE}))
        )
        expected_ids = [
            t.element_id
            for t in base.timelines
            if not any(C.DELETE in d.classes for d in t.dots)
        ]
        assert [t.element_id for t in deleted.timelines] == expected_ids

        for _ in range(10):
            config = ChartConfig(
                hidden_element_types=frozenset(t for t in ElementType if rng.random() < 0.25),
                hidden_operation_classes=frozenset(c for c in C if rng.random() < 0.25),
                hidden_kinds=frozenset(k for k in K if rng.random() < 0.04),
                hide_elements_with_class=frozenset(c for c in C if rng.random() < 0.15),
            )
            filtered = apply_filters(base, config)
            expected = []
            for t in base.timelines:
                if t.element_type in config.hidden_element_types:
                    continue
                if any(d.classes & config.hide_elements_with_class for d in t.dots):
                    continue
                expected.extend(
                    d
                    for d in t.dots
                    if not (d.classes & config.hidden_operation_classes)
                    and d.kind not in config.hidden_kinds
                )
            got = [d for t in filtered.timelines for d in t.dots]
            assert got == expected


def _nested_fixture():
    s = 1000
    nodes = [
        ("start", K.CREATE_START_EVENT, 0.0, 100.0),
        ("xs", K.CREATE_XOR, 100.0, 100.0),
        ("a", K.CREATE_ACTIVITY, 250.0, 30.0),
        ("as", K.CREATE_AND, 200.0, 170.0),
        ("c", K.CREATE_ACTIVITY, 250.0, 140.0),
        ("d", K.CREATE_ACTIVITY, 250.0, 200.0),
        ("aj", K.CREATE_AND, 300.0, 170.0),
        ("xj", K.CREATE_XOR, 400.0, 100.0),
        ("end", K.CREATE_END_EVENT, 500.0, 100.0),
    ]
    links = [
        ("e0", "start", "xs"),
        ("e1", "xs", "a"),
        ("e2", "a", "xj"),
        ("e3", "xs", "as"),
        ("e4", "as", "c"),
        ("e5", "as", "d"),
        ("e6", "c", "aj"),
        ("e7", "d", "aj"),
        ("e8", "aj", "xj"),
        ("e9", "xj", "end"),
    ]
    events = [ev(n, k, i * s, x=x, y=y) for i, (n, k, x, y) in enumerate(nodes)]
    events += [
        ev(eid, K.CREATE_EDGE, (len(nodes) + i) * s, source_id=src, target_id=tgt)
        for i, (eid, src, tgt) in enumerate(links)
    ]
    return make_session(events)


def test_block_detection():
    """The diamond yields exactly its 8-element block, the nested fixture
    two strictly contained blocks, a sequence none."""
    diamond = make_session(diamond_events())
    blocks = detect_blocks(final_model(diamond))
    assert len(blocks) == 1
    assert blocks[0].members == frozenset({"split", "join", "a", "b", "e2", "e3", "e4", "e5"})

    nested = detect_blocks(final_model(_nested_fixture()))
    assert len(nested) == 2
    outer, inner = nested
    assert inner.gateway_type is ElementType.AND_GATEWAY
    assert outer.gateway_type is ElementType.XOR_GATEWAY
    assert inner.members < outer.members

    sequence = make_session(
        [
            ev("s", K.CREATE_START_EVENT, 0, x=0.0, y=0.0),
            ev("m", K.CREATE_ACTIVITY, 1000, x=10.0, y=0.0),
            ev("z", K.CREATE_END_EVENT, 2000, x=20.0, y=0.0),
            ev("f1", K.CREATE_EDGE, 3000, source_id="s", target_id="m"),
            ev("f2", K.CREATE_EDGE, 4000, source_id="m", target_id="z"),
        ]
    )
    assert detect_blocks(final_model(sequence)) == []


def test_pattern_determinism():
    """Each documented style fixture maps to its tag; the chunker splits
    the [1,1,60,1] s gap pattern into runs of 3 and 2 at threshold 30 s."""
    immediate = make_session(
        [
            ev("a", K.CREATE_ACTIVITY, 0),
            ev("a", K.MOVE_ACTIVITY, 5_000, x=1.0, y=1.0),
            ev("b", K.CREATE_ACTIVITY, 10_000),
            ev("b", K.MOVE_ACTIVITY, 12_000, x=1.0, y=1.0),
            ev("c", K.CREATE_ACTIVITY, 20_000),
        ]
    )
    assert move_profile(immediate).style is MoveStyle.IMMEDIATE_MOVER

    end_batch = make_session(
        [
            ev("a", K.CREATE_ACTIVITY, 0),
            ev("b", K.CREATE_ACTIVITY, 5_000),
            ev("a", K.MOVE_ACTIVITY, 900_000, x=1.0, y=1.0),
            ev("b", K.MOVE_ACTIVITY, 905_000, x=2.0, y=2.0),
        ]
    )
    assert move_profile(end_batch).style is MoveStyle.END_BATCH_MOVER

    nodes_then_edges = make_session(diamond_events())
    assert creation_profile(nodes_then_edges).style is CreationStyle.NODES_THEN_EDGES

    def diamond_order(*ids):
        defs = {e.element_id: e for e in diamond_events()}
        return make_session(
            [
                ev(
                    defs[eid].element_id,
                    defs[eid].kind,
                    i * 1000,
                    x=defs[eid].x,
                    y=defs[eid].y,
                    source_id=defs[eid].source_id,
                    target_id=defs[eid].target_id,
                )
                for i, eid in enumerate(ids)
            ]
        )

    fig9 = {
        BlockOrderStyle.LEFT_TO_RIGHT: diamond_order(
            "start", "split", "e1", "a", "b", "e2", "e3", "join", "e4", "e5", "end", "e6"
        ),
        BlockOrderStyle.ACTIVITIES_GATEWAYS_EDGES: diamond_order(
            "start", "a", "b", "split", "join", "end", "e1", "e2", "e3", "e4", "e5", "e6"
        ),
        BlockOrderStyle.ALL_NODES_THEN_EDGES: diamond_order(
            "start", "split", "a", "b", "join", "end", "e1", "e2", "e3", "e4", "e5", "e6"
        ),
    }
    for style, session in fig9.items():
        orders = block_construction_orders(session)
        assert len(orders) == 1
        assert orders[0].style is style, style

    gaps = make_session(
        [ev(f"g{i}", K.CREATE_ACTIVITY, t * 1000) for i, t in enumerate([0, 1, 2, 62, 63])]
    )
    assert [c.size for c in detect_chunks(gaps, 30.0)] == [3, 2]


def test_determinism_end_to_end(tmp_path):
    """CLI render is byte-identical across runs and its circle count equals
    the surviving dot count."""
    from test_gateway import to_xml

    session = make_session(diamond_events(), sid="diamond")
    log = tmp_path / "diamond.xml"
    log.write_bytes(to_xml(session))

    runner = CliRunner()
    args = ["render", str(log), "--sort", "distance_from_start", "--hide-ops", "move"]
    out1, out2 = tmp_path / "one.svg", tmp_path / "two.svg"
    r1 = runner.invoke(cli_main, [*args, "--out", str(out1)])
    r2 = runner.invoke(cli_main, [*args, "--out", str(out2)])
    assert r1.exit_code == 0 and r2.exit_code == 0
    first, second = out1.read_bytes(), out2.read_bytes()
    assert first == second

    chart = apply_filters(
        build_chart(session, ChartConfig(sort=SortOrder.DISTANCE_FROM_START)),
        ChartConfig(
            sort=SortOrder.DISTANCE_FROM_START,
            hidden_operation_classes=frozenset({C.MOVE}),
        ),
    )
    surviving = sum(len(t.dots) for t in chart.timelines)
    circle_count = len(list(ET.fromstring(first).iter(f"{SVG_NS}circle")))
    assert circle_count == surviving
