import json

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from conftest import diamond_events, ev, make_session
from ppmchart.gateway.cli import main
from ppmchart.gateway.server import create_app
from ppmchart.gateway.store import SessionStore, sniff_format
from ppmchart.oplog import OperationKind, format_timestamp_ms, serialize_tabular

K = OperationKind


def to_xml(session) -> bytes:
    """Write a session in the trace-bundled XML schema."""
    traces: dict[str, list] = {}
    for e in session.events:
        traces.setdefault(e.element_id, []).append(e)
    parts = [f'<process id="{session.session_id}">']
    for name, events in traces.items():
        parts.append(f'<trace name="{name}">')
        for e in events:
            parts.append("<event>")
            parts.append(f"<name>{e.kind.value}</name>")
            parts.append(f'<attribute key="id">{e.element_id}</attribute>')
            parts.append(
                f'<attribute key="timestamp">{format_timestamp_ms(e.timestamp)}</attribute>'
            )
            for key, value in (
                ("x", e.x),
                ("y", e.y),
                ("source", e.source_id),
                ("target", e.target_id),
                ("label", e.label),
                ("bendpoint", e.bendpoint),
            ):
                if value is not None:
                    parts.append(f'<attribute key="{key}">{value}</attribute>')
            parts.append("</event>")
        parts.append("</trace>")
    parts.append("</process>")
    return "".join(parts).encode()


@pytest.fixture
def diamond_xml(tmp_path):
    path = tmp_path / "diamond.xml"
    path.write_bytes(to_xml(make_session(diamond_events(), sid="diamond")))
    return path


@pytest.fixture
def dirty_csv(tmp_path):
    path = tmp_path / "dirty.csv"
    path.write_text(
        "timestamp,element_id,operation,x,y,source,target,label,bendpoint\n"
        "1000,a1,MOVE_ACTIVITY,1,2,,,,\n"
    )
    return path


class TestCli:
    def test_validate_clean(self, diamond_xml):
        result = CliRunner().invoke(main, ["validate", str(diamond_xml)])
        assert result.exit_code == 0
        assert "clean" in result.output

    def test_validate_dirty_exits_one(self, dirty_csv):
        result = CliRunner().invoke(main, ["validate", str(dirty_csv)])
        assert result.exit_code == 1
        assert "NO_CREATE_FIRST" in result.output

    def test_unparseable_log_exits_one(self, tmp_path):
        bad = tmp_path / "bad.xml"
        bad.write_text("<process><trace>")
        result = CliRunner().invoke(main, ["validate", str(bad)])
        assert result.exit_code == 1

    def test_bad_flag_exits_two(self, diamond_xml):
        result = CliRunner().invoke(main, ["render", str(diamond_xml), "--nope"])
        assert result.exit_code == 2

    def test_bad_sort_value_exits_two(self, diamond_xml, tmp_path):
        result = CliRunner().invoke(
            main,
            ["render", str(diamond_xml), "--out", str(tmp_path / "x.svg"), "--sort", "zigzag"],
        )
        assert result.exit_code == 2

    def test_render_writes_svg(self, diamond_xml, tmp_path):
        out = tmp_path / "chart.svg"
        result = CliRunner().invoke(
            main,
            [
                "render",
                str(diamond_xml),
                "--out",
                str(out),
                "--sort",
                "distance_from_start",
                "--hide-ops",
                "move,delete,name",
            ],
        )
        assert result.exit_code == 0, result.output
        data = out.read_bytes()
        assert data.startswith(b"<svg")
        assert data.count(b"<circle") == 12  # all twelve creations survive

    def test_render_deterministic(self, diamond_xml, tmp_path):
        args = ["render", str(diamond_xml), "--sort", "create_order_from_start"]
        out1, out2 = tmp_path / "a.svg", tmp_path / "b.svg"
        CliRunner().invoke(main, [*args, "--out", str(out1)])
        CliRunner().invoke(main, [*args, "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_analyze_json(self, diamond_xml):
        result = CliRunner().invoke(main, ["analyze", str(diamond_xml), "--format", "json"])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["metrics"]["created_element_count"] == 12

    def test_analyze_csv(self, diamond_xml):
        result = CliRunner().invoke(main, ["analyze", str(diamond_xml), "--format", "csv"])
        lines = result.output.strip().splitlines()
        assert len(lines) == 2
        assert lines[0].startswith("session_id,")

    def test_replay_at_index(self, diamond_xml):
        result = CliRunner().invoke(main, ["replay", str(diamond_xml), "--at", "2"])
        doc = json.loads(result.output)
        assert doc["applied_count"] == 2
        assert len(doc["nodes"]) == 2

    def test_replay_at_timestamp(self, diamond_xml):
        result = CliRunner().invoke(
            main, ["replay", str(diamond_xml), "--at", "1970-01-01T00:16:45.000Z"]
        )
        doc = json.loads(result.output)
        assert doc["applied_count"] == 6  # the six node creations

    def test_replay_bad_at(self, diamond_xml):
        result = CliRunner().invoke(main, ["replay", str(diamond_xml), "--at", "soon"])
        assert result.exit_code == 2


class TestStore:
    def test_sniff(self):
        assert sniff_format(b"  <process/>") == "xml"
        assert sniff_format(b"timestamp,element_id") == "csv"

    def test_preload_directory(self, tmp_path, diamond_xml):
        store = SessionStore()
        csv_path = tmp_path / "small.csv"
        csv_path.write_bytes(serialize_tabular(make_session([ev("a", K.CREATE_ACTIVITY, 0)])))
        loaded = store.preload_directory(diamond_xml.parent)
        assert set(loaded) == {"diamond", "small"}
        assert store.get("diamond").session.events

    def test_reupload_replaces(self):
        store = SessionStore()
        data1 = serialize_tabular(make_session([ev("a", K.CREATE_ACTIVITY, 0)]))
        data2 = serialize_tabular(
            make_session([ev("a", K.CREATE_ACTIVITY, 0), ev("b", K.CREATE_ACTIVITY, 1)])
        )
        store.add(data1, session_id="x")
        store.add(data2, session_id="x")
        assert len(store.get("x").session.events) == 2
        assert len(store.list()) == 1


@pytest.fixture
def client(diamond_xml):
    app = create_app(SessionStore())
    client = TestClient(app)
    upload = client.post("/sessions?id=diamond", content=diamond_xml.read_bytes())
    assert upload.status_code == 200
    return client


class TestHttpApi:
    def test_upload_and_list(self, client):
        body = client.get("/sessions").json()
        assert body["sessions"][0]["id"] == "diamond"
        assert body["sessions"][0]["event_count"] == 12

    def test_upload_generates_id(self, client):
        data = serialize_tabular(make_session([ev("a", K.CREATE_ACTIVITY, 0)]))
        body = client.post("/sessions", content=data).json()
        assert body["id"].startswith("s-")

    def test_unparseable_upload_422(self, client):
        response = client.post("/sessions", content=b"<process><trace>")
        assert response.status_code == 422
        assert response.json()["detail"]["diagnostics"]

    def test_chart_dot_count(self, client):
        doc = client.get("/sessions/diamond/chart").json()
        dots = sum(len(t["dots"]) for t in doc["timelines"])
        assert dots == 12

    def test_chart_filters(self, client):
        doc = client.get("/sessions/diamond/chart?hide_types=edge").json()
        assert all(t["element_type"] != "edge" for t in doc["timelines"])
        assert len(doc["overview_timelines"]) == 12

    def test_hide_deleted_removes_delete_timelines(self, diamond_xml):
        events = diamond_events() + [ev("a", K.DELETE_ACTIVITY, 99_000_000)]
        app = create_app(SessionStore())
        client = TestClient(app)
        client.post("/sessions?id=d2", content=to_xml(make_session(events, sid="d2")))
        doc = client.get("/sessions/d2/chart?hide_elements_with=delete").json()
        ids = {t["element_id"] for t in doc["timelines"]}
        assert "a" not in ids

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/nope/chart").status_code == 404

    def test_bad_query_400(self, client):
        assert client.get("/sessions/diamond/chart?sort=sideways").status_code == 400
        assert client.get("/sessions/diamond/chart?window=-5").status_code == 400
        assert client.get("/sessions/diamond/model?at=soon").status_code == 400

    def test_model_endpoint(self, client):
        assert client.get("/sessions/diamond/model?at=0").json()["nodes"] == []
        final = client.get("/sessions/diamond/model").json()
        assert final["alive_count"] == 12
        by_time = client.get("/sessions/diamond/model?time=1005000").json()
        assert by_time["applied_count"] == 6

    def test_patterns_endpoint(self, client):
        doc = client.get("/sessions/diamond/patterns").json()
        assert doc["metrics"]["final_alive_count"] == 12

    def test_diagnostics_endpoint(self, client):
        assert client.get("/sessions/diamond/diagnostics").json()["diagnostics"] == []

    def test_svg_matches_cli_render(self, client, diamond_xml, tmp_path):
        out = tmp_path / "cli.svg"
        CliRunner().invoke(
            main,
            [
                "render",
                str(diamond_xml),
                "--out",
                str(out),
                "--sort",
                "distance_from_start",
                "--hide-ops",
                "move",
            ],
        )
        response = client.get(
            "/sessions/diamond/chart.svg?sort=distance_from_start&hide_ops=move"
        )
        assert response.headers["content-type"].startswith("image/svg+xml")
        assert response.content == out.read_bytes()

    def test_get_is_pure(self, client):
        a = client.get("/sessions/diamond/chart?sort=create_order_from_start").content
        b = client.get("/sessions/diamond/chart?sort=create_order_from_start").content
        assert a == b
