import pytest

from ppmchart.oplog import ModelingEvent, OperationKind, Session

K = OperationKind


def ev(eid: str, kind: OperationKind, ts: int, **payload) -> ModelingEvent:
    return ModelingEvent(element_id=eid, kind=kind, timestamp=ts, **payload)


def make_session(events, sid: str = "test") -> Session:
    return Session.build(sid, list(events))


def diamond_events(t0: int = 1_000_000, gateway=K.CREATE_XOR):
    """Start -> split -> (A | B) -> join -> end, fully positioned.

    Creation order: all nodes in model order, then all edges; 1 s steps.
    """
    s = 1000  # ms between operations
    gw_delete = {K.CREATE_XOR: None}
    events = [
        ev("start", K.CREATE_START_EVENT, t0, x=0.0, y=100.0),
        ev("split", gateway, t0 + s, x=100.0, y=100.0),
        ev("a", K.CREATE_ACTIVITY, t0 + 2 * s, x=200.0, y=50.0),
        ev("b", K.CREATE_ACTIVITY, t0 + 3 * s, x=200.0, y=150.0),
        ev("join", gateway, t0 + 4 * s, x=300.0, y=100.0),
        ev("end", K.CREATE_END_EVENT, t0 + 5 * s, x=400.0, y=100.0),
        ev("e1", K.CREATE_EDGE, t0 + 6 * s, source_id="start", target_id="split"),
        ev("e2", K.CREATE_EDGE, t0 + 7 * s, source_id="split", target_id="a"),
        ev("e3", K.CREATE_EDGE, t0 + 8 * s, source_id="split", target_id="b"),
        ev("e4", K.CREATE_EDGE, t0 + 9 * s, source_id="a", target_id="join"),
        ev("e5", K.CREATE_EDGE, t0 + 10 * s, source_id="b", target_id="join"),
        ev("e6", K.CREATE_EDGE, t0 + 11 * s, source_id="join", target_id="end"),
    ]
    return events


@pytest.fixture
def diamond_session():
    return make_session(diamond_events(), sid="diamond")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one PASS/FAIL line per acceptance criterion."""
    results = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            if getattr(rep, "when", "call") != "call" and status == "passed":
                continue
            name = nodeid.split("::")[-1]
            ok = results.get(name, True) and status == "passed"
            results[name] = ok
    if results:
        terminalreporter.write_sep("=", "acceptance criteria")
        for name in sorted(results):
            verdict = "PASS" if results[name] else "FAIL"
            label = name.removeprefix("test_").replace("_", " ")
            terminalreporter.write_line(f"{verdict}  {label}")
