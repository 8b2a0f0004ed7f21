"""Scrub through a session by replaying prefixes of its operations.

Run from the repository root: python demos/02_replay_model.py
"""

from pathlib import Path

from ppmchart import alive_elements, final_model, parse_xml_log, replay

LOGS = Path(__file__).resolve().parent.parent / "sample_logs"
session = parse_xml_log((LOGS / "diamond.xml").read_bytes())

print("model growth, one event at a time:")
for k in range(len(session.events) + 1):
    state = replay(session, k)
    bar = "#" * len(alive_elements(state))
    print(f"  after {k:>2} events: {len(state.nodes):>2} nodes, {len(state.edges)} edges  {bar}")

final = final_model(session)
print("\nfinal canvas:")
for node in final.nodes.values():
    status = "alive" if node.alive else "deleted"
    label = f" {node.label!r}" if node.label else ""
    print(f"  node {node.id:<6} {node.element_type.value:<12} at {node.position}{label} [{status}]")
for edge in final.edges.values():
    print(f"  edge {edge.id:<6} {edge.source_id} -> {edge.target_id}  bendpoints={list(edge.bendpoints)}")
