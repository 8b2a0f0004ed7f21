"""Mine one session for the pattern catalog: size, chunks, styles, blocks.

Run from the repository root: python demos/04_patterns.py
"""

import json
from pathlib import Path

from ppmchart import analyze, parse_xml_log
from ppmchart.patterns import report_to_json_dict

LOGS = Path(__file__).resolve().parent.parent / "sample_logs"
session = parse_xml_log((LOGS / "diamond.xml").read_bytes())
report = analyze(session)

m = report.metrics
print(f"session {report.session_id}: {m.total_event_count} events over {m.duration_seconds:.0f} s")
print(f"  created {m.created_element_count} elements, {m.final_alive_count} alive at the end")
print(f"  chunks: {[c.size for c in report.chunks]}")
print(f"  move style: {report.move_profile.style.value}")
print(f"  creation style: {report.creation_profile.style.value}"
      f" (edge lag {report.creation_profile.edge_lag_index:.2f})")
for order in report.block_orders:
    ids = [eid for eid, _ in order.member_creation_order]
    print(f"  block {order.block.split_id}..{order.block.join_id}: built {ids}"
          f" -> {order.style.value}")

print("\nfull report as JSON:")
print(json.dumps(report_to_json_dict(report), indent=2)[:600], "...")
