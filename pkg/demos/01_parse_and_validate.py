"""Walk through parsing the two log formats and validating a session.

Run from the repository root: python demos/01_parse_and_validate.py
"""

from pathlib import Path

from ppmchart import parse_tabular_log, parse_xml_log, validate_session
from ppmchart.oplog import classify_operation, element_type_of

LOGS = Path(__file__).resolve().parent.parent / "sample_logs"

xml_session = parse_xml_log((LOGS / "diamond.xml").read_bytes())
print(f"parsed {xml_session.session_id!r} from XML: {len(xml_session.events)} events")

csv_session = parse_tabular_log((LOGS / "linear.csv").read_bytes(), session_id="linear")
print(f"parsed {csv_session.session_id!r} from CSV: {len(csv_session.events)} events")

print("\nfirst five operations of the diamond session:")
for event in xml_session.events[:5]:
    classes = "+".join(sorted(c.value for c in classify_operation(event.kind)))
    print(
        f"  t={event.timestamp}  {event.kind.value:<20} on {event.element_id:<6}"
        f" ({element_type_of(event.kind).value}, class {classes})"
    )

print("\nvalidation:")
for session in (xml_session, csv_session):
    diagnostics = validate_session(session)
    if diagnostics:
        for diag in diagnostics:
            print(f"  {session.session_id}: {diag.severity.value} {diag.code.value}: {diag.message}")
    else:
        print(f"  {session.session_id}: clean")
