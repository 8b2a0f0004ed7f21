"""Build charts under the three sorts and filters, and write SVGs.

Run from the repository root: python demos/03_chart_and_svg.py
The SVGs land in demos/out/.
"""

from pathlib import Path

from ppmchart import ChartConfig, SortOrder, build_chart, parse_xml_log, render_svg
from ppmchart.chart import apply_filters
from ppmchart.oplog import OperationClass
from ppmchart.render import render_overview

LOGS = Path(__file__).resolve().parent.parent / "sample_logs"
OUT = Path(__file__).resolve().parent / "out"
OUT.mkdir(exist_ok=True)

session = parse_xml_log((LOGS / "diamond.xml").read_bytes())

for sort in SortOrder:
    chart = build_chart(session, ChartConfig(sort=sort))
    print(f"sort {sort.value}: rows top to bottom =",
          [t.element_id for t in chart.timelines])
    (OUT / f"diamond_{sort.value}.svg").write_bytes(render_svg(chart))

# the classic construction view: only create operations, model order
creates_only = apply_filters(
    build_chart(session, ChartConfig(sort=SortOrder.DISTANCE_FROM_START)),
    ChartConfig(
        sort=SortOrder.DISTANCE_FROM_START,
        hidden_operation_classes=frozenset(
            {OperationClass.MOVE, OperationClass.DELETE, OperationClass.NAME}
        ),
    ),
)
(OUT / "diamond_creates_only.svg").write_bytes(render_svg(creates_only))
(OUT / "diamond_overview.svg").write_bytes(render_overview(creates_only))
surviving = sum(len(t.dots) for t in creates_only.timelines)
print(f"create-only view keeps {surviving} dots of {len(session.events)}")
print(f"wrote {len(list(OUT.glob('*.svg')))} SVG files to {OUT}")
