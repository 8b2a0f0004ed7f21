"""Drive the HTTP API in-process (no port needed).

Run from the repository root: python demos/05_http_api.py
For a real server use: ppmchart serve --port 8000 --dir sample_logs
"""

from pathlib import Path

from fastapi.testclient import TestClient

from ppmchart.gateway.server import create_app
from ppmchart.gateway.store import SessionStore

LOGS = Path(__file__).resolve().parent.parent / "sample_logs"

store = SessionStore()
store.preload_directory(LOGS)
client = TestClient(create_app(store))

print("GET /sessions ->", client.get("/sessions").json())

chart = client.get("/sessions/diamond/chart?sort=distance_from_start").json()
print(f"chart has {len(chart['timelines'])} timelines,",
      sum(len(t['dots']) for t in chart['timelines']), "dots")

filtered = client.get("/sessions/diamond/chart?hide_types=edge").json()
print(f"hide_types=edge leaves {len(filtered['timelines'])} timelines"
      f" (overview still shows {len(filtered['overview_timelines'])})")

model = client.get("/sessions/diamond/model?at=6").json()
print(f"model after 6 events: {len(model['nodes'])} nodes, {len(model['edges'])} edges")

patterns = client.get("/sessions/diamond/patterns").json()
print("patterns:", patterns["metrics"])

svg = client.get("/sessions/diamond/chart.svg")
print(f"chart.svg: {svg.headers['content-type']}, {len(svg.content)} bytes")
