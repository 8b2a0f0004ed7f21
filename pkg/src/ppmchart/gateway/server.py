"""HTTP API over a SessionStore.

All GETs are pure reads of immutable snapshots; uploads go through the
store's lock.  Query values use the same vocabulary as the CLI flags, so
chart.svg bodies match CLI render output byte for byte.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Request, Response

from .. import patterns
from ..chart import build_chart, chart_to_json_dict
from ..oplog import LogParseError, parse_timestamp_ms
from ..render import RenderStyle, render_svg
from ..replay import model_to_json_dict, replay, replay_at
from . import params
from .store import SessionStore


def create_app(store: SessionStore | None = None) -> FastAPI:
    app = FastAPI(title="ppmchart", docs_url=None, redoc_url=None)
    app.state.store = store if store is not None else SessionStore()

    def get_entry(session_id: str):
        entry = app.state.store.get(session_id)
        if entry is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return entry

    def chart_for(entry, request: Request):
        q = request.query_params
        try:
            config = params.chart_config(
                sort=q.get("sort"),
                window=q.get("window"),
                width=q.get("width"),
                hide_types=q.get("hide_types"),
                hide_ops=q.get("hide_ops"),
                hide_kinds=q.get("hide_kinds"),
                hide_elements_with=q.get("hide_elements_with"),
            )
        except params.ParamError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return build_chart(entry.session, config)

    @app.post("/sessions")
    async def upload(request: Request):
        data = await request.body()
        try:
            entry = app.state.store.add(
                data,
                fmt=request.query_params.get("format"),
                session_id=request.query_params.get("id"),
            )
        except LogParseError as exc:
            raise HTTPException(
                status_code=422,
                detail={"diagnostics": [d.to_json_dict() for d in exc.diagnostics]},
            )
        return {"id": entry.session_id, "event_count": len(entry.session.events)}

    @app.get("/sessions")
    def list_sessions():
        return {
            "sessions": [
                {
                    "id": e.session_id,
                    "event_count": len(e.session.events),
                    "source_format": e.session.source_format,
                }
                for e in app.state.store.list()
            ]
        }

    @app.get("/sessions/{session_id}/chart")
    def chart_json(session_id: str, request: Request):
        entry = get_entry(session_id)
        return chart_to_json_dict(chart_for(entry, request))

    @app.get("/sessions/{session_id}/chart.svg")
    def chart_svg(session_id: str, request: Request):
        entry = get_entry(session_id)
        svg = render_svg(chart_for(entry, request), RenderStyle())
        return Response(content=svg, media_type="image/svg+xml")

    @app.get("/sessions/{session_id}/model")
    def model(session_id: str, request: Request):
        entry = get_entry(session_id)
        q = request.query_params
        at = q.get("at")
        time = q.get("time")
        if at is not None and time is not None:
            raise HTTPException(status_code=400, detail="pass either at= or time=, not both")
        if at is not None:
            try:
                index = int(at)
            except ValueError:
                raise HTTPException(status_code=400, detail="at= must be an event index")
            if not 0 <= index <= len(entry.session.events):
                raise HTTPException(status_code=400, detail="at= out of range")
            state = replay(entry.session, index)
        elif time is not None:
            try:
                ts = parse_timestamp_ms(time)
            except ValueError:
                raise HTTPException(
                    status_code=400, detail="time= must be epoch milliseconds or ISO-8601"
                )
            state = replay_at(entry.session, ts)
        else:
            state = entry.final
        return model_to_json_dict(state)

    @app.get("/sessions/{session_id}/patterns")
    def patterns_report(session_id: str):
        entry = get_entry(session_id)
        return patterns.report_to_json_dict(patterns.analyze(entry.session))

    @app.get("/sessions/{session_id}/diagnostics")
    def diagnostics(session_id: str):
        entry = get_entry(session_id)
        return {"diagnostics": [d.to_json_dict() for d in entry.diagnostics]}

    return app
