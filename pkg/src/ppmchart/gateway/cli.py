"""Command-line interface.

Exit codes: 0 success (for `validate`: no Error diagnostics), 1 parse or
validation error (diagnostics on stderr), 2 bad flags or arguments.
"""

from __future__ import annotations

import csv
import json
import os
import sys
from pathlib import Path

import click

from .. import patterns
from ..chart import build_chart
from ..oplog import LogParseError, Severity, parse_timestamp_ms
from ..render import RenderStyle, render_svg
from ..replay import model_to_json_dict, replay, replay_at
from . import params
from .store import SessionStore, parse_log


def _load(path: str):
    data = Path(path).read_bytes()
    fmt = {".xml": "xml", ".csv": "csv"}.get(Path(path).suffix.lower())
    try:
        return parse_log(data, fmt=fmt, session_id=Path(path).stem)
    except LogParseError as exc:
        for diag in exc.diagnostics:
            click.echo(_diag_line(diag), err=True)
        sys.exit(1)


def _diag_line(diag) -> str:
    where = f"event {diag.event_index}" if diag.event_index is not None else f"trace {diag.trace}"
    return f"{diag.severity.value.upper()} {diag.code.value} at {where}: {diag.message}"


@click.group()
def main() -> None:
    """Parse, validate, chart and analyze modeling-operation logs."""


@main.command()
@click.argument("log", type=click.Path(exists=True, dir_okay=False))
def validate(log: str) -> None:
    """Check a log; exit 0 only if it has no Error diagnostics."""
    session = _load(log)
    from ..oplog import validate_session

    diags = validate_session(session)
    for diag in diags:
        click.echo(_diag_line(diag))
    if any(d.severity is Severity.ERROR for d in diags):
        sys.exit(1)
    click.echo(f"{log}: {len(session.events)} events, clean")


_chart_options = [
    click.option("--sort", type=click.Choice(params.SORT_CHOICES), default="first_event"),
    click.option("--window", type=float, default=3600.0, help="Window length in seconds."),
    click.option("--width", type=float, default=1000.0, help="Chart width in drawing units."),
    click.option("--hide-types", default="", help="Comma-separated element types to hide."),
    click.option("--hide-ops", default="", help="Comma-separated operation classes to hide."),
    click.option("--hide-kinds", default="", help="Comma-separated operation kinds to hide."),
    click.option("--hide-elements-with", default="", help="Hide whole timelines containing these classes."),
]


def chart_options(fn):
    for option in reversed(_chart_options):
        fn = option(fn)
    return fn


@main.command()
@click.argument("log", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Output SVG path.")
@chart_options
def render(log, out, sort, window, width, hide_types, hide_ops, hide_kinds, hide_elements_with):
    """Render a log as an SVG chart."""
    session = _load(log)
    try:
        config = params.chart_config(
            sort=sort,
            window=window,
            width=width,
            hide_types=hide_types,
            hide_ops=hide_ops,
            hide_kinds=hide_kinds,
            hide_elements_with=hide_elements_with,
        )
    except params.ParamError as exc:
        raise click.UsageError(str(exc))
    chart = build_chart(session, config)
    Path(out).write_bytes(render_svg(chart, RenderStyle()))
    click.echo(f"wrote {out} ({len(chart.timelines)} timelines)")


@main.command()
@click.argument("log", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--chunk-threshold", type=float, default=None, help="Pause threshold in seconds (default: auto).")
def analyze(log, fmt, chunk_threshold):
    """Print the pattern report for a log."""
    session = _load(log)
    report = patterns.analyze(session, chunk_threshold)
    if fmt == "json":
        click.echo(json.dumps(patterns.report_to_json_dict(report), indent=2))
    else:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(patterns.CSV_HEADER)
        writer.writerow(patterns.report_to_csv_row(report))


@main.command(name="replay")
@click.argument("log", type=click.Path(exists=True, dir_okay=False))
@click.option("--at", "at_", default=None, help="Event index, or an ISO-8601 timestamp cutoff.")
def replay_cmd(log, at_):
    """Print the reconstructed model state as JSON."""
    session = _load(log)
    if at_ is None:
        model = replay(session)
    else:
        try:
            index = int(at_)
        except ValueError:
            try:
                model = replay_at(session, parse_timestamp_ms(at_))
            except ValueError:
                raise click.UsageError(f"--at must be an integer index or ISO timestamp, got {at_!r}")
        else:
            if not 0 <= index <= len(session.events):
                raise click.UsageError(
                    f"--at index out of range [0, {len(session.events)}]"
                )
            model = replay(session, index)
    click.echo(json.dumps(model_to_json_dict(model), indent=2))


@main.command()
@click.option("--port", type=int, default=None, help="Port (default: $PPMCHART_PORT or 8000).")
@click.option("--host", default="127.0.0.1")
@click.option("--dir", "directory", type=click.Path(exists=True, file_okay=False), default=None,
              help="Preload every .xml/.csv log in this directory.")
def serve(port, host, directory):
    """Run the HTTP service."""
    import uvicorn

    from .server import create_app

    if port is None:
        port = int(os.environ.get("PPMCHART_PORT", "8000"))
    store = SessionStore()
    if directory:
        loaded = store.preload_directory(directory)
        click.echo(f"preloaded {len(loaded)} sessions from {directory}")
    uvicorn.run(create_app(store), host=host, port=port)


if __name__ == "__main__":
    main()
