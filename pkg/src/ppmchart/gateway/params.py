"""The external parameter vocabulary, shared by the CLI and the HTTP API.

Values are the lowercase snake-case names of the internal enumerations;
using one parser for both surfaces keeps `render` output byte-identical to
the chart.svg endpoint for equivalent parameters.
"""

from __future__ import annotations

from ..chart import ChartConfig, SortOrder
from ..oplog import ElementType, OperationClass, OperationKind

SORT_CHOICES = tuple(s.value for s in SortOrder)
TYPE_CHOICES = tuple(t.value for t in ElementType)
CLASS_CHOICES = tuple(c.value for c in OperationClass)
KIND_CHOICES = tuple(k.value.lower() for k in OperationKind)


class ParamError(ValueError):
    pass


def _split(raw: str | None) -> list[str]:
    if not raw:
        return []
    return [part.strip() for part in raw.split(",") if part.strip()]


def parse_sort(raw: str | None) -> SortOrder:
    if raw is None or raw == "":
        return SortOrder.FIRST_EVENT
    try:
        return SortOrder(raw)
    except ValueError:
        raise ParamError(f"unknown sort {raw!r}; expected one of {', '.join(SORT_CHOICES)}")


def parse_types(raw: str | None) -> frozenset[ElementType]:
    out = set()
    for name in _split(raw):
        try:
            out.add(ElementType(name))
        except ValueError:
            raise ParamError(
                f"unknown element type {name!r}; expected one of {', '.join(TYPE_CHOICES)}"
            )
    return frozenset(out)


def parse_classes(raw: str | None) -> frozenset[OperationClass]:
    out = set()
    for name in _split(raw):
        try:
            out.add(OperationClass(name))
        except ValueError:
            raise ParamError(
                f"unknown operation class {name!r}; expected one of {', '.join(CLASS_CHOICES)}"
            )
    return frozenset(out)


def parse_kinds(raw: str | None) -> frozenset[OperationKind]:
    out = set()
    for name in _split(raw):
        try:
            out.add(OperationKind(name.upper()))
        except ValueError:
            raise ParamError(f"unknown operation kind {name!r}")
    return frozenset(out)


def chart_config(
    sort: str | None = None,
    window: str | float | None = None,
    width: str | float | None = None,
    hide_types: str | None = None,
    hide_ops: str | None = None,
    hide_kinds: str | None = None,
    hide_elements_with: str | None = None,
) -> ChartConfig:
    """Build a ChartConfig from raw query/flag strings."""
    try:
        window_seconds = float(window) if window not in (None, "") else 3600.0
        chart_width = float(width) if width not in (None, "") else 1000.0
    except ValueError:
        raise ParamError("window and width must be numbers")
    if window_seconds <= 0 or chart_width <= 0:
        raise ParamError("window and width must be positive")
    return ChartConfig(
        sort=parse_sort(sort),
        window_seconds=window_seconds,
        width=chart_width,
        hidden_element_types=parse_types(hide_types),
        hidden_operation_classes=parse_classes(hide_ops),
        hidden_kinds=parse_kinds(hide_kinds),
        hide_elements_with_class=parse_classes(hide_elements_with),
    )
