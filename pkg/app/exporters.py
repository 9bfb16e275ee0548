"""
Bit-stable exports: JSON with sorted keys, DOT for graphs, CSV for suite rows.
All text is written with LF line endings.
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Optional, Union

from pydantic import BaseModel

from app.graph_core import Graph
from app.models import ExportError, SuiteReport, UsageError

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["n", "formula", "twinLower", "certUpper", "exact"]

FORMATS = ("json", "dot", "csv")


def to_json(payload: Union[BaseModel, dict, list]) -> str:
    if isinstance(payload, Graph):
        payload = payload.to_record()
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def graph_to_dot(graph: Graph, name: str = "G") -> str:
    lines = [f"graph {_dot_id(name)} {{"]
    for v in range(graph.vertex_count):
        lines.append(f"  {_dot_id(graph.label(v))};")
    for u, v in graph.edges():
        lines.append(f"  {_dot_id(graph.label(u))} -- {_dot_id(graph.label(v))};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def report_to_csv(report: SuiteReport) -> str:
    """One row per case that carries CSV columns; extra row keys are appended sorted."""
    rows = [case.row for case in report.cases if case.row]
    extra = sorted({k for row in rows for k in row} - set(CSV_COLUMNS))
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS + extra, lineterminator="\n",
                            restval="")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def render(obj: Any, fmt: str, name: str = "G") -> str:
    """Serialize a Graph, record or report in the requested format."""
    if fmt not in FORMATS:
        raise UsageError(f"unknown export format {fmt!r}")
    if fmt == "dot":
        if not isinstance(obj, Graph):
            raise UsageError("dot export is only available for graphs")
        return graph_to_dot(obj, name)
    if fmt == "csv":
        if not isinstance(obj, SuiteReport):
            raise UsageError("csv export is only available for suite reports")
        return report_to_csv(obj)
    return to_json(obj)


def write_text(text: str, path: Union[str, Path], kind: str = "text") -> Path:
    """Write `text` with LF endings, creating parent directories."""
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        logger.error(f"Could not write {kind} export to {target}: {e}")
        raise ExportError(f"could not write {kind} export to {target}: {e.strerror or e}") from e
    logger.info(f"Wrote {kind} export to {target}")
    return target


def export(obj: Any, fmt: str, path: Optional[Union[str, Path]] = None, name: str = "G") -> str:
    """Render `obj` and write it to `path` when given. Returns the text."""
    text = render(obj, fmt, name)
    if path is not None:
        write_text(text, path, fmt)
    return text
