"""CSV/JSON serialization of reports and a small SVG line chart."""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import os
import sys
from pathlib import Path
from typing import Any, Iterable, Sequence
from xml.sax.saxutils import escape

from .exceptions import SchemaError


def _as_row(item: Any) -> dict:
    if isinstance(item, dict):
        return item
    if hasattr(item, "to_dict"):
        return item.to_dict()
    if dataclasses.is_dataclass(item):
        return {f.name: getattr(item, f.name) for f in dataclasses.fields(item)}
    raise TypeError(f"cannot serialize {type(item).__name__}")


def _fmt(v: Any) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _json_value(v: Any):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if hasattr(v, "item"):  # numpy scalar
        return _json_value(v.item())
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def to_csv(rows: Sequence[dict], fields: Sequence[str] | None = None) -> str:
    if fields is None:
        fields = list(rows[0]) if rows else []
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_fmt(r[f]) for f in fields])
    return buf.getvalue()


def to_json(rows: Sequence[dict]) -> str:
    return json.dumps([{k: _json_value(v) for k, v in r.items()} for r in rows], indent=2) + "\n"


def render(report: Any, fmt: str = "csv", fields: Sequence[str] | None = None) -> str:
    """Render a report (one object or a sequence of them) as CSV or JSON text.

    ``fields`` names the CSV header for an empty report; otherwise it is
    taken from the first row.
    """
    items = report if isinstance(report, (list, tuple)) else [report]
    rows = [_as_row(x) for x in items]
    if fmt == "csv":
        return to_csv(rows, fields)
    if fmt == "json":
        return to_json(rows)
    raise ValueError(f"unknown format {fmt!r}")


def emit_report(report: Any, fmt: str = "csv", out_path: str | os.PathLike | None = None,
                fields: Sequence[str] | None = None, stream=None) -> int:
    """Write a rendered report to ``out_path`` (or ``stream``); returns bytes written."""
    data = render(report, fmt, fields).encode("utf-8")
    if out_path is None or str(out_path) == "-":
        stream = stream or sys.stdout.buffer
        stream.write(data)
        stream.flush()
    else:
        Path(out_path).write_bytes(data)
    return len(data)


def field_names(cls) -> list[str]:
    return [f.name for f in dataclasses.fields(cls)]


# -- SVG --------------------------------------------------------------------

_W, _H = 640, 400
_ML, _MR, _MT, _MB = 70, 20, 30, 50


def _read_columns(report_csv, x: str, y: str) -> list[tuple[float, float]]:
    with open(report_csv, newline="") as fh:
        reader = csv.DictReader(fh)
        cols = reader.fieldnames or []
        missing = [c for c in (x, y) if c not in cols]
        if missing:
            raise SchemaError(f"{report_csv}: missing column(s) {missing}; have {cols}")
        pts = []
        for row in reader:
            try:
                px, py = float(row[x]), float(row[y])
            except ValueError:
                continue
            if math.isfinite(px) and math.isfinite(py) and px > 0:
                pts.append((px, py))
    if not pts:
        raise SchemaError(f"{report_csv}: no plottable rows in columns {x!r}, {y!r}")
    return sorted(pts)


def svg_line_chart(points: Iterable[tuple[float, float]], reference: float | None = 1.0,
                   x_label: str = "n", y_label: str = "ratio") -> str:
    """Self-contained SVG: one polyline over a log-scale x axis, plus a
    dashed horizontal line at ``reference``."""
    pts = list(points)
    lx = [math.log10(p[0]) for p in pts]
    ys = [p[1] for p in pts] + ([reference] if reference is not None else [])
    x0, x1 = min(lx), max(lx)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    y0, y1 = min(ys), max(ys)
    pad = 0.05 * (y1 - y0) if y1 > y0 else 0.5
    y0, y1 = y0 - pad, y1 + pad

    def sx(v):
        return _ML + (v - x0) / (x1 - x0) * (_W - _ML - _MR)

    def sy(v):
        return _H - _MB - (v - y0) / (y1 - y0) * (_H - _MT - _MB)

    coords = " ".join(f"{sx(a):.2f},{sy(p[1]):.2f}" for a, p in zip(lx, pts))
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" height="{_H - _MT - _MB}" '
        'fill="none" stroke="#444" stroke-width="1"/>',
    ]
    for k in range(math.floor(x0), math.ceil(x1) + 1):
        if x0 <= k <= x1:
            parts.append(f'<text x="{sx(k):.2f}" y="{_H - _MB + 18}" font-size="12" '
                         f'text-anchor="middle">1e{k}</text>')
    for v in (y0 + pad, y1 - pad):
        parts.append(f'<text x="{_ML - 6}" y="{sy(v) + 4:.2f}" font-size="12" text-anchor="end">{v:.4g}</text>')
    if reference is not None:
        parts.append(f'<line class="reference" x1="{_ML}" y1="{sy(reference):.2f}" x2="{_W - _MR}" '
                     f'y2="{sy(reference):.2f}" stroke="#c00" stroke-dasharray="6,4"/>')
    parts += [
        f'<polyline points="{coords}" fill="none" stroke="#036" stroke-width="2"/>',
        f'<text x="{(_ML + _W - _MR) / 2}" y="{_H - 10}" font-size="13" text-anchor="middle">'
        f'{escape(x_label)} (log scale)</text>',
        f'<text x="16" y="{(_MT + _H - _MB) / 2}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 16 {(_MT + _H - _MB) / 2})">{escape(y_label)}</text>',
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


def plot_convergence(report_csv, out_svg, x: str = "n", y: str = "ratio", reference: float | None = 1.0) -> None:
    pts = _read_columns(report_csv, x, y)
    Path(out_svg).write_text(svg_line_chart(pts, reference, x, y))
