"""Versioned JSON reports, CSV series and minimal log-log SVG plots."""

from __future__ import annotations

import datetime as _dt
import hashlib
import json
import math
from dataclasses import asdict, is_dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

SCHEMA = 1


def blob_hash(data: bytes) -> str:
    """Git-style blob hash (sha1 over 'blob <len>\\0' + data)."""
    return hashlib.sha1(b"blob %d\0" % len(data) + data).hexdigest()


def canonical_bytes(obj) -> bytes:
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":")).encode()


def to_jsonable(obj):
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(obj.to_dict() if hasattr(obj, "to_dict") else asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def build_report(command: str, params: dict, results: dict, passed: bool | None,
                 provenance: dict | None = None) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "params": to_jsonable(params),
        "provenance": to_jsonable(provenance or {}),
        "results": to_jsonable(results),
        "pass": passed,
        "metadata": {"timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat()},
    }


def deterministic_view(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "metadata"}


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def write_json(path, report: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(report))
    return path


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    out = [",".join(header)]
    for r in rows:
        out.append(",".join(repr(float(v)) if isinstance(v, (float, np.floating)) else str(v) for v in r))
    path.write_text("\n".join(out) + "\n")
    return path


def loglog_svg(path, series: dict, line: tuple | None = None, title: str = "",
               width: int = 640, height: int = 420) -> Path:
    """series: name -> (x, y) positive arrays; line: (intercept, slope) in natural logs."""
    pts = {k: (np.log10(np.asarray(x, float)), np.log10(np.maximum(np.asarray(y, float), 1e-300)))
           for k, (x, y) in series.items()}
    allx = np.concatenate([p[0] for p in pts.values()])
    ally = np.concatenate([p[1] for p in pts.values()])
    x0, x1 = float(allx.min()), float(allx.max())
    y0, y1 = float(ally.min()), float(ally.max())
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    m = 50

    def X(v):
        return m + (v - x0) / (x1 - x0) * (width - 2 * m)

    def Y(v):
        return height - m - (v - y0) / (y1 - y0) * (height - 2 * m)

    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<text x="{width / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
             f'<line x1="{m}" y1="{height - m}" x2="{width - m}" y2="{height - m}" stroke="black"/>',
             f'<line x1="{m}" y1="{m}" x2="{m}" y2="{height - m}" stroke="black"/>',
             f'<text x="{width / 2}" y="{height - 10}" text-anchor="middle" font-size="12">'
             f'log10 xi [{x0:.2f}, {x1:.2f}]</text>',
             f'<text x="12" y="{height / 2}" font-size="12" transform="rotate(-90 12 {height / 2})">'
             f'log10 value [{y0:.2f}, {y1:.2f}]</text>']
    for i, (k, (lx, ly)) in enumerate(pts.items()):
        c = colors[i % len(colors)]
        d = " ".join(f"{X(a):.2f},{Y(b):.2f}" for a, b in zip(lx, ly))
        parts.append(f'<polyline fill="none" stroke="{c}" stroke-width="1" points="{d}"/>')
        parts.append(f'<text x="{width - m - 120}" y="{m + 15 * i}" fill="{c}" font-size="12">{k}</text>')
    if line is not None:
        a, s = line
        ln10 = math.log(10)
        ya = (a + s * x0 * ln10) / ln10
        yb = (a + s * x1 * ln10) / ln10
        parts.append(f'<line x1="{X(x0):.2f}" y1="{Y(ya):.2f}" x2="{X(x1):.2f}" y2="{Y(yb):.2f}" '
                     'stroke="black" stroke-dasharray="4 3"/>')
    parts.append("</svg>")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(parts) + "\n")
    return path
