"""CSV and SVG emission for result tables.

CSV layout: ``#``-prefixed metadata lines, one header row, then data rows.
Numbers carry 12 significant digits, fields are separated by ``,`` and lines
end with ``\\n`` on every platform.
"""
from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .runner import COLUMNS, ResultTable

PHI_COLUMNS = ("phi_s", "phi_p", "phi_c")
_COLORS = ("#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22")
_DASH = {"phi_s": "", "phi_p": "6 3", "phi_c": "2 2"}


def format_number(x: float) -> str:
    return f"{x:.12g}"


def format_csv(table: ResultTable) -> str:
    lines = [f"# {key}: {value}" for key, value in table.metadata]
    lines.append(",".join(table.columns))
    for row in table.rows:
        cells = [c if isinstance(c, str) else format_number(c) for c in row]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_csv(table: ResultTable, path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_csv(table))
    return path


def read_csv(path: str | Path) -> tuple[list[str], list[str], list[list]]:
    """Parse a file written by :func:`write_csv` into ``(metadata lines, header, rows)``.

    Numeric cells come back as floats; a leading ``series`` column stays text.
    """
    metadata, header, rows = [], None, []
    for line in Path(path).read_text(encoding="utf-8").split("\n"):
        if not line:
            continue
        if line.startswith("#"):
            metadata.append(line[1:].strip())
        elif header is None:
            header = line.split(",")
        else:
            cells = line.split(",")
            rows.append([c if h == "series" else float(c) for h, c in zip(header, cells)])
    if header is None:
        raise ValueError(f"{path}: no header row")
    return metadata, header, rows


def render_svg(table: ResultTable, title: str = "", width: int = 720, height: int = 460) -> str:
    """Line chart with one polyline per phi column (and per series)."""
    left, right, top, bottom = 70, 170, 40, 55
    pw, ph = width - left - right, height - top - bottom
    theta_idx = table.columns.index("theta_deg")
    x_all = np.array([r[theta_idx] for r in table.rows], dtype=float)
    y_all = np.array([r[table.columns.index(c)] for r in table.rows for c in PHI_COLUMNS], dtype=float)
    x0, x1 = float(x_all.min()), float(x_all.max())
    y0, y1 = float(min(y_all.min(), 0.0)), float(y_all.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def sx(x):
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return top + (1 - (y - y0) / (y1 - y0)) * ph

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{left + pw / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for v in np.linspace(x0, x1, 7):
        parts.append(f'<line x1="{sx(v):.2f}" y1="{top + ph}" x2="{sx(v):.2f}" y2="{top + ph + 5}" stroke="black"/>')
        parts.append(f'<text x="{sx(v):.2f}" y="{top + ph + 18}" text-anchor="middle">{v:.4g}</text>')
    for v in np.linspace(y0, y1, 6):
        parts.append(f'<line x1="{left - 5}" y1="{sy(v):.2f}" x2="{left}" y2="{sy(v):.2f}" stroke="black"/>')
        parts.append(f'<text x="{left - 8}" y="{sy(v) + 4:.2f}" text-anchor="end">{v:.4g}</text>')
    parts.append(f'<text x="{left + pw / 2:.1f}" y="{height - 12}" text-anchor="middle">theta (deg)</text>')
    parts.append(
        f'<text x="18" y="{top + ph / 2:.1f}" text-anchor="middle" transform="rotate(-90 18 {top + ph / 2:.1f})">yield</text>'
    )
    groups = [None] if table.series is None else list(table.series)
    legend_y = top
    for gi, label in enumerate(groups):
        color = _COLORS[gi % len(_COLORS)]
        rows = table.rows if label is None else [r for r in table.rows if r[0] == label]
        for col in PHI_COLUMNS:
            ci = table.columns.index(col)
            pts = " ".join(f"{sx(r[theta_idx]):.2f},{sy(r[ci]):.2f}" for r in rows)
            dash = f' stroke-dasharray="{_DASH[col]}"' if _DASH[col] else ""
            name = col if label is None else f"{col} [{label}]"
            parts.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{pts}">'
                f"<title>{escape(name)}</title></polyline>"
            )
            lx = left + pw + 12
            parts.append(f'<line x1="{lx}" y1="{legend_y}" x2="{lx + 24}" y2="{legend_y}" stroke="{color}"{dash}/>')
            parts.append(f'<text x="{lx + 30}" y="{legend_y + 4}">{escape(name)}</text>')
            legend_y += 16
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_svg(table: ResultTable, path: str | Path, title: str = "") -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_svg(table, title))
    return path


__all__ = ["COLUMNS", "format_csv", "write_csv", "read_csv", "render_svg", "write_svg"]
