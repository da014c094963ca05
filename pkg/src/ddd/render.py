"""Deterministic SVG heatmaps for labeled matrices.

Plain string assembly, no plotting dependency: identical input bytes in,
identical SVG bytes out.  Darker cells mean higher values; the value
range is annotated under the grid.
"""

from __future__ import annotations

import numpy as np

CELL = 28
FONT = 13
CHAR_W = 8
PAD = 12


def _shade(t: float) -> str:
    # t=0 -> near-white, t=1 -> near-black
    level = int(round(247.0 - t * (247.0 - 26.0)))
    return f"#{level:02x}{level:02x}{level:02x}"


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )


def render_heatmap(row_labels, col_labels, values) -> str:
    """Grid heatmap with row/column labels and a value-range footer."""
    vals = np.asarray(values, dtype=np.float64)
    rows, cols = vals.shape
    vmin = float(vals.min())
    vmax = float(vals.max())
    span = vmax - vmin

    left = PAD + max(len(lab) for lab in row_labels) * CHAR_W + PAD
    top = PAD + max(len(lab) for lab in col_labels) * CHAR_W + PAD
    width = left + cols * CELL + PAD
    height = top + rows * CELL + 2 * PAD + FONT

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" font-family="monospace" font-size="{FONT}">\n',
        f'<rect width="{width}" height="{height}" fill="white"/>\n',
    ]
    for j, lab in enumerate(col_labels):
        x = left + j * CELL + CELL // 2 + FONT // 3
        y = top - PAD // 2
        out.append(
            f'<text x="{x}" y="{y}" text-anchor="start" '
            f'transform="rotate(-90 {x} {y})">{_esc(lab)}</text>\n'
        )
    for i, lab in enumerate(row_labels):
        y = top + i * CELL + CELL // 2 + FONT // 3
        out.append(
            f'<text x="{left - PAD // 2}" y="{y}" '
            f'text-anchor="end">{_esc(lab)}</text>\n'
        )
    for i in range(rows):
        for j in range(cols):
            v = float(vals[i, j])
            t = 0.5 if span == 0.0 else (v - vmin) / span
            x = left + j * CELL
            y = top + i * CELL
            out.append(
                f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" '
                f'fill="{_shade(t)}" stroke="white" stroke-width="1">'
                f"<title>{_esc(row_labels[i])} / {_esc(col_labels[j])} = "
                f"{format(v, '.6g')}</title></rect>\n"
            )
    footer_y = top + rows * CELL + PAD + FONT
    out.append(
        f'<text x="{left}" y="{footer_y}">'
        f"min={format(vmin, '.6g')} max={format(vmax, '.6g')} "
        f"(darker = higher)</text>\n"
    )
    out.append("</svg>\n")
    return "".join(out)
