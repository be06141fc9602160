"""Tiling pictures of an instance across a row/column split of the parties.

Rows and columns are the computational bases of the two party groups in
lexicographic order. Each block claims the cells of its projection product and
is drawn as the rectangles formed by contiguous runs of its row and column
indices.
"""
from __future__ import annotations

import colorsys
import hashlib
import itertools
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .combinatorics import basis_tuples, projection_set
from .states import OPSInstance


class GridOverlapError(ValueError):
    """Two blocks claim the same cell."""


@dataclass
class GridRender:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    row_labels: list[tuple[int, ...]]
    col_labels: list[tuple[int, ...]]
    cells: dict[tuple[int, int], str]
    rectangles: dict[str, list[tuple[int, int, int, int]]]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_labels), len(self.col_labels)

    def footprint(self, block_id: str) -> set[tuple[int, int]]:
        out = set()
        for r0, r1, c0, c1 in self.rectangles[block_id]:
            out |= {(r, c) for r in range(r0, r1) for c in range(c0, c1)}
        return out


def _runs(indices: list[int]) -> list[tuple[int, int]]:
    out = []
    for _, grp in itertools.groupby(enumerate(sorted(indices)), key=lambda t: t[1] - t[0]):
        grp = [v for _, v in grp]
        out.append((grp[0], grp[-1] + 1))
    return out


def build_grid(ops: OPSInstance, rows, cols) -> GridRender:
    rows, cols = tuple(sorted(rows)), tuple(sorted(cols))
    if set(rows) & set(cols) or set(rows) | set(cols) != set(range(ops.n)):
        raise ValueError("rows and cols must split the parties")
    row_labels, col_labels = basis_tuples(ops, rows), basis_tuples(ops, cols)
    r_index = {t: i for i, t in enumerate(row_labels)}
    c_index = {t: i for i, t in enumerate(col_labels)}
    cells: dict[tuple[int, int], str] = {}
    rects = {}
    for b in ops.blocks:
        ri = [r_index[t] for t in projection_set(b, rows).tuples]
        ci = [c_index[t] for t in projection_set(b, cols).tuples]
        for cell in itertools.product(ri, ci):
            if cell in cells:
                raise GridOverlapError(f"cell {cell} claimed by {cells[cell]} and {b.id}")
            cells[cell] = b.id
        rects[b.id] = [(r0, r1, c0, c1) for r0, r1 in _runs(ri) for c0, c1 in _runs(ci)]
    return GridRender(rows, cols, row_labels, col_labels, cells, rects)


def short_label(block_id: str) -> str:
    for prefix in ("H^O_", "H^E_", "H_", "S_", "B_"):
        if block_id.startswith(prefix):
            block_id = block_id[len(prefix):]
            break
    return block_id.strip("{}")


def render_ascii(grid: GridRender) -> str:
    width = max([len(short_label(b)) for b in grid.rectangles] + [1])
    n_r, n_c = grid.shape
    head_w = max(len("".join(map(str, t))) for t in grid.row_labels)
    lines = [" " * head_w + " | " + " ".join("".join(map(str, t)).rjust(width) for t in grid.col_labels)]
    lines.append("-" * len(lines[0]))
    for r in range(n_r):
        cells = [short_label(grid.cells[(r, c)]) if (r, c) in grid.cells else "." for c in range(n_c)]
        lines.append("".join(map(str, grid.row_labels[r])).rjust(head_w) + " | " + " ".join(x.rjust(width) for x in cells))
    return "\n".join(lines) + "\n"


def _colour(block_id: str) -> str:
    h = int(hashlib.sha1(block_id.encode()).hexdigest()[:8], 16) / 0xFFFFFFFF
    r, g, b = colorsys.hls_to_rgb(h, 0.82, 0.55)
    return f"#{int(r * 255):02x}{int(g * 255):02x}{int(b * 255):02x}"


def render_svg(grid: GridRender, cell: int = 36) -> str:
    n_r, n_c = grid.shape
    margin = 40
    w, h = margin + n_c * cell + 4, margin + n_r * cell + 4
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" '
           'font-family="monospace" font-size="11">']
    for c, t in enumerate(grid.col_labels):
        out.append(f'<text x="{margin + c * cell + cell / 2}" y="{margin - 8}" text-anchor="middle">'
                   f'{"".join(map(str, t))}</text>')
    for r, t in enumerate(grid.row_labels):
        out.append(f'<text x="{margin - 6}" y="{margin + r * cell + cell / 2 + 4}" text-anchor="end">'
                   f'{"".join(map(str, t))}</text>')
    for bid, rects in grid.rectangles.items():
        fill = _colour(bid)
        out.append(f'<g class="block" data-id="{escape(bid)}">')
        for r0, r1, c0, c1 in rects:
            x, y = margin + c0 * cell, margin + r0 * cell
            out.append(f'<rect x="{x}" y="{y}" width="{(c1 - c0) * cell}" height="{(r1 - r0) * cell}" '
                       f'fill="{fill}" stroke="#222" stroke-width="1.5"/>')
        r0, r1, c0, c1 = max(rects, key=lambda q: (q[1] - q[0]) * (q[3] - q[2]))
        out.append(f'<text x="{margin + (c0 + c1) * cell / 2}" y="{margin + (r0 + r1) * cell / 2 + 4}" '
                   f'text-anchor="middle">{escape(short_label(bid))}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def export_grid(ops: OPSInstance, rows, cols, format: str = "svg") -> str:
    grid = build_grid(ops, rows, cols)
    if format == "svg":
        return render_svg(grid)
    if format == "ascii":
        return render_ascii(grid)
    raise ValueError(f"unknown grid format {format!r}")
