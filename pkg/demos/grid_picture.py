"""Draw the tiling of the 3x3x3x3 asymmetric set over parties 12 | 34."""
import sys
from pathlib import Path

from strongops import build
from strongops.grid import build_grid, export_grid, render_ascii

ops = build("FourAsym", (3, 3, 3, 3))
print(render_ascii(build_grid(ops, (0, 1), (2, 3))))

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("four_asym_grid.svg")
out.write_text(export_grid(ops, (0, 1), (2, 3), "svg"))
print("svg written to", out)
