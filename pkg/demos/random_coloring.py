"""
Sampling a constrained colouring
================================

Each cell is yellow or white; a cell may have at most one yellow
neighbour. Count the colourings of a {7,3} disk and draw one uniformly,
then write it as an SVG picture.
"""

import sys

from hypcsp import ColorSet, HLCSPInstance, TilingSpec, generate_tiling, pipeline
from hypcsp.toolkit.render import render_svg

g = generate_tiling(TilingSpec(7, 3, 3))
colors = ColorSet(["white", "yellow"])
inst = HLCSPInstance.from_predicate(g, colors, lambda v, nb, t: sum(t[1:]) <= 1)

prep = pipeline.prepare(inst)
print(f"{g.n} cells, decomposition width {prep.nice.width}")
print("number of colourings:", pipeline.count(prep))

sol = pipeline.sample(prep, seed=3)
print("yellow cells in the sample:", sum(sol))

out = sys.argv[1] if len(sys.argv) > 1 else "coloring.svg"
with open(out, "w") as fh:
    fh.write(render_svg(g, sol))
print("wrote", out)
