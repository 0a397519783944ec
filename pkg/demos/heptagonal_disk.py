"""
Growing a heptagonal disk
=========================

Build {7,3} disks ring by ring, check the embedding, and watch the
decomposition width grow far more slowly than the number of cells.
"""

import numpy as np

from hypcsp import TilingSpec, generate_tiling, validate_embedding
from hypcsp.treedec import build_decomposition

# each ring multiplies the cell count by roughly 2.6
rows = []
for rings in range(6):
    g = generate_tiling(TilingSpec(7, 3, rings))
    rep = validate_embedding(g)
    width = build_decomposition(g).width
    rows.append((rings, g.n, len(g.edges), width))
    print(f"rings={rings}  cells={g.n:5d}  edges={len(g.edges):5d}  width={width:2d}  embedding {rep.summary()}")

# width against log(n): the ratio settles instead of growing
rows = np.array(rows, dtype=float)
print("width / ln(n):", np.round(rows[2:, 3] / np.log(rows[2:, 1]), 2))
