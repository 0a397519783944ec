"""
Minesweeper on the hyperbolic plane
===================================

Generate a board on a {7,3} disk, count its mine layouts exactly and list
the cells every layout agrees on.
"""

from hypcsp import TilingSpec
from hypcsp.minesweeper import FORCED_CLEAR, FORCED_MINE, deduce, generate_board

board, mines = generate_board(TilingSpec(7, 3, 3), mine_density=0.2, reveal_fraction=0.8, seed=11,
                              return_mines=True)
print(f"{board.graph.n} cells, {len(board.clues)} clues, {sum(mines)} hidden mines")

res = deduce(board)
print("mine layouts consistent with the clues:", res.count)

safe = res.forced(FORCED_CLEAR)
sure = res.forced(FORCED_MINE)
print("safe to open:", safe)
print("certainly mined:", sure)

# deductions never contradict the ground truth
assert all(mines[v] == 0 for v in safe) and all(mines[v] == 1 for v in sure)
