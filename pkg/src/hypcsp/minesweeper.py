"""Minesweeper boards on tessellation graphs.

A clue ``k`` at cell ``v`` means ``v`` itself holds no mine and exactly ``k``
of its edge-neighbours do. Colours: ``CLEAR = 0``, ``MINE = 1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import engine, pipeline
from .csp import ColorSet, HLCSPInstance, neighborhood
from .tessellation import HypGraph, TilingSpec, generate_tiling

CLEAR, MINE = 0, 1
COLORS = ColorSet(["CLEAR", "MINE"])

KNOWN_MINE, KNOWN_CLEAR = "MINE", "CLEAR"
FORCED_MINE, FORCED_CLEAR, AMBIGUOUS = "FORCED_MINE", "FORCED_CLEAR", "AMBIGUOUS"


@dataclass(frozen=True)
class Board:
    graph: HypGraph
    clues: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        g = self.graph
        for v, k in self.clues.items():
            if not 0 <= v < g.n:
                raise ValueError(f"clue on unknown cell {v}")
            if not 0 <= k <= g.degree(v):
                raise ValueError(f"clue {k} at cell {v} outside [0, {g.degree(v)}]")
        for v, state in self.flags.items():
            if not 0 <= v < g.n:
                raise ValueError(f"flag on unknown cell {v}")
            if state not in (KNOWN_MINE, KNOWN_CLEAR):
                raise ValueError(f"bad flag state {state!r}")
            if state == KNOWN_MINE and v in self.clues:
                raise ValueError(f"cell {v} has a clue and a mine flag")

    def known(self, v: int) -> Optional[int]:
        if v in self.clues:
            return CLEAR
        state = self.flags.get(v)
        if state is None:
            return None
        return MINE if state == KNOWN_MINE else CLEAR

    def unknown_cells(self) -> list:
        return [v for v in range(self.graph.n) if self.known(v) is None]

    def with_flag(self, v: int, state: str) -> Board:
        flags = dict(self.flags)
        flags[v] = state
        return Board(self.graph, dict(self.clues), flags)


def encode(b: Board) -> HLCSPInstance:
    g = b.graph
    allowed = []
    for v in range(g.n):
        size = len(neighborhood(g, v))
        if v in b.clues:
            k = b.clues[v]
            ts = []
            for mines in itertools.combinations(range(1, size), k):
                t = [CLEAR] * size
                for i in mines:
                    t[i] = MINE
                ts.append(tuple(t))
        else:
            own = b.known(v)
            ts = [t for t in itertools.product((CLEAR, MINE), repeat=size)
                  if own is None or t[0] == own]
        allowed.append(ts)
    return HLCSPInstance(g, COLORS, allowed)


def consistent(b: Board, seeds: Optional[int] = None) -> bool:
    return pipeline.count(pipeline.prepare(encode(b), seeds)) > 0


@dataclass
class DeductionResult:
    count: int
    status: Optional[dict]

    def forced(self, which: str) -> list:
        return sorted(v for v, s in (self.status or {}).items() if s == which)


def _classify(with_mine: int, total: int) -> str:
    if with_mine == 0:
        return FORCED_CLEAR
    if with_mine == total:
        return FORCED_MINE
    return AMBIGUOUS


def deduce(b: Board, seeds: Optional[int] = None, method: str = "marginals") -> DeductionResult:
    """Classify every unknown cell as forced clear, forced mine or ambiguous.

    ``method="marginals"`` reads exact per-cell mine counts off one extra
    top-down pass; ``method="recount"`` re-runs the count with each cell
    pinned to a mine (n + 1 DP runs). Both are exact and agree.
    """
    if method not in ("marginals", "recount"):
        raise ValueError(f"unknown method {method!r}")
    inst = encode(b)
    base = pipeline.prepare(inst, seeds)
    total = pipeline.count(base)
    if total == 0:
        return DeductionResult(0, None)
    status = {}
    if method == "marginals":
        marg = engine.marginals(base.hecsp, base.nice, base.solutions_table())
        for v in b.unknown_cells():
            with_mine = sum(c for j, c in enumerate(marg[v][:len(inst.allowed[v])]) if inst.allowed[v][j][0] == MINE)
            status[v] = _classify(with_mine, total)
        return DeductionResult(total, status)
    for v in b.unknown_cells():
        pinned = pipeline.prepare(inst.restricted(v, MINE), nice=base.nice)
        status[v] = _classify(pipeline.count(pinned), total)
    return DeductionResult(total, status)


def mine_counts(g: HypGraph, mines) -> list:
    return [sum(mines[w] for w in g.adjacency[v]) for v in range(g.n)]


def board_from_mines(g: HypGraph, mines, reveal) -> Board:
    counts = mine_counts(g, mines)
    clues = {v: counts[v] for v in range(g.n) if reveal[v] and not mines[v]}
    return Board(g, clues)


def generate_board(spec, mine_density: float, reveal_fraction: float, seed: int,
                   return_mines: bool = False):
    """Random board that is consistent by construction.

    ``spec`` is a :class:`TilingSpec` or an already built graph.
    """
    if not 0.0 <= mine_density <= 1.0 or not 0.0 <= reveal_fraction <= 1.0:
        raise ValueError("density and reveal fraction must lie in [0, 1]")
    g = generate_tiling(spec) if isinstance(spec, TilingSpec) else spec
    rng = np.random.default_rng(seed)
    mines = [int(x) for x in rng.random(g.n) < mine_density]
    reveal = rng.random(g.n) < reveal_fraction
    board = board_from_mines(g, mines, reveal)
    return (board, mines) if return_mines else board
