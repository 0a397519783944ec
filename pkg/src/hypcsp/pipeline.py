"""HLCSP -> HECSP -> nice decomposition -> DP, bundled."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import engine
from .csp import DecodeMap, HECSPInstance, HLCSPInstance, check_hlcsp, reduce_to_hecsp
from .treedec import NiceDecomposition, build_decomposition, to_nice


@dataclass
class Prepared:
    hlcsp: HLCSPInstance
    hecsp: HECSPInstance
    decode_map: DecodeMap
    nice: NiceDecomposition
    table: Optional[engine.SolutionTable] = None

    def solutions_table(self) -> engine.SolutionTable:
        if self.table is None:
            self.table = engine.run_dp(self.hecsp, self.nice)
        return self.table


def decompose(graph, seeds: Optional[int] = None) -> NiceDecomposition:
    return to_nice(build_decomposition(graph, seeds), graph)


def prepare(inst: HLCSPInstance, seeds: Optional[int] = None, nice: NiceDecomposition = None) -> Prepared:
    hecsp, dm = reduce_to_hecsp(inst)
    if nice is None:
        nice = decompose(inst.graph, seeds)
    return Prepared(inst, hecsp, dm, nice)


def count(prep: Prepared) -> int:
    if prep.table is not None:
        return prep.table.total
    return engine.count(prep.hecsp, prep.nice)


def witness(prep: Prepared) -> Optional[list]:
    sol = engine.witness(prep.hecsp, prep.nice, prep.solutions_table())
    if sol is None:
        return None
    return _decoded(prep, sol)


def sample(prep: Prepared, seed: int) -> list:
    sol = engine.sample(prep.hecsp, prep.nice, seed, prep.solutions_table())
    return _decoded(prep, sol)


def _decoded(prep: Prepared, sol) -> list:
    c = prep.decode_map.decode(sol)
    if not check_hlcsp(prep.hlcsp, c):
        raise AssertionError("decoded colouring violates the neighbourhood constraints")
    return c
