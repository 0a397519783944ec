"""Neighborhood-constraint (HLCSP) and edge-constraint (HECSP) instances.

An HLCSP restricts, for every vertex ``v``, the colouring of its closed
neighbourhood ``N(v)`` to an explicit list of tuples. The reduction to an
HECSP recolours each vertex by the index of the local tuple it uses; an edge
then only has to check that the two chosen tuples agree where the two
neighbourhoods overlap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .tessellation import HypGraph


class ColorSet:
    def __init__(self, names: Sequence[str]):
        names = tuple(str(n) for n in names)
        if not names:
            raise ValueError("a colour set needs at least one colour")
        if len(set(names)) != len(names):
            raise ValueError("colour names must be unique")
        self.names = names

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def __eq__(self, other):
        return isinstance(other, ColorSet) and self.names == other.names

    def __repr__(self):
        return f"ColorSet({list(self.names)!r})"


def neighborhood(g: HypGraph, v: int) -> tuple:
    """``v`` first, then its neighbours in ascending id order."""
    if not 0 <= v < g.n:
        raise KeyError(f"unknown vertex {v}")
    return (v,) + g.adjacency[v]


class HLCSPInstance:
    """Per-vertex allowed tuples over the ordered neighbourhood.

    ``allowed[v]`` is stored sorted lexicographically; duplicates are an
    error.
    """

    def __init__(self, graph: HypGraph, colors: ColorSet, allowed: Sequence):
        if len(allowed) != graph.n:
            raise ValueError("need one allowed-tuple list per vertex")
        self.graph = graph
        self.colors = colors
        k = len(colors)
        self.neighborhoods = tuple(neighborhood(graph, v) for v in range(graph.n))
        tables = []
        for v, tuples in enumerate(allowed):
            size = len(self.neighborhoods[v])
            ts = sorted(tuple(int(c) for c in t) for t in tuples)
            for t in ts:
                if len(t) != size:
                    raise ValueError(f"tuple {t} at vertex {v} has wrong length (want {size})")
                if any(c < 0 or c >= k for c in t):
                    raise ValueError(f"tuple {t} at vertex {v} uses an unknown colour")
            if any(a == b for a, b in zip(ts, ts[1:])):
                raise ValueError(f"duplicate tuple at vertex {v}")
            tables.append(tuple(ts))
        self.allowed = tuple(tables)

    @classmethod
    def from_predicate(cls, graph: HypGraph, colors: ColorSet, pred) -> HLCSPInstance:
        """Build ``m(v)`` by filtering ``K^N(v)`` with ``pred(v, nbhd, tuple)``."""
        allowed = []
        for v in range(graph.n):
            nb = neighborhood(graph, v)
            allowed.append([t for t in itertools.product(range(len(colors)), repeat=len(nb))
                            if pred(v, nb, t)])
        return cls(graph, colors, allowed)

    def restricted(self, v: int, color: int) -> HLCSPInstance:
        """Copy with ``v`` pinned to ``color`` (only tuples with t[0] == color kept)."""
        allowed = list(self.allowed)
        allowed[v] = [t for t in allowed[v] if t[0] == color]
        return HLCSPInstance(self.graph, self.colors, allowed)


class HECSPInstance:
    """Edge constraints as ``k x k`` boolean matrices, row = lower endpoint.

    ``admissible[v]`` is the number of colours usable at ``v`` (colours
    ``>= admissible[v]`` are forbidden); this is what keeps isolated vertices
    honest.
    """

    def __init__(self, graph: HypGraph, k: int, matrices: dict, admissible=None):
        self.graph = graph
        self.k = int(k)
        if self.k < 1:
            raise ValueError("need at least one colour")
        mats = {}
        for e in graph.edges:
            if e not in matrices:
                raise ValueError(f"missing matrix for edge {e}")
            m = np.asarray(matrices[e], dtype=bool)
            if m.shape != (self.k, self.k):
                raise ValueError(f"matrix for edge {e} has shape {m.shape}")
            m = m.copy()
            m.setflags(write=False)
            mats[e] = m
        extra = set(matrices) - set(graph.edges)
        if extra:
            raise ValueError(f"matrices for non-edges: {sorted(extra)[:5]}")
        self.matrices = mats
        if admissible is None:
            admissible = [self.k] * graph.n
        admissible = tuple(int(a) for a in admissible)
        if len(admissible) != graph.n or any(not 0 <= a <= self.k for a in admissible):
            raise ValueError("bad admissible counts")
        self.admissible = admissible

    @property
    def unsatisfiable_marker(self) -> bool:
        """True when some vertex has no admissible colour at all."""
        return any(a == 0 for a in self.admissible)

    def allows(self, u: int, cu: int, v: int, cv: int) -> bool:
        if u < v:
            return bool(self.matrices[(u, v)][cu, cv])
        return bool(self.matrices[(v, u)][cv, cu])


@dataclass(frozen=True)
class DecodeMap:
    """HECSP colour ``j`` at ``v`` means the ``j``-th tuple of ``m(v)``."""

    tuples: tuple

    def decode(self, sol: Sequence[int]) -> list:
        return [self.tuples[v][j][0] for v, j in enumerate(sol)]


def reduce_to_hecsp(inst: HLCSPInstance):
    """Return ``(HECSPInstance, DecodeMap)`` with a solution-count-preserving bijection."""
    g = inst.graph
    sizes = [len(m) for m in inst.allowed]
    k = max(sizes, default=1) or 1
    nb_pos = [{w: i for i, w in enumerate(nb)} for nb in inst.neighborhoods]
    arrays = [np.array(m, dtype=np.int64).reshape(len(m), len(inst.neighborhoods[v]))
              for v, m in enumerate(inst.allowed)]
    matrices = {}
    for u, v in g.edges:
        shared = sorted(set(inst.neighborhoods[u]) & set(inst.neighborhoods[v]))
        mat = np.zeros((k, k), dtype=bool)
        if sizes[u] and sizes[v]:
            cu = arrays[u][:, [nb_pos[u][w] for w in shared]]
            cv = arrays[v][:, [nb_pos[v][w] for w in shared]]
            mat[:sizes[u], :sizes[v]] = (cu[:, None, :] == cv[None, :, :]).all(axis=2)
        matrices[(u, v)] = mat
    return HECSPInstance(g, k, matrices, sizes), DecodeMap(inst.allowed)


class DecodeError(ValueError):
    pass


def decode(sol: Sequence[int], dm: DecodeMap, hecsp: HECSPInstance = None) -> list:
    """Map an HECSP solution back to a colouring over the original colours.

    When ``hecsp`` is given the input is checked first.
    """
    if hecsp is not None and not check_hecsp(hecsp, sol):
        raise DecodeError("input does not satisfy the edge instance")
    return dm.decode(sol)


def check_hlcsp(inst: HLCSPInstance, c: Sequence[int]) -> bool:
    if len(c) != inst.graph.n:
        return False
    for v, nb in enumerate(inst.neighborhoods):
        local = tuple(c[w] for w in nb)
        if local not in _allowed_set(inst, v):
            return False
    return True


def _allowed_set(inst: HLCSPInstance, v: int):
    cache = inst.__dict__.setdefault("_sets", {})
    s = cache.get(v)
    if s is None:
        s = cache[v] = frozenset(inst.allowed[v])
    return s


def check_hecsp(inst: HECSPInstance, c: Sequence[int]) -> bool:
    if len(c) != inst.graph.n:
        return False
    for v, cv in enumerate(c):
        if not 0 <= cv < inst.admissible[v]:
            return False
    return all(inst.matrices[(u, v)][c[u], c[v]] for u, v in inst.graph.edges)
