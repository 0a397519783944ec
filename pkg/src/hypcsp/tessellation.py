"""Bounded regular {p,q} tessellation graphs and the (r,d)-hyperbolic checker.

Vertices are tile centers; two tiles are adjacent when they share a polygon
edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from . import geometry as geo

RING_CAP = 8
_QUANT = 1e-6


class HypGraph:
    """A graph with an optional embedding in the hyperboloid model.

    ``positions`` is an ``(n, 3)`` array or ``None`` for purely combinatorial
    graphs (those can be decomposed and solved but not validated).
    """

    def __init__(self, n: int, edges: Iterable, positions=None,
                 r: float = 0.0, d: float = 0.0, validated: bool = False):
        self.n = int(n)
        es = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) references unknown vertex")
            e = (u, v) if u < v else (v, u)
            if e in es:
                raise ValueError(f"duplicate edge {e}")
            es.add(e)
        self.edges = tuple(sorted(es))
        if positions is not None:
            positions = np.array(positions, dtype=float).reshape(self.n, 3)
            positions.setflags(write=False)
        self.positions = positions
        self.r = float(r)
        self.d = float(d)
        self.validated = validated

    @cached_property
    def adjacency(self) -> tuple:
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    @property
    def vertices(self) -> list:
        if self.positions is None:
            return [(i, None) for i in range(self.n)]
        return [(i, geo.HypPoint.from_array(p)) for i, p in enumerate(self.positions)]

    def with_params(self, r: float, d: float) -> HypGraph:
        return HypGraph(self.n, self.edges, self.positions, r, d)

    def __repr__(self):
        return f"HypGraph(n={self.n}, m={len(self.edges)}, r={self.r:.4g}, d={self.d:.4g})"


@dataclass(frozen=True)
class TilingSpec:
    p: int
    q: int
    rings: int
    removed: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.p < 3 or self.q < 3:
            raise ValueError("p and q must be at least 3")
        if (self.p - 2) * (self.q - 2) <= 4:
            raise ValueError(f"{{{self.p},{self.q}}} is not a hyperbolic tiling")
        if not 0 <= self.rings <= RING_CAP:
            raise ValueError(f"rings must be in [0, {RING_CAP}]")
        object.__setattr__(self, "removed", frozenset(int(i) for i in self.removed))


def natural_params(p: int, q: int):
    """Return ``(r, d, edge_len)`` for the {p,q} tiling.

    ``edge_len`` is the polygon side; tile centers sit ``s`` apart and
    ``r = 0.9 s``, ``d = 1.1 s``.
    """
    if (p - 2) * (q - 2) <= 4:
        raise ValueError(f"{{{p},{q}}} is not hyperbolic")
    edge_len = 2.0 * math.acosh(math.cos(math.pi / p) / math.sin(math.pi / q))
    s = center_spacing(p, q)
    return 0.9 * s, 1.1 * s, edge_len


def center_spacing(p: int, q: int) -> float:
    return 2.0 * math.acosh(math.cos(math.pi / q) / math.sin(math.pi / p))


def degree_bound(r: float, d: float) -> int:
    """Packing bound on |N(v)| for an (r, d)-hyperbolic graph."""
    if r <= 0 or d <= 0:
        raise ValueError("r and d must be positive")
    return int(math.floor(geo.disk_area(d + r / 2.0) / geo.disk_area(r / 2.0)))


def _reorthonormalize(f):
    # Minkowski Gram-Schmidt on the columns, timelike column (center) first
    c2 = geo.normalize(f[:, 2])
    c0 = f[:, 0] + geo.minkowski(f[:, 0], c2) * c2
    c0 = c0 / math.sqrt(geo.minkowski(c0, c0))
    c1 = f[:, 1] + geo.minkowski(f[:, 1], c2) * c2 - geo.minkowski(f[:, 1], c0) * c0
    c1 = c1 / math.sqrt(geo.minkowski(c1, c1))
    return np.column_stack([c0, c1, c2])


def _key(c):
    # Poincare-disk coordinates stay O(1) however far out the tile is
    u = c[0] / (1.0 + c[2])
    v = c[1] / (1.0 + c[2])
    return (int(round(u / _QUANT)), int(round(v / _QUANT)))


def generate_tiling(spec: TilingSpec) -> HypGraph:
    """Tiles within ``spec.rings`` adjacency steps of a central tile."""
    p = spec.p
    s = center_spacing(spec.p, spec.q)
    steps = [
        geo.rotation(2.0 * math.pi * k / p).matrix
        @ geo.translation_x(s).matrix
        @ geo.rotation(math.pi).matrix
        for k in range(p)
    ]

    frames = [np.eye(3)]
    centers = [np.array([0.0, 0.0, 1.0])]
    index = {_key(centers[0]): 0}

    def lookup(c):
        kx, ky = _key(c)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                i = index.get((kx + dx, ky + dy))
                if i is not None and geo.dist(centers[i], c) < s / 4.0:
                    return i
        return None

    frontier = [0]
    for _ in range(spec.rings):
        nxt = []
        for t in frontier:
            for step in steps:
                f = _reorthonormalize(frames[t] @ step)
                c = f[:, 2]
                if lookup(c) is None:
                    index[_key(c)] = len(frames)
                    nxt.append(len(frames))
                    frames.append(f)
                    centers.append(c)
        frontier = nxt

    edges = set()
    for t, f in enumerate(frames):
        for step in steps:
            j = lookup(geo.normalize((f @ step)[:, 2]))
            if j is not None and j != t:
                edges.add((min(t, j), max(t, j)))

    n = len(frames)
    bad = [i for i in spec.removed if not 0 <= i < n]
    if bad:
        raise ValueError(f"removed ids out of range: {sorted(bad)}")
    keep = [i for i in range(n) if i not in spec.removed]
    relabel = {old: new for new, old in enumerate(keep)}
    edges = [(relabel[u], relabel[v]) for u, v in edges if u in relabel and v in relabel]
    r, d, _ = natural_params(spec.p, spec.q)
    pos = np.array([centers[i] for i in keep]).reshape(len(keep), 3)
    return HypGraph(len(keep), edges, pos, r, d)


@dataclass(frozen=True)
class Violation:
    kind: str
    ids: tuple
    value: float

    def __str__(self):
        return f"{self.kind} {self.ids} measured={self.value:.6g}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def summary(self) -> str:
        if self.ok:
            return "PASS"
        lines = [f"FAIL ({len(self.violations)} violations)"]
        lines += ["  " + str(v) for v in self.violations]
        return "\n".join(lines)


def _pairwise_min_dist_chunks(P, Q, chunk=512):
    for start in range(0, len(P), chunk):
        block = P[start:start + chunk]
        ip = -(block[:, None, 0] * Q[None, :, 0] + block[:, None, 1] * Q[None, :, 1]
               - block[:, None, 2] * Q[None, :, 2])
        yield start, np.arccosh(np.maximum(ip, 1.0))


def validate_embedding(g: HypGraph, brute: bool = False) -> ValidationReport:
    """Check the three (r, d)-hyperbolic graph conditions.

    The default path prunes candidate pairs with triangle-inequality bounds
    that cannot discard a real violation; ``brute=True`` tests every pair.
    """
    if g.positions is None:
        raise ValueError("graph has no embedding")
    report = ValidationReport()
    P = g.positions
    r, d = g.r, g.d

    # (1) vertex separation
    for start, D in _pairwise_min_dist_chunks(P, P):
        ii, jj = np.nonzero(D <= r)
        for i, j in zip(ii + start, jj):
            if i < j:
                report.violations.append(Violation("vertex-separation", (int(i), int(j)), float(D[i - start, j])))

    if not g.edges:
        return report
    E = np.array(g.edges)
    A = P[E[:, 0]]
    B = P[E[:, 1]]
    lengths = geo.dist(A, B)

    # (2) edge length
    for k in np.nonzero(lengths >= d)[0]:
        report.violations.append(Violation("edge-length", tuple(int(x) for x in E[k]), float(lengths[k])))

    mids = geo.geodesic_point(A, B, 0.5)
    half = lengths / 2.0

    # (3a) edges keep r/2 away from other vertices
    cand_e, cand_v = [], []
    for start, D in _pairwise_min_dist_chunks(mids, P):
        if brute:
            mask = np.ones_like(D, dtype=bool)
        else:
            mask = D - half[start:start + len(D), None] < r / 2.0
        ee, vv = np.nonzero(mask)
        ee = ee + start
        keep = (vv != E[ee, 0]) & (vv != E[ee, 1])
        cand_e.append(ee[keep])
        cand_v.append(vv[keep])
    ce = np.concatenate(cand_e)
    cv = np.concatenate(cand_v)
    if len(ce):
        dd = geo.point_segment_distances(P[cv], A[ce], B[ce])
        for k in np.nonzero(dd < r / 2.0)[0]:
            report.violations.append(Violation(
                "edge-vertex-clearance", (int(E[ce[k], 0]), int(E[ce[k], 1]), int(cv[k])), float(dd[k])))

    # (3b) no crossings between edges without a shared endpoint
    m = len(E)
    for start, D in _pairwise_min_dist_chunks(mids, mids):
        rows = np.arange(start, start + len(D))
        if brute:
            mask = np.ones_like(D, dtype=bool)
        else:
            mask = D <= half[rows, None] + half[None, :] + 1e-9
        mask &= rows[:, None] < np.arange(m)[None, :]
        e1, e2 = np.nonzero(mask)
        e1 = e1 + start
        share = ((E[e1, 0] == E[e2, 0]) | (E[e1, 0] == E[e2, 1])
                 | (E[e1, 1] == E[e2, 0]) | (E[e1, 1] == E[e2, 1]))
        e1, e2 = e1[~share], e2[~share]
        if not len(e1):
            continue
        hit = geo.segments_cross_many(A[e1], B[e1], A[e2], B[e2])
        for a, b in zip(e1[hit], e2[hit]):
            report.violations.append(Violation(
                "edge-crossing", tuple(int(x) for x in (*E[a], *E[b])), 0.0))
    return report


def validated(g: HypGraph) -> HypGraph:
    """Return a copy flagged as validated, or raise with the report."""
    rep = validate_embedding(g)
    if not rep.ok:
        raise ValueError(rep.summary())
    return HypGraph(g.n, g.edges, g.positions, g.r, g.d, validated=True)


def ring_counts(spec: TilingSpec) -> list:
    """Number of tiles at each BFS distance from tile 0."""
    g = generate_tiling(TilingSpec(spec.p, spec.q, spec.rings))
    depth = {0: 0}
    queue = [0]
    for v in queue:
        for w in g.adjacency[v]:
            if w not in depth:
                depth[w] = depth[v] + 1
                queue.append(w)
    counts = [0] * (spec.rings + 1)
    for v in depth.values():
        counts[v] += 1
    return counts
