"""Dynamic programming over a nice tree decomposition.

A table holds, for each bag colouring, the number of colourings of all
vertices seen in the subtree that extend it and satisfy every edge among
those vertices (zero-count rows are dropped). Rows are
stored as an ``(entries, |bag|)`` colour array aligned with the sorted bag;
counts are ``int64`` while a running bound says they cannot overflow and
Python integers (object arrays) afterwards, so results are always exact.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .csp import HECSPInstance, HLCSPInstance, check_hecsp, check_hlcsp
from .treedec import FORGET, INTRODUCE, JOIN, LEAF, NiceDecomposition

_INT64_SAFE = 2 ** 62
BRUTE_FORCE_LIMIT = 24


class Unsatisfiable(Exception):
    """Raised when a solution is requested from an instance without one."""


@dataclass
class Table:
    rows: np.ndarray
    counts: np.ndarray
    bound: int  # upper bound on every count in the table

    def __len__(self):
        return len(self.counts)


@dataclass
class SolutionTable:
    tables: list
    nice: NiceDecomposition
    k: int

    @property
    def total(self) -> int:
        if not self.tables:
            return 1
        root = self.tables[-1]
        return int(root.counts.sum()) if len(root) else 0

    def entries(self, node: int) -> dict:
        """The table at ``node`` as ``{canonical encoding: count}``."""
        t = self.tables[node]
        return {encode_bag_coloring(r, self.k): int(c) for r, c in zip(t.rows, t.counts)}


def encode_bag_coloring(colors, k: int) -> int:
    """Mixed-radix code of a colouring of a sorted bag, first vertex least significant."""
    code = 0
    for c in reversed(list(colors)):
        code = code * k + int(c)
    return code


def _promote(counts, bound):
    if bound >= _INT64_SAFE and counts.dtype != object:
        return counts.astype(object)
    return counts


def _row_keys(rows, k):
    """Integer ids for rows; equal rows get equal ids."""
    b = rows.shape[1]
    if b == 0:
        return np.zeros(len(rows), dtype=np.int64)
    if b * np.log2(max(k, 2)) < 62:
        weights = np.array([k ** i for i in range(b)], dtype=np.int64)
        return rows.astype(np.int64) @ weights
    _, inv = np.unique(rows, axis=0, return_inverse=True)
    return inv.reshape(-1).astype(np.int64)


def _group_sum(rows, counts, k):
    if len(rows) == 0:
        return rows, counts
    keys = _row_keys(rows, k)
    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
    return rows[order][starts], np.add.reduceat(counts[order], starts)


def _check_compatible(inst: HECSPInstance, nd: NiceDecomposition):
    g = inst.graph
    checked = {e for x in nd.nodes for e in x.checks}
    forgotten = {x.vertex for x in nd.nodes if x.kind == FORGET}
    if checked != set(g.edges) or forgotten != set(range(g.n)):
        raise ValueError("decomposition does not match the instance graph")


def run_dp(inst: HECSPInstance, nd: NiceDecomposition, keep_tables: bool = True) -> SolutionTable:
    """Bottom-up counting pass; returns every node's table.

    With ``keep_tables=False`` child tables are dropped once consumed (enough
    for decide/count, not for witness/sample).
    """
    _check_compatible(inst, nd)
    k = inst.k
    tables = [None] * len(nd.nodes)

    for i, x in enumerate(nd.nodes):
        if x.kind == LEAF:
            adm = inst.admissible[x.vertex]
            rows = np.arange(adm, dtype=np.int32).reshape(adm, 1)
            t = Table(rows, np.ones(adm, dtype=np.int64), 1)
        elif x.kind == INTRODUCE:
            t = _introduce(inst, x, nd.nodes[x.children[0]], tables[x.children[0]])
        elif x.kind == FORGET:
            t = _forget(x, nd.nodes[x.children[0]], tables[x.children[0]], k)
        elif x.kind == JOIN:
            t = _join(tables[x.children[0]], tables[x.children[1]], k)
        else:
            raise ValueError(f"unknown node kind {x.kind!r}")
        tables[i] = t
        if not keep_tables:
            for c in x.children:
                tables[c] = None
    return SolutionTable(tables, nd, k)


def _introduce(inst, x, child, ct: Table) -> Table:
    v = x.vertex
    pos = x.bag.index(v)
    cbag = child.bag
    k = inst.k
    adm = inst.admissible[v]  # colours >= adm are never allowed, so skip their columns
    # every edge from v into the child bag is applied, not only x.checks:
    # boolean filters are idempotent, and this keeps tables free of bag
    # colourings that a sibling branch would only reject at the join
    oriented = []
    for j, other in enumerate(cbag):
        e = (v, other) if v < other else (other, v)
        m = inst.matrices.get(e)
        if m is not None:
            oriented.append((j, (m if v < other else m.T)[:adm]))
    rows_out, counts_out = [], []
    chunk = max(1, 4_000_000 // max(k, 1))
    for s in range(0, len(ct), chunk):
        rows = ct.rows[s:s + chunk]
        allowed = np.ones((len(rows), adm), dtype=bool)
        for j, mv in oriented:
            allowed &= mv[:, rows[:, j]].T
        ei, col = np.nonzero(allowed)
        new = np.empty((len(ei), rows.shape[1] + 1), dtype=np.int32)
        new[:, :pos] = rows[ei, :pos]
        new[:, pos] = col
        new[:, pos + 1:] = rows[ei, pos:]
        rows_out.append(new)
        counts_out.append(ct.counts[s:s + chunk][ei])
    if not rows_out:
        return Table(np.empty((0, len(x.bag)), dtype=np.int32), ct.counts[:0], ct.bound)
    return Table(np.concatenate(rows_out), np.concatenate(counts_out), ct.bound)


def _forget(x, child, ct: Table, k) -> Table:
    pos = child.bag.index(x.vertex)
    rows = np.delete(ct.rows, pos, axis=1)
    bound = ct.bound * k
    rows, counts = _group_sum(rows, _promote(ct.counts, bound), k)
    return Table(rows, counts, bound)


def _join(a: Table, b: Table, k) -> Table:
    bound = a.bound * b.bound
    if len(a) == 0 or len(b) == 0:
        return Table(a.rows[:0], _promote(a.counts[:0], bound), bound)
    if a.rows.shape[1] and a.rows.shape[1] * np.log2(max(k, 2)) >= 62:
        _, inv = np.unique(np.concatenate([a.rows, b.rows]), axis=0, return_inverse=True)
        inv = inv.reshape(-1)
        ka, kb = inv[:len(a)], inv[len(a):]
    else:
        ka, kb = _row_keys(a.rows, k), _row_keys(b.rows, k)
    _, ia, ib = np.intersect1d(ka, kb, assume_unique=True, return_indices=True)
    counts = _promote(a.counts, bound)[ia] * _promote(b.counts, bound)[ib]
    return Table(a.rows[ia], counts, bound)


def count(inst: HECSPInstance, nd: NiceDecomposition) -> int:
    """Exact number of solutions."""
    return run_dp(inst, nd, keep_tables=False).total


def decide(inst: HECSPInstance, nd: NiceDecomposition) -> bool:
    return count(inst, nd) > 0


def _trace(st: SolutionTable, n: int, choose) -> list:
    nodes = st.nice.nodes
    color = [None] * n
    for i in range(len(nodes) - 1, -1, -1):
        x = nodes[i]
        if x.kind != FORGET:
            continue
        child = nodes[x.children[0]]
        t = st.tables[x.children[0]]
        pos = child.bag.index(x.vertex)
        others = [j for j in range(len(child.bag)) if j != pos]
        want = np.array([color[child.bag[j]] for j in others], dtype=np.int64)
        match = np.ones(len(t), dtype=bool)
        if others:
            match = (t.rows[:, others] == want).all(axis=1)
        idx = np.flatnonzero(match)
        cols = t.rows[idx, pos]
        order = np.argsort(cols, kind="stable")
        color[x.vertex] = int(choose(cols[order], t.counts[idx][order]))
    return color


def witness(inst: HECSPInstance, nd: NiceDecomposition, table: SolutionTable = None) -> Optional[list]:
    """A solution (smallest colour choice at every step), or ``None``."""
    st = table if table is not None else run_dp(inst, nd)
    if st.total == 0:
        return None
    return _trace(st, inst.graph.n, lambda cols, cnts: cols[0])


def sample(inst: HECSPInstance, nd: NiceDecomposition, seed: int, table: SolutionTable = None) -> list:
    """A uniformly random solution; the same seed gives the same solution.

    Randomness comes from :class:`random.Random` seeded with ``seed``; one
    ``randrange`` call is made per forget node in reverse post-order.
    """
    st = table if table is not None else run_dp(inst, nd)
    if st.total == 0:
        raise Unsatisfiable("instance has no solutions")
    rng = random.Random(seed)

    def choose(cols, cnts):
        weights = [int(c) for c in cnts]
        pick = rng.randrange(sum(weights))
        for col, w in zip(cols, weights):
            if pick < w:
                return col
            pick -= w
        raise AssertionError("weights exhausted")

    return _trace(st, inst.graph.n, choose)


def _match(rows, target, k):
    """Index of each row of ``rows`` in ``target`` (rows of ``target`` are unique); -1 if absent."""
    if len(rows) == 0 or len(target) == 0:
        return np.full(len(rows), -1, dtype=np.int64)
    if rows.shape[1] * np.log2(max(k, 2)) < 62:
        a, b = _row_keys(rows, k), _row_keys(target, k)
    else:
        _, inv = np.unique(np.concatenate([rows, target]), axis=0, return_inverse=True)
        inv = inv.reshape(-1)
        a, b = inv[:len(rows)], inv[len(rows):]
    order = np.argsort(b, kind="stable")
    pos = np.minimum(np.searchsorted(b[order], a), len(b) - 1)
    hit = b[order][pos] == a
    return np.where(hit, order[pos], -1)


def marginals(inst: HECSPInstance, nd: NiceDecomposition, table: SolutionTable = None) -> list:
    """``out[v][j]`` = number of solutions with colour ``j`` at ``v``, exactly.

    One top-down pass computes, for each table row, the number of ways to
    complete the vertices outside the subtree; a row's solutions are then
    inside count times outside count.
    """
    st = table if table is not None else run_dp(inst, nd)
    n, k = inst.graph.n, inst.k
    out = [[0] * k for _ in range(n)]
    total = st.total
    if total == 0 or not nd.nodes:
        return out
    # every outside count is at most the total, so int64 suffices below 2^62
    dtype = np.int64 if total < _INT64_SAFE else object
    nodes = nd.nodes
    outside = [None] * len(nodes)
    outside[-1] = np.ones(len(st.tables[-1]), dtype=dtype)
    for i in range(len(nodes) - 1, -1, -1):
        x, t, o = nodes[i], st.tables[i], outside[i]
        if x.kind == LEAF:
            continue
        if x.kind == JOIN:
            for c, other in ((x.children[0], x.children[1]), (x.children[1], x.children[0])):
                ct, ot = st.tables[c], st.tables[other]
                idx = _match(ct.rows, t.rows, k)
                oidx = _match(ct.rows, ot.rows, k)
                oc = np.zeros(len(ct), dtype=dtype)
                ok = (idx >= 0) & (oidx >= 0)
                oc[ok] = o[idx[ok]] * ot.counts[oidx[ok]].astype(dtype)
                outside[c] = oc
            continue
        c = x.children[0]
        child, ct = nodes[c], st.tables[c]
        if x.kind == FORGET:
            pos = child.bag.index(x.vertex)
            idx = _match(np.delete(ct.rows, pos, axis=1), t.rows, k)
            oc = np.zeros(len(ct), dtype=dtype)
            oc[idx >= 0] = o[idx[idx >= 0]]
            outside[c] = oc
            inside = ct.counts.astype(dtype) * oc
            cols = ct.rows[:, pos]
            for j in range(k):
                sel = cols == j
                if sel.any():
                    out[x.vertex][j] = int(inside[sel].sum())
        else:  # introduce
            pos = x.bag.index(x.vertex)
            idx = _match(np.delete(t.rows, pos, axis=1), ct.rows, k)
            oc = np.zeros(len(ct), dtype=dtype)
            np.add.at(oc, idx[idx >= 0], o[idx >= 0])
            outside[c] = oc
    return out


def _brute(n, k_of, check):
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force refused for {n} > {BRUTE_FORCE_LIMIT} vertices")
    return sum(1 for c in itertools.product(*(range(k_of(v)) for v in range(n))) if check(c))


def brute_force_count(inst: HECSPInstance, chunk: int = 1 << 20) -> int:
    """Count by exhaustive enumeration, independent of any decomposition.

    Colourings are extended one vertex at a time in id order (vectorized),
    dropping a partial colouring as soon as an edge between assigned
    vertices fails; chunks above ``chunk`` rows are processed depth-first.
    """
    n = inst.graph.n
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force refused for {n} > {BRUTE_FORCE_LIMIT} vertices")
    back = [[] for _ in range(n)]  # edges to lower-numbered vertices
    for (u, v), m in inst.matrices.items():
        back[v].append((u, m))

    def extend(states, v):
        if v == n:
            return len(states)
        adm = inst.admissible[v]
        if adm == 0 or len(states) == 0:
            return 0
        reps = np.repeat(states, adm, axis=0)
        col = np.tile(np.arange(adm, dtype=np.int32), len(states))
        ok = np.ones(len(col), dtype=bool)
        for u, m in back[v]:
            ok &= m[reps[:, u], col]
        nxt = np.concatenate([reps[ok], col[ok, None]], axis=1)
        return sum(extend(nxt[s:s + chunk], v + 1) for s in range(0, max(len(nxt), 1), chunk))

    return extend(np.zeros((1, 0), dtype=np.int32), 0)


def brute_force_count_hlcsp(inst: HLCSPInstance) -> int:
    k = len(inst.colors)
    return _brute(inst.graph.n, lambda v: k, lambda c: check_hlcsp(inst, c))


def enumerate_hecsp(inst: HECSPInstance) -> list:
    n = inst.graph.n
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError("too many vertices to enumerate")
    return [list(c) for c in itertools.product(*(range(a) for a in inst.admissible))
            if check_hecsp(inst, c)]


def enumerate_hlcsp(inst: HLCSPInstance) -> list:
    n = inst.graph.n
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError("too many vertices to enumerate")
    k = len(inst.colors)
    return [list(c) for c in itertools.product(range(k), repeat=n) if check_hlcsp(inst, c)]
