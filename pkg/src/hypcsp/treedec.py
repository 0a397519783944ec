"""Tree decompositions: min-fill construction, validation, nice form.

Nice nodes come in four kinds (bags listed bottom-up):

* ``leaf``      -- a single vertex, no children;
* ``introduce`` -- child bag plus one vertex;
* ``forget``    -- child bag minus one vertex;
* ``join``      -- two children with the same bag as the node.

Every graph edge is checked at exactly one ``introduce`` node, so a counting
pass over the nice tree never double counts a constraint.
"""

from __future__ import annotations

import heapq
import os
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .tessellation import HypGraph, ValidationReport, Violation, generate_tiling

DEFAULT_SEEDS = 16

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


def default_seeds() -> int:
    """Seed count, overridable through ``HYPCSP_SEEDS``."""
    raw = os.environ.get("HYPCSP_SEEDS")
    if not raw:
        return DEFAULT_SEEDS
    n = int(raw)
    if n < 1:
        raise ValueError("HYPCSP_SEEDS must be positive")
    return n


@dataclass
class TreeDecomposition:
    bags: list
    tree_edges: list
    root: int = 0

    def __post_init__(self):
        self.bags = [frozenset(b) for b in self.bags]
        self.tree_edges = [tuple(e) for e in self.tree_edges]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def tree_adjacency(self) -> list:
        adj = [[] for _ in self.bags]
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


def _min_fill_order(n: int, edges, rng: random.Random) -> list:
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)

    def fill_of(v):
        nb = list(adj[v])
        missing = 0
        for i, a in enumerate(nb):
            na = adj[a]
            for b in nb[i + 1:]:
                if b not in na:
                    missing += 1
        return missing

    # a fixed random rank per vertex breaks ties uniformly at random
    rank = list(range(n))
    rng.shuffle(rank)
    fill = [fill_of(v) for v in range(n)]
    heap = [(fill[v], rank[v], v) for v in range(n)]
    heapq.heapify(heap)
    alive = [True] * n
    order = []
    while heap:
        f, _, v = heapq.heappop(heap)
        if not alive[v] or f != fill[v]:
            continue
        order.append(v)
        alive[v] = False
        touched = set()
        nb = list(adj[v])
        for i, a in enumerate(nb):
            for b in nb[i + 1:]:
                if b in adj[a]:
                    continue
                common = adj[a] & adj[b]
                for w in common:
                    fill[w] -= 1
                    touched.add(w)
                fill[a] += sum(1 for x in adj[a] if x != b and x not in adj[b])
                fill[b] += sum(1 for x in adj[b] if x != a and x not in adj[a])
                adj[a].add(b)
                adj[b].add(a)
                touched.update((a, b))
        for u in nb:
            adj[u].discard(v)
            fill[u] -= sum(1 for x in adj[u] if x not in adj[v])
            touched.add(u)
        adj[v] = set()
        for w in touched:
            if alive[w]:
                heapq.heappush(heap, (fill[w], rank[w], w))
    return order


def decomposition_from_order(g: HypGraph, order: Sequence[int]) -> TreeDecomposition:
    """Tree decomposition induced by an elimination ordering."""
    n = g.n
    if n == 0:
        return TreeDecomposition([frozenset()], [], 0)
    pos = {v: i for i, v in enumerate(order)}
    adj = [set(a) for a in g.adjacency]
    bags = [None] * n
    parent = [None] * n
    for v in order:
        later = adj[v]
        bags[v] = frozenset(later) | {v}
        if later:
            parent[v] = min(later, key=pos.__getitem__)
        later = list(later)
        for i, a in enumerate(later):
            adj[a].discard(v)
            for b in later[i + 1:]:
                adj[a].add(b)
                adj[b].add(a)

    # contract nodes whose bag is contained in their parent's bag
    rep = list(range(n))

    def find(x):
        while rep[x] != x:
            rep[x] = rep[rep[x]]
            x = rep[x]
        return x

    for v in order:
        p = parent[v]
        if p is not None and bags[v] <= bags[p]:
            rep[v] = p
    nodes = sorted({find(v) for v in range(n)}, key=pos.__getitem__)
    idx = {v: i for i, v in enumerate(nodes)}
    out_bags = [bags[v] for v in nodes]
    tree_edges = []
    roots = []
    for v in nodes:
        p = parent[v]
        if p is None:
            roots.append(idx[v])
        else:
            tree_edges.append((idx[v], idx[find(p)]))
    if len(roots) == 1:
        return TreeDecomposition(out_bags, tree_edges, roots[0])
    # disconnected: hang every component root under one empty bag
    hub = len(out_bags)
    out_bags.append(frozenset())
    tree_edges += [(r, hub) for r in roots]
    return TreeDecomposition(out_bags, tree_edges, hub)


def build_decomposition(g: HypGraph, seeds: Optional[int] = None, base_seed: int = 0) -> TreeDecomposition:
    """Best (smallest width) of ``seeds`` randomized min-fill runs."""
    if seeds is None:
        seeds = default_seeds()
    best = None
    for s in range(seeds):
        order = _min_fill_order(g.n, g.edges, random.Random(base_seed + s))
        td = decomposition_from_order(g, order)
        if best is None or td.width < best.width:
            best = td
    return best


def validate_decomposition(g: HypGraph, t: TreeDecomposition) -> ValidationReport:
    rep = ValidationReport()
    m = len(t.bags)
    if m == 0:
        rep.violations.append(Violation("empty-tree", (), 0.0))
        return rep
    for a, b in t.tree_edges:
        if not (0 <= a < m and 0 <= b < m) or a == b:
            rep.violations.append(Violation("bad-tree-edge", (a, b), 0.0))
            return rep
    if len(set(frozenset(e) for e in t.tree_edges)) != len(t.tree_edges):
        rep.violations.append(Violation("duplicate-tree-edge", (), 0.0))
    if not 0 <= t.root < m:
        rep.violations.append(Violation("bad-root", (t.root,), 0.0))
    adj = t.tree_adjacency()
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    if len(seen) != m:
        rep.violations.append(Violation("tree-disconnected", (len(seen), m), 0.0))
    if len(t.tree_edges) != m - 1:
        rep.violations.append(Violation("tree-has-cycle", (len(t.tree_edges), m - 1), 0.0))

    where = [[] for _ in range(g.n)]
    for i, bag in enumerate(t.bags):
        for v in bag:
            if not 0 <= v < g.n:
                rep.violations.append(Violation("unknown-vertex", (i, v), 0.0))
            else:
                where[v].append(i)
    for v in range(g.n):
        if not where[v]:
            rep.violations.append(Violation("vertex-uncovered", (v,), 0.0))
    for u, v in g.edges:
        if not any(u in t.bags[i] for i in where[v]):
            rep.violations.append(Violation("edge-uncovered", (u, v), 0.0))
    for v in range(g.n):
        occ = where[v]
        if len(occ) < 2:
            continue
        occ_set = set(occ)
        reach = {occ[0]}
        queue = deque([occ[0]])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y in occ_set and y not in reach:
                    reach.add(y)
                    queue.append(y)
        if len(reach) != len(occ_set):
            rep.violations.append(Violation("occurrence-disconnected", (v,), float(len(occ_set) - len(reach))))
    return rep


@dataclass
class NiceNode:
    kind: str
    bag: tuple
    children: tuple = ()
    vertex: Optional[int] = None
    checks: tuple = ()


@dataclass
class NiceDecomposition:
    """Nodes in post-order (children before parents); the root is last."""

    nodes: list = field(default_factory=list)

    @property
    def root(self) -> Optional[int]:
        return len(self.nodes) - 1 if self.nodes else None

    @property
    def width(self) -> int:
        return max((len(nd.bag) for nd in self.nodes), default=0) - 1

    def as_tree_decomposition(self) -> TreeDecomposition:
        if not self.nodes:
            return TreeDecomposition([frozenset()], [], 0)
        edges = [(c, i) for i, nd in enumerate(self.nodes) for c in nd.children]
        return TreeDecomposition([nd.bag for nd in self.nodes], edges, self.root)


def to_nice(t: TreeDecomposition, g: HypGraph) -> NiceDecomposition:
    """Normalize ``t`` to nice form with an empty root bag."""
    rep = validate_decomposition(g, t)
    if not rep.ok:
        raise ValueError("invalid tree decomposition:\n" + rep.summary())
    if g.n == 0:
        return NiceDecomposition([])

    adj = t.tree_adjacency()
    children = [[] for _ in t.bags]
    order = [t.root]
    seen = {t.root}
    for x in order:
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                children[x].append(y)
                order.append(y)

    nodes = []

    def add(kind, bag, kids=(), vertex=None):
        nodes.append(NiceNode(kind, tuple(sorted(bag)), tuple(kids), vertex))
        return len(nodes) - 1

    def climb(top, have, want):
        # forget first so bags never exceed max(|have|, |want|)
        have = set(have)
        for v in sorted(have - want):
            have.discard(v)
            top = add(FORGET, have, (top,), v)
        for v in sorted(want - have):
            have.add(v)
            top = add(INTRODUCE, have, (top,), v)
        return top

    top_of = {}
    for x in reversed(order):
        bag = set(t.bags[x])
        kids = [c for c in children[x] if not _subtree_inside(c, children, t.bags, bag)]
        if not kids:
            if not bag:
                continue
            first = min(bag)
            top = add(LEAF, {first}, (), first)
            top = climb(top, {first}, bag)
        else:
            tops = [climb(top_of[c], t.bags[c], bag) for c in kids if c in top_of]
            top = tops[0]
            for other in tops[1:]:
                top = add(JOIN, bag, (top, other))
        top_of[x] = top
    climb(top_of[t.root], t.bags[t.root], set())

    # first introduce node in post-order that sees both endpoints
    nbrs = g.adjacency
    assigned = set()
    for nd in nodes:
        if nd.kind != INTRODUCE:
            continue
        v = nd.vertex
        bag = set(nd.bag)
        checks = []
        for u in nbrs[v]:
            e = (u, v) if u < v else (v, u)
            if u in bag and e not in assigned:
                assigned.add(e)
                checks.append(e)
        nd.checks = tuple(checks)
    return NiceDecomposition(nodes)


def _subtree_inside(c, children, bags, bag) -> bool:
    stack = [c]
    while stack:
        x = stack.pop()
        if not bags[x] <= bag:
            return False
        stack.extend(children[x])
    return True


def validate_nice(nd: NiceDecomposition, g: HypGraph) -> ValidationReport:
    """Check the four-case shape, empty root, join disjointness and edge checks."""
    rep = validate_decomposition(g, nd.as_tree_decomposition()) if g.n else ValidationReport()
    nodes = nd.nodes
    if not nodes:
        if g.n:
            rep.violations.append(Violation("empty-nice-tree", (), 0.0))
        return rep
    if nodes[-1].bag:
        rep.violations.append(Violation("root-not-empty", (len(nodes) - 1,), 0.0))
    below = []
    for i, x in enumerate(nodes):
        if any(c >= i for c in x.children):
            rep.violations.append(Violation("not-post-order", (i,), 0.0))
            return rep
        bag = set(x.bag)
        kids = [nodes[c] for c in x.children]
        matches = 0
        if x.kind == LEAF and not kids and len(bag) == 1:
            matches += 1
        if x.kind == INTRODUCE and len(kids) == 1 and x.vertex in bag and set(kids[0].bag) == bag - {x.vertex}:
            matches += 1
        if x.kind == FORGET and len(kids) == 1 and x.vertex not in bag and set(kids[0].bag) == bag | {x.vertex}:
            matches += 1
        if x.kind == JOIN and len(kids) == 2 and all(set(k.bag) == bag for k in kids):
            matches += 1
        if matches != 1:
            rep.violations.append(Violation("bad-node-shape", (i, x.kind), 0.0))
        sub = bag.union(*(below[c] for c in x.children))
        below.append(sub)
        if x.kind == JOIN and len(kids) == 2:
            a = below[x.children[0]] - bag
            b = below[x.children[1]] - bag
            if not a or not b or a & b:
                rep.violations.append(Violation("join-not-disjoint", (i,), float(len(a & b))))
        for u, v in x.checks:
            if x.kind != INTRODUCE or x.vertex not in (u, v) or u not in bag or v not in bag:
                rep.violations.append(Violation("misplaced-check", (i, u, v), 0.0))
    counts = {}
    for x in nodes:
        for e in x.checks:
            counts[e] = counts.get(e, 0) + 1
    for e in g.edges:
        if counts.get(e, 0) != 1:
            rep.violations.append(Violation("edge-check-count", e, float(counts.get(e, 0))))
    return rep


def width_profile(specs, seeds: Optional[int] = None) -> list:
    """``(n, width)`` for each tiling spec."""
    out = []
    for spec in specs:
        g = generate_tiling(spec)
        out.append((g.n, build_decomposition(g, seeds).width))
    return out
