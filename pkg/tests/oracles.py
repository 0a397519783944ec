"""Independent reference computations used by the tests.

Nothing here imports the code paths it is used to check.
"""

import itertools
import random

import numpy as np

# --------------------------------------------------------------------------
# Exact {7,3} tiling via the Coxeter group [7,3] over Z[c], c = 2cos(2pi/7).
# Elements a0 + a1 c + a2 c^2 are integer triples; c^3 = -c^2 + 2c + 1.


def _zmul(x, y):
    prod = [0] * 5
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                prod[i + j] += a * b
    # c^4 = 3c^2 - c - 1, c^3 = -c^2 + 2c + 1
    a0, a1, a2, a3, a4 = prod
    a0 += -a4 + a3
    a1 += -a4 + 2 * a3
    a2 += 3 * a4 - a3
    return (a0, a1, a2)


def _zadd(x, y):
    return tuple(a + b for a, b in zip(x, y))


ZERO, ONE = (0, 0, 0), (1, 0, 0)
TWO_COS_PI_7 = (-1, 1, 1)  # c^2 + c - 1


def _matmul(A, B):
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = ZERO
            for t in range(3):
                acc = _zadd(acc, _zmul(A[i][t], B[t][j]))
            row.append(acc)
        out.append(row)
    return out


def _transpose(A):
    return [[A[j][i] for j in range(3)] for i in range(3)]


def _reflections():
    # a[i][j] = 2cos(pi/m_ij); m01 = 7, m12 = 3, m02 = 2
    a = [[(-2, 0, 0), TWO_COS_PI_7, ZERO],
         [TWO_COS_PI_7, (-2, 0, 0), ONE],
         [ZERO, ONE, (-2, 0, 0)]]
    mats = []
    for i in range(3):
        S = [[ONE if r == c else ZERO for c in range(3)] for r in range(3)]
        for j in range(3):
            S[i][j] = _zadd(S[i][j], a[i][j])
        mats.append(S)
    return mats


def exact_heptagonal_tiling(rings):
    """BFS over tiles of {7,3}; returns (ring populations, edge count).

    A tile is the coset gH, H = <s0, s1>, identified exactly by the
    contragredient image of the fundamental weight fixed by H.
    """
    S0, S1, S2 = (_transpose(S) for S in _reflections())
    rot = _matmul(S0, S1)
    rots = [[[ONE if r == c else ZERO for c in range(3)] for r in range(3)]]
    for _ in range(6):
        rots.append(_matmul(rots[-1], rot))
    steps = [_matmul(R, S2) for R in rots]

    def key(M):
        return tuple(M[r][2] for r in range(3))  # M applied to (0, 0, 1)

    identity = rots[0]
    depth = {key(identity): 0}
    rep = {key(identity): identity}
    frontier = [identity]
    for d in range(1, rings + 1):
        nxt = []
        for M in frontier:
            for st in steps:
                N = _matmul(M, st)
                k = key(N)
                if k not in depth:
                    depth[k] = d
                    rep[k] = N
                    nxt.append(N)
        frontier = nxt
    edges = set()
    for k, M in rep.items():
        for st in steps:
            k2 = key(_matmul(M, st))
            if k2 in depth and k2 != k:
                edges.add(frozenset((k, k2)))
    counts = [0] * (rings + 1)
    for d in depth.values():
        counts[d] += 1
    return counts, len(edges)


# --------------------------------------------------------------------------
# Treewidth by exhaustive elimination orderings.


def exact_treewidth(n, edges):
    best = n
    for order in itertools.permutations(range(n)):
        adj = [set() for _ in range(n)]
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        width = 0
        for v in order:
            nb = adj[v]
            width = max(width, len(nb))
            for a in nb:
                adj[a] |= nb - {a}
                adj[a].discard(v)
        best = min(best, width)
    return best


# --------------------------------------------------------------------------
# Random instances.


def random_graph(rng, n, p, max_degree=None):
    edges = []
    deg = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p and (max_degree is None or (deg[u] < max_degree and deg[v] < max_degree)):
                edges.append((u, v))
                deg[u] += 1
                deg[v] += 1
    return edges


def random_hecsp_data(rng, n_max=15, k_max=3):
    n = rng.randint(0, n_max)
    k = rng.randint(1, k_max)
    edges = random_graph(rng, n, rng.uniform(0.1, 0.45))
    density = rng.uniform(0.4, 0.95)
    mats = {e: np.array([[rng.random() < density for _ in range(k)] for _ in range(k)]) for e in edges}
    adm = [k if rng.random() < 0.8 else rng.randint(0, k) for _ in range(n)]
    return n, k, edges, mats, adm


def random_hlcsp_data(rng, n_max=12, k_max=2):
    """(n, k, edges, allowed) with each m(v) a random subset of K^N(v)."""
    n = rng.randint(1, n_max)
    k = rng.randint(1, k_max)
    edges = random_graph(rng, n, rng.uniform(0.1, 0.4), max_degree=4)
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    keep = rng.uniform(0.5, 0.95)
    allowed = []
    for v in range(n):
        size = 1 + len(adj[v])
        allowed.append([t for t in itertools.product(range(k), repeat=size) if rng.random() < keep])
    return n, k, edges, allowed


# --------------------------------------------------------------------------
# Minesweeper by direct enumeration of mine placements.


def minesweeper_solutions(n, edges, clues, flags):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    sols = []
    for mines in itertools.product((0, 1), repeat=n):
        ok = True
        for v, k in clues.items():
            if mines[v] or sum(mines[w] for w in adj[v]) != k:
                ok = False
                break
        if ok:
            for v, state in flags.items():
                if mines[v] != (1 if state == "MINE" else 0):
                    ok = False
                    break
        if ok:
            sols.append(mines)
    return sols


def random_board_data(rng, n_max=12, max_degree=6):
    # degree capped like a {p,q} tile graph; the local tuple count is 2^(deg+1)
    n = rng.randint(1, n_max)
    edges = random_graph(rng, n, rng.uniform(0.15, 0.5), max_degree=max_degree)
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    truth = [int(rng.random() < 0.3) for _ in range(n)]
    clues, flags = {}, {}
    for v in range(n):
        r = rng.random()
        if not truth[v] and r < 0.45:
            k = sum(truth[w] for w in adj[v])
            if rng.random() < 0.15:  # sometimes lie, to get inconsistent boards
                k = rng.randint(0, len(adj[v]))
            clues[v] = k
        elif r > 0.9:
            flags[v] = rng.choice(["MINE", "CLEAR"])
    return n, edges, clues, flags


def seeded(seed):
    return random.Random(seed)


# --------------------------------------------------------------------------
# Edge-constraint solutions by plain backtracking (for large k, small n).


def backtrack_edge_solutions(n, edges, allows, admissible):
    """All colourings c with c[v] < admissible[v] and allows(u, c[u], v, c[v]) on edges."""
    earlier = [[] for _ in range(n)]
    for u, v in edges:
        a, b = min(u, v), max(u, v)
        earlier[b].append(a)
    out = []
    c = [0] * n

    def rec(v):
        if v == n:
            out.append(list(c))
            return
        for col in range(admissible[v]):
            if all(allows(u, c[u], v, col) for u in earlier[v]):
                c[v] = col
                rec(v + 1)

    rec(0)
    return out


def neighbourhood_solutions(n, k, edges, allowed):
    """All colourings whose every closed neighbourhood (v, then neighbours ascending) is allowed."""
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    nbs = [[v] + sorted(adj[v]) for v in range(n)]
    sets = [set(map(tuple, a)) for a in allowed]
    return [list(c) for c in itertools.product(range(k), repeat=n)
            if all(tuple(c[w] for w in nbs[v]) in sets[v] for v in range(n))]
