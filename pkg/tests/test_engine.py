import collections
import itertools

import numpy as np
import pytest
from scipy import stats

from hypcsp import pipeline
from hypcsp.csp import ColorSet, HECSPInstance, HLCSPInstance, check_hecsp
from hypcsp.engine import (Unsatisfiable, brute_force_count, count, decide, encode_bag_coloring, enumerate_hlcsp,
                           marginals, run_dp, sample, witness)
from hypcsp.tessellation import HypGraph, TilingSpec, generate_tiling
from hypcsp.treedec import build_decomposition, decomposition_from_order, to_nice
from oracles import backtrack_edge_solutions, random_hecsp_data, random_hlcsp_data, seeded


def nice(g, seeds=2):
    return to_nice(build_decomposition(g, seeds), g)


def hecsp(n, k, edges, mats, adm=None):
    return HECSPInstance(HypGraph(n, edges), k, mats, adm)


def proper(k):
    return ~np.eye(k, dtype=bool)


def oracle_count(inst):
    return len(backtrack_edge_solutions(inst.graph.n, inst.graph.edges, inst.allows, inst.admissible))


def test_encoding():
    assert encode_bag_coloring([1, 2], 3) == 1 + 2 * 3
    assert encode_bag_coloring([], 5) == 0


def test_small_counts():
    # proper 3-colourings of a triangle and of a 5-cycle
    tri = hecsp(3, 3, [(0, 1), (0, 2), (1, 2)], {e: proper(3) for e in [(0, 1), (0, 2), (1, 2)]})
    assert count(tri, nice(tri.graph)) == 6
    c5 = [(i, (i + 1) % 5) if i < 4 else (0, 4) for i in range(5)]
    inst = hecsp(5, 3, c5, {e: proper(3) for e in c5})
    assert count(inst, nice(inst.graph)) == 30  # (k-1)^n + (-1)^n (k-1)
    inst = hecsp(5, 2, c5, {e: proper(2) for e in c5})
    assert count(inst, nice(inst.graph)) == 0
    assert not decide(inst, nice(inst.graph))
    assert witness(inst, nice(inst.graph)) is None
    with pytest.raises(Unsatisfiable):
        sample(inst, nice(inst.graph), 1)


def test_empty_graph_and_isolated_vertices():
    empty = hecsp(0, 2, [], {})
    assert count(empty, nice(empty.graph)) == 1
    assert witness(empty, nice(empty.graph)) == []
    iso = hecsp(64, 3, [], {})
    total = count(iso, nice(iso.graph))
    assert total == 3 ** 64 and isinstance(total, int)
    # admissible counts cap isolated vertices
    inst = hecsp(3, 3, [], {}, [3, 1, 2])
    assert count(inst, nice(inst.graph)) == 6
    inst = hecsp(3, 3, [], {}, [3, 0, 2])
    assert count(inst, nice(inst.graph)) == 0


def test_big_counts_are_exact():
    # proper 5-colourings of a 60-vertex path: 5 * 4^59 is far past int64
    edges = [(i, i + 1) for i in range(59)]
    inst = hecsp(60, 5, edges, {e: proper(5) for e in edges})
    assert count(inst, nice(inst.graph)) == 5 * 4 ** 59
    s = sample(inst, nice(inst.graph), 3)
    assert check_hecsp(inst, s)


def test_witness_and_sample_are_solutions():
    rng = seeded(3)
    for _ in range(60):
        n, k, edges, mats, adm = random_hecsp_data(rng, n_max=12)
        inst = hecsp(n, k, edges, mats, adm)
        nd = nice(inst.graph)
        st = run_dp(inst, nd)
        w = witness(inst, nd, st)
        if st.total == 0:
            assert w is None
            continue
        assert check_hecsp(inst, w)
        for seed in range(3):
            assert check_hecsp(inst, sample(inst, nd, seed, st))


def test_dp_matches_oracles_on_random_hecsp():
    rng = seeded(21)
    for _ in range(120):
        n, k, edges, mats, adm = random_hecsp_data(rng, n_max=11)
        inst = hecsp(n, k, edges, mats, adm)
        expected = oracle_count(inst)
        assert brute_force_count(inst) == expected
        assert count(inst, nice(inst.graph)) == expected


def test_dp_matches_oracles_on_random_hlcsp():
    rng = seeded(22)
    for _ in range(80):
        n, k, edges, allowed = random_hlcsp_data(rng, n_max=10)
        inst = HLCSPInstance(HypGraph(n, edges), ColorSet([str(i) for i in range(k)]), allowed)
        assert pipeline.count(pipeline.prepare(inst, seeds=2)) == len(enumerate_hlcsp(inst))


def test_count_independent_of_decomposition():
    g = generate_tiling(TilingSpec(7, 3, 2))
    inst = HECSPInstance(g, 3, {e: proper(3) for e in g.edges})
    rng = np.random.default_rng(0)
    counts = {count(inst, nice(g, seeds=4))}
    for _ in range(3):
        order = [int(x) for x in rng.permutation(g.n)]
        counts.add(count(inst, to_nice(decomposition_from_order(g, order), g)))
    assert len(counts) == 1


def test_tables_are_extension_counts():
    # brute-force check of every table entry on a small graph
    g = HypGraph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)])
    inst = HECSPInstance(g, 2, {e: np.array([[1, 1], [1, 0]], bool) for e in g.edges})
    nd = nice(g)
    st = run_dp(inst, nd)
    below = []
    for i, x in enumerate(nd.nodes):
        seen = set(x.bag).union(*(below[c] for c in x.children))
        below.append(seen)
        sub = sorted(seen)
        sub_edges = [(u, v) for u, v in g.edges if u in seen and v in seen]
        expected = collections.Counter()
        for c in itertools.product(range(2), repeat=len(sub)):
            col = dict(zip(sub, c))
            if all(inst.matrices[e][col[e[0]], col[e[1]]] for e in sub_edges):
                expected[encode_bag_coloring([col[v] for v in x.bag], 2)] += 1
        assert st.entries(i) == dict(expected)


def _two_solution_instance():
    # one edge, colours {0,1}, allowed pairs (0,1) and (1,0)
    return hecsp(2, 2, [(0, 1)], {(0, 1): proper(2)})


def test_sampler_on_two_solutions():
    inst = _two_solution_instance()
    nd = nice(inst.graph)
    st = run_dp(inst, nd)
    first = sum(sample(inst, nd, s, st)[0] == 0 for s in range(10_000))
    assert 4700 <= first <= 5300


def test_sampler_reproducible():
    # each central tile and its 7 neighbours form an odd wheel, so 4 colours
    g = generate_tiling(TilingSpec(7, 3, 2))
    inst = HECSPInstance(g, 4, {e: proper(4) for e in g.edges})
    nd = nice(g)
    st = run_dp(inst, nd)
    assert st.total > 0
    assert sample(inst, nd, 42, st) == sample(inst, nd, 42, st)
    assert sample(inst, nd, 42) == sample(inst, nd, 42, st)


def test_sampler_uniform_chi_square():
    g = HypGraph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5), (0, 3)])
    inst = HECSPInstance(g, 3, {e: proper(3) for e in g.edges})
    sols = backtrack_edge_solutions(g.n, g.edges, inst.allows, inst.admissible)
    assert 2 < len(sols) <= 200
    nd = nice(g)
    st = run_dp(inst, nd)
    assert st.total == len(sols)
    freq = collections.Counter(tuple(sample(inst, nd, s, st)) for s in range(10_000))
    assert set(freq) <= set(map(tuple, sols))
    observed = [freq[tuple(s)] for s in sols]
    assert stats.chisquare(observed).pvalue > 0.001


def test_marginals_match_enumeration():
    g = HypGraph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)])
    inst = HECSPInstance(g, 3, {e: np.array([[1, 1, 0], [1, 0, 1], [0, 1, 1]], bool) for e in g.edges})
    sols = np.array(backtrack_edge_solutions(g.n, g.edges, inst.allows, inst.admissible))
    nd = nice(g)
    st = run_dp(inst, nd)
    draws = np.array([sample(inst, nd, s, st) for s in range(6000)])
    for v in range(g.n):
        for c in range(3):
            p = (sols[:, v] == c).mean()
            assert abs((draws[:, v] == c).mean() - p) < 0.03


def test_dp_rejects_mismatched_decomposition():
    inst = _two_solution_instance()
    other = HypGraph(2, [])
    with pytest.raises(ValueError):
        count(inst, nice(other))


def test_brute_force_refuses_large():
    inst = hecsp(30, 2, [], {})
    with pytest.raises(ValueError):
        brute_force_count(inst)


def test_pipeline_hlcsp_witness():
    g = generate_tiling(TilingSpec(7, 3, 1))
    two = ColorSet(["a", "b"])
    # centre and neighbours: each cell has at most one "b" neighbour
    inst = HLCSPInstance.from_predicate(g, two, lambda v, nb, t: sum(t[1:]) <= 1)
    prep = pipeline.prepare(inst, seeds=2)
    assert pipeline.count(prep) == len(enumerate_hlcsp(inst))
    w = pipeline.witness(prep)
    assert w is not None
    assert pipeline.sample(prep, 5) == pipeline.sample(prep, 5)


def test_marginals_exact():
    rng = seeded(77)
    for _ in range(80):
        n, k, edges, mats, adm = random_hecsp_data(rng, n_max=10)
        inst = hecsp(n, k, edges, mats, adm)
        sols = backtrack_edge_solutions(n, edges, inst.allows, adm)
        expected = [[sum(s[v] == j for s in sols) for j in range(k)] for v in range(n)]
        assert marginals(inst, nice(inst.graph)) == expected
    # big counts: proper 5-colourings of a 60-path, every colour equally likely at each vertex
    edges = [(i, i + 1) for i in range(59)]
    inst = hecsp(60, 5, edges, {e: proper(5) for e in edges})
    m = marginals(inst, nice(inst.graph))
    assert all(row == [4 ** 59] * 5 for row in m)
