import math

import mpmath
import numpy as np
import pytest

from hypcsp import geometry as geo
from hypcsp.tessellation import (HypGraph, TilingSpec, degree_bound, generate_tiling, natural_params,
                                 ring_counts, validate_embedding, validated)
from oracles import exact_heptagonal_tiling


def test_tiling_spec_rejects_bad_input():
    with pytest.raises(ValueError):
        TilingSpec(4, 4, 2)
    with pytest.raises(ValueError):
        TilingSpec(6, 3, 1)
    with pytest.raises(ValueError):
        TilingSpec(7, 3, 9)
    with pytest.raises(ValueError):
        TilingSpec(2, 9, 1)


def test_small_tilings():
    g0 = generate_tiling(TilingSpec(7, 3, 0))
    assert g0.n == 1 and g0.edges == ()
    g1 = generate_tiling(TilingSpec(7, 3, 1))
    assert g1.n == 8
    assert g1.degree(0) == 7
    # the central tile's neighbours also share edges pairwise around it
    assert len(g1.edges) == 14
    assert np.allclose(g1.positions[0], [0, 0, 1])


def test_ring_populations_match_exact_group_enumeration():
    counts, n_edges = exact_heptagonal_tiling(5)
    assert counts == [1, 7, 21, 56, 147, 385]
    assert ring_counts(TilingSpec(7, 3, 5)) == counts
    assert len(generate_tiling(TilingSpec(7, 3, 5)).edges) == n_edges


def test_growth_and_planarity():
    sizes = [generate_tiling(TilingSpec(7, 3, r)).n for r in range(7)]
    for r in range(2, 6):
        assert sizes[r + 1] / sizes[r] >= 1.5
    for r in range(2, 6):
        g = generate_tiling(TilingSpec(7, 3, r))
        assert len(g.edges) <= 3 * g.n - 6


def test_natural_params():
    r, d, edge = natural_params(7, 3)
    assert math.cos(math.pi / 7) / math.sin(math.pi / 3) > 1
    assert edge > 0
    with pytest.raises(ValueError):
        natural_params(4, 4)
    g = generate_tiling(TilingSpec(7, 3, 2))
    s = r / 0.9
    for u, v in g.edges:
        assert geo.dist(g.positions[u], g.positions[v]) == pytest.approx(s, abs=1e-6)


def test_degree_bound():
    mpmath.mp.dps = 30
    expected = int(mpmath.floor((mpmath.cosh(2.5) - 1) / (mpmath.cosh(0.5) - 1)))
    assert expected == 40
    assert degree_bound(1, 2) == 40
    for x in (0.3, 1.0, 2.5):
        assert degree_bound(x, x) >= 1
    with pytest.raises(ValueError):
        degree_bound(0, 1)


def test_validate_detects_close_vertices():
    pts = [geo.ORIGIN.coords, geo.HypPoint.from_polar(0.1, 0).coords]
    rep = validate_embedding(HypGraph(2, [], pts, r=1.0, d=2.0))
    assert not rep.ok
    assert rep.violations[0].kind == "vertex-separation"
    assert rep.violations[0].value == pytest.approx(0.1)


def test_validate_single_vertex():
    g = HypGraph(1, [], [geo.ORIGIN.coords], r=0.5, d=0.7)
    assert validate_embedding(g).ok


def test_validate_long_edge_and_crossing_and_clearance():
    quad = [geo.HypPoint.from_polar(1.0, t).coords for t in (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)]
    g = HypGraph(4, [(0, 2), (1, 3)], quad, r=0.5, d=1.5)
    kinds = {v.kind for v in validate_embedding(g).violations}
    assert "edge-length" in kinds and "edge-crossing" in kinds
    # vertex 2 sits on the edge 0-1
    pts = [geo.HypPoint.from_polar(1.0, 0).coords, geo.HypPoint.from_polar(1.0, math.pi).coords, geo.ORIGIN.coords]
    g = HypGraph(3, [(0, 1)], pts, r=0.5, d=3.0)
    kinds = [v.kind for v in validate_embedding(g).violations]
    assert kinds == ["edge-vertex-clearance"]


@pytest.mark.parametrize("pq", [(7, 3), (5, 4), (4, 5), (3, 7), (8, 3)])
def test_tilings_validate(pq):
    g = generate_tiling(TilingSpec(*pq, 3))
    assert validate_embedding(g).ok
    assert validated(g).validated
    assert g.max_degree() <= degree_bound(g.r, g.d)


def test_pruned_validation_agrees_with_brute_force():
    g = generate_tiling(TilingSpec(7, 3, 2))
    rng = np.random.default_rng(0)
    for _ in range(5):
        pos = g.positions + rng.normal(scale=0.25, size=g.positions.shape)
        pos[:, 2] = np.sqrt(1 + pos[:, 0] ** 2 + pos[:, 1] ** 2)
        h = HypGraph(g.n, g.edges, pos, g.r, g.d)
        fast = sorted(map(str, validate_embedding(h).violations))
        slow = sorted(map(str, validate_embedding(h, brute=True).violations))
        assert fast == slow
        assert fast  # the jitter is large enough to break something


def test_removing_tiles_keeps_validity():
    full = generate_tiling(TilingSpec(7, 3, 3))
    g = generate_tiling(TilingSpec(7, 3, 3, frozenset(range(10, 40, 3))))
    assert g.n == full.n - 10
    assert validate_embedding(g).ok
    with pytest.raises(ValueError):
        generate_tiling(TilingSpec(7, 3, 1, frozenset([99])))


def test_graph_well_formedness():
    with pytest.raises(ValueError):
        HypGraph(2, [(0, 0)])
    with pytest.raises(ValueError):
        HypGraph(2, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        HypGraph(2, [(0, 2)])
