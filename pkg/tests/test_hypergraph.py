import itertools

import numpy as np
import pytest

from palette_turan.bounds import star_palette
from palette_turan.exceptions import BudgetExceeded, GraphError
from palette_turan.hypergraph import (ThreeGraph, complete_graph, contains_copy, contains_copy_naive,
                                      rodl_construct, star, star_apex, subset_density_profile)


def test_star_shape():
    g = star(3)
    assert g.vertices == 4
    assert list(g.edges) == [(0, 1, 2), (0, 1, 3), (0, 2, 3)]
    assert star_apex(g) == (0, 3)


def test_star_apex_after_relabel():
    g = star(4).relabeled([2, 0, 1, 3, 4])
    assert star_apex(g) == (2, 4)
    assert star_apex(complete_graph(5)) is None
    assert star_apex(ThreeGraph(4)) is None


def test_edges_are_normalized_and_deduplicated():
    g = ThreeGraph(4, [(2, 1, 0)])
    assert list(g.edges) == [(0, 1, 2)]
    with pytest.raises(GraphError):
        ThreeGraph(4, [(0, 1, 2), (2, 1, 0)])
    with pytest.raises(GraphError):
        ThreeGraph(4, [(0, 1, 1)])
    with pytest.raises(GraphError):
        ThreeGraph(3, [(0, 1, 3)])


def test_round_trips(tmp_path):
    g = star(4)
    assert ThreeGraph.from_json(g.to_json()) == g
    assert ThreeGraph.from_text(g.to_text()) == g
    for name in ("g.json", "g.txt"):
        g.dump(tmp_path / name)
        assert ThreeGraph.load(tmp_path / name) == g


def test_rodl_is_reproducible():
    p = star_palette(3)
    a, b = rodl_construct(p, 12, 5), rodl_construct(p, 12, 5)
    assert a.graph == b.graph and a.coloring == b.coloring
    assert rodl_construct(p, 12, 6).coloring != a.coloring


def test_rodl_edges_follow_the_palette():
    p = star_palette(4)
    c = rodl_construct(p, 10, 1)
    for i, j, k in itertools.combinations(range(10), 3):
        t = (c.coloring[(i, j)], c.coloring[(i, k)], c.coloring[(j, k)])
        assert c.graph.has_edge(i, j, k) == (t in p)


def test_contains_copy_agrees_with_naive():
    rng = np.random.default_rng(11)
    patterns = [star(2), star(3), complete_graph(4), ThreeGraph(4, [(0, 1, 2), (1, 2, 3)])]
    for _ in range(40):
        n = int(rng.integers(4, 8))
        triples = list(itertools.combinations(range(n), 3))
        keep = rng.random(len(triples)) < rng.random()
        host = ThreeGraph(n, [t for t, k in zip(triples, keep) if k])
        for pat in patterns:
            fast, slow = contains_copy(host, pat), contains_copy_naive(host, pat)
            assert fast == slow


def test_copy_guard():
    with pytest.raises(BudgetExceeded):
        contains_copy(complete_graph(12), star(10))


def test_subset_profile_seeded():
    g = rodl_construct(star_palette(3), 20, 2).graph
    a = subset_density_profile(g, 20, seed=4)
    assert a == subset_density_profile(g, 20, seed=4)
    assert all(0 <= s.min_density <= s.mean_density <= 1 for s in a)
