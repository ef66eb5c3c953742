import itertools

import numpy as np
import pytest

from palette_turan.admit import check_certificate, decide_admission
from palette_turan.bounds import star_palette
from palette_turan.digraph import (ColorDigraph, Digraph, LoopVerdict, build_digraph, max_transitive_tournament,
                                   max_tt_bruteforce, random_digraph, star_admission, verify_lemma4)
from palette_turan.exceptions import BudgetExceeded
from palette_turan.hypergraph import star
from palette_turan.palette import Palette, random_palette


def test_star3_digraph_arcs():
    d = build_digraph(star_palette(3))
    assert isinstance(d, ColorDigraph)
    assert d.arcs == [(0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)]


def test_loop_detected():
    assert isinstance(build_digraph(Palette(2, [(1, 0, 0)])), LoopVerdict)
    assert isinstance(build_digraph(Palette(2, [(0, 0, 1)])), LoopVerdict)


def test_loop_gives_certificate_for_every_star():
    p = Palette(2, [(1, 0, 0)])
    for k in range(2, 7):
        v = star_admission(p, k)
        assert v.admits and v.method == "digraph-loop"
        assert check_certificate(star(k), p, v.certificate)


def test_tt_recognition():
    d = Digraph(3, [(0, 1), (1, 2), (0, 2)])
    assert d.is_transitive_tournament([0, 1, 2])
    assert not d.is_transitive_tournament([2, 1, 0])
    assert max_transitive_tournament(d)[0] == 3
    cyc = Digraph(3, [(0, 1), (1, 2), (2, 0)])
    assert max_transitive_tournament(cyc)[0] == 2


def test_max_tt_matches_subset_oracle():
    rng = np.random.default_rng(17)
    for _ in range(100):
        d = random_digraph(int(rng.integers(1, 11)), rng)
        size, w = max_transitive_tournament(d)
        assert size == max_tt_bruteforce(d)
        assert d.is_transitive_tournament(w.vertices) and len(w) == size


def test_tt_guard():
    with pytest.raises(BudgetExceeded):
        max_transitive_tournament(Digraph(10), max_vertices=8)


@pytest.mark.parametrize("k", range(3, 9))
def test_star_palette_is_tight(k):
    p = star_palette(k)
    no = star_admission(p, k)
    assert not no.admits and no.max_tt == k - 1
    yes = star_admission(p, k - 1)
    assert yes.admits and check_certificate(star(k - 1), p, yes.certificate)


def test_star_route_matches_general_search():
    rng = np.random.default_rng(23)
    for _ in range(100):
        p = random_palette(int(rng.integers(1, 4)), rng)
        k = int(rng.integers(2, 5))
        assert star_admission(p, k).admits == decide_admission(star(k), p).admits


def test_lemma4_on_random_digraphs():
    rng = np.random.default_rng(29)
    for _ in range(60):
        d = random_digraph(int(rng.integers(2, 12)), rng)
        size, _ = max_transitive_tournament(d)
        r = verify_lemma4(d, size + 1)
        assert r.applicable and r.passed


def test_exports():
    d = build_digraph(star_palette(3))
    assert d.to_json()["n"] == 2
    assert "digraph" in d.to_dot()
