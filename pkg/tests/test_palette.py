from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from palette_turan.exceptions import NotMinimalError, PaletteError
from palette_turan.palette import (Palette, density, good_pairs, minimality_reduce, random_palette,
                                   remove_color, removable_color, triples_touching, verify_claim1)


def palettes(max_colors=4):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_colors))
        cells = draw(st.lists(st.booleans(), min_size=n**3, max_size=n**3))
        return Palette.from_mask(np.array(cells, dtype=bool).reshape((n,) * 3))
    return build()


def test_density_is_exact():
    p = Palette(2, [(0, 1, 0), (1, 0, 1)])
    assert density(p) == Fraction(1, 4)
    assert density(Palette.complete(3)) == 1
    assert density(Palette.empty(3)) == 0


def test_zero_colors_has_no_density():
    with pytest.raises(PaletteError):
        density(Palette(0))


def test_duplicate_and_out_of_range_triples_rejected():
    with pytest.raises(PaletteError):
        Palette(2, [(0, 0, 0), (0, 0, 0)])
    with pytest.raises(PaletteError):
        Palette(2, [(0, 2, 0)])


def test_good_pairs_small_case():
    t = good_pairs(Palette(2, [(0, 1, 0)]))
    assert t.pairs(1, 2) == [(0, 1)]
    assert t.pairs(1, 3) == [(0, 0)]
    assert t.pairs(2, 3) == [(1, 0)]
    assert t.pairs(2, 1) == [(1, 0)]
    assert list(t.degree(1, 2)) == [1, 0]


@given(palettes())
def test_good_pairs_match_definition(p):
    t = good_pairs(p)
    triples = p.triples
    for i, j in [(1, 2), (1, 3), (2, 3), (2, 1), (3, 1), (3, 2)]:
        expected = sorted({(x[i - 1], x[j - 1]) for x in triples})
        assert t.pairs(i, j) == expected


@given(palettes())
def test_triples_touching_counts(p):
    counts = triples_touching(p)
    for a in range(p.colors):
        assert counts[a] == sum(1 for x in p.triples if a in x)


@given(palettes())
@settings(max_examples=200)
def test_reduction_never_lowers_density_and_ends_minimal(p):
    r = minimality_reduce(p)
    assert density(r) >= density(p)
    assert removable_color(r) is None


def test_remove_color_relabels():
    p = Palette(3, [(0, 1, 2), (2, 2, 2), (1, 1, 1)])
    r = remove_color(p, 1)
    assert r.palette == Palette(2, [(1, 1, 1)])
    assert r.relabel == {0: 0, 2: 1}


def test_one_color_palette_is_not_reduced():
    p = Palette(1, [(0, 0, 0)])
    assert minimality_reduce(p) == p


def test_claim1_needs_minimal_input():
    p = Palette(2, [(0, 0, 0)])
    with pytest.raises(NotMinimalError):
        verify_claim1(p)


def test_claim1_random():
    rng = np.random.default_rng(3)
    for _ in range(200):
        report = verify_claim1(minimality_reduce(random_palette(int(rng.integers(1, 6)), rng)))
        assert report.passed


@given(palettes(), st.randoms())
def test_permuted_preserves_density(p, r):
    perm = list(range(p.colors))
    r.shuffle(perm)
    q = p.permuted(perm)
    assert density(q) == density(p)
    assert len(q) == len(p)


@given(palettes())
def test_json_and_text_round_trip(p):
    assert Palette.from_json(p.to_json()) == p
    assert Palette.from_text(p.to_text()) == p


def test_dump_load(tmp_path):
    p = Palette(2, [(0, 1, 0), (1, 0, 1)])
    for name in ("p.json", "p.txt"):
        p.dump(tmp_path / name)
        assert Palette.load(tmp_path / name) == p


def test_text_with_duplicate_triple_rejected():
    with pytest.raises(PaletteError):
        Palette.from_text("palette 2\n0 1 0\n0 1 0\n")


def test_mask_is_read_only():
    p = Palette(2, [(0, 1, 0)])
    with pytest.raises(ValueError):
        p.mask[0, 0, 0] = True
