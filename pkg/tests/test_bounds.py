from fractions import Fraction

import numpy as np
import pytest

from palette_turan import bounds
from palette_turan.bounds import (FAIL, chain_verify, f1, f1_expanded, f1_range, final_identity, g1,
                                  g1_expanded, g1_range, random_profile_value, refine_k, star_palette,
                                  star_palette_density, star_palette_size, thresholds, verify_claim3,
                                  verify_claim4, verify_lemma3)
from palette_turan.palette import density, minimality_reduce, random_palette, removable_color


@pytest.mark.parametrize("k", [3, 4, 5, 10, 31])
def test_star_palette_counts(k):
    p = star_palette(k)
    n = k - 1
    assert p.size == star_palette_size(k) == n * (n * n - 3 * n + 3)
    assert density(p) == star_palette_density(k) == Fraction(k * k - 5 * k + 7, (k - 1) ** 2)
    assert final_identity(k)


def test_star_palette_is_minimal():
    for k in range(3, 12):
        assert removable_color(star_palette(k)) is None


def test_star_palette_3_has_two_triples():
    assert star_palette(3).triples == [(0, 1, 0), (1, 0, 1)]


def test_thresholds():
    assert thresholds() == (48, 30)


def test_lemma3_random():
    rng = np.random.default_rng(1)
    for _ in range(300):
        r = verify_lemma3(random_palette(int(rng.integers(1, 6)), rng))
        assert r.passed and r.counting_passed


def _rationals(rng, low, k, count=100):
    return [low + Fraction(int(v), 997) for v in rng.integers(0, 997 * 4 * (k - 1), size=count)]


@pytest.mark.parametrize("k", [4, 10, 31, 48, 100])
def test_transcription_guard(k):
    """Composed, expanded and factored forms agree at random rationals on both sides of the range."""
    rng = np.random.default_rng(k)
    for x in _rationals(rng, Fraction(1, 997), k):
        assert f1(k, x) == f1_expanded(k, x)
        assert g1(k, x) == g1_expanded(k, x)
        verify_claim3(k, x)
        verify_claim4(k, x)


@pytest.mark.parametrize("k", [31, 48, 100])
def test_claims_hold_in_range(k):
    rng = np.random.default_rng(k)
    for x in _rationals(rng, f1_range(k), k):
        c = verify_claim3(k, x)
        assert c.applicable and c.holds
    for x in _rationals(rng, g1_range(k), k):
        c = verify_claim4(k, x)
        assert c.applicable and c.holds


def test_claims_below_range_are_inapplicable():
    assert not verify_claim3(10, 1).applicable
    assert not verify_claim4(10, Fraction(1, 2)).applicable
    with pytest.raises(ValueError):
        verify_claim3(3, 5)


@pytest.mark.parametrize("k", [48, 60])
def test_chain_on_star_palette(k):
    rep = chain_verify(minimality_reduce(star_palette(k)), k)
    assert rep.complete and rep.equality


def test_chain_on_random_palettes_never_fails():
    rng = np.random.default_rng(2)
    for _ in range(100):
        p = minimality_reduce(random_palette(int(rng.integers(1, 5)), rng, fill=0.6 + 0.4 * rng.random()))
        k = int(rng.integers(4, 9))
        rep = chain_verify(p, k)
        assert rep.passed, [s for s in rep.steps if s.status == FAIL]


def test_refined_verdicts():
    assert refine_k(48).verdict == "holds"
    v = refine_k(40)
    assert v.verdict == "fails" and v.excess > 0
    x1, x2, w = v.witness
    mean = Fraction(39)
    assert x1 >= bounds.ma_floor(40) and w * x1 + (1 - w) * x2 == mean


def test_random_profiles_never_beat_the_two_point_optimum():
    rng = np.random.default_rng(8)
    for k in (35, 40, 48):
        best = refine_k(k).best_value
        for _ in range(30):
            assert random_profile_value(k, rng, 6) <= best
