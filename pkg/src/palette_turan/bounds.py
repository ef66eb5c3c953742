"""The star lower-bound construction and the exact-rational upper-bound chain.

Everything here is computed with :class:`fractions.Fraction`. The per-color
statistics are

* ``mA = max(e23, e32)``, ``mC = max(e12, e21)``,
* ``mB = mA + e13``, ``mD = mC + e31``,
* ``MA = 1/(1-mA)``, ``MC = 1/(1-mC)``, ``MB = 1/(2-mB)``, ``MD = 1/(2-mD)``,

where ``eij(a)`` is the fraction of colors ``b`` such that ``(a, b)`` occurs
at positions ``(i, j)`` of some admissible triple.

The refined threshold search at the bottom asks, for each ``k``, whether

    sup  mean_a f1(x_a)   subject to   x_a >= L(k),  mean_a x_a <= k - 1

stays at or below ``(k-3)^2 / (2k-2)^2``. One linear moment constraint means
the supremum over distributions is attained on at most two support points,
so only two-point profiles are searched. "holds" verdicts come from an exact
supporting line; "fails" verdicts from an exact two-point profile.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .digraph import LoopVerdict, build_digraph, verify_lemma4
from .exceptions import InvariantViolation
from .palette import (POSITION_PAIRS, Palette, density, good_pairs, removable_color,
                      verify_claim1)

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


# -- the construction --------------------------------------------------------

def star_palette(k: int) -> Palette:
    """Colors ``0..k-2``; ``(x, y, z)`` admissible iff ``x != y``, ``y != z`` and ``z != x+1 (mod k-1)``."""
    if k < 3:
        raise ValueError("the star palette needs k >= 3")
    n = k - 1
    x, y, z = np.ogrid[:n, :n, :n]
    return Palette.from_mask((x != y) & (y != z) & (z != (x + 1) % n))


def star_palette_density(k: int) -> Fraction:
    return Fraction(k * k - 5 * k + 7, (k - 1) ** 2)


def star_palette_size(k: int) -> int:
    n = k - 1
    return n * (n * n - 3 * n + 3)


def final_identity(k: int) -> bool:
    """``1/4 + 3(k-3)^2 / (4(k-1)^2)`` equals the construction's density."""
    return QUARTER + Fraction(3 * (k - 3) ** 2, 4 * (k - 1) ** 2) == star_palette_density(k)


# -- inclusion-exclusion bound ----------------------------------------------

@dataclass(frozen=True)
class Lemma3Report:
    passed: bool
    density: Fraction
    bound: Fraction
    admissible: int
    excluded: tuple[int, int, int]          # |X1|, |X2|, |X3|
    overlaps: tuple[int, int, int]          # |X1&X2|, |X1&X3|, |X2&X3|
    counting_bound: int
    counting_passed: bool


def lemma3_bound(p: Palette) -> Fraction:
    """``1/4 + 1/(2n) * sum_a sum_{i != j} (eij(a) - 1/2)^2``."""
    n = p.colors
    table = good_pairs(p)
    total = Fraction(0)
    for i, j in POSITION_PAIRS:
        for deg in table.degree(i, j):
            total += (Fraction(int(deg), n) - HALF) ** 2
    return QUARTER + total / (2 * n)


def verify_lemma3(p: Palette) -> Lemma3Report:
    """Check the density bound and the counting inequality it rests on.

    ``X1`` holds the triples ``(a, b, c)`` such that no ``(d, b, c)`` is
    admissible; ``X2`` and ``X3`` vary the second and third entry instead.
    """
    n = p.colors
    m = p.mask
    x1 = np.broadcast_to(~m.any(axis=0)[None, :, :], m.shape)
    x2 = np.broadcast_to(~m.any(axis=1)[:, None, :], m.shape)
    x3 = np.broadcast_to(~m.any(axis=2)[:, :, None], m.shape)
    sizes = tuple(int(x.sum()) for x in (x1, x2, x3))
    overlaps = (int((x1 & x2).sum()), int((x1 & x3).sum()), int((x2 & x3).sum()))
    counting = n**3 - sum(sizes) + sum(overlaps)

    # the same count through bad degrees; must agree exactly
    table = good_pairs(p)
    bad = {ij: table.bad_degree(*ij).astype(object) for ij in POSITION_PAIRS}
    via_degrees = (n**3 - Fraction(n, 2) * sum(int(b.sum()) for b in bad.values())
                   + int((bad[(1, 2)] * bad[(1, 3)] + bad[(2, 1)] * bad[(2, 3)]
                          + bad[(3, 1)] * bad[(3, 2)]).sum()))
    if via_degrees != counting:
        raise InvariantViolation(f"bad-degree count {via_degrees} != direct count {counting}")

    d = density(p)
    bound = lemma3_bound(p)
    if Fraction(counting, n**3) > bound:
        raise InvariantViolation("counting bound exceeds the squared-deviation bound")
    return Lemma3Report(d <= bound and p.size <= counting, d, bound, p.size, sizes, overlaps,
                        counting, p.size <= counting)


# -- the local functions and tangent lines -----------------------------------

def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def f(k: int, x) -> Fraction:
    """``(x - 1/2)^2 + 4((k-2)/(k-1) - x)^2``"""
    x = _q(x)
    return (x - HALF) ** 2 + 4 * (Fraction(k - 2, k - 1) - x) ** 2


def g(k: int, x) -> Fraction:
    """``(x - 1)^2 / 2 + 4((k-2)/(k-1) - x/2)^2``"""
    x = _q(x)
    return (x - 1) ** 2 / 2 + 4 * (Fraction(k - 2, k - 1) - x / 2) ** 2


def f1(k: int, x) -> Fraction:
    """``f(1 - 1/x)``"""
    return f(k, 1 - 1 / _q(x))


def g1(k: int, x) -> Fraction:
    """``g(2 - 1/x)``"""
    return g(k, 2 - 1 / _q(x))


def f1_expanded(k: int, x) -> Fraction:
    x = _q(x)
    return 5 / x**2 - Fraction(k + 7, k - 1) / x + Fraction(4, (k - 1) ** 2) + QUARTER


def g1_expanded(k: int, x) -> Fraction:
    x = _q(x)
    return Fraction(3, 2) / x**2 - Fraction(k + 3, k - 1) / x + Fraction(4, (k - 1) ** 2) + HALF


def f1_tangent(k: int, x) -> Fraction:
    return Fraction(k - 3, (k - 1) ** 3) * _q(x) + Fraction(k * k - 10 * k + 21, (2 * k - 2) ** 2)


def g1_tangent(k: int, x) -> Fraction:
    return Fraction(4 * k - 12, (k - 1) ** 3) * _q(x) + Fraction(k * k - 10 * k + 21, 2 * (k - 1) ** 2)


def f1_cubic(k: int, x) -> Fraction:
    x = _q(x)
    return (x - (k - 1)) ** 2 * ((k - 3) * x - 5 * (k - 1))


def g1_cubic(k: int, x) -> Fraction:
    x = _q(x)
    return (2 * x - (k - 1)) ** 2 * ((2 * k - 6) * x - 3 * (k - 1))


def f1_range(k: int) -> Fraction:
    return Fraction(5 * (k - 1), k - 3)


def g1_range(k: int) -> Fraction:
    return Fraction(3 * (k - 1), 2 * k - 6)


def f1_target(k: int) -> Fraction:
    """``(k-3)^2 / (2k-2)^2``, the per-color average the f-side may not exceed."""
    return Fraction((k - 3) ** 2, (2 * k - 2) ** 2)


def g1_target(k: int) -> Fraction:
    return Fraction((k - 3) ** 2, (k - 1) ** 2)


@dataclass(frozen=True)
class ClaimCheck:
    applicable: bool
    holds: Optional[bool]
    value: Fraction
    line: Fraction
    cubic: Fraction


def _claim(k: int, x, func, expanded, line, cubic, low, scale: int) -> ClaimCheck:
    if k < 4:
        raise ValueError("the tangent bounds need k >= 4")
    x = _q(x)
    value, bound, c = func(k, x), line(k, x), cubic(k, x)
    if value != expanded(k, x):
        raise InvariantViolation(f"composed and expanded forms disagree at k={k}, x={x}")
    if (bound - value) * scale * x**2 * (k - 1) ** 3 != c:
        raise InvariantViolation(f"factored form disagrees with the bound at k={k}, x={x}")
    if x < low(k):
        return ClaimCheck(False, None, value, bound, c)
    return ClaimCheck(True, value <= bound, value, bound, c)


def verify_claim3(k: int, x) -> ClaimCheck:
    """``f1(x)`` lies below its tangent line at ``x = k-1`` for ``x >= 5(k-1)/(k-3)``."""
    return _claim(k, x, f1, f1_expanded, f1_tangent, f1_cubic, f1_range, 1)


def verify_claim4(k: int, x) -> ClaimCheck:
    """``g1(x)`` lies below its tangent line at ``x = (k-1)/2`` for ``x >= 3(k-1)/(2k-6)``."""
    return _claim(k, x, g1, g1_expanded, g1_tangent, g1_cubic, g1_range, 2)


def ma_floor(k: int) -> Fraction:
    """Lower bound ``(k-1)^2 / (9(k-2))`` on ``MA`` when the density is at least the target."""
    return Fraction((k - 1) ** 2, 9 * (k - 2))


def mb_floor(k: int) -> Fraction:
    return Fraction((k - 1) ** 2, 18 * (k - 2))


def _least_from(pred, start: int, limit: int) -> int:
    good = None
    for k in range(limit, start - 1, -1):
        if pred(k):
            good = k
        else:
            break
    if good is None:
        raise ValueError("condition fails at the scan limit")
    return good


def thresholds(limit: int = 2000) -> tuple[int, int]:
    """Least ``k`` from which each range condition holds for every k up to ``limit``."""
    k_star = _least_from(lambda k: ma_floor(k) >= f1_range(k), 4, limit)
    k_g = _least_from(lambda k: mb_floor(k) >= g1_range(k), 4, limit)
    return k_star, k_g


# -- the full chain ------------------------------------------------------------

@dataclass(frozen=True)
class ColorStats:
    colors: int
    e: dict          # (i, j) -> list of Fractions per color
    mA: list
    mB: list
    mC: list
    mD: list
    MA: list         # None where the denominator is not positive
    MB: list
    MC: list
    MD: list


def _inv(c: Fraction, x: Fraction) -> Optional[Fraction]:
    return 1 / (c - x) if x < c else None


def color_stats(p: Palette) -> ColorStats:
    n = p.colors
    table = good_pairs(p)
    e = {ij: [Fraction(int(v), n) for v in table.degree(*ij)] for ij in POSITION_PAIRS}
    mA = [max(a, b) for a, b in zip(e[(2, 3)], e[(3, 2)])]
    mC = [max(a, b) for a, b in zip(e[(1, 2)], e[(2, 1)])]
    mB = [a + b for a, b in zip(mA, e[(1, 3)])]
    mD = [a + b for a, b in zip(mC, e[(3, 1)])]
    return ColorStats(n, e, mA, mB, mC, mD,
                      [_inv(1, v) for v in mA], [_inv(2, v) for v in mB],
                      [_inv(1, v) for v in mC], [_inv(2, v) for v in mD])


PASS, FAIL, INAPPLICABLE, DEGENERATE = "pass", "fail", "inapplicable", "degenerate"


@dataclass
class ChainStep:
    name: str
    status: str
    values: dict = field(default_factory=dict)
    note: str = ""


@dataclass
class ChainReport:
    k: int
    density: Fraction
    target: Fraction
    steps: list = field(default_factory=list)
    final_bound: Optional[Fraction] = None

    @property
    def step(self) -> dict:
        return {s.name: s for s in self.steps}

    @property
    def passed(self) -> bool:
        """No step failed. Inapplicable or degenerate steps do not count as failures."""
        return all(s.status != FAIL for s in self.steps)

    @property
    def complete(self) -> bool:
        """Every step passed, so the final bound is established."""
        return bool(self.steps) and all(s.status == PASS for s in self.steps)

    @property
    def equality(self) -> bool:
        return self.final_bound is not None and self.density == self.final_bound == self.target

    def add(self, name: str, status: str, note: str = "", **values) -> ChainStep:
        s = ChainStep(name, status, values, note)
        self.steps.append(s)
        return s


def chain_verify(p: Palette, k: int) -> ChainReport:
    """Replay the upper-bound argument on one palette in exact arithmetic.

    Each step is recorded as pass, fail, inapplicable (its hypotheses do not
    hold for this palette) or degenerate (a reciprocal is undefined). A fail
    on a palette satisfying the hypotheses means a bug.
    """
    n = p.colors
    d = density(p)
    target = star_palette_density(k)
    rep = ChainReport(k, d, target)

    removable = removable_color(p)
    if removable is not None:
        rep.add("minimal", INAPPLICABLE, f"color {removable} is removable")
        return rep
    rep.add("minimal", PASS)

    c1 = verify_claim1(p)
    rep.add("claim1", PASS if c1.passed else FAIL, bound=c1.bound, min_ratio=c1.min_ratio)

    st = color_stats(p)
    low = 3 * d - 2
    ok = (all(v >= low for v in st.mA + st.mC) and all(v >= 2 * low for v in st.mB + st.mD))
    rep.add("degree-floors", PASS if ok else FAIL, mA_floor=low, mB_floor=2 * low)

    for name, vals in (("MA", st.MA), ("MB", st.MB), ("MC", st.MC), ("MD", st.MD)):
        bad = [a for a, v in enumerate(vals) if v is None]
        if bad:
            rep.add("reciprocals", DEGENERATE, f"{name} undefined at color {bad[0]}")
            return rep
    rep.add("reciprocals", PASS)

    dg = build_digraph(p)
    if isinstance(dg, LoopVerdict):
        rep.add("loop-free", INAPPLICABLE, f"loop triple {dg.triple}: every star admits the palette")
        return rep
    rep.add("loop-free", PASS)

    budget = max(128, dg.vertices)
    limit = (k - 1) * n
    for name, graph, vals in (("ineq1-side1", dg.side_graph(1), st.MA),
                              ("ineq1-side2", dg.side_graph(2), st.MC),
                              ("ineq2", dg, [a + b for a, b in zip(st.MB, st.MD)])):
        total = sum(vals, Fraction(0))
        lemma = verify_lemma4(graph, k, max_vertices=budget)
        if not lemma.applicable:
            rep.add(name, INAPPLICABLE, f"transitive tournament of size {lemma.max_tt} present",
                    total=total)
            continue
        if lemma.total * n != total:
            raise InvariantViolation(f"{name}: degree sum does not match the reciprocal statistics")
        rep.add(name, PASS if lemma.passed and total <= limit else FAIL,
                total=total, limit=Fraction(limit), max_tt=lemma.max_tt)

    lemma3 = lemma3_bound(p)
    rep.add("lemma3", PASS if d <= lemma3 else FAIL, bound=lemma3)

    collapsed = QUARTER + sum(
        (2 * (st.mA[a] - HALF) ** 2 + (st.mB[a] - st.mA[a] - HALF) ** 2
         + 2 * (st.mC[a] - HALF) ** 2 + (st.mD[a] - st.mC[a] - HALF) ** 2 for a in range(n)),
        Fraction(0)) / (2 * n)
    if lemma3 <= collapsed:
        rep.add("ineq3", PASS, bound=collapsed)
    else:
        premise = all(v >= HALF for vals in st.e.values() for v in vals)
        rep.add("ineq3", FAIL if premise else INAPPLICABLE,
                "" if premise else "some good-pair ratio is below 1/2", bound=collapsed)

    ok = True
    for a in range(n):
        for x, y in ((st.mA[a], st.mB[a]), (st.mC[a], st.mD[a])):
            lhs = 2 * (x - HALF) ** 2 + (y - x - HALF) ** 2
            mid = (x - HALF) ** 2 + (y - 1) ** 2 / 2 + 2 * (x - y / 2) ** 2
            if lhs != mid:
                raise InvariantViolation("square completion identity failed")
            ok &= lhs <= f(k, x) + g(k, y)
    rep.add("ineq4", PASS if ok else FAIL)

    fsum = sum((f(k, st.mA[a]) + f(k, st.mC[a]) + g(k, st.mB[a]) + g(k, st.mD[a])
                for a in range(n)), Fraction(0))
    via_recip = sum((f1(k, st.MA[a]) + f1(k, st.MC[a]) + g1(k, st.MB[a]) + g1(k, st.MD[a])
                     for a in range(n)), Fraction(0))
    if fsum != via_recip:
        raise InvariantViolation("f/g sums disagree with f1/g1 sums")
    bound5 = QUARTER + fsum / (2 * n)
    rep.add("ineq5", PASS if collapsed <= bound5 else FAIL, bound=bound5)

    rep.add("ma-floor", PASS if d < target or 1 / (3 - 3 * d) >= ma_floor(k) else FAIL,
            note="density below target" if d < target else "", floor=ma_floor(k))

    sides_ok = True
    for name, vals, func, line, rng, tgt, key in (
            ("ineq6", st.MA, f1, f1_tangent, f1_range(k), f1_target(k), "ineq1-side1"),
            ("ineq7", st.MC, f1, f1_tangent, f1_range(k), f1_target(k), "ineq1-side2"),
            ("ineq8", [v for pair in zip(st.MB, st.MD) for v in pair], g1, g1_tangent,
             g1_range(k), g1_target(k), "ineq2")):
        if k < 4 or min(vals) < rng or rep.step[key].status != PASS:
            sides_ok = False
            rep.add(name, INAPPLICABLE, "values below the tangent range or missing moment bound",
                    min_value=min(vals), range=rng)
            continue
        total = sum((func(k, v) for v in vals), Fraction(0))
        per_color = all(func(k, v) <= line(k, v) for v in vals)
        lin = sum((line(k, v) for v in vals), Fraction(0))
        rep.add(name, PASS if per_color and total <= lin <= n * tgt else FAIL,
                total=total, bound=n * tgt)

    if not sides_ok:
        rep.add("final", INAPPLICABLE, "some tangent step did not apply")
        return rep
    rep.final_bound = bound5
    closing = QUARTER + Fraction(3 * (k - 3) ** 2, 4 * (k - 1) ** 2)
    status = PASS if d <= bound5 <= closing and final_identity(k) else FAIL
    rep.add("final", status, bound=bound5, target=target, equality=(d == bound5 == target))
    return rep


# -- refined threshold ---------------------------------------------------------

@dataclass
class RefinedVerdict:
    k: int
    verdict: str                       # "holds", "fails" or "unknown"
    floor: Fraction                    # L(k)
    tangent_range: Fraction            # 5(k-1)/(k-3)
    target: Fraction
    best_value: Fraction               # largest two-point average found
    witness: Optional[tuple] = None    # (x1, x2, weight on x1)
    evaluations: int = 0

    @property
    def excess(self) -> Fraction:
        return self.best_value - self.target


@dataclass
class RefinedResult:
    k_low: int
    k_high: int
    least: Optional[int]
    verdicts: list

    def by_k(self, k: int) -> RefinedVerdict:
        return next(v for v in self.verdicts if v.k == k)


def two_point_value(k: int, x1: Fraction, x2: Fraction, mean: Fraction) -> Fraction:
    """Average of f1 over the two-point profile on ``x1 <= mean <= x2`` with the given mean."""
    if x1 == x2:
        return f1(k, x1)
    w = (x2 - mean) / (x2 - x1)
    return w * f1(k, x1) + (1 - w) * f1(k, x2)


def _grid(lo: Fraction, hi: Fraction, steps: int) -> list:
    return [lo + (hi - lo) * Fraction(i, steps) for i in range(steps + 1)]


def _above(mean: Fraction, scale: Fraction, depth: int) -> list:
    return [mean + scale / 2**j for j in range(depth)] + [mean + scale * j for j in range(2, 40)]


def refine_k(k: int, grid: int = 24, depth: int = 48, rounds: int = 6) -> RefinedVerdict:
    """Decide the two-point problem at one ``k``.

    ``holds``: the tangent of f1 at ``k-1`` (the only possible supporting line
    there, since f1 is smooth) dominates f1 on ``[L, oo)``; by the factored
    form this is exactly the sign of ``(k-3)L - 5(k-1)``.
    ``fails``: an exact two-point profile beats the target.
    """
    mean = Fraction(k - 1)
    floor = ma_floor(k)
    target = f1_target(k)
    if f1(k, mean) != target:
        raise InvariantViolation("f1 at k-1 must equal the target")
    rng = f1_range(k)
    if (k - 3) * floor - 5 * (k - 1) >= 0:
        return RefinedVerdict(k, "holds", floor, rng, target, target, evaluations=0)
    if floor >= mean:
        return RefinedVerdict(k, "holds", floor, rng, target, target)

    evals = 0
    best = (target, None)
    lows = _grid(floor, mean, grid)
    highs = _above(mean, mean, depth)
    for _ in range(rounds):
        for x1 in lows:
            for x2 in highs:
                if x1 >= mean or x2 <= mean:
                    continue
                v = two_point_value(k, x1, x2, mean)
                evals += 1
                if v > best[0]:
                    best = (v, (x1, x2))
        if best[1] is None:
            break
        x1, x2 = best[1]
        span1 = (mean - floor) / grid
        lo1 = max(floor, x1 - span1)
        hi1 = min(mean - (mean - floor) / 10**6, x1 + span1)
        lows = _grid(lo1, hi1, grid)
        highs = _grid(max(mean + (x2 - mean) / 2, mean + Fraction(1, 10**12)), 2 * x2 - mean, grid)
        grid = max(grid, 8)
    value, pts = best
    if pts is None:
        return RefinedVerdict(k, "unknown", floor, rng, target, value, evaluations=evals)
    x1, x2 = pts
    w = (x2 - mean) / (x2 - x1)
    if value <= target:
        raise InvariantViolation("recorded a non-improving witness")
    return RefinedVerdict(k, "fails", floor, rng, target, value, (x1, x2, w), evals)


def refined_threshold(k_low: int = 31, k_high: int = 48, workers: int = 1) -> RefinedResult:
    """Least ``k`` in range from which every verdict up to ``k_high`` is "holds"."""
    if k_low < 31:
        raise ValueError("k_low must be at least 31")
    ks = list(range(k_low, k_high + 1))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            verdicts = list(pool.map(refine_k, ks))
    else:
        verdicts = [refine_k(k) for k in ks]
    least = None
    for v in reversed(verdicts):
        if v.verdict != "holds":
            break
        least = v.k
    return RefinedResult(k_low, k_high, least, verdicts)


def random_profile_value(k: int, rng: np.random.Generator, size: int) -> Fraction:
    """Average of f1 over a random profile obeying the floor and the mean constraint."""
    floor = ma_floor(k)
    mean = Fraction(k - 1)
    raw = [Fraction(int(v)) / 64 for v in rng.integers(0, 64 * 4 * (k - 1), size=size)]
    xs = [floor + r for r in raw]
    avg = sum(xs, Fraction(0)) / size
    if avg > mean:
        shrink = (mean - floor) / (avg - floor)
        xs = [floor + (x - floor) * shrink for x in xs]
    return sum((f1(k, x) for x in xs), Fraction(0)) / size

