"""Looking for dense palettes that a given 3-graph does not admit.

Every palette returned here is re-checked with an exact decider, so a
reported density is always a certified lower bound for the palette Turán
density of the graph, even when it came out of a heuristic search.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from ._json import rational
from .admit import ADMIT_MAX_VERTICES, decide_admission
from .bounds import star_palette
from .digraph import star_admission
from .exceptions import BudgetExceeded, InvariantViolation
from .hypergraph import ThreeGraph, star_apex
from .palette import Palette, density

log = logging.getLogger(__name__)

EXHAUSTIVE_MAX_CUBE = 12


def admits(f: ThreeGraph, p: Palette) -> bool:
    """Exact admission test, through the digraph when ``f`` is a star."""
    shape = star_apex(f)
    if shape is not None:
        return star_admission(p, shape[1]).admits
    return decide_admission(f, p).admits


def _certify(f: ThreeGraph, p: Palette) -> None:
    if f.vertices <= ADMIT_MAX_VERTICES:
        verdict = decide_admission(f, p)
    else:
        verdict = star_admission(p, star_apex(f)[1])
    if verdict.admits:
        raise InvariantViolation("search produced a palette the graph admits")


def _key(p: Palette):
    """Higher density first, then lexicographically least triple list."""
    return (-density(p), p.triples)


@dataclass
class SearchResult:
    density: Optional[Fraction]      # None when every palette is admitted
    witness: Optional[Palette]
    checked: int = 0
    heuristic: bool = False
    trace: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "density": rational(self.density) if self.density is not None else None,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "checked": self.checked,
            "heuristic": self.heuristic,
            "trace": [list(t[:2]) + [rational(t[2])] for t in self.trace],
        }


def exhaustive_best(f: ThreeGraph, colors: int, max_cube: int = EXHAUSTIVE_MAX_CUBE) -> SearchResult:
    """Densest non-admitted palette on ``colors`` colors, by trying every triple set."""
    cube = colors**3
    if cube > max_cube:
        raise BudgetExceeded(f"{colors} colors give 2^{cube} palettes; guard is 2^{max_cube}")
    best = None
    for bits in range(1 << cube):
        mask = np.array([(bits >> i) & 1 for i in range(cube)], dtype=bool).reshape((colors,) * 3)
        p = Palette.from_mask(mask)
        if best is not None and _key(p) >= _key(best):
            continue
        if not decide_admission(f, p).admits:
            best = p
    if best is None:
        return SearchResult(None, None, 1 << cube)
    return SearchResult(density(best), best, 1 << cube)


def structured_seeds(f: ThreeGraph, colors: int) -> list[Palette]:
    """The star construction padded with unused colors, when ``f`` is a star it fits."""
    shape = star_apex(f)
    if shape is None or shape[1] < 3 or shape[1] - 1 > colors:
        return []
    base = star_palette(shape[1])
    mask = np.zeros((colors,) * 3, dtype=bool)
    n = base.colors
    mask[:n, :n, :n] = base.mask
    return [Palette.from_mask(mask)]


def _climb(f: ThreeGraph, start: Palette, iterations: int, rng: np.random.Generator,
           restart: int) -> tuple[Palette, list]:
    n = start.colors
    cube = n**3
    mask = start.mask.copy().reshape(-1)
    # trim random starts until feasible
    while admits(f, Palette.from_mask(mask.reshape((n,) * 3))):
        present = np.flatnonzero(mask)
        mask[rng.choice(present)] = False
    current = Palette.from_mask(mask.reshape((n,) * 3))
    best, trace = current, [(restart, 0, density(current))]
    stalled = 0
    for it in range(1, iterations + 1):
        absent = np.flatnonzero(~mask)
        if absent.size == 0:
            break
        t = rng.choice(absent)
        mask[t] = True
        trial = Palette.from_mask(mask.reshape((n,) * 3))
        if admits(f, trial):
            mask[t] = False
            stalled += 1
        else:
            current = trial
            stalled = 0
            if _key(current) < _key(best):
                best = current
                trace.append((restart, it, density(best)))
        if stalled >= cube:
            # perturb: drop a couple of triples, never leaving the feasible region
            present = np.flatnonzero(mask)
            for t in rng.choice(present, size=min(2, present.size), replace=False):
                mask[t] = False
            stalled = 0
    return best, trace


def _run_restart(args) -> tuple[Palette, list]:
    f, start, iterations, seq, restart = args
    return _climb(f, start, iterations, np.random.default_rng(seq), restart)


def local_search(f: ThreeGraph, colors: int, iterations: int, seed: int,
                 restarts: int = 4, workers: int = 1) -> SearchResult:
    """Seeded hill climbing over triple additions, restricted to non-admitted palettes.

    Restarts begin from the structured seeds, the empty palette and random
    palettes. Each restart has its own generator derived from ``(seed,
    restart)``, so the result does not depend on ``workers``.
    """
    if not f.edges:
        return SearchResult(None, None, heuristic=True)
    starts = structured_seeds(f, colors) + [Palette.empty(colors)]
    setup, *streams = np.random.SeedSequence(seed).spawn(1 + max(restarts, len(starts)))
    setup = np.random.default_rng(setup)
    while len(starts) < restarts:
        starts.append(Palette.from_mask(setup.random((colors,) * 3) < 0.15))
    per = max(1, iterations // len(starts))
    jobs = [(f, s, per, streams[r], r) for r, s in enumerate(starts)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_restart, jobs))
    else:
        results = [_run_restart(j) for j in jobs]
    best = min((r[0] for r in results), key=_key)
    trace = [t for r in results for t in r[1]]
    _certify(f, best)
    log.info("local search: best density %s over %d restarts", density(best), len(starts))
    return SearchResult(density(best), best, checked=per * len(starts), heuristic=True, trace=trace)
