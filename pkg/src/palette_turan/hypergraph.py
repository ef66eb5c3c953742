"""3-uniform hypergraphs, stars, the random pair-coloring construction, and copy search."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .exceptions import BudgetExceeded, GraphError, PaletteError
from .palette import Palette

GRAPH_FORMAT_VERSION = 1
COPY_SEARCH_MAX_PATTERN = 10


class ThreeGraph:
    """An immutable 3-uniform hypergraph on vertices ``0..vertices-1``."""

    __slots__ = ("vertices", "edges", "_edge_set")

    def __init__(self, vertices: int, edges: Iterable[Iterable[int]] = ()):
        if vertices < 0:
            raise GraphError("vertex count must be nonnegative")
        seen = set()
        for e in edges:
            e = tuple(sorted(int(v) for v in e))
            if len(e) != 3 or len(set(e)) != 3:
                raise GraphError(f"edge {e} does not have three distinct vertices")
            if e[0] < 0 or e[2] >= vertices:
                raise GraphError(f"edge {e} uses a vertex outside 0..{vertices - 1}")
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
        self.vertices = vertices
        self.edges = tuple(sorted(seen))
        self._edge_set = frozenset(seen)

    def has_edge(self, u: int, v: int, w: int) -> bool:
        return tuple(sorted((u, v, w))) in self._edge_set

    def degrees(self) -> list[int]:
        deg = [0] * self.vertices
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def covered_pairs(self) -> list[tuple[int, int]]:
        """Vertex pairs lying in at least one edge, sorted."""
        pairs = set()
        for u, v, w in self.edges:
            pairs.update(((u, v), (u, w), (v, w)))
        return sorted(pairs)

    def relabeled(self, perm) -> "ThreeGraph":
        return ThreeGraph(self.vertices, [[perm[v] for v in e] for e in self.edges])

    def __len__(self) -> int:
        return len(self.edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ThreeGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self) -> str:
        return f"ThreeGraph(vertices={self.vertices}, edges={list(self.edges)!r})"

    def to_json(self) -> dict:
        return {"vertices": self.vertices, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, doc: dict) -> "ThreeGraph":
        try:
            return cls(int(doc["vertices"]), doc["edges"])
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph document: {exc}") from None

    def to_text(self) -> str:
        return "\n".join([f"graph {self.vertices}"] + [" ".join(map(str, e)) for e in self.edges]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ThreeGraph":
        lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines or lines[0][0] != "graph" or len(lines[0]) != 2:
            raise GraphError("text graph must start with 'graph n'")
        return cls(int(lines[0][1]), [[int(v) for v in ln] for ln in lines[1:]])

    def dump(self, path) -> None:
        path = Path(path)
        if path.suffix == ".txt":
            path.write_text(self.to_text())
        else:
            path.write_text(json.dumps(self.to_json()) + "\n")

    @classmethod
    def load(cls, path) -> "ThreeGraph":
        text = Path(path).read_text()
        if text.lstrip().startswith("{"):
            return cls.from_json(json.loads(text))
        return cls.from_text(text)


def star(k: int) -> ThreeGraph:
    """The k-star: apex 0 joined to every pair of leaves ``1..k``."""
    if k < 2:
        raise GraphError("a star needs at least two leaves")
    return ThreeGraph(k + 1, [(0, i, j) for i, j in itertools.combinations(range(1, k + 1), 2)])


def complete_graph(n: int) -> ThreeGraph:
    return ThreeGraph(n, itertools.combinations(range(n), 3))


def star_apex(g: ThreeGraph) -> Optional[tuple[int, int]]:
    """If ``g`` is a k-star (plus nothing else), return ``(apex, k)``; else None.

    Isolated vertices are not allowed, so the answer is unambiguous.
    """
    if not g.edges:
        return None
    deg = g.degrees()
    for apex in range(g.vertices):
        if deg[apex] != len(g.edges):
            continue
        leaves = [v for v in range(g.vertices) if v != apex]
        k = len(leaves)
        if k >= 2 and len(g.edges) == comb(k, 2):
            return apex, k
    return None


@dataclass(frozen=True)
class Construction:
    graph: ThreeGraph
    coloring: dict  # (i, j) with i < j -> color


def rodl_construct(p: Palette, n: int, seed: int) -> Construction:
    """Random pair coloring of ``n`` ordered vertices; keep triples whose colors are admissible.

    Pairs are colored in lexicographic order with draws from
    ``numpy.random.default_rng(seed)`` (PCG64), so output is reproducible.
    """
    if p.colors == 0:
        raise PaletteError("construction needs at least one color")
    if n < 3:
        raise GraphError("construction needs at least three vertices")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    draws = rng.integers(0, p.colors, size=iu.size)
    phi = np.zeros((n, n), dtype=np.int64)
    phi[iu, ju] = draws
    i, j, k = np.array(list(itertools.combinations(range(n), 3))).T
    keep = p.mask[phi[i, j], phi[i, k], phi[j, k]]
    edges = np.stack([i[keep], j[keep], k[keep]], axis=1).tolist()
    coloring = {(int(a), int(b)): int(c) for a, b, c in zip(iu, ju, draws)}
    return Construction(ThreeGraph(n, edges), coloring)


def contains_copy(host: ThreeGraph, pattern: ThreeGraph,
                  max_pattern: int = COPY_SEARCH_MAX_PATTERN) -> Optional[tuple[int, ...]]:
    """Lexicographically least injection mapping every pattern edge onto a host edge.

    Returns the images of pattern vertices ``0, 1, ...`` in order, or None.
    """
    if pattern.vertices > max_pattern:
        raise BudgetExceeded(f"pattern has {pattern.vertices} vertices; guard is {max_pattern}")
    if pattern.vertices > host.vertices:
        return None
    pdeg = pattern.degrees()
    hdeg = host.degrees()
    # edges of the pattern that become fully mapped once vertex v is placed
    closing: list[list[tuple[int, int]]] = [[] for _ in range(pattern.vertices)]
    for a, b, c in pattern.edges:
        closing[c].append((a, b))
    image = [-1] * pattern.vertices
    used = [False] * host.vertices

    def place(v: int) -> bool:
        if v == pattern.vertices:
            return True
        for h in range(host.vertices):
            if used[h] or hdeg[h] < pdeg[v]:
                continue
            if all(host.has_edge(image[a], image[b], h) for a, b in closing[v]):
                image[v] = h
                used[h] = True
                if place(v + 1):
                    return True
                used[h] = False
        image[v] = -1
        return False

    return tuple(image) if place(0) else None


def contains_copy_naive(host: ThreeGraph, pattern: ThreeGraph) -> Optional[tuple[int, ...]]:
    """Reference enumerator over all injections, no pruning."""
    for image in itertools.permutations(range(host.vertices), pattern.vertices):
        if all(host.has_edge(image[a], image[b], image[c]) for a, b, c in pattern.edges):
            return image
    return None


@dataclass(frozen=True)
class SubsetProfile:
    size: int
    samples: int
    min_density: Fraction
    mean_density: Fraction


def subset_density_profile(g: ThreeGraph, samples: int, seed: int,
                           sizes: Optional[Iterable[int]] = None) -> list[SubsetProfile]:
    """Induced edge density of random vertex subsets, per subset size. Observational only."""
    if g.vertices < 3:
        raise GraphError("need at least three vertices")
    n = g.vertices
    if sizes is None:
        sizes = sorted({max(3, n // 4), max(3, n // 2), max(3, (3 * n) // 4), n})
    rng = np.random.default_rng(seed)
    edges = np.array(g.edges, dtype=np.int64).reshape(-1, 3)
    out = []
    for s in sizes:
        total = comb(s, 3)
        counts = []
        for _ in range(samples):
            inside = np.zeros(n, dtype=bool)
            inside[rng.choice(n, size=s, replace=False)] = True
            counts.append(int(inside[edges].all(axis=1).sum()) if len(edges) else 0)
        out.append(SubsetProfile(s, samples, Fraction(min(counts), total),
                                 Fraction(sum(counts), total * samples)))
    return out
