"""The two-layer color digraph of a palette and exact transitive tournament search.

For a palette on ``n`` colors the digraph has ``2n`` vertices: color ``a``
appears as ``a`` on side 1 and as ``n + a`` on side 2.

* ``a -> b`` on side 1 when some triple is ``(*, a, b)``;
* ``n+a -> n+b`` on side 2 when some triple is ``(a, b, *)``;
* ``a <-> n+b`` when some triple is ``(a, *, b)``.

A loop on either side means every star admits the palette. Without loops,
the k-star admits the palette exactly when the digraph contains a transitive
tournament on ``k`` vertices.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .admit import AdmissionCertificate, Verdict, check_certificate
from .exceptions import BudgetExceeded, InvariantViolation
from .hypergraph import star
from .palette import Palette, good_pairs

TT_MAX_VERTICES = 128
DIGRAPH_FORMAT_VERSION = 1


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


class Digraph:
    """A loop-free digraph with out- and in-neighborhoods stored as int bitsets."""

    __slots__ = ("vertices", "out", "inn")

    def __init__(self, vertices: int, arcs=()):
        out = [0] * vertices
        inn = [0] * vertices
        for u, v in arcs:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < vertices and 0 <= v < vertices):
                raise ValueError(f"arc {(u, v)} outside 0..{vertices - 1}")
            out[u] |= 1 << v
            inn[v] |= 1 << u
        self.vertices = vertices
        self.out = tuple(out)
        self.inn = tuple(inn)

    @classmethod
    def from_adjacency(cls, matrix) -> "Digraph":
        matrix = np.asarray(matrix, dtype=bool)
        return cls(len(matrix), [(int(u), int(v)) for u, v in np.argwhere(matrix)])

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    @property
    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.vertices) for v in _bits(self.out[u])]

    def out_degree(self, v: int) -> int:
        return _popcount(self.out[v])

    def in_degree(self, v: int) -> int:
        return _popcount(self.inn[v])

    def induced(self, vertices: Sequence[int]) -> "Digraph":
        index = {v: i for i, v in enumerate(vertices)}
        arcs = [(index[u], index[v]) for u in vertices for v in _bits(self.out[u]) if v in index]
        return Digraph(len(vertices), arcs)

    def with_arcs(self, extra) -> "Digraph":
        return Digraph(self.vertices, set(self.arcs) | set(extra))

    def is_transitive_tournament(self, seq: Sequence[int]) -> bool:
        return len(set(seq)) == len(seq) and all(
            self.has_arc(u, v) for u, v in itertools.combinations(seq, 2))

    def to_json(self) -> dict:
        return {"vertices": self.vertices, "arcs": [list(a) for a in self.arcs]}

    def to_dot(self) -> str:
        lines = ["digraph D {"]
        lines += [f"  {v};" for v in range(self.vertices)]
        lines += [f"  {u} -> {v};" for u, v in self.arcs]
        return "\n".join(lines + ["}"]) + "\n"


class ColorDigraph(Digraph):
    """The digraph of a palette; side-1 vertex ``a`` is ``a``, side-2 vertex is ``n + a``."""

    __slots__ = ("colors",)

    def __init__(self, colors: int, arcs=()):
        super().__init__(2 * colors, arcs)
        self.colors = colors

    def side(self, v: int) -> int:
        return 1 if v < self.colors else 2

    def color(self, v: int) -> int:
        return v % self.colors

    def side_graph(self, side: int) -> Digraph:
        n = self.colors
        return self.induced(range(n) if side == 1 else range(n, 2 * n))

    def to_json(self) -> dict:
        return {"n": self.colors, "arcs": [list(a) for a in self.arcs]}

    def to_dot(self) -> str:
        n = self.colors
        name = lambda v: f'"{v % n}^{1 if v < n else 2}"'
        lines = ["digraph D {"]
        lines += [f"  {name(v)};" for v in range(2 * n)]
        lines += [f"  {name(u)} -> {name(v)};" for u, v in self.arcs]
        return "\n".join(lines + ["}"]) + "\n"


@dataclass(frozen=True)
class LoopVerdict:
    """Some color is good with itself in roles (2,3) or (1,2)."""

    roles: tuple[int, int]
    triple: tuple[int, int, int]


def find_loop(p: Palette) -> Optional[LoopVerdict]:
    """Least triple of the form ``(b, a, a)`` or ``(a, a, b)``, if any."""
    for t in p.triples:
        if t[1] == t[2]:
            return LoopVerdict((2, 3), t)
        if t[0] == t[1]:
            return LoopVerdict((1, 2), t)
    return None


def build_digraph(p: Palette):
    """The palette's color digraph, or a :class:`LoopVerdict` if one of its sides has a loop."""
    loop = find_loop(p)
    if loop is not None:
        return loop
    n = p.colors
    table = good_pairs(p)
    arcs = [(a, b) for a, b in table.pairs(2, 3)]
    arcs += [(n + a, n + b) for a, b in table.pairs(1, 2)]
    for a, b in table.pairs(1, 3):
        arcs += [(a, n + b), (n + b, a)]
    d = ColorDigraph(n, arcs)
    for u, v in d.arcs:
        if d.side(u) != d.side(v) and not d.has_arc(v, u):
            raise InvariantViolation(f"cross arc {(u, v)} is not paired")
    return d


@dataclass(frozen=True)
class TTWitness:
    vertices: tuple[int, ...]  # arc from every earlier vertex to every later one
    side1: int = 0
    side2: int = 0

    def __len__(self) -> int:
        return len(self.vertices)


def _witness(d: Digraph, seq) -> TTWitness:
    seq = tuple(seq)
    if isinstance(d, ColorDigraph):
        s = sum(1 for v in seq if v < d.colors)
        return TTWitness(seq, s, len(seq) - s)
    return TTWitness(seq, len(seq), 0)


class _Found(Exception):
    pass


def max_transitive_tournament(d: Digraph, cutoff: Optional[int] = None,
                              max_vertices: int = TT_MAX_VERTICES) -> tuple[int, TTWitness]:
    """Largest transitive tournament in ``d`` by branch and bound.

    The search runs over vertex sets. A set spans a transitive tournament iff
    every pair carries at least one arc and the one-way arcs inside it are
    acyclic, so the underlying undirected graph gives a clique-style coloring
    bound. Stops early once a tournament of size ``cutoff`` is found; the
    returned size is then ``cutoff``, not necessarily the maximum.
    """
    N = d.vertices
    if N > max_vertices:
        raise BudgetExceeded(f"digraph has {N} vertices; guard is {max_vertices}")
    if N == 0:
        return 0, _witness(d, ())
    if cutoff is None:
        cutoff = N

    # relabel so that bit order is descending out-degree
    order = sorted(range(N), key=lambda v: (-d.out_degree(v), v))
    pos = {v: i for i, v in enumerate(order)}
    relabel = lambda mask: sum(1 << pos[v] for v in _bits(mask))
    out = [relabel(d.out[v]) for v in order]
    inn = [relabel(d.inn[v]) for v in order]
    adj = [out[i] | inn[i] for i in range(N)]
    before = [out[i] & ~inn[i] for i in range(N)]  # i must precede these
    after = [inn[i] & ~out[i] for i in range(N)]   # these must precede i
    has_one_way = any(before)

    best: list = [[]]

    def color_sort(cand: int):
        verts, cols = [], []
        color = 0
        uncolored = cand
        while uncolored:
            color += 1
            q = uncolored
            while q:
                low = q & -q
                v = low.bit_length() - 1
                q &= ~low & ~adj[v]
                uncolored &= ~low
                verts.append(v)
                cols.append(color)
        return verts, cols

    def acyclic_with(w: int, chosen: int, reach: dict) -> bool:
        span = 0
        for x in _bits(before[w] & chosen):
            span |= reach[x]
        return not (span & after[w])

    def extend(chosen: list, chosen_mask: int, reach: dict, cand: int) -> None:
        verts, cols = color_sort(cand)
        remaining = cand
        for i in range(len(verts) - 1, -1, -1):
            if len(chosen) + cols[i] <= len(best[0]):
                return
            v = verts[i]
            remaining &= ~(1 << v)
            new_mask = chosen_mask | (1 << v)
            new_reach = reach
            if has_one_way:
                new_reach = dict(reach)
                down = 1 << v
                for x in _bits(before[v] & chosen_mask):
                    down |= reach[x]
                new_reach[v] = down
                for z in _bits(chosen_mask):
                    if reach[z] & after[v]:
                        new_reach[z] = reach[z] | down
            nxt = remaining & adj[v]
            if has_one_way:
                keep = 0
                for w in _bits(nxt):
                    if acyclic_with(w, new_mask, new_reach):
                        keep |= 1 << w
                nxt = keep
            chosen.append(v)
            if len(chosen) > len(best[0]):
                best[0] = list(chosen)
                if len(chosen) >= cutoff:
                    raise _Found
            if nxt:
                extend(chosen, new_mask, new_reach, nxt)
            chosen.pop()

    try:
        extend([], 0, {}, (1 << N) - 1)
    except _Found:
        pass

    members = best[0]
    # order the chosen set along its forced arcs, lowest label first
    seq = []
    left = set(members)
    while left:
        v = min(u for u in left if not any(after[u] >> w & 1 for w in left))
        seq.append(v)
        left.remove(v)
    seq = [order[v] for v in seq]
    if not d.is_transitive_tournament(seq):
        raise InvariantViolation("branch and bound returned a non-tournament")
    return len(seq), _witness(d, seq)


def max_tt_bruteforce(d: Digraph) -> int:
    """Reference oracle: dynamic program over vertex subsets.

    A set spans a transitive tournament iff it has a vertex with arcs to all
    the others whose removal leaves a set that also does.
    """
    N = d.vertices
    ok = [False] * (1 << N)
    ok[0] = True
    best = 0
    for s in range(1, 1 << N):
        for v in _bits(s):
            rest = s & ~(1 << v)
            if ok[rest] and d.out[v] & rest == rest:
                ok[s] = True
                best = max(best, _popcount(s))
                break
    return best


def loop_certificate(p: Palette, k: int, loop: LoopVerdict) -> AdmissionCertificate:
    """Certificate for the k-star from a loop triple, all leaf pairs one color."""
    g = star(k)
    leaves = range(1, k + 1)
    coloring = {}
    if loop.roles == (2, 3):
        b, a, _ = loop.triple  # leaves first, apex last: edges read (b, a, a)
        order = tuple(leaves) + (0,)
    else:
        a, _, b = loop.triple  # apex first: edges read (a, a, b)
        order = (0,) + tuple(leaves)
    for i in leaves:
        coloring[(0, i)] = a
    for i, j in itertools.combinations(leaves, 2):
        coloring[(i, j)] = b
    cert = AdmissionCertificate(order, coloring)
    if not check_certificate(g, p, cert):
        raise InvariantViolation("loop certificate failed its check")
    return cert


def _least(candidates: np.ndarray) -> int:
    hits = np.flatnonzero(candidates)
    if hits.size == 0:
        raise InvariantViolation("witness arc has no supporting triple")
    return int(hits[0])


def tt_to_certificate(p: Palette, k: int, w: TTWitness) -> AdmissionCertificate:
    """Turn a transitive tournament of size ``k`` into a certificate for the k-star.

    Side-1 vertices of the tournament become colors of apex-leaf pairs for
    leaves placed before the apex, side-2 vertices for leaves placed after it.
    Leaf-leaf pairs get the least color completing an admissible triple.
    """
    n = p.colors
    if len(w) != k:
        raise ValueError(f"witness has {len(w)} vertices, need {k}")
    d = build_digraph(p)
    if isinstance(d, LoopVerdict) or not d.is_transitive_tournament(w.vertices):
        raise InvariantViolation("witness is not a transitive tournament of the palette digraph")
    left = [v for v in w.vertices if v < n]
    right = [v - n for v in w.vertices if v >= n]
    s, t = len(left), len(right)
    m = p.mask
    # leaves 1..s before the apex, leaves s+1..k after it
    order = tuple(range(1, s + 1)) + (0,) + tuple(range(s + 1, k + 1))
    coloring = {}
    for i, c in enumerate(left, start=1):
        coloring[(0, i)] = c
    for j, c in enumerate(right, start=s + 1):
        coloring[(0, j)] = c
    for i, j in itertools.combinations(range(s), 2):
        coloring[(i + 1, j + 1)] = _least(m[:, left[i], left[j]])
    for i in range(s):
        for j in range(t):
            coloring[(i + 1, s + j + 1)] = _least(m[left[i], :, right[j]])
    for i, j in itertools.combinations(range(t), 2):
        coloring[(s + i + 1, s + j + 1)] = _least(m[right[i], right[j], :])
    cert = AdmissionCertificate(order, coloring)
    if not check_certificate(star(k), p, cert):
        raise InvariantViolation("certificate built from a tournament failed its check")
    return cert


def star_admission(p: Palette, k: int) -> Verdict:
    """Decide whether the k-star admits ``p`` through the color digraph."""
    if k < 2:
        raise ValueError("star needs k >= 2")
    d = build_digraph(p)
    if isinstance(d, LoopVerdict):
        return Verdict(True, "digraph-loop", loop_certificate(p, k, d), loop_triple=d.triple)
    size, w = max_transitive_tournament(d, cutoff=k)
    if size >= k:
        cert = tt_to_certificate(p, k, TTWitness(w.vertices[:k]))
        return Verdict(True, "digraph-tt", cert, max_tt=size)
    return Verdict(False, "digraph-tt", max_tt=size)


@dataclass(frozen=True)
class Lemma4Report:
    applicable: bool
    passed: bool
    total: Optional[Fraction]
    limit: int
    max_tt: int
    witness: Optional[TTWitness] = None


def degree_sum(d: Digraph) -> Fraction:
    """Sum over vertices of ``1 / (N - max(outdeg, indeg))``."""
    N = d.vertices
    return sum((Fraction(1, N - max(d.out_degree(v), d.in_degree(v))) for v in range(N)),
               Fraction(0))


def verify_lemma4(d: Digraph, k: int, max_vertices: int = TT_MAX_VERTICES) -> Lemma4Report:
    """Check the reciprocal degree bound on a digraph with no transitive tournament of size ``k``."""
    size, w = max_transitive_tournament(d, cutoff=k, max_vertices=max_vertices)
    if size >= k:
        return Lemma4Report(False, False, None, k - 1, size, w)
    total = degree_sum(d)
    return Lemma4Report(True, total <= k - 1, total, k - 1, size)


def random_digraph(vertices: int, rng: np.random.Generator, fill: Optional[float] = None) -> Digraph:
    if fill is None:
        fill = rng.random()
    m = rng.random((vertices, vertices)) < fill
    np.fill_diagonal(m, False)
    return Digraph.from_adjacency(m)


def dump_json(d: Digraph) -> str:
    return json.dumps(d.to_json())
