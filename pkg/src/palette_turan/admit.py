"""Exact decision of whether a 3-graph admits a palette.

A 3-graph admits a palette when some vertex order together with a coloring of
vertex pairs sends every edge ``u < v < w`` to an admissible triple
``(phi(uv), phi(uw), phi(vw))``. The decision enumerates vertex orders up to
automorphisms of the graph and solves a small constraint problem per order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .exceptions import BudgetExceeded, InvariantViolation, MalformedCertificateError
from .hypergraph import ThreeGraph
from .palette import Palette

ADMIT_MAX_VERTICES = 8


@dataclass(frozen=True)
class AdmissionCertificate:
    """A vertex order and a coloring of the pairs that lie in edges."""

    order: tuple[int, ...]
    coloring: dict = field(hash=False)  # (u, v) with u < v -> color

    def color(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        try:
            return self.coloring[key]
        except KeyError:
            raise MalformedCertificateError(f"pair {key} has no color") from None

    def to_json(self) -> dict:
        return {
            "order": list(self.order),
            "coloring": [[u, v, c] for (u, v), c in sorted(self.coloring.items())],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "AdmissionCertificate":
        return cls(tuple(doc["order"]), {(u, v): c for u, v, c in doc["coloring"]})


@dataclass(frozen=True)
class Verdict:
    """Outcome of an admission question.

    Admitting verdicts always carry a certificate. Refusals carry the evidence
    of the method that produced them: the number of refuted order classes for
    the general search, the maximum transitive tournament size for the digraph
    route.
    """

    admits: bool
    method: str
    certificate: Optional[AdmissionCertificate] = None
    order_classes: Optional[int] = None
    max_tt: Optional[int] = None
    loop_triple: Optional[tuple[int, int, int]] = None

    def to_json(self) -> dict:
        doc = {"admits": self.admits, "method": self.method,
               "certificate": self.certificate.to_json() if self.certificate else None}
        if self.order_classes is not None:
            doc["orderClassesSearched"] = self.order_classes
        if self.max_tt is not None:
            doc["maxTT"] = self.max_tt
        if self.loop_triple is not None:
            doc["loopTriple"] = list(self.loop_triple)
        return doc


def check_certificate(f: ThreeGraph, p: Palette, cert: AdmissionCertificate) -> bool:
    if sorted(cert.order) != list(range(f.vertices)):
        raise MalformedCertificateError("order is not a permutation of the vertices")
    rank = {v: i for i, v in enumerate(cert.order)}
    for edge in f.edges:
        u, v, w = sorted(edge, key=rank.__getitem__)
        if (cert.color(u, v), cert.color(u, w), cert.color(v, w)) not in p:
            return False
    return True


def automorphisms(f: ThreeGraph) -> list[tuple[int, ...]]:
    """All vertex permutations preserving the edge set, by brute force."""
    edges = set(f.edges)
    deg = f.degrees()
    autos = []
    for perm in itertools.permutations(range(f.vertices)):
        if any(deg[perm[v]] != deg[v] for v in range(f.vertices)):
            continue
        if all(tuple(sorted((perm[a], perm[b], perm[c]))) in edges for a, b, c in f.edges):
            autos.append(perm)
    return autos


def order_classes(f: ThreeGraph, quotient: bool = True) -> list[tuple[int, ...]]:
    """Vertex orders, one per orbit under automorphisms, each the lex least of its orbit.

    An automorphism carries an order to one whose per-edge constraint pattern
    is the same up to renaming pairs, so one order per orbit suffices.
    """
    perms = itertools.permutations(range(f.vertices))
    if not quotient:
        return list(perms)
    autos = automorphisms(f)
    seen = set()
    reps = []
    for order in perms:
        if order in seen:
            continue
        reps.append(order)
        for g in autos:
            seen.add(tuple(g[v] for v in order))
    return reps


class _OrderCSP:
    """Pair-coloring constraint problem for one fixed vertex order.

    Domains are bitmasks over colors; propagation enforces generalized arc
    consistency on each ternary edge constraint.
    """

    def __init__(self, f: ThreeGraph, p: Palette, order: tuple[int, ...]):
        self.pairs = f.covered_pairs()
        index = {pr: i for i, pr in enumerate(self.pairs)}
        rank = {v: i for i, v in enumerate(order)}
        self.constraints = []
        for edge in f.edges:
            u, v, w = sorted(edge, key=rank.__getitem__)
            key = lambda a, b: index[(a, b) if a < b else (b, a)]
            self.constraints.append((key(u, v), key(u, w), key(v, w)))
        self.watch = [[] for _ in self.pairs]
        for ci, vars_ in enumerate(self.constraints):
            for x in vars_:
                self.watch[x].append(ci)
        self.triples = p.triples
        self.full = (1 << p.colors) - 1

    def _revise(self, dom: list[int], ci: int) -> Optional[list[int]]:
        """Supported values per position of constraint ``ci``; None on wipe-out."""
        x, y, z = self.constraints[ci]
        dx, dy, dz = dom[x], dom[y], dom[z]
        sx = sy = sz = 0
        for a, b, c in self.triples:
            if dx >> a & 1 and dy >> b & 1 and dz >> c & 1:
                sx |= 1 << a
                sy |= 1 << b
                sz |= 1 << c
        if not sx:
            return None
        return [sx, sy, sz]

    def _propagate(self, dom: list[int], queue: list[int]) -> bool:
        pending = set(queue)
        queue = list(queue)
        while queue:
            ci = queue.pop()
            pending.discard(ci)
            support = self._revise(dom, ci)
            if support is None:
                return False
            for var, s in zip(self.constraints[ci], support):
                new = dom[var] & s
                if new != dom[var]:
                    dom[var] = new
                    for cj in self.watch[var]:
                        if cj not in pending:
                            pending.add(cj)
                            queue.append(cj)
        return True

    def solve(self) -> Optional[list[int]]:
        if not self.triples:
            return None if self.constraints else [0] * len(self.pairs)
        dom = [self.full] * len(self.pairs)
        if not self._propagate(dom, list(range(len(self.constraints)))):
            return None
        return self._search(dom)

    def _search(self, dom: list[int]) -> Optional[list[int]]:
        best_var, best_size = -1, None
        for var, d in enumerate(dom):
            size = bin(d).count("1")
            if size > 1 and (best_size is None or size < best_size):
                best_var, best_size = var, size
        if best_var < 0:
            return [d.bit_length() - 1 for d in dom]
        d = dom[best_var]
        while d:
            low = d & -d
            d ^= low
            trial = list(dom)
            trial[best_var] = low
            if self._propagate(trial, list(self.watch[best_var])):
                found = self._search(trial)
                if found is not None:
                    return found
        return None


def decide_admission(f: ThreeGraph, p: Palette, quotient: bool = True,
                     max_vertices: int = ADMIT_MAX_VERTICES) -> Verdict:
    """Decide whether ``f`` admits ``p``; admitting answers carry a checked certificate."""
    if f.vertices > max_vertices:
        raise BudgetExceeded(f"graph has {f.vertices} vertices; guard is {max_vertices}")
    classes = order_classes(f, quotient)
    for count, order in enumerate(classes, start=1):
        csp = _OrderCSP(f, p, order)
        solution = csp.solve()
        if solution is not None:
            cert = AdmissionCertificate(order, dict(zip(csp.pairs, solution)))
            if not check_certificate(f, p, cert):
                raise InvariantViolation("constraint solver produced an invalid certificate")
            return Verdict(True, "order-search", cert, order_classes=count)
    return Verdict(False, "order-search", order_classes=len(classes))
