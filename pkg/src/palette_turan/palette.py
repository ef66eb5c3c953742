"""Palettes: a finite color set with a set of admissible ordered color triples.

Colors are the integers ``0..n-1``. Triples live in a boolean cube ``mask``
of shape ``(n, n, n)``; ``mask[x, y, z]`` is true when ``(x, y, z)`` is
admissible. The slices ``mask[a]``, ``mask[:, a]`` and ``mask[:, :, a]`` are
the triples carrying color ``a`` in the first, second and third position.

Densities and all derived ratios are :class:`fractions.Fraction` values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .exceptions import NotMinimalError, PaletteError

# Ordered position pairs (i, j), i != j, positions counted from 1.
POSITION_PAIRS = ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))

PALETTE_FORMAT_VERSION = 1


class Palette:
    """An immutable palette on ``colors`` colors."""

    __slots__ = ("_mask", "_size")

    def __init__(self, colors: int, triples: Iterable[tuple[int, int, int]] = ()):
        if colors < 0:
            raise PaletteError("color count must be nonnegative")
        mask = np.zeros((colors, colors, colors), dtype=bool)
        for t in triples:
            t = tuple(int(c) for c in t)
            if len(t) != 3:
                raise PaletteError(f"triple {t} does not have three entries")
            if any(c < 0 or c >= colors for c in t):
                raise PaletteError(f"triple {t} uses a color outside 0..{colors - 1}")
            if mask[t]:
                raise PaletteError(f"duplicate triple {t}")
            mask[t] = True
        self._set_mask(mask)

    def _set_mask(self, mask: np.ndarray) -> None:
        mask.setflags(write=False)
        self._mask = mask
        self._size = int(mask.sum())

    @classmethod
    def from_mask(cls, mask) -> "Palette":
        mask = np.array(mask, dtype=bool, copy=True)
        if mask.ndim != 3 or len(set(mask.shape)) != 1:
            raise PaletteError(f"mask must be a cube, got shape {mask.shape}")
        p = cls.__new__(cls)
        p._set_mask(mask)
        return p

    @classmethod
    def complete(cls, colors: int) -> "Palette":
        return cls.from_mask(np.ones((colors,) * 3, dtype=bool))

    @classmethod
    def empty(cls, colors: int) -> "Palette":
        return cls.from_mask(np.zeros((colors,) * 3, dtype=bool))

    @property
    def colors(self) -> int:
        return self._mask.shape[0]

    @property
    def mask(self) -> np.ndarray:
        """Read-only boolean cube of admissible triples."""
        return self._mask

    @property
    def size(self) -> int:
        """Number of admissible triples."""
        return self._size

    @property
    def is_degenerate(self) -> bool:
        """True for the palette on zero colors, where density is undefined."""
        return self.colors == 0

    @property
    def triples(self) -> list[tuple[int, int, int]]:
        """Admissible triples in lexicographic order."""
        return [tuple(int(c) for c in t) for t in np.argwhere(self._mask)]

    def triples_at(self, color: int, position: int) -> list[tuple[int, int, int]]:
        """Triples with ``color`` in the given 1-based position."""
        return [t for t in self.triples if t[position - 1] == color]

    def __contains__(self, triple) -> bool:
        x, y, z = triple
        n = self.colors
        return 0 <= x < n and 0 <= y < n and 0 <= z < n and bool(self._mask[x, y, z])

    def __len__(self) -> int:
        return self._size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Palette):
            return NotImplemented
        return self.colors == other.colors and np.array_equal(self._mask, other._mask)

    def __hash__(self) -> int:
        return hash((self.colors, np.packbits(self._mask).tobytes()))

    def __repr__(self) -> str:
        return f"Palette(colors={self.colors}, triples={self.triples!r})"

    def is_subpalette_of(self, other: "Palette") -> bool:
        return self.colors == other.colors and not np.any(self._mask & ~other._mask)

    def permuted(self, perm) -> "Palette":
        """Relabel color ``c`` as ``perm[c]``."""
        perm = np.asarray(perm)
        inv = np.argsort(perm)
        return Palette.from_mask(self._mask[np.ix_(inv, inv, inv)])

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {"colors": self.colors, "triples": [list(t) for t in self.triples]}

    @classmethod
    def from_json(cls, doc: dict) -> "Palette":
        try:
            colors = int(doc["colors"])
            triples = [tuple(t) for t in doc["triples"]]
        except (KeyError, TypeError) as exc:
            raise PaletteError(f"malformed palette document: {exc}") from None
        return cls(colors, triples)

    def to_text(self) -> str:
        lines = [f"palette {self.colors}"]
        lines += [f"{x} {y} {z}" for x, y, z in self.triples]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Palette":
        lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines or lines[0][0] != "palette" or len(lines[0]) != 2:
            raise PaletteError("text palette must start with 'palette n'")
        try:
            return cls(int(lines[0][1]), [tuple(int(c) for c in ln) for ln in lines[1:]])
        except ValueError as exc:
            if isinstance(exc, PaletteError):
                raise
            raise PaletteError(f"bad triple line: {exc}") from None

    def dump(self, path) -> None:
        path = Path(path)
        if path.suffix == ".txt":
            path.write_text(self.to_text())
        else:
            path.write_text(json.dumps(self.to_json()) + "\n")

    @classmethod
    def load(cls, path) -> "Palette":
        text = Path(path).read_text()
        if text.lstrip().startswith("{"):
            return cls.from_json(json.loads(text))
        return cls.from_text(text)


def density(p: Palette) -> Fraction:
    """``|A| / n**3`` as an exact fraction."""
    if p.colors == 0:
        raise PaletteError("density is undefined for a palette with no colors")
    return Fraction(p.size, p.colors**3)


@dataclass(frozen=True)
class GoodPairTable:
    """Which ordered color pairs appear together in some admissible triple.

    ``good[(i, j)][a, b]`` is true when some triple has ``a`` at position
    ``i`` and ``b`` at position ``j``.
    """

    colors: int
    good: dict = field(repr=False)

    def degree(self, i: int, j: int) -> np.ndarray:
        """Number of ``b`` with ``(a, b)`` good in roles ``(i, j)``, per color ``a``."""
        return self.good[(i, j)].sum(axis=1)

    def bad_degree(self, i: int, j: int) -> np.ndarray:
        return self.colors - self.degree(i, j)

    def ratio(self, i: int, j: int, a: int) -> Fraction:
        """The normalized good degree of color ``a``."""
        return Fraction(int(self.degree(i, j)[a]), self.colors)

    def pairs(self, i: int, j: int) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in np.argwhere(self.good[(i, j)])]


def good_pairs(p: Palette) -> GoodPairTable:
    m = p.mask
    g12 = m.any(axis=2)
    g13 = m.any(axis=1)
    g23 = m.any(axis=0)
    good = {(1, 2): g12, (1, 3): g13, (2, 3): g23, (2, 1): g12.T, (3, 1): g13.T, (3, 2): g23.T}
    for arr in good.values():
        arr.setflags(write=False)
    return GoodPairTable(p.colors, good)


@dataclass(frozen=True)
class Removal:
    palette: Palette
    relabel: dict  # old color -> new color
    removed: int

    @property
    def degenerate(self) -> bool:
        return self.palette.is_degenerate


def remove_color(p: Palette, a: int) -> Removal:
    """Drop color ``a`` and every triple using it; remaining colors keep their order."""
    if not 0 <= a < p.colors:
        raise PaletteError(f"color {a} not in palette with {p.colors} colors")
    keep = [c for c in range(p.colors) if c != a]
    sub = p.mask[np.ix_(keep, keep, keep)]
    return Removal(Palette.from_mask(sub), {c: i for i, c in enumerate(keep)}, a)


def triples_touching(p: Palette) -> np.ndarray:
    """For every color, the number of admissible triples that use it at least once."""
    m = p.mask.astype(np.int64)
    idx = np.arange(p.colors)
    s1 = m.sum(axis=(1, 2))
    s2 = m.sum(axis=(0, 2))
    s3 = m.sum(axis=(0, 1))
    s12 = m[idx, idx, :].sum(axis=1)
    s13 = m[idx, :, idx].sum(axis=1)
    s23 = m[:, idx, idx].sum(axis=0)
    s123 = m[idx, idx, idx]
    return s1 + s2 + s3 - s12 - s13 - s23 + s123


def removable_color(p: Palette) -> Optional[int]:
    """Lowest color whose removal does not strictly decrease density, if any.

    Single-color palettes have no removable color: removal would leave a
    palette without a density.
    """
    n = p.colors
    if n <= 1:
        return None
    touching = triples_touching(p)
    for a in range(n):
        # (|A| - t_a) / (n-1)^3 >= |A| / n^3, cross-multiplied
        if (p.size - int(touching[a])) * n**3 >= p.size * (n - 1) ** 3:
            return a
    return None


def minimality_reduce(p: Palette) -> Palette:
    """Remove colors (lowest index first) until every removal strictly lowers density."""
    if p.colors < 1:
        raise PaletteError("cannot reduce a palette with no colors")
    while (a := removable_color(p)) is not None:
        p = remove_color(p, a).palette
    return p


@dataclass(frozen=True)
class Claim1Report:
    passed: bool
    density: Fraction
    bound: Fraction
    min_ratio: Fraction
    violation: Optional[tuple[int, int, int]] = None  # (color, i, j)


def verify_claim1(p: Palette) -> Claim1Report:
    """Check ``d_ij(a) / n >= 3 d(P) - 2`` for all colors and position pairs.

    The bound is a theorem for minimality-reduced palettes, so the input must
    be one; a failure on such input means a bug somewhere upstream.
    """
    a = removable_color(p)
    if a is not None:
        raise NotMinimalError(a)
    d = density(p)
    bound = 3 * d - 2
    table = good_pairs(p)
    n = p.colors
    min_ratio = Fraction(1)
    violation = None
    for i, j in POSITION_PAIRS:
        deg = table.degree(i, j)
        for color in range(n):
            r = Fraction(int(deg[color]), n)
            min_ratio = min(min_ratio, r)
            if violation is None and r < bound:
                violation = (color, i, j)
    return Claim1Report(violation is None, d, bound, min_ratio, violation)


def random_palette(colors: int, rng: np.random.Generator, fill: Optional[float] = None) -> Palette:
    """Each triple admissible independently with probability ``fill`` (drawn uniformly if omitted)."""
    if fill is None:
        fill = rng.random()
    return Palette.from_mask(rng.random((colors,) * 3) < fill)
