"""JSON helpers shared by the report writers."""

from __future__ import annotations

from fractions import Fraction

FORMAT_VERSIONS = {"palette": 1, "graph": 1, "digraph": 1, "verdict": 1, "chain": 1, "search": 1}


def rational(x) -> dict:
    """An exact fraction as ``{"num", "den", "decimal"}``; the decimal is for people only."""
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator, "decimal": f"{float(x):.12g}"}


def human(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator} (≈ {float(x):.6g})"


def encode(obj):
    """Recursively turn fractions into rational dicts and tuples into lists."""
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):
        return obj.item()
    return obj
