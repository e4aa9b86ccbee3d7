"""Closed intervals over the extended reals and the dual-bound type.

A :class:`Bound` is either empty or ``[lo, hi]`` with ``lo <= hi``; infinite
endpoints are allowed, NaN never is.  A :class:`DualBound` pairs an
under-approximation (values guaranteed producible) with an over-approximation
(values outside are never produced); the under must be contained in the over.

Every arithmetic path that could produce NaN (opposite infinities meeting in
an addition) raises :class:`IndeterminateSumError` instead.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

INF = math.inf


class IndeterminateSumError(ArithmeticError):
    """Adding opposite infinities at the same endpoint has no defined result."""


def ext_add(x: float, y: float) -> float:
    """Extended-real addition; raises instead of returning NaN."""
    if math.isinf(x) and math.isinf(y) and (x > 0) != (y > 0):
        raise IndeterminateSumError(f"indeterminate sum {x} + {y}")
    return x + y


@dataclass(frozen=True)
class Bound:
    """``[lo, hi]`` over the extended reals, or the empty bound (both endpoints None)."""

    lo: float | None = None
    hi: float | None = None

    def __post_init__(self) -> None:
        if (self.lo is None) != (self.hi is None):
            raise ValueError("both endpoints must be set, or neither")
        if self.lo is not None:
            lo, hi = float(self.lo), float(self.hi)
            if math.isnan(lo) or math.isnan(hi):
                raise ValueError("bound endpoints must not be NaN")
            if lo > hi:
                raise ValueError(f"unordered bound endpoints: {lo} > {hi}")
            object.__setattr__(self, "lo", lo)
            object.__setattr__(self, "hi", hi)

    @property
    def is_empty(self) -> bool:
        return self.lo is None

    def __contains__(self, x: float) -> bool:
        return not self.is_empty and self.lo <= x <= self.hi

    def __str__(self) -> str:
        if self.is_empty:
            return "∅"
        return f"[{_fmt(self.lo)},{_fmt(self.hi)}]"


EMPTY = Bound()
FULL = Bound(-INF, INF)
NON_NEGATIVE = Bound(0.0, INF)
UNIT = Bound(0.0, 1.0)


def closed(lo: float, hi: float) -> Bound:
    return Bound(lo, hi)


def singleton(v: float) -> Bound:
    return Bound(v, v)


def bound_subset(a: Bound, b: Bound) -> bool:
    """True iff every point of ``a`` lies in ``b``; the empty bound is in everything."""
    if a.is_empty:
        return True
    if b.is_empty:
        return False
    return b.lo <= a.lo and a.hi <= b.hi


def bound_intersect(a: Bound, b: Bound) -> Bound:
    if a.is_empty or b.is_empty:
        return EMPTY
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    return Bound(lo, hi) if lo <= hi else EMPTY


def bound_union(a: Bound, b: Bound) -> Bound:
    """Convex hull of the two bounds (an over-approximation, not a set union)."""
    if a.is_empty:
        return b
    if b.is_empty:
        return a
    return Bound(min(a.lo, b.lo), max(a.hi, b.hi))


def add_bounds(a: Bound, b: Bound) -> Bound:
    """Interval addition; empty absorbs."""
    if a.is_empty or b.is_empty:
        return EMPTY
    return Bound(ext_add(a.lo, b.lo), ext_add(a.hi, b.hi))


@dataclass(frozen=True)
class DualBound:
    """The type of a random expression: «under, over» with under ⊆ over."""

    under: Bound
    over: Bound

    def __post_init__(self) -> None:
        if not bound_subset(self.under, self.over):
            raise ValueError(f"under-approximation {self.under} not contained in over-approximation {self.over}")

    def __str__(self) -> str:
        return f"«{self.under},{self.over}»"


def dual(under: Bound, over: Bound) -> DualBound:
    return DualBound(under, over)


ANY_VALUE = DualBound(EMPTY, FULL)


def add_dual_bounds(a: DualBound, b: DualBound) -> DualBound:
    """Componentwise interval addition of the two dual bounds."""
    return DualBound(add_bounds(a.under, b.under), add_bounds(a.over, b.over))


def is_subtype(got: DualBound, want: DualBound) -> bool:
    """``got`` fits where ``want`` is expected: got.under ⊇ want.under and got.over ⊆ want.over."""
    return bound_subset(want.under, got.under) and bound_subset(got.over, want.over)


# --- textual rendering ------------------------------------------------------


def _fmt(x: float) -> str:
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return repr(x)


def format_dual(d: DualBound) -> str:
    return str(d)


_BOUND_RE = re.compile(r"\s*\[\s*([^,\[\]]+?)\s*,\s*([^,\[\]]+?)\s*\]\s*")


def _parse_endpoint(text: str) -> float:
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity", "+infinity"):
        return INF
    if t in ("-inf", "-infinity"):
        return -INF
    return float(text)


def parse_bound(text: str) -> Bound:
    t = text.strip()
    if t in ("∅", "empty", "{}"):
        return EMPTY
    m = _BOUND_RE.fullmatch(t)
    if not m:
        raise ValueError(f"cannot parse bound {text!r}")
    return Bound(_parse_endpoint(m.group(1)), _parse_endpoint(m.group(2)))


def parse_dual_bound(text: str) -> DualBound:
    """Parse «under,over» notation; the guillemets are optional and ``empty`` works for ∅."""
    t = text.strip()
    if t.startswith("«") and t.endswith("»"):
        t = t[1:-1]
    parts = _split_components(t)
    if len(parts) != 2:
        raise ValueError(f"expected two comma-separated bounds in {text!r}")
    return DualBound(parse_bound(parts[0]), parse_bound(parts[1]))


def _split_components(text: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts
