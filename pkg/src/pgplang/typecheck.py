"""The typing judgement for PGPLang expressions.

``infer`` computes the principal (most precise) dual bound of an expression
syntax-directedly; subtyping is applied only when checking distribution
arguments against their required bounds and in :func:`check`.

Rules, by node:
  literal v        «[v,v],[v,v]»
  Normal(mu, s)    mu against «∅,[-inf,inf]», s against «∅,[0,inf]»; result «[-inf,inf],[-inf,inf]»
  Laplace(mu, b)   as Normal
  Beta(a, b)       both against «∅,[0,inf]»; result «[0,1],[0,1]»
  Uniform(a, b)    no argument constraints; over is the hull of the argument
                   overs, under is the guaranteed support: the gap between the
                   argument overs (every point certainly between the realized
                   endpoints), empty when the overs overlap in more than a point
  add              componentwise interval addition of the argument bounds
  let / var        context append / 1-based lookup
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast import Add, Arg, Dist, DistFamily, Expr, Let, Lit, Var
from .intervals import (
    ANY_VALUE,
    EMPTY,
    FULL,
    NON_NEGATIVE,
    UNIT,
    Bound,
    DualBound,
    IndeterminateSumError,
    add_dual_bounds,
    bound_union,
    is_subtype,
    singleton,
)

SCALE_BOUND = DualBound(EMPTY, NON_NEGATIVE)
LOCATION_BOUND = ANY_VALUE
REAL_LINE = DualBound(FULL, FULL)
UNIT_INTERVAL = DualBound(UNIT, UNIT)


@dataclass(frozen=True)
class TypingContext:
    """Ordered dual bounds indexed by 1-based De Bruijn level."""

    entries: tuple[DualBound, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, level: int) -> DualBound | None:
        if 1 <= level <= len(self.entries):
            return self.entries[level - 1]
        return None

    def extended(self, d: DualBound) -> "TypingContext":
        return TypingContext(self.entries + (d,))


@dataclass
class TypeCheckError(Exception):
    """A typing failure, carrying enough to render a one-line diagnostic."""

    kind: str  # argument-bound-violation | unbound-variable | subtype-failure | indeterminate-arithmetic
    path: tuple[str, ...]
    expected: DualBound | None = None
    actual: DualBound | None = None
    detail: str = ""
    args: tuple = field(init=False)

    def __post_init__(self) -> None:
        self.args = (str(self),)

    def __str__(self) -> str:
        where = ".".join(self.path) if self.path else "program"
        parts = [f"{self.kind} at {where}"]
        if self.expected is not None:
            parts.append(f"expected {self.expected}")
        if self.actual is not None:
            parts.append(f"got {self.actual}")
        if self.detail:
            parts.append(self.detail)
        return ": ".join([parts[0], ", ".join(parts[1:])]) if len(parts) > 1 else parts[0]


def _guaranteed_uniform_support(a_over: Bound, b_over: Bound) -> Bound:
    """Points certainly between the realized endpoints of a Uniform call.

    With argument over-approximations [p,q] and [r,s], a point x lies in the
    support for every possible realization exactly when min(q,s) <= x <= max(p,r).
    This holds even when the two arguments are correlated (e.g. the same
    variable twice), since it never assumes independence.
    """
    if a_over.is_empty or b_over.is_empty:
        return EMPTY
    lo, hi = min(a_over.hi, b_over.hi), max(a_over.lo, b_over.lo)
    return Bound(lo, hi) if lo <= hi else EMPTY


def _infer_arg(ctx: TypingContext, a: Arg, path: tuple[str, ...]) -> DualBound:
    if isinstance(a, Lit):
        return DualBound(singleton(a.value), singleton(a.value))
    found = ctx.lookup(a.level)
    if found is None:
        raise TypeCheckError("unbound-variable", path, detail=f"v{a.level} with {len(ctx)} binder(s) in scope")
    return found


def _check_arg(ctx: TypingContext, a: Arg, required: DualBound, path: tuple[str, ...]) -> DualBound:
    got = _infer_arg(ctx, a, path)
    if not is_subtype(got, required):
        raise TypeCheckError("argument-bound-violation", path, expected=required, actual=got)
    return got


def infer(ctx: TypingContext, e: Expr, _path: tuple[str, ...] = ()) -> DualBound:
    """Principal dual bound of ``e`` under ``ctx``; raises :class:`TypeCheckError`."""
    line = 0
    while isinstance(e, Let):
        line += 1
        bound_ty = infer(ctx, e.bound, _path + (f"binder{line}",))
        ctx = ctx.extended(bound_ty)
        e = e.body
    path = _path if line == 0 else _path + ("body",)

    if isinstance(e, Lit):
        point = singleton(e.value)
        return DualBound(point, point)
    if isinstance(e, Var):
        return _infer_arg(ctx, e, path)
    if isinstance(e, Add):
        a = _infer_arg(ctx, e.arg1, path + ("arg1",))
        b = _infer_arg(ctx, e.arg2, path + ("arg2",))
        try:
            return add_dual_bounds(a, b)
        except IndeterminateSumError as exc:
            raise TypeCheckError("indeterminate-arithmetic", path, detail=str(exc)) from None
    assert isinstance(e, Dist)
    if e.family in (DistFamily.NORMAL, DistFamily.LAPLACE):
        _check_arg(ctx, e.arg1, LOCATION_BOUND, path + ("arg1",))
        _check_arg(ctx, e.arg2, SCALE_BOUND, path + ("arg2",))
        return REAL_LINE
    if e.family is DistFamily.BETA:
        _check_arg(ctx, e.arg1, SCALE_BOUND, path + ("arg1",))
        _check_arg(ctx, e.arg2, SCALE_BOUND, path + ("arg2",))
        return UNIT_INTERVAL
    a = _infer_arg(ctx, e.arg1, path + ("arg1",))
    b = _infer_arg(ctx, e.arg2, path + ("arg2",))
    return DualBound(_guaranteed_uniform_support(a.over, b.over), bound_union(a.over, b.over))


def check(ctx: TypingContext, e: Expr, target: DualBound) -> bool:
    """True iff the principal type of ``e`` is a subtype of ``target``.

    Inference failures (unbound variables, argument violations) propagate
    as :class:`TypeCheckError`; a mere subtype mismatch returns False.
    """
    return is_subtype(infer(ctx, e), target)


def require(ctx: TypingContext, e: Expr, target: DualBound) -> None:
    """Like :func:`check` but raises a subtype-failure error instead of returning False."""
    got = infer(ctx, e)
    if not is_subtype(got, target):
        raise TypeCheckError("subtype-failure", (), expected=target, actual=got)


def typechecks(e: Expr, ctx: TypingContext | None = None) -> bool:
    """Convenience validity oracle: does inference succeed at all?"""
    try:
        infer(ctx or TypingContext(), e)
        return True
    except TypeCheckError:
        return False
