"""Type-directed synthesis of PGPLang programs.

Synthesis is single-pass and never backtracks: every recursive request it
issues is satisfiable by construction, and every produced program typechecks
as a subtype of the requested dual bound within the node budget.  Children
that are not plain constants or variable reuses are emitted as let binders,
so the output is always in A-normal form.

Requests are (context, target dual bound, budget); each distribution family
has one synthesis rule mirroring its typing rule, plus two constant rules at
budget zero and a context-reuse rule available at any budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .ast import Add, Arg, Dist, DistFamily, Expr, Let, Lit, Var
from .intervals import EMPTY, FULL, NON_NEGATIVE, UNIT, Bound, DualBound, bound_subset, is_subtype
from .sampler import RngStream
from .typecheck import TypingContext

_MAX_FLOAT = 1.7976931348623157e308


class UnsatisfiableRequestError(Exception):
    """No rule can satisfy the request; only reachable from an impossible root request."""


@dataclass(frozen=True)
class RuleWeights:
    """Relative selection weights among applicable rules.

    ``var`` is counted once per eligible context entry; ``const`` covers both
    budget-zero constant rules.
    """

    normal: float = 1.0
    laplace: float = 1.0
    beta: float = 1.0
    uniform: float = 1.0
    add: float = 1.0
    var: float = 1.0
    const: float = 1.0

    def __post_init__(self) -> None:
        for name in ("normal", "laplace", "beta", "uniform", "add", "var", "const"):
            if getattr(self, name) < 0:
                raise ValueError(f"rule weight {name} must be nonnegative")


DEFAULT_WEIGHTS = RuleWeights()


@dataclass
class SynthRequest:
    """A synthesis request: produce an expression of type ``target`` within ``budget`` nodes."""

    target: DualBound
    budget: int
    rng: RngStream
    ctx: TypingContext = field(default_factory=TypingContext)
    weights: RuleWeights = DEFAULT_WEIGHTS


def split_budget(b: int, rng: RngStream) -> tuple[int, int]:
    """Split ``b`` among two children, uniformly; one unit pays for the node itself."""
    if b <= 0:
        raise ValueError("cannot split a non-positive budget")
    b_l = int(rng.gen.integers(0, b))
    return b_l, b - 1 - b_l


def pick(rng_range: Bound, rng: RngStream) -> float:
    """Draw a value inside a non-empty range; the supports match the range.

    Fully infinite ranges use a standard normal, half-infinite ranges an
    offset half-normal, finite ranges a uniform.  The result is always a
    finite float inside the range (overflow falls back to a finite endpoint).
    """
    if rng_range.is_empty:
        raise ValueError("cannot pick from an empty range")
    lo, hi = rng_range.lo, rng_range.hi
    gen = rng.gen
    if math.isinf(lo) and math.isinf(hi):
        if lo == hi:
            raise ValueError(f"range {rng_range} contains no finite value")
        value = gen.normal(0.0, 1.0)
    elif math.isinf(hi):
        value = lo + abs(gen.normal(0.0, 1.0))
    elif math.isinf(lo):
        value = hi - abs(gen.normal(0.0, 1.0))
    else:
        value = gen.uniform(lo, hi)
    if not math.isfinite(value):
        value = lo if math.isfinite(lo) else (hi if math.isfinite(hi) else 0.0)
    return float(min(max(value, max(lo, -_MAX_FLOAT)), min(hi, _MAX_FLOAT)))


# --- point lists -------------------------------------------------------------
#
# A dual bound is carried through the add rule as a flat nondecreasing list of
# 2 points [o_l, o_h] (empty under) or 4 points [o_l, u_l, u_h, o_h].


def dual_to_points(d: DualBound) -> list[float]:
    if d.over.is_empty:
        raise ValueError("cannot represent an empty over-approximation as points")
    if d.under.is_empty:
        return [d.over.lo, d.over.hi]
    return [d.over.lo, d.under.lo, d.under.hi, d.over.hi]


def points_to_dual(points: list[float]) -> DualBound:
    if len(points) == 2:
        return DualBound(EMPTY, Bound(points[0], points[1]))
    if len(points) == 4:
        return DualBound(Bound(points[1], points[2]), Bound(points[0], points[3]))
    raise ValueError(f"point lists have 2 or 4 entries, got {len(points)}")


def _diff(a: float, b: float) -> float:
    """Maximum transferable length between consecutive points; infinite gaps transfer freely."""
    if math.isinf(a) or math.isinf(b):
        return math.inf
    return b - a


def _nondecreasing(xs: list[float]) -> bool:
    return all(xs[i] <= xs[i + 1] for i in range(len(xs) - 1))


def _exact_pair(v: float, x: float, y: float) -> tuple[float, float]:
    """Nudge (x, y) so that x + y == v holds exactly in float arithmetic."""
    if math.isinf(v):
        return v, y if math.isfinite(y) else 0.0
    for _ in range(4):
        if x + y == v:
            return x, y
        y = v - x
        if x + y == v:
            return x, y
        x = v - y
    return v, 0.0


def partition_add(vals: list[float], rng: RngStream) -> tuple[list[float], list[float]]:
    """Randomly split a point list into two lists with exact pointwise sums.

    One side starts with the full list and the other with zeros; each gap then
    transfers a cumulative random amount of length (never more than the gap),
    and finally both sides are shifted by one random perturbation in opposite
    directions.  Float rounding in those steps can leave a sum one ulp off, so
    a repair pass re-derives the offending coordinates; in the rare case where
    no exact nondecreasing pair exists near the draw, the degenerate split
    (vals, zeros) is returned instead.
    """
    if len(vals) not in (2, 4):
        raise ValueError(f"point lists have 2 or 4 entries, got {len(vals)}")
    if any(math.isnan(v) for v in vals):
        raise ValueError("point lists must not contain NaN")
    if not _nondecreasing(vals):
        raise ValueError("point lists must be nondecreasing")

    r1 = [float(v) for v in vals]
    r2 = [0.0] * len(vals)
    currmag = 0.0
    for n in range(1, len(vals)):
        maxmag = _diff(vals[n - 1], vals[n])
        currmag += pick(Bound(0.0, maxmag), rng)
        r1[n] -= currmag
        r2[n] += currmag
    perturbation = pick(FULL, rng)
    for i in range(len(r1)):
        r1[i] += perturbation
        r2[i] -= perturbation

    for i, v in enumerate(vals):
        r1[i], r2[i] = _exact_pair(v, r1[i], r2[i])
    if _nondecreasing(r1) and _nondecreasing(r2):
        return r1, r2
    return [float(v) for v in vals], [0.0] * len(vals)


# --- the synthesis rules ------------------------------------------------------

_SCALE_TARGET = DualBound(EMPTY, NON_NEGATIVE)
_LOCATION_TARGET = DualBound(EMPTY, FULL)


def _finite_endpoints(b: Bound) -> bool:
    return not b.is_empty and math.isfinite(b.lo) and math.isfinite(b.hi)


def _pickable(b: Bound) -> bool:
    """Ranges containing at least one finite value."""
    return not b.is_empty and not (b.lo == b.hi and math.isinf(b.lo))


class _Builder:
    def __init__(self, req: SynthRequest):
        self.entries: list[DualBound] = list(req.ctx.entries)
        self.binders: list[Expr] = []
        self.rng = req.rng
        self.weights = req.weights

    def _eligible_vars(self, target: DualBound) -> list[int]:
        return [i + 1 for i, entry in enumerate(self.entries) if is_subtype(entry, target)]

    def _alternatives(self, target: DualBound, budget: int) -> list[tuple[str, float]]:
        w = self.weights
        under, over = target.under, target.over
        alts: list[tuple[str, float]] = []
        if budget == 0:
            if under.is_empty and _pickable(over):
                alts.append(("const_range", w.const))
            elif not under.is_empty and under.lo == under.hi and math.isfinite(under.lo):
                alts.append(("const_single", w.const))
        else:
            if over == FULL:
                alts.append(("normal", w.normal))
                alts.append(("laplace", w.laplace))
            if bound_subset(UNIT, over) and bound_subset(under, UNIT):
                alts.append(("beta", w.beta))
            if under.is_empty:
                if _pickable(over):
                    alts.append(("uniform_loose", w.uniform))
            elif _finite_endpoints(under):
                alts.append(("uniform_strict", w.uniform))
            if budget >= 3 and (under.is_empty or _finite_endpoints(under) or over == FULL):
                alts.append(("add", w.add))
        for level in self._eligible_vars(target):
            alts.append((f"var{level}", w.var))
        return [(name, weight) for name, weight in alts if weight > 0]

    def _choose(self, alts: list[tuple[str, float]]) -> str:
        total = sum(weight for _, weight in alts)
        x = self.rng.gen.random() * total
        for name, weight in alts:
            x -= weight
            if x < 0:
                return name
        return alts[-1][0]

    def synth(self, target: DualBound, budget: int) -> Expr:
        alts = self._alternatives(target, budget)
        if not alts:
            raise UnsatisfiableRequestError(f"no applicable rule for {target} at budget {budget}")
        rule = self._choose(alts)
        if rule.startswith("var"):
            return Var(int(rule[3:]))
        return getattr(self, "_" + rule)(target, budget)

    def synth_arg(self, target: DualBound, budget: int) -> Arg:
        """Synthesize a child and reduce it to an argument, let-binding value forms."""
        child = self.synth(target, budget)
        if isinstance(child, (Var, Lit)):
            return child
        self.binders.append(child)
        self.entries.append(target)
        return Var(len(self.entries))

    # rule bodies, in the fixed order used by _alternatives

    def _const_single(self, target: DualBound, budget: int) -> Expr:
        return Lit(target.under.lo)

    def _const_range(self, target: DualBound, budget: int) -> Expr:
        return Lit(pick(target.over, self.rng))

    def _two_dist_args(self, budget: int, left: DualBound, right: DualBound) -> tuple[Arg, Arg]:
        b_l, b_r = split_budget(budget, self.rng)
        return self.synth_arg(left, b_l), self.synth_arg(right, b_r)

    def _normal(self, target: DualBound, budget: int) -> Expr:
        mu, sigma = self._two_dist_args(budget, _LOCATION_TARGET, _SCALE_TARGET)
        return Dist(DistFamily.NORMAL, mu, sigma)

    def _laplace(self, target: DualBound, budget: int) -> Expr:
        mu, scale = self._two_dist_args(budget, _LOCATION_TARGET, _SCALE_TARGET)
        return Dist(DistFamily.LAPLACE, mu, scale)

    def _beta(self, target: DualBound, budget: int) -> Expr:
        alpha, beta = self._two_dist_args(budget, _SCALE_TARGET, _SCALE_TARGET)
        return Dist(DistFamily.BETA, alpha, beta)

    def _uniform_strict(self, target: DualBound, budget: int) -> Expr:
        under, over = target.under, target.over
        left = DualBound(EMPTY, Bound(over.lo, under.lo))
        right = DualBound(EMPTY, Bound(under.hi, over.hi))
        lo_arg, hi_arg = self._two_dist_args(budget, left, right)
        return Dist(DistFamily.UNIFORM, lo_arg, hi_arg)

    def _uniform_loose(self, target: DualBound, budget: int) -> Expr:
        b_l, b_r = split_budget(budget, self.rng)
        split = pick(target.over, self.rng)
        lo_arg = self.synth_arg(DualBound(EMPTY, Bound(target.over.lo, split)), b_l)
        hi_arg = self.synth_arg(DualBound(EMPTY, Bound(split, target.over.hi)), b_r)
        return Dist(DistFamily.UNIFORM, lo_arg, hi_arg)

    def _add(self, target: DualBound, budget: int) -> Expr:
        # both children must be able to spend a node: a zero-budget child could
        # not cover a non-degenerate under-approximation segment
        b_l = 1 + int(self.rng.gen.integers(0, budget - 2))
        b_r = budget - 1 - b_l
        points_l, points_r = partition_add(dual_to_points(target), self.rng)
        left = self.synth_arg(points_to_dual(points_l), b_l)
        right = self.synth_arg(points_to_dual(points_r), b_r)
        return Add(left, right)


def synthesize(req: SynthRequest) -> Expr:
    """Produce an ANF expression that typechecks against ``req.target``.

    The result has node cost at most ``req.budget``.  Raises
    :class:`UnsatisfiableRequestError` only when the root request itself is
    impossible; internally generated sub-requests always succeed.
    """
    if req.budget < 0:
        raise ValueError("budget must be nonnegative")
    builder = _Builder(req)
    root = builder.synth(req.target, req.budget)
    program: Expr = root
    for bound in reversed(builder.binders):
        program = Let(bound, program)
    return program


def synthesize_many(req: SynthRequest, count: int) -> list[Expr]:
    """Independent programs for the same request, one rng substream per candidate."""
    return [synthesize(replace(req, rng=req.rng.substream(i))) for i in range(count)]
