"""Type-agnostic syntax-guided random program generation.

The comparison baseline: programs are sampled from the ANF grammar with no
knowledge of the type system, so a fraction of them violate distribution
parameter bounds.  Validity can then be screened either statically (the
typechecker, used as the ground-truth oracle for the success-rate curve) or
dynamically by sampling, which is deliberately unsound: programs whose
invalid executions are rare pass the sampling screen.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .ast import Add, Arg, Dist, DistFamily, Expr, Let, Lit, Var
from .sampler import RngStream, sample_many
from .typecheck import typechecks

_FAMILY_ORDER = (DistFamily.NORMAL, DistFamily.UNIFORM, DistFamily.LAPLACE, DistFamily.BETA)


@dataclass(frozen=True)
class GenConfig:
    """Grammar production weights and literal parameters for random generation.

    The defaults are tuned so that the per-node chance of a type violation is
    a few percent, which puts the 50% validity break-point of the success
    curve in the budget 10..40 region: literals are drawn as magnitudes
    (``|Normal(loc, scale)|``) so constant scale parameters are always legal,
    and variables are used sparingly in argument positions since a variable
    bound to an unbounded distribution poisons any scale slot it lands in.
    """

    budget: int
    family_weights: tuple[float, float, float, float, float] = (1.0, 1.0, 1.0, 1.0, 1.0)
    var_arg_prob: float = 0.08
    literal_loc: float = 0.0
    literal_scale: float = 10.0
    literal_folded: bool = True

    def __post_init__(self) -> None:
        if self.budget < 1:
            raise ValueError("budget must be positive")
        if any(w < 0 for w in self.family_weights) or sum(self.family_weights) <= 0:
            raise ValueError("family weights must be nonnegative and not all zero")
        if not 0.0 <= self.var_arg_prob <= 1.0:
            raise ValueError("var_arg_prob must be a probability")


def generate_random(cfg: GenConfig, rng: RngStream) -> Expr:
    """One grammatically well-formed, scope-correct ANF program.

    Uses the full node budget: budget-1 binders plus the final value, each a
    distribution call or an add.  Not guaranteed to typecheck.
    """
    b = cfg.budget
    gen = rng.gen
    cum = np.cumsum(cfg.family_weights, dtype=float)
    cum /= cum[-1]
    kinds = np.searchsorted(cum, gen.random(b), side="right")
    use_var = gen.random((b, 2)) < cfg.var_arg_prob
    level_u = gen.random((b, 2))
    lits = gen.normal(cfg.literal_loc, cfg.literal_scale, size=(b, 2))
    if cfg.literal_folded:
        np.abs(lits, out=lits)

    def make_arg(i: int, j: int, depth: int) -> Arg:
        if depth > 0 and use_var[i, j]:
            return Var(1 + int(level_u[i, j] * depth))
        return Lit(float(lits[i, j]))

    nodes: list[Expr] = []
    for i in range(b):
        a1, a2 = make_arg(i, 0, i), make_arg(i, 1, i)
        if kinds[i] >= 4:
            nodes.append(Add(a1, a2))
        else:
            nodes.append(Dist(_FAMILY_ORDER[kinds[i]], a1, a2))
    program: Expr = nodes[-1]
    for bound in reversed(nodes[:-1]):
        program = Let(bound, program)
    return program


def validate_by_sampling(e: Expr, n: int, rng: RngStream) -> bool:
    """True iff ``n`` executions all succeed.

    Deliberately unsound as a validity check: a program whose invalid
    parameter draws are rare will almost always pass.
    """
    _, errors = sample_many(e, n, rng)
    return errors == 0


def success_count(budget: int, trials: int, rng: RngStream, cfg: GenConfig | None = None) -> int:
    """How many of ``trials`` random programs pass the static typechecker."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    cfg = replace(cfg, budget=budget) if cfg is not None else GenConfig(budget)
    return sum(1 for i in range(trials) if typechecks(generate_random(cfg, rng.substream(i))))


def success_rate(budget: int, trials: int, rng: RngStream, cfg: GenConfig | None = None) -> float:
    """Fraction of random programs at this budget that typecheck."""
    return success_count(budget, trials, rng, cfg) / trials
