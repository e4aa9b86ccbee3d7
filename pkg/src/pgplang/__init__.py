"""PGPLang: a tiny probabilistic language with interval dual-bound types.

The pieces, bottom up: an ANF abstract syntax with parser and printer
(:mod:`pgplang.ast`, :mod:`pgplang.parser`), interval algebra over the
extended reals (:mod:`pgplang.intervals`), the typing judgement
(:mod:`pgplang.typecheck`), a vectorized forward sampler
(:mod:`pgplang.sampler`), sound type-directed synthesis
(:mod:`pgplang.synth`), a type-agnostic random baseline
(:mod:`pgplang.baseline`), goodness-of-fit regression search
(:mod:`pgplang.regression`) and the benchmark harness (:mod:`pgplang.bench`).
"""

from .ast import Add, Arg, Dist, DistFamily, Expr, Let, Lit, Var, node_cost, print_program
from .intervals import (
    EMPTY,
    FULL,
    Bound,
    DualBound,
    add_bounds,
    add_dual_bounds,
    bound_intersect,
    bound_subset,
    bound_union,
    closed,
    dual,
    format_dual,
    is_subtype,
    parse_dual_bound,
    singleton,
)
from .parser import ParseError, parse_program
from .sampler import InvalidParameterError, RngStream, SampleSet, sample_many, sample_once
from .synth import RuleWeights, SynthRequest, UnsatisfiableRequestError, partition_add, pick, split_budget, synthesize
from .typecheck import TypeCheckError, TypingContext, check, infer

__version__ = "0.1.0"

__all__ = [
    "Add", "Arg", "Bound", "Dist", "DistFamily", "DualBound", "EMPTY", "Expr", "FULL",
    "InvalidParameterError", "Let", "Lit", "ParseError", "RngStream", "RuleWeights",
    "SampleSet", "SynthRequest", "TypeCheckError", "TypingContext",
    "UnsatisfiableRequestError", "Var",
    "add_bounds", "add_dual_bounds", "bound_intersect", "bound_subset", "bound_union",
    "check", "closed", "dual", "format_dual", "infer", "is_subtype", "node_cost",
    "parse_dual_bound", "parse_program", "partition_add", "pick", "print_program",
    "sample_many", "sample_once", "singleton", "split_budget", "synthesize",
]
