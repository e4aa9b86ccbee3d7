"""Abstract syntax for PGPLang programs in A-normal form.

Programs are straight-line let chains over four distribution families and
a single deterministic ``add`` operator.  Operator arguments are restricted
to variables and literals; intermediate values must be let-bound.  Variables
are De Bruijn levels counted from the start of the context, so ``v1`` always
refers to the first binder of the program.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union


class DistFamily(enum.Enum):
    """The primitive distribution families.  Each takes exactly two arguments."""

    NORMAL = "Normal"
    UNIFORM = "Uniform"
    LAPLACE = "Laplace"
    BETA = "Beta"


@dataclass(frozen=True)
class Lit:
    """A finite real literal."""

    value: float

    def __post_init__(self) -> None:
        v = float(self.value)
        if math.isnan(v) or math.isinf(v):
            raise ValueError(f"literal must be finite, got {self.value!r}")
        object.__setattr__(self, "value", v)


@dataclass(frozen=True)
class Var:
    """Reference to the binder introduced on line ``level`` (1-based De Bruijn level)."""

    level: int

    def __post_init__(self) -> None:
        if not isinstance(self.level, int) or self.level < 1:
            raise ValueError(f"variable level must be a positive integer, got {self.level!r}")


Arg = Union[Var, Lit]


def _check_arg(node: object, what: str) -> None:
    if not isinstance(node, (Var, Lit)):
        raise ValueError(f"{what} must be a variable or literal, got {type(node).__name__}")


@dataclass(frozen=True)
class Dist:
    """A distribution call ``Family arg arg``."""

    family: DistFamily
    arg1: Arg
    arg2: Arg

    def __post_init__(self) -> None:
        if not isinstance(self.family, DistFamily):
            raise ValueError(f"unknown distribution family {self.family!r}")
        _check_arg(self.arg1, "distribution argument")
        _check_arg(self.arg2, "distribution argument")


@dataclass(frozen=True)
class Add:
    """The deterministic sum ``add arg arg``."""

    arg1: Arg
    arg2: Arg

    def __post_init__(self) -> None:
        _check_arg(self.arg1, "add argument")
        _check_arg(self.arg2, "add argument")


@dataclass(frozen=True)
class Let:
    """``let <value> in <body>``.  The bound expression is a value form, never a Let."""

    bound: "Expr"
    body: "Expr"

    def __post_init__(self) -> None:
        if isinstance(self.bound, Let):
            raise ValueError("let-bound expression must be a value form, not another let")
        if not isinstance(self.bound, (Dist, Add, Lit)):
            raise ValueError(f"let-bound expression must be Dist, Add or Lit, got {type(self.bound).__name__}")


Expr = Union[Lit, Var, Dist, Add, Let]


def node_cost(e: Expr) -> int:
    """Number of non-trivial nodes: distribution calls and adds.

    Literals, variables and the let binders themselves are free.
    """
    cost = 0
    while isinstance(e, Let):
        cost += node_cost(e.bound)
        e = e.body
    if isinstance(e, (Dist, Add)):
        cost += 1
    return cost


def max_level(e: Expr) -> int:
    """Highest variable level referenced anywhere in ``e`` (0 if none)."""

    def arg_level(a: Arg) -> int:
        return a.level if isinstance(a, Var) else 0

    if isinstance(e, Var):
        return e.level
    if isinstance(e, Lit):
        return 0
    if isinstance(e, (Dist, Add)):
        return max(arg_level(e.arg1), arg_level(e.arg2))
    return max(max_level(e.bound), max_level(e.body))


def check_scopes(e: Expr, depth: int = 0) -> None:
    """Raise ValueError if any variable refers past the enclosing binders."""
    while isinstance(e, Let):
        check_scopes(e.bound, depth)
        depth += 1
        e = e.body
    lvl = max_level(e)
    if lvl > depth:
        raise ValueError(f"unbound variable v{lvl}: only {depth} binder(s) in scope")


def format_literal(v: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(v))


def _format_value(e: Expr) -> str:
    if isinstance(e, Lit):
        return format_literal(e.value)
    if isinstance(e, Var):
        return f"v{e.level}"
    if isinstance(e, Dist):
        return f"{e.family.value} {_format_value(e.arg1)} {_format_value(e.arg2)}"
    if isinstance(e, Add):
        return f"add {_format_value(e.arg1)} {_format_value(e.arg2)}"
    raise ValueError(f"not a value form: {type(e).__name__}")


def print_program(e: Expr) -> str:
    """Render a program in concrete syntax, one binder per line.

    Inverse of :func:`pgplang.parser.parse_program` up to whitespace and
    literal formatting.
    """
    lines = []
    while isinstance(e, Let):
        lines.append(f"let {_format_value(e.bound)} in")
        e = e.body
    lines.append(_format_value(e))
    return "\n".join(lines)
