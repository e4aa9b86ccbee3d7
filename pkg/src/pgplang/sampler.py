"""Forward sampling of PGPLang programs.

Each program execution realizes every let binder exactly once; all variable
references to a binder see the same realized value.  ``sample_many`` runs the
whole batch of executions through vectorized numpy draws, node by node, which
is the documented deterministic procedure: the same (program, seed, n) always
yields the same values on one platform, but the batch is not the
concatenation of n single-execution streams.

Runtime parameter domains (checked per execution, at realized values):
  Normal/Laplace scale must be > 0; Beta needs both parameters > 0;
  Uniform endpoints are swapped when given in reverse order, and zero width
  is allowed (a point mass).  Executions whose realized parameters violate
  these, or whose result overflows past float range, fail individually and
  are reported in the error count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ast import Add, Arg, Dist, DistFamily, Expr, Let, Lit, Var


@dataclass
class RngStream:
    """Seeded deterministic random stream with derivable substreams.

    Streams are identified by a 64-bit master seed plus an index path;
    ``substream(i, ...)`` derives an independent stream, so parallel workers
    can be given reproducible per-candidate generators.
    """

    seed: int
    path: tuple[int, ...] = ()
    _gen: np.random.Generator | None = field(default=None, repr=False, compare=False)

    @property
    def gen(self) -> np.random.Generator:
        if self._gen is None:
            entropy = (self.seed & 0xFFFFFFFFFFFFFFFF,) + tuple(p & 0xFFFFFFFFFFFFFFFF for p in self.path)
            self._gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
        return self._gen

    def substream(self, *indices: int) -> "RngStream":
        return RngStream(self.seed, self.path + indices)


@dataclass(frozen=True)
class SampleSet:
    """Multiset of finite real samples with a provenance label."""

    values: np.ndarray
    source: str = ""

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float)
        if arr.size and not np.all(np.isfinite(arr)):
            raise ValueError("sample sets must contain only finite values")
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return int(self.values.size)


class InvalidParameterError(Exception):
    """A realized distribution parameter left its family's domain."""


_TINY = float(np.finfo(float).tiny)


def _flatten(e: Expr) -> tuple[list[Expr], Expr]:
    binders = []
    while isinstance(e, Let):
        binders.append(e.bound)
        e = e.body
    return binders, e


def _realize(a: Arg, env: list[np.ndarray], n: int) -> np.ndarray:
    if isinstance(a, Lit):
        return np.full(n, a.value)
    return env[a.level - 1]


def _draw_node(e: Expr, env: list[np.ndarray], gen: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized draw for one value node; returns (values, bad_mask)."""
    if isinstance(e, Lit):
        return np.full(n, e.value), np.zeros(n, dtype=bool)
    if isinstance(e, Var):
        return env[e.level - 1].copy(), np.zeros(n, dtype=bool)
    if isinstance(e, Add):
        out = _realize(e.arg1, env, n) + _realize(e.arg2, env, n)
        return out, ~np.isfinite(out)
    assert isinstance(e, Dist)
    p1 = _realize(e.arg1, env, n)
    p2 = _realize(e.arg2, env, n)
    if e.family is DistFamily.UNIFORM:
        lo = np.minimum(p1, p2)
        width = p2 - p1
        np.abs(width, out=width)
        bad = ~np.isfinite(width)
        out = lo + np.where(bad, 0.0, width) * gen.random(n)
        return out, bad | ~np.isfinite(out)
    if e.family is DistFamily.BETA:
        bad = ~((p1 > 0) & (p2 > 0) & np.isfinite(p1) & np.isfinite(p2))
        out = gen.beta(np.where(bad, 1.0, p1), np.where(bad, 1.0, p2))
        # a Beta variate is almost surely strictly positive; tiny-alpha draws
        # underflow float64 to exact 0.0, which would poison downstream scale
        # parameters, so lift them to the smallest positive normal float
        np.clip(out, _TINY, None, out=out)
        return out, bad
    # Normal and Laplace share the location/scale contract
    bad = ~((p2 > 0) & np.isfinite(p2) & np.isfinite(p1))
    loc = np.where(bad, 0.0, p1)
    scale = np.where(bad, 1.0, p2)
    out = gen.normal(loc, scale) if e.family is DistFamily.NORMAL else gen.laplace(loc, scale)
    return out, bad | ~np.isfinite(out)


def sample_many(e: Expr, n: int, rng: RngStream) -> tuple[SampleSet, int]:
    """Run ``n`` independent executions; failures are counted, not raised."""
    if n < 1:
        raise ValueError("sample count must be >= 1")
    gen = rng.gen
    binders, root = _flatten(e)
    ok = np.ones(n, dtype=bool)
    env: list[np.ndarray] = []
    for bound in binders:
        values, bad = _draw_node(bound, env, gen, n)
        ok &= ~bad & np.isfinite(values)
        env.append(np.where(np.isfinite(values), values, 0.0))
    values, bad = _draw_node(root, env, gen, n)
    ok &= ~bad & np.isfinite(values)
    return SampleSet(values[ok]), int(n - ok.sum())


def sample_once(e: Expr, rng: RngStream) -> float:
    """Single execution; raises :class:`InvalidParameterError` on a failed run."""
    samples, errors = sample_many(e, 1, rng)
    if errors:
        raise InvalidParameterError("realized parameters violated a distribution domain")
    return float(samples.values[0])


# --- sample files (one finite decimal real per line) -------------------------


def write_samples(samples: SampleSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for v in samples.values:
            fh.write(repr(float(v)))
            fh.write("\n")


def read_samples(path, source: str | None = None) -> SampleSet:
    with open(path, "r", encoding="utf-8") as fh:
        values = [float(line) for line in fh if line.strip()]
    return SampleSet(np.asarray(values), source=source if source is not None else str(path))
