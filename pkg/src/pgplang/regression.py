"""Stochastic symbolic regression over PGPLang programs.

Generate-and-score random restart: repeatedly draw a candidate program
(type-directed synthesis in typed mode, grammar sampling in baseline mode),
sample it, and score the samples against the evidence with a two-sample
goodness-of-fit statistic.  Lower scores are better; the search keeps the
minimum.  Everything is reproducible from the master seed: iteration ``i``
consumes only the substream derived for ``i``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .ast import Expr
from .baseline import GenConfig, generate_random
from .intervals import ANY_VALUE, Bound, DualBound, EMPTY
from .sampler import RngStream, SampleSet, sample_many
from .synth import DEFAULT_WEIGHTS, RuleWeights, SynthRequest, synthesize

METRICS = ("ks", "energy")

# invalid candidates must never beat a valid one: the KS statistic is at most 1
_PENALTY = {"ks": 2.0, "energy": math.inf}


@dataclass(frozen=True)
class FitnessScore:
    """A goodness-of-fit value; lower means the samples match the evidence better."""

    value: float
    metric: str
    n_evidence: int
    n_candidate: int


def ks_statistic(a: np.ndarray, b: np.ndarray) -> float:
    """Two-sample Kolmogorov-Smirnov statistic: sup distance of empirical CDFs."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    points = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, points, side="right") / a.size
    cdf_b = np.searchsorted(b, points, side="right") / b.size
    return float(np.max(np.abs(cdf_a - cdf_b)))


def energy_distance(a: np.ndarray, b: np.ndarray) -> float:
    """One-dimensional energy distance, 2*E|X-Y| - E|X-X'| - E|Y-Y'|.

    Uses the closed form 2*integral (F - G)^2 over the merged sample grid,
    which equals the V-statistic estimate (all pairs, including self-pairs).
    """
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    grid = np.sort(np.concatenate([a, b]))
    cdf_a = np.searchsorted(a, grid, side="right") / a.size
    cdf_b = np.searchsorted(b, grid, side="right") / b.size
    widths = np.diff(grid)
    return float(2.0 * np.sum((cdf_a[:-1] - cdf_b[:-1]) ** 2 * widths))


_METRIC_FNS = {"ks": ks_statistic, "energy": energy_distance}


def fitness(evidence: SampleSet, candidate: SampleSet, metric: str = "ks") -> FitnessScore:
    """Symmetric two-sample goodness-of-fit score between the two sample sets."""
    if metric not in _METRIC_FNS:
        raise ValueError(f"unknown metric {metric!r}; pick one of {METRICS}")
    if len(evidence) == 0 or len(candidate) == 0:
        raise ValueError("fitness requires two non-empty sample sets")
    value = _METRIC_FNS[metric](evidence.values, candidate.values)
    return FitnessScore(value, metric, len(evidence), len(candidate))


def evaluate_candidate(
    e: Expr,
    evidence: SampleSet,
    n_c: int,
    rng: RngStream,
    metric: str = "ks",
) -> tuple[FitnessScore, bool]:
    """Sample a candidate and score it; runtime failures yield a dominated penalty score.

    Returns (score, valid).  Typed-mode candidates never fail; baseline
    candidates that raise runtime parameter errors get the penalty, keeping
    them comparable but strictly worse than every valid candidate.
    """
    samples, errors = sample_many(e, n_c, rng)
    if errors > 0 or len(samples) == 0:
        return FitnessScore(_PENALTY[metric], metric, len(evidence), len(samples)), False
    return fitness(evidence, samples, metric), True


@dataclass
class SearchConfig:
    """Configuration for one regression search run."""

    mode: str  # "typed" | "baseline"
    evidence: SampleSet
    budget: int
    seed: int
    seed_path: tuple[int, ...] = ()
    iteration_limit: int | None = None
    time_limit: float | None = None
    n_candidate_samples: int = 256
    metric: str = "ks"
    target: DualBound | None = None
    derive_target_from_evidence: bool = False
    rule_weights: RuleWeights = DEFAULT_WEIGHTS
    gen_config: GenConfig | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("typed", "baseline"):
            raise ValueError(f"mode must be 'typed' or 'baseline', got {self.mode!r}")
        if self.iteration_limit is None and self.time_limit is None:
            raise ValueError("at least one stopping criterion must be set")
        if self.n_candidate_samples < 30:
            raise ValueError("candidate sample count must be at least 30")
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if len(self.evidence) == 0:
            raise ValueError("evidence must be non-empty")

    def resolved_target(self) -> DualBound:
        if self.target is not None:
            return self.target
        if self.derive_target_from_evidence:
            values = self.evidence.values
            return DualBound(EMPTY, Bound(float(values.min()), float(values.max())))
        return ANY_VALUE


@dataclass(frozen=True)
class TraceEntry:
    iteration: int
    score: float
    valid: bool


@dataclass
class SearchResult:
    best_program: Expr | None
    best_score: float
    best_valid: bool
    trace: list[TraceEntry]
    invalid_count: int
    iterations: int
    config: SearchConfig
    elapsed_seconds: float = field(compare=False, default=0.0)


def search(cfg: SearchConfig) -> SearchResult:
    """Generate-and-score loop; fully reproducible from (seed, seed_path)."""
    master = RngStream(cfg.seed, cfg.seed_path)
    target = cfg.resolved_target()
    gen_cfg = cfg.gen_config if cfg.gen_config is not None else GenConfig(cfg.budget)
    evidence_sorted = SampleSet(np.sort(cfg.evidence.values), cfg.evidence.source)

    trace: list[TraceEntry] = []
    best_program, best_score, best_valid = None, math.inf, False
    invalid = 0
    started = time.monotonic()
    i = 0
    while True:
        if cfg.iteration_limit is not None and i >= cfg.iteration_limit:
            break
        if cfg.time_limit is not None and time.monotonic() - started >= cfg.time_limit:
            break
        sub = master.substream(i)
        if cfg.mode == "typed":
            candidate = synthesize(SynthRequest(target, cfg.budget, sub, weights=cfg.rule_weights))
        else:
            candidate = generate_random(gen_cfg, sub)
        score, valid = evaluate_candidate(candidate, evidence_sorted, cfg.n_candidate_samples, sub, cfg.metric)
        if not valid:
            invalid += 1
        trace.append(TraceEntry(i, score.value, valid))
        if score.value < best_score or best_program is None:
            best_program, best_score, best_valid = candidate, score.value, valid
        i += 1
    return SearchResult(
        best_program=best_program,
        best_score=best_score,
        best_valid=best_valid,
        trace=trace,
        invalid_count=invalid,
        iterations=i,
        config=cfg,
        elapsed_seconds=time.monotonic() - started,
    )
