"""Benchmark harness: corpus management, evidence generation, and the
typed-vs-baseline regression comparison grid.

A suite is a list of ground-truth programs; each one is sampled into an
evidence file, then both search modes run against every (test, seed, budget)
cell.  Reports are written as a deterministic CSV plus JSON (identical bytes
for identical suite and master seed), with wall-clock timings segregated
into a separate metadata file.  Static comparison plots are rendered from
the report.
"""

from __future__ import annotations

import csv
import io
import json
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .ast import Expr, print_program
from .baseline import GenConfig, success_count
from .parser import parse_program
from .regression import SearchConfig, SearchResult, search
from .sampler import RngStream, sample_many, write_samples, read_samples
from .typecheck import TypeCheckError, TypingContext, infer

REPORT_SCHEMA_VERSION = 1
MODES = ("typed", "baseline")


def corpus_dir() -> Path:
    """Location of the bundled ground-truth corpus."""
    return Path(resources.files("pgplang") / "corpus")


def corpus_tests() -> list[tuple[str, Path]]:
    paths = sorted(corpus_dir().glob("*.pgp"))
    return [(p.stem, p) for p in paths]


@dataclass
class BenchSuite:
    """One benchmark configuration: tests plus the experiment grid."""

    tests: list[tuple[str, Path]] = field(default_factory=corpus_tests)
    n_evidence: int = 10_000
    seeds: list[int] = field(default_factory=lambda: list(range(20)))
    budgets: list[int] = field(default_factory=lambda: [31])
    time_limit: float | None = 5.0
    iteration_limit: int | None = 120
    n_candidate_samples: int = 256
    metric: str = "ks"
    master_seed: int = 0
    success_curve_trials: int = 1000
    threads: int = 1
    config_text: str = ""  # verbatim suite file echo, if loaded from one

    def __post_init__(self) -> None:
        ids = [tid for tid, _ in self.tests]
        if len(set(ids)) != len(ids):
            raise ValueError("test ids must be unique")
        for tid, path in self.tests:
            if not Path(path).exists():
                raise ValueError(f"test {tid}: no such file {path}")


@dataclass(frozen=True)
class BenchRow:
    test: str
    seed: int
    mode: str
    budget: int
    best_score: float
    invalid: int
    iterations: int
    best_program: str


@dataclass
class BenchReport:
    rows: list[BenchRow]
    aggregates: dict
    suite_echo: str
    runtimes: dict[str, float] = field(default_factory=dict)  # cell key -> seconds, metadata only


def _test_stream(master_seed: int, test_id: str) -> RngStream:
    return RngStream(master_seed, (zlib.crc32(test_id.encode("utf-8")),))


def load_ground_truth(path: Path) -> Expr:
    return parse_program(Path(path).read_text(encoding="utf-8"))


def make_evidence(suite: BenchSuite, seed: int, outdir: Path) -> dict[str, Path]:
    """Sample every ground-truth program into a .samples file, deterministically.

    Programs that fail the typechecker are skipped with a logged diagnostic.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    produced: dict[str, Path] = {}
    for test_id, path in suite.tests:
        program = load_ground_truth(path)
        try:
            infer(TypingContext(), program)
        except TypeCheckError as exc:
            print(f"skipping {test_id}: ground truth does not typecheck: {exc}")
            continue
        samples, errors = sample_many(program, suite.n_evidence, _test_stream(seed, test_id))
        if errors:
            print(f"skipping {test_id}: ground truth failed {errors} executions")
            continue
        target = outdir / f"{test_id}.samples"
        write_samples(samples, target)
        produced[test_id] = target
    return produced


def _cell_config(suite: BenchSuite, evidence, test_index: int, seed: int, mode: str, budget: int) -> SearchConfig:
    return SearchConfig(
        mode=mode,
        evidence=evidence,
        budget=budget,
        seed=suite.master_seed,
        seed_path=(test_index, seed, MODES.index(mode), budget),
        iteration_limit=suite.iteration_limit,
        time_limit=suite.time_limit,
        n_candidate_samples=suite.n_candidate_samples,
        metric=suite.metric,
    )


def _run_cell(args) -> tuple[BenchRow, float]:
    suite, evidence, test_id, test_index, seed, mode, budget = args
    result: SearchResult = search(_cell_config(suite, evidence, test_index, seed, mode, budget))
    program_text = print_program(result.best_program).replace("\n", "; ") if result.best_program else ""
    row = BenchRow(test_id, seed, mode, budget, result.best_score, result.invalid_count,
                   result.iterations, program_text)
    return row, result.elapsed_seconds


def run_suite(suite: BenchSuite, outdir: Path, modes: tuple[str, ...] = MODES) -> BenchReport:
    """Run the full grid and write report.csv, report.json, meta.json and plots."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    started = time.time()
    evidence_paths = make_evidence(suite, suite.master_seed, outdir / "evidence")
    evidence = {tid: read_samples(p, source=tid) for tid, p in evidence_paths.items()}

    jobs = []
    for test_index, (test_id, _) in enumerate(suite.tests):
        if test_id not in evidence:
            continue
        for seed in suite.seeds:
            for mode in modes:
                for budget in suite.budgets:
                    jobs.append((suite, evidence[test_id], test_id, test_index, seed, mode, budget))

    rows: list[BenchRow] = []
    runtimes: dict[str, float] = {}
    if suite.threads > 1:
        with ThreadPoolExecutor(max_workers=suite.threads) as pool:
            outcomes = list(pool.map(_run_cell, jobs))
    else:
        outcomes = [_run_cell(job) for job in jobs]
    for row, elapsed in outcomes:
        rows.append(row)
        runtimes[f"{row.test}/{row.seed}/{row.mode}/{row.budget}"] = elapsed

    aggregates = compute_aggregates(rows)
    self_audit(rows, aggregates)
    report = BenchReport(rows, aggregates, suite.config_text, runtimes)

    write_report_csv(report, outdir / "report.csv")
    write_report_json(report, outdir / "report.json")
    meta = {
        "started_unix": started,
        "finished_unix": time.time(),
        "cell_runtimes_seconds": runtimes,
        "total_seconds": time.time() - started,
    }
    (outdir / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True), encoding="utf-8")

    try:
        render_plots(report, outdir)
        if suite.success_curve_trials > 0:
            curve = success_curve(sorted(set(suite.budgets)), suite.success_curve_trials,
                                  RngStream(suite.master_seed, (0xBA5E,)))
            write_curve_csv(curve, outdir / "success_curve.csv")
            plot_success_curve(curve, outdir / "success_curve.png")
    except Exception as exc:  # plotting must not sink a finished run
        print(f"plot generation failed: {exc}")
    return report


def compute_aggregates(rows: list[BenchRow]) -> dict:
    """Win/loss counts per budget and per test; a typed cell wins on score <= baseline."""
    scores: dict[tuple[str, int, int], dict[str, float]] = {}
    for row in rows:
        scores.setdefault((row.test, row.seed, row.budget), {})[row.mode] = row.best_score
    wins_by_budget: dict[int, dict[str, int]] = {}
    wins_by_test: dict[str, dict[str, int]] = {}
    for (test, _seed, budget), per_mode in sorted(scores.items()):
        if "typed" not in per_mode or "baseline" not in per_mode:
            continue
        won = per_mode["typed"] <= per_mode["baseline"]
        for table, key in ((wins_by_budget, budget), (wins_by_test, test)):
            cell = table.setdefault(key, {"typed_wins": 0, "cells": 0})
            cell["typed_wins"] += int(won)
            cell["cells"] += 1
    win_fraction = {
        str(budget): counts["typed_wins"] / counts["cells"]
        for budget, counts in wins_by_budget.items() if counts["cells"]
    }
    return {
        "wins_by_budget": {str(k): v for k, v in wins_by_budget.items()},
        "wins_by_test": wins_by_test,
        "typed_win_fraction_by_budget": win_fraction,
    }


def self_audit(rows: list[BenchRow], aggregates: dict) -> None:
    """Recompute the aggregates from the raw rows and insist they match."""
    again = compute_aggregates(rows)
    if again != aggregates:
        raise AssertionError("report aggregates do not match their rows")


_CSV_FIELDS = ("test", "seed", "mode", "budget", "best_score", "invalid", "iterations", "best_program")


def write_report_csv(report: BenchReport, path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_CSV_FIELDS)
        for row in report.rows:
            writer.writerow([row.test, row.seed, row.mode, row.budget,
                             repr(row.best_score), row.invalid, row.iterations, row.best_program])


def read_report_csv(path: Path) -> list[BenchRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        return [BenchRow(r["test"], int(r["seed"]), r["mode"], int(r["budget"]),
                         float(r["best_score"]), int(r["invalid"]), int(r["iterations"]),
                         r["best_program"]) for r in reader]


def write_report_json(report: BenchReport, path: Path) -> None:
    payload = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "suite_config": report.suite_echo,
        "rows": [
            {
                "test": r.test, "seed": r.seed, "mode": r.mode, "budget": r.budget,
                "best_score": r.best_score, "invalid": r.invalid,
                "iterations": r.iterations, "best_program": r.best_program,
            }
            for r in report.rows
        ],
        "aggregates": report.aggregates,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")


# --- success curve ------------------------------------------------------------


def success_curve(budgets: list[int], trials: int, rng: RngStream,
                  cfg: GenConfig | None = None) -> list[tuple[int, int, int, float]]:
    """Rows (budget, trials, successes, rate) for the baseline validity curve."""
    rows = []
    for k, budget in enumerate(budgets):
        successes = success_count(budget, trials, rng.substream(k), cfg)
        rows.append((budget, trials, successes, successes / trials))
    return rows


def write_curve_csv(rows: list[tuple[int, int, int, float]], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("budget", "trials", "successes", "rate"))
        for budget, trials, successes, rate in rows:
            writer.writerow((budget, trials, successes, repr(rate)))


# --- plots --------------------------------------------------------------------


def _matplotlib():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def plot_sorted_strips(report: BenchReport, path: Path, budget: int) -> None:
    """Per-test strips of sorted scores: typed in tan, baseline in black."""
    plt = _matplotlib()
    tests = sorted({r.test for r in report.rows if r.budget == budget})
    fig, ax = plt.subplots(figsize=(8, max(2, 0.28 * len(tests))))
    for y, test in enumerate(tests):
        cells = sorted(
            (r.best_score, r.mode) for r in report.rows if r.test == test and r.budget == budget
        )
        for x, (_score, mode) in enumerate(cells):
            ax.plot(x, y, marker="s", markersize=4, linestyle="",
                    color="tan" if mode == "typed" else "black")
    ax.set_yticks(range(len(tests)))
    ax.set_yticklabels(tests, fontsize=6)
    ax.set_xlabel("runs sorted best to worst")
    ax.set_title(f"sorted fitness per test, budget {budget}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_win_loss(report: BenchReport, path: Path) -> None:
    plt = _matplotlib()
    frac = report.aggregates["typed_win_fraction_by_budget"]
    budgets = sorted(frac, key=int)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(budgets, [frac[b] for b in budgets], color="tan", edgecolor="black")
    ax.axhline(0.5, color="gray", linewidth=0.8, linestyle="--")
    ax.set_ylim(0, 1)
    ax.set_xlabel("node budget")
    ax.set_ylabel("typed win fraction")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_success_curve(rows: list[tuple[int, int, int, float]], path: Path) -> None:
    plt = _matplotlib()
    budgets = [r[0] for r in rows]
    rates = [r[3] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot(budgets, rates, marker="o", color="black")
    ax.axhline(0.5, color="gray", linewidth=0.8, linestyle="--")
    ax.set_xlabel("node budget")
    ax.set_ylabel("success rate")
    ax.set_ylim(0, 1.05)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_plots(report: BenchReport, outdir: Path) -> None:
    outdir = Path(outdir)
    for budget in sorted({r.budget for r in report.rows}):
        plot_sorted_strips(report, outdir / f"results_budget{budget}.png", budget)
    plot_win_loss(report, outdir / "win_loss.png")


# --- flat key=value suite files -------------------------------------------------


def parse_budget_list(text: str) -> list[int]:
    """Accepts '7,15,31' and '1..40' range syntax (inclusive)."""
    budgets: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            budgets.extend(range(int(lo), int(hi) + 1))
        elif part:
            budgets.append(int(part))
    if not budgets:
        raise ValueError(f"no budgets in {text!r}")
    return budgets


def load_suite_file(path: Path) -> BenchSuite:
    """Flat key = value suite description; unknown keys are rejected.

    Recognized keys: tests (directory of .pgp files, or 'corpus'), n_evidence,
    seeds (count or comma list), budgets, time_limit, iteration_limit,
    n_candidate_samples, metric, master_seed, success_curve_trials, threads.
    """
    text = Path(path).read_text(encoding="utf-8")
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value")
        key, val = line.split("=", 1)
        values[key.strip()] = val.strip().strip('"')

    suite = BenchSuite(config_text=text)
    for key, val in values.items():
        if key == "tests":
            if val != "corpus":
                found = sorted(Path(val).glob("*.pgp"))
                if not found:
                    raise ValueError(f"no .pgp files under {val!r}")
                suite.tests = [(p.stem, p) for p in found]
        elif key == "seeds":
            suite.seeds = parse_budget_list(val) if ("," in val or ".." in val) else list(range(int(val)))
        elif key == "budgets":
            suite.budgets = parse_budget_list(val)
        elif key in ("n_evidence", "n_candidate_samples", "master_seed",
                     "success_curve_trials", "threads"):
            setattr(suite, key, int(val))
        elif key == "iteration_limit":
            suite.iteration_limit = None if val.lower() == "none" else int(val)
        elif key == "time_limit":
            suite.time_limit = None if val.lower() == "none" else float(val)
        elif key == "metric":
            suite.metric = val
        else:
            raise ValueError(f"unknown suite key {key!r}")
    return suite
