"""Command-line interface.

Every command takes --seed (falling back to the PGPLANG_SEED environment
variable, then 0) and writes deterministic primary outputs: rerunning with
identical flags and seed reproduces the same bytes.  Wall-clock information
only ever goes to stderr or to the separate metadata file.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import bench as bench_mod
from .ast import node_cost, print_program
from .baseline import GenConfig, generate_random
from .bench import BenchSuite, load_suite_file, parse_budget_list, success_curve, write_curve_csv
from .intervals import parse_dual_bound
from .parser import ParseError, parse_program
from .regression import SearchConfig, search
from .sampler import RngStream, read_samples, sample_many, write_samples
from .synth import SynthRequest, UnsatisfiableRequestError, synthesize
from .typecheck import TypeCheckError, TypingContext, infer

_seed_option = click.option("--seed", type=int, envvar="PGPLANG_SEED", default=0, show_default=True,
                            help="master random seed (env: PGPLANG_SEED)")


def _load_program(path: str):
    try:
        return parse_program(Path(path).read_text(encoding="utf-8"))
    except ParseError as exc:
        raise click.ClickException(f"{path}:{exc}") from None


@click.group()
def main() -> None:
    """PGPLang: typecheck, sample, synthesize and regress tiny probabilistic programs."""


@main.command()
@click.argument("program", type=click.Path(exists=True, dir_okay=False))
def typecheck(program: str) -> None:
    """Infer the dual bound of a program, or print a diagnostic."""
    expr = _load_program(program)
    try:
        bound = infer(TypingContext(), expr)
    except TypeCheckError as exc:
        click.echo(f"type error: {exc}")
        sys.exit(1)
    click.echo(str(bound))


@main.command()
@click.argument("program", type=click.Path(exists=True, dir_okay=False))
@click.option("-n", "--count", type=int, default=10_000, show_default=True)
@_seed_option
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None,
              help="write one sample per line here instead of stdout")
def sample(program: str, count: int, seed: int, output: str | None) -> None:
    """Draw samples from a program."""
    expr = _load_program(program)
    samples, errors = sample_many(expr, count, RngStream(seed))
    if errors:
        click.echo(f"warning: {errors}/{count} executions failed at runtime", err=True)
    if output:
        write_samples(samples, output)
        click.echo(f"wrote {len(samples)} samples to {output}", err=True)
    else:
        for v in samples.values:
            click.echo(repr(float(v)))


@main.command()
@click.option("--target", required=True,
              help="dual bound, e.g. \"«[-1,0],[-2,1]»\" or \"empty,[-inf,inf]\"")
@click.option("--budget", type=int, required=True)
@_seed_option
@click.option("-n", "--count", type=int, default=1, show_default=True,
              help="number of independent programs")
def synth(target: str, budget: int, seed: int, count: int) -> None:
    """Synthesize programs that typecheck against the target bound."""
    try:
        target_bound = parse_dual_bound(target)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from None
    rng = RngStream(seed)
    for i in range(count):
        try:
            program = synthesize(SynthRequest(target_bound, budget, rng.substream(i)))
        except UnsatisfiableRequestError as exc:
            raise click.ClickException(str(exc)) from None
        if i:
            click.echo("")
        click.echo(print_program(program))


@main.group()
def baseline() -> None:
    """Type-agnostic random generation and its success-rate curve."""


@baseline.command("gen")
@click.option("--budget", type=int, required=True)
@_seed_option
@click.option("-n", "--count", type=int, default=1, show_default=True)
def baseline_gen(budget: int, seed: int, count: int) -> None:
    """Generate random grammar-correct programs (may not typecheck)."""
    rng = RngStream(seed)
    cfg = GenConfig(budget)
    for i in range(count):
        if i:
            click.echo("")
        click.echo(print_program(generate_random(cfg, rng.substream(i))))


def _success_curve_cmd(budgets: str, trials: int, seed: int, output: str) -> None:
    rows = success_curve(parse_budget_list(budgets), trials, RngStream(seed))
    write_curve_csv(rows, output)
    click.echo(f"wrote {len(rows)} budgets to {output}", err=True)


@baseline.command("success-curve")
@click.option("--budgets", default="1..40", show_default=True, help="comma list or lo..hi range")
@click.option("--trials", type=int, default=10_000, show_default=True)
@_seed_option
@click.option("-o", "--output", type=click.Path(dir_okay=False), default="curve.csv", show_default=True)
def baseline_success_curve(budgets: str, trials: int, seed: int, output: str) -> None:
    """Static-validity rate of random generation per budget, as CSV."""
    _success_curve_cmd(budgets, trials, seed, output)


@main.command()
@click.option("--evidence", required=True, type=click.Path(exists=True, dir_okay=False),
              help="sample file, one real per line")
@click.option("--mode", type=click.Choice(["typed", "baseline"]), default="typed", show_default=True)
@click.option("--budget", type=int, default=31, show_default=True)
@click.option("--time", "time_limit", type=float, default=None, help="seconds; unset means no time cap")
@click.option("--iters", type=int, default=None, help="iteration cap (use for reproducible output)")
@_seed_option
@click.option("--metric", type=click.Choice(["ks", "energy"]), default="ks", show_default=True)
@click.option("--candidate-samples", type=int, default=256, show_default=True)
@click.option("--target", default=None, help="typed-mode target dual bound (default: any value)")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default="result.json", show_default=True)
def regress(evidence: str, mode: str, budget: int, time_limit: float | None, iters: int | None,
            seed: int, metric: str, candidate_samples: int, target: str | None, output: str) -> None:
    """Search for the program whose samples best fit the evidence."""
    if time_limit is None and iters is None:
        iters = 200
    cfg = SearchConfig(
        mode=mode,
        evidence=read_samples(evidence),
        budget=budget,
        seed=seed,
        iteration_limit=iters,
        time_limit=time_limit,
        n_candidate_samples=candidate_samples,
        metric=metric,
        target=parse_dual_bound(target) if target else None,
    )
    result = search(cfg)
    import json

    payload = {
        "schema_version": bench_mod.REPORT_SCHEMA_VERSION,
        "mode": mode,
        "budget": budget,
        "seed": seed,
        "metric": metric,
        "iterations": result.iterations,
        "invalid_candidates": result.invalid_count,
        "best_score": result.best_score,
        "best_program": print_program(result.best_program) if result.best_program else None,
        "best_node_cost": node_cost(result.best_program) if result.best_program else None,
        "trace": [{"iteration": t.iteration, "score": t.score, "valid": t.valid} for t in result.trace],
    }
    Path(output).write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
    click.echo(f"best score {result.best_score:.6g} after {result.iterations} iterations "
               f"({result.elapsed_seconds:.2f}s)", err=True)


@main.group()
def bench() -> None:
    """Multi-test benchmark orchestration."""


@bench.command("run")
@click.option("--suite", "suite_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="flat key=value suite file; defaults to the bundled corpus")
@click.option("--threads", type=int, default=None, help="worker threads (default: suite value)")
@_seed_option
@click.option("-o", "--outdir", type=click.Path(file_okay=False), default="bench_out", show_default=True)
def bench_run(suite_path: str | None, threads: int | None, seed: int, outdir: str) -> None:
    """Run the typed-vs-baseline grid and write reports plus plots."""
    suite = load_suite_file(suite_path) if suite_path else BenchSuite()
    if suite_path is None:
        suite.master_seed = seed
    if threads is not None:
        suite.threads = threads
    report = bench_mod.run_suite(suite, Path(outdir))
    frac = report.aggregates["typed_win_fraction_by_budget"]
    for budget in sorted(frac, key=int):
        click.echo(f"budget {budget}: typed wins {frac[budget]:.1%} of cells", err=True)
    click.echo(f"report written to {outdir}", err=True)


@bench.command("success-curve")
@click.option("--budgets", default="1..40", show_default=True)
@click.option("--trials", type=int, default=10_000, show_default=True)
@_seed_option
@click.option("-o", "--output", type=click.Path(dir_okay=False), default="curve.csv", show_default=True)
def bench_success_curve(budgets: str, trials: int, seed: int, output: str) -> None:
    """Alias of `baseline success-curve` for suite workflows."""
    _success_curve_cmd(budgets, trials, seed, output)


if __name__ == "__main__":
    main()
