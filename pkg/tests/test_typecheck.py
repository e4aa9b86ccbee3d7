import math

import numpy as np
import pytest

from pgplang.ast import Lit
from pgplang.intervals import ANY_VALUE, Bound, DualBound, EMPTY, FULL, closed, dual, singleton
from pgplang.parser import parse_program
from pgplang.sampler import RngStream, sample_many
from pgplang.synth import SynthRequest, synthesize
from pgplang.typecheck import TypeCheckError, TypingContext, check, infer, typechecks

EMPTY_CTX = TypingContext()


def infer_text(text: str):
    return infer(EMPTY_CTX, parse_program(text))


def test_add_of_two_betas():
    assert infer_text("let Beta 0.3 0.25 in let Beta 0.4 0.25 in add v1 v2") == dual(closed(0, 2), closed(0, 2))


def test_rarely_invalid_program_is_rejected():
    with pytest.raises(TypeCheckError) as exc_info:
        infer_text("let Normal 10 1 in Normal 10 v1")
    err = exc_info.value
    assert err.kind == "argument-bound-violation"
    assert err.expected == dual(EMPTY, Bound(0, math.inf))
    assert err.actual == dual(FULL, FULL)
    assert "arg2" in str(err)


def test_literal_principal_type():
    assert infer(EMPTY_CTX, Lit(2.5)) == dual(singleton(2.5), singleton(2.5))


def test_uniform_constant_args_has_exact_support():
    # constants pin both endpoints, so every point between them is guaranteed
    assert infer_text("Uniform 0 1") == dual(closed(0, 1), closed(0, 1))
    assert infer_text("Uniform 1 0") == dual(closed(0, 1), closed(0, 1))


def test_uniform_overlapping_args_guarantees_nothing():
    got = infer_text("let Uniform 0 1 in let Uniform 0 1 in Uniform v1 v2")
    assert got == dual(EMPTY, closed(0, 1))


def test_uniform_same_variable_twice_guarantees_nothing():
    # correlated endpoints: the support collapses to a point per execution
    got = infer_text("let Uniform 0 1 in Uniform v1 v1")
    assert got == dual(EMPTY, closed(0, 1))


def test_worked_synthesis_example_typechecks_at_its_target():
    program = parse_program(
        "let Uniform(-1.7, -1.3) in let Uniform(0.0, 1.0) in let Beta(0.5, v2) in Uniform(v1, v3)"
    )
    assert check(EMPTY_CTX, program, dual(closed(-1.0, 0.0), closed(-2.0, 1.0)))


def test_check_examples():
    betas = parse_program("let Beta 0.3 0.25 in let Beta 0.4 0.25 in add v1 v2")
    assert check(EMPTY_CTX, betas, dual(EMPTY, closed(-5, 5)))
    assert not check(EMPTY_CTX, betas, dual(closed(0, 3), closed(0, 3)))
    assert check(EMPTY_CTX, Lit(0.5), dual(singleton(0.5), closed(0, 1)))


def test_normal_and_laplace_results():
    assert infer_text("Normal 0 1") == dual(FULL, FULL)
    assert infer_text("Laplace 0 1") == dual(FULL, FULL)
    assert infer_text("Beta 2 5") == dual(closed(0, 1), closed(0, 1))


def test_scale_zero_is_accepted_statically():
    # the scale bound is closed at zero; the mismatch with runtime domains is
    # handled by the sampler, not here
    assert typechecks(parse_program("Normal 0 0"))


def test_beta_rejects_possibly_negative_args():
    with pytest.raises(TypeCheckError):
        infer_text("let Normal 0 1 in Beta v1 1")
    with pytest.raises(TypeCheckError):
        infer_text("Beta 1 -2")


def test_unbound_variable_error():
    from pgplang.ast import Add, Var

    ctx = TypingContext((ANY_VALUE,))
    with pytest.raises(TypeCheckError) as err:
        infer(ctx, Add(Var(1), Var(2)))
    assert err.value.kind == "unbound-variable"


def test_weakening_unused_entries_do_not_change_result():
    # prepend unused entries and shift the program's internal levels past them
    from pgplang.ast import Add, Dist, Expr, Let, Lit, Var

    def shift(e: Expr, by: int) -> Expr:
        if isinstance(e, Var):
            return Var(e.level + by)
        if isinstance(e, Lit):
            return e
        if isinstance(e, Dist):
            return Dist(e.family, shift(e.arg1, by), shift(e.arg2, by))
        if isinstance(e, Add):
            return Add(shift(e.arg1, by), shift(e.arg2, by))
        return Let(shift(e.bound, by), shift(e.body, by))

    program = parse_program("let Beta 0.3 0.25 in let Beta 0.4 0.25 in add v1 v2")
    base = infer(EMPTY_CTX, program)
    padded = TypingContext((ANY_VALUE, dual(closed(0, 1), closed(0, 1))))
    assert infer(padded, shift(program, len(padded))) == base


def test_infer_is_deterministic():
    program = parse_program("let Uniform 0 1 in let Beta 2 2 in add v1 v2")
    assert infer(EMPTY_CTX, program) == infer(EMPTY_CTX, program)


@pytest.mark.parametrize("seed", range(5))
def test_empirical_soundness_of_over_approximation(seed):
    # draw a typed program, then insist no sample escapes its over-bound
    targets = [ANY_VALUE, dual(EMPTY, closed(-3, 3)), dual(closed(-1, 0), closed(-2, 1))]
    rng = RngStream(900 + seed)
    for i, target in enumerate(targets):
        program = synthesize(SynthRequest(target, budget=6, rng=rng.substream(i)))
        bound = infer(EMPTY_CTX, program).over
        samples, errors = sample_many(program, 10_000, rng.substream(100 + i))
        assert errors == 0
        assert len(samples) == 10_000
        values = samples.values
        assert bound.lo <= values.min() and values.max() <= bound.hi


def test_under_approximation_spot_checks_on_known_supports():
    # Uniform and Beta have exactly known supports; the inferred under-bound
    # must be covered by observed samples up to binning resolution
    for text, expected_under in [("Uniform 0 1", closed(0, 1)), ("Beta 0.5 0.5", closed(0, 1))]:
        got = infer_text(text)
        assert got.under == expected_under
        samples, _ = sample_many(parse_program(text), 20_000, RngStream(5))
        hist, _ = np.histogram(samples.values, bins=20, range=(0, 1))
        assert (hist > 0).all()
