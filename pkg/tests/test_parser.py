import pytest

from pgplang.ast import Add, Dist, DistFamily, Let, Lit, Var, node_cost, print_program
from pgplang.intervals import ANY_VALUE, Bound, DualBound, EMPTY
from pgplang.parser import ParseError, parse_program
from pgplang.sampler import RngStream
from pgplang.synth import SynthRequest, synthesize


def test_dart_example():
    expected = Let(
        Dist(DistFamily.UNIFORM, Lit(0), Lit(1)),
        Dist(DistFamily.NORMAL, Var(1), Lit(0.1)),
    )
    assert parse_program("let Uniform 0 1 in Normal v1 0.1") == expected
    # family names are case-insensitive
    assert parse_program("let uniform 0 1 in Normal v1 0.1") == expected


def test_literal_only_program():
    assert parse_program("3.5") == Lit(3.5)


def test_unbound_variable_is_rejected():
    with pytest.raises(ParseError, match="unbound variable v1"):
        parse_program("add v1 v2")


def test_binder_cannot_reference_itself():
    with pytest.raises(ParseError, match="unbound variable v1"):
        parse_program("let add v1 0.5 in v1")


def test_parenthesized_form():
    text = """
    let Uniform(-1.7, -1.3) in
    let Uniform(0.0, 1.0) in
    let Beta(0.5, v2) in
    Uniform(v1, v3)
    """
    e = parse_program(text)
    assert node_cost(e) == 4
    assert parse_program(print_program(e)) == e


def test_comments_and_scientific_notation():
    e = parse_program("# a comment\nlet Normal 1e2 2.5E-3 in # trailing\nadd v1 -0.5")
    assert e == Let(Dist(DistFamily.NORMAL, Lit(100.0), Lit(0.0025)), Add(Var(1), Lit(-0.5)))


def test_nested_expression_rejected():
    with pytest.raises(ParseError, match="nested"):
        parse_program("Normal (Uniform 0 1) 1")


def test_let_in_let_bound_position_rejected():
    with pytest.raises(ParseError):
        parse_program("let let Normal 0 1 in v1 in v1")


def test_trailing_input_rejected():
    with pytest.raises(ParseError, match="trailing"):
        parse_program("Uniform 0 1 extra")


def test_error_position_reported():
    with pytest.raises(ParseError) as exc_info:
        parse_program("let Normal 0 1 in\nadd v1 ?")
    assert exc_info.value.line == 2


def test_non_finite_literal_rejected():
    with pytest.raises(ParseError):
        parse_program("1e999")


def test_roundtrip_on_random_programs():
    # synthesized programs double as the AST generator for the round-trip law
    targets = [
        ANY_VALUE,
        DualBound(EMPTY, Bound(-2.0, 1.0)),
        DualBound(Bound(-1.0, 0.0), Bound(-2.0, 1.0)),
        DualBound(Bound(0.25, 0.5), Bound(0.0, 1.0)),
    ]
    rng = RngStream(2024)
    for i in range(1000):
        target = targets[i % len(targets)]
        e = synthesize(SynthRequest(target, budget=i % 12, rng=rng.substream(i)))
        text = print_program(e)
        again = parse_program(text)
        assert again == e, text
        assert node_cost(again) == node_cost(e)
