import numpy as np
import pytest
from scipy import stats

from pgplang.ast import Dist, DistFamily, Lit
from pgplang.parser import parse_program
from pgplang.sampler import (
    InvalidParameterError,
    RngStream,
    SampleSet,
    read_samples,
    sample_many,
    sample_once,
    write_samples,
)

RARELY_INVALID = parse_program("let Normal 10 1 in Normal 10 v1")


def test_same_seed_same_samples():
    program = parse_program("let Uniform 0 1 in Normal v1 0.1")
    a, _ = sample_many(program, 500, RngStream(11))
    b, _ = sample_many(program, 500, RngStream(11))
    assert np.array_equal(a.values, b.values)


def test_substreams_differ():
    program = parse_program("Normal 0 1")
    master = RngStream(3)
    a, _ = sample_many(program, 100, master.substream(0))
    b, _ = sample_many(program, 100, master.substream(1))
    assert not np.array_equal(a.values, b.values)


def test_literal_program_is_constant():
    assert sample_once(Lit(2.5), RngStream(0)) == 2.5
    samples, errors = sample_many(Lit(1.0), 3, RngStream(0))
    assert errors == 0
    assert list(samples.values) == [1.0, 1.0, 1.0]


def test_uniform_support():
    samples, errors = sample_many(parse_program("Uniform 0 1"), 5_000, RngStream(1))
    assert errors == 0
    assert samples.values.min() >= 0 and samples.values.max() <= 1


def test_add_of_betas_stays_in_unit_sum_range():
    program = parse_program("let Beta 0.3 0.25 in let Beta 0.4 0.25 in add v1 v2")
    samples, errors = sample_many(program, 10_000, RngStream(2))
    assert errors == 0
    assert samples.values.min() >= 0 and samples.values.max() <= 2


def test_rarely_invalid_program_samples_cleanly():
    # the invalid draw needs a ten-sigma event, near-impossible to observe
    _, errors = sample_many(RARELY_INVALID, 10_000, RngStream(4))
    assert errors == 0


def test_always_invalid_parameter():
    program = parse_program("Normal 0 -1")
    _, errors = sample_many(program, 50, RngStream(5))
    assert errors == 50
    with pytest.raises(InvalidParameterError):
        sample_once(program, RngStream(5))


def test_beta_invalid_parameters():
    _, errors = sample_many(Dist(DistFamily.BETA, Lit(-0.5), Lit(1.0)), 20, RngStream(6))
    assert errors == 20


def test_reversed_uniform_swaps_endpoints():
    samples, errors = sample_many(parse_program("Uniform 1 0"), 2_000, RngStream(7))
    assert errors == 0
    assert samples.values.min() >= 0 and samples.values.max() <= 1


def test_zero_width_uniform_is_point_mass():
    samples, errors = sample_many(parse_program("Uniform 3 3"), 10, RngStream(8))
    assert errors == 0
    assert (samples.values == 3.0).all()


def test_let_value_is_shared_between_references():
    # add v1 v1 doubles one draw; halving recovers Uniform(0,1), which the
    # triangular law of two independent draws would fail decisively
    program = parse_program("let Uniform 0 1 in add v1 v1")
    samples, errors = sample_many(program, 10_000, RngStream(9))
    assert errors == 0
    halved = samples.values / 2.0
    d, pvalue = stats.kstest(halved, "uniform")
    assert pvalue > 0.001, (d, pvalue)
    summed, _ = sample_many(
        parse_program("let Uniform 0 1 in let Uniform 0 1 in add v1 v2"), 10_000, RngStream(9)
    )
    _, p_triangular = stats.kstest(summed.values / 2.0, "uniform")
    assert p_triangular < 1e-6


def test_scale_from_beta_never_underflows_to_invalid():
    # tiny-alpha Beta draws underflow float64; the sampler lifts them off zero
    program = parse_program("let Beta 0.005 2 in Normal 0 v1")
    samples, errors = sample_many(program, 20_000, RngStream(10))
    assert errors == 0
    assert len(samples) == 20_000


def test_sampleset_rejects_non_finite():
    with pytest.raises(ValueError):
        SampleSet(np.array([1.0, np.inf]))
    with pytest.raises(ValueError):
        SampleSet(np.array([np.nan]))


def test_sample_file_roundtrip(tmp_path):
    samples, _ = sample_many(parse_program("Laplace 0 2"), 100, RngStream(12))
    path = tmp_path / "x.samples"
    write_samples(samples, path)
    again = read_samples(path)
    assert np.array_equal(samples.values, again.values)
    write_samples(samples, tmp_path / "y.samples")
    assert (tmp_path / "x.samples").read_bytes() == (tmp_path / "y.samples").read_bytes()


def test_sample_count_validation():
    with pytest.raises(ValueError):
        sample_many(Lit(0.0), 0, RngStream(0))
