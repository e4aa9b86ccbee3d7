import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pgplang.intervals import (
    EMPTY,
    FULL,
    Bound,
    DualBound,
    IndeterminateSumError,
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

# --- strategies ---------------------------------------------------------------

finite = st.floats(min_value=-1e12, max_value=1e12, allow_nan=False, allow_infinity=False)
endpoint = st.one_of(finite, st.sampled_from([math.inf, -math.inf]))


@st.composite
def bounds(draw, allow_empty=True):
    if allow_empty and draw(st.booleans()):
        return EMPTY
    a, b = draw(endpoint), draw(endpoint)
    return Bound(min(a, b), max(a, b))


@st.composite
def dual_bounds(draw):
    over = draw(bounds())
    if over.is_empty or draw(st.booleans()):
        return DualBound(EMPTY, over)
    lo = max(over.lo, -1e12)
    hi = min(over.hi, 1e12)
    if lo > hi:  # over lies entirely past the finite draw window
        return DualBound(EMPTY, over)
    a = draw(st.floats(min_value=lo, max_value=hi, allow_nan=False))
    b = draw(st.floats(min_value=lo, max_value=hi, allow_nan=False))
    return DualBound(Bound(min(a, b), max(a, b)), over)


# --- formation ----------------------------------------------------------------


def test_constructors_reject_bad_endpoints():
    with pytest.raises(ValueError):
        Bound(1.0, 0.0)
    with pytest.raises(ValueError):
        Bound(math.nan, 1.0)
    with pytest.raises(ValueError):
        Bound(None, 1.0)
    with pytest.raises(ValueError):
        DualBound(Bound(0, 3), Bound(1, 2))
    with pytest.raises(ValueError):
        DualBound(Bound(0, 1), EMPTY)


def test_degenerate_singleton_is_valid():
    assert singleton(3.0) == Bound(3.0, 3.0)
    assert 3.0 in singleton(3.0)
    DualBound(singleton(0.5), Bound(0.0, 1.0))


# --- frozen examples ----------------------------------------------------------


def test_subset_examples():
    assert bound_subset(closed(0, 1), closed(-2, 1))
    assert bound_subset(EMPTY, EMPTY)
    assert not bound_subset(Bound(-math.inf, 0), Bound(0, math.inf))


def test_intersect_examples():
    assert bound_intersect(closed(0, 2), closed(1, 3)) == closed(1, 2)
    assert bound_intersect(closed(0, 1), closed(2, 3)) == EMPTY
    assert bound_intersect(closed(-3, 7), FULL) == closed(-3, 7)


def test_union_is_convex_hull():
    assert bound_union(closed(0, 1), closed(2, 3)) == closed(0, 3)
    assert bound_union(EMPTY, closed(-1, 4)) == closed(-1, 4)
    assert bound_union(Bound(-math.inf, 0), Bound(0, math.inf)) == FULL


def test_add_examples():
    assert add_bounds(EMPTY, closed(3, 4)) == EMPTY
    assert add_bounds(closed(1, 2), closed(3, 4)) == closed(4, 6)
    assert add_bounds(Bound(-math.inf, 0), Bound(0, math.inf)) == FULL


def test_add_indeterminate_sum_raises():
    with pytest.raises(IndeterminateSumError):
        add_bounds(Bound(-math.inf, -math.inf), Bound(math.inf, math.inf))
    with pytest.raises(IndeterminateSumError):
        add_bounds(Bound(-math.inf, 0), Bound(math.inf, math.inf))


def test_add_dual_bounds_examples():
    unit = dual(closed(0, 1), closed(0, 1))
    assert add_dual_bounds(unit, unit) == dual(closed(0, 2), closed(0, 2))
    assert add_dual_bounds(dual(EMPTY, closed(0, 1)), unit) == dual(EMPTY, closed(0, 2))
    x = dual(closed(-1, 2), closed(-4, 5))
    assert add_dual_bounds(x, dual(singleton(0.0), singleton(0.0))) == x


def test_subtype_examples():
    assert is_subtype(dual(closed(0, 1), closed(0, 1)), dual(EMPTY, closed(-2, 2)))
    # an over-approximation wider than requested must be rejected
    assert not is_subtype(dual(EMPTY, FULL), dual(EMPTY, Bound(0, math.inf)))
    x = dual(closed(0, 1), closed(-1, 2))
    assert is_subtype(x, x)


# --- property tests -----------------------------------------------------------


@given(bounds(), bounds())
def test_intersect_contained_in_both(a, b):
    i = bound_intersect(a, b)
    assert bound_subset(i, a) and bound_subset(i, b)


@given(bounds(), bounds())
def test_union_contains_both(a, b):
    u = bound_union(a, b)
    assert bound_subset(a, u) and bound_subset(b, u)


@given(bounds(), bounds())
def test_add_commutative(a, b):
    try:
        left = add_bounds(a, b)
    except IndeterminateSumError:
        with pytest.raises(IndeterminateSumError):
            add_bounds(b, a)
        return
    assert left == add_bounds(b, a)


@given(bounds(allow_empty=False), bounds(allow_empty=False), bounds(allow_empty=False))
def test_add_associative_on_finite(a, b, c):
    assume(all(math.isfinite(x) for bb in (a, b, c) for x in (bb.lo, bb.hi)))
    left = add_bounds(add_bounds(a, b), c)
    right = add_bounds(a, add_bounds(b, c))
    assert math.isclose(left.lo, right.lo, rel_tol=1e-9, abs_tol=1e-9)
    assert math.isclose(left.hi, right.hi, rel_tol=1e-9, abs_tol=1e-9)


@given(bounds(), bounds(), bounds())
def test_add_monotone(a, a_wide, b):
    widened = bound_union(a, a_wide)
    try:
        narrow, wide = add_bounds(a, b), add_bounds(widened, b)
    except IndeterminateSumError:
        return
    assert bound_subset(narrow, wide)


@given(dual_bounds())
def test_subtype_reflexive(d):
    assert is_subtype(d, d)


@given(dual_bounds(), st.floats(min_value=0, max_value=1e6, allow_nan=False))
def test_subtype_transitive_on_widening_chain(d, pad):
    def widen(x: DualBound) -> DualBound:
        under = EMPTY if x.under.is_empty else x.under
        if x.over.is_empty:
            return x
        over = Bound(x.over.lo - pad if math.isfinite(x.over.lo) else x.over.lo,
                     x.over.hi + pad if math.isfinite(x.over.hi) else x.over.hi)
        return DualBound(under, over)

    mid = widen(d)
    top = widen(mid)
    assert is_subtype(d, mid) and is_subtype(mid, top)
    assert is_subtype(d, top)


# --- rendering ----------------------------------------------------------------


def test_format_and_parse_dual():
    d = dual(EMPTY, Bound(0.0, math.inf))
    assert format_dual(d) == "«∅,[0.0,inf]»"
    assert parse_dual_bound(format_dual(d)) == d
    noisy = parse_dual_bound("[-1, 0], [-2, 1]")
    assert noisy == dual(closed(-1, 0), closed(-2, 1))
    assert parse_dual_bound("empty,[-inf,inf]") == dual(EMPTY, FULL)
    with pytest.raises(ValueError):
        parse_dual_bound("[1,2]")
