"""Exact half-integer arithmetic."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sympind import HalfInteger

twice_values = st.integers(min_value=-10_000, max_value=10_000)


def test_construction_and_str():
    assert str(HalfInteger(3)) == "3/2"
    assert str(HalfInteger(-1)) == "-1/2"
    assert str(HalfInteger(0)) == "0/2"
    assert str(HalfInteger.from_int(2)) == "4/2"


def test_rejects_non_int():
    with pytest.raises(TypeError):
        HalfInteger(1.5)
    with pytest.raises(TypeError):
        HalfInteger("3")


def test_integer_detection():
    assert HalfInteger(4).is_integer()
    assert HalfInteger(4).as_int() == 2
    assert not HalfInteger(3).is_integer()
    with pytest.raises(ValueError):
        HalfInteger(3).as_int()


def test_from_signatures_weighting():
    # endpoints count half, interior crossings count in full
    assert HalfInteger.from_signatures(2, [1, -1, 3], 0) == HalfInteger(8)
    assert HalfInteger.from_signatures(0, [], 0) == HalfInteger(0)


def test_int_mixing():
    assert HalfInteger(3) + 1 == HalfInteger(5)
    assert 1 + HalfInteger(3) == HalfInteger(5)
    assert HalfInteger(3) - 2 == HalfInteger(-1)
    assert 2 - HalfInteger(3) == HalfInteger(1)
    assert HalfInteger(3) * 2 == HalfInteger(6)
    assert -HalfInteger(3) == HalfInteger(-3)


@given(twice_values, twice_values)
def test_addition_matches_twice(a, b):
    assert (HalfInteger(a) + HalfInteger(b)).twice == a + b


@given(twice_values, twice_values)
def test_subtraction_and_negation(a, b):
    assert (HalfInteger(a) - HalfInteger(b)).twice == a - b
    assert (-HalfInteger(a)).twice == -a


@given(twice_values, twice_values, twice_values)
def test_associativity(a, b, c):
    lhs = (HalfInteger(a) + HalfInteger(b)) + HalfInteger(c)
    rhs = HalfInteger(a) + (HalfInteger(b) + HalfInteger(c))
    assert lhs == rhs


@given(twice_values, twice_values)
def test_ordering_total(a, b):
    x, y = HalfInteger(a), HalfInteger(b)
    assert (x < y) == (a < b)
    assert (x <= y) == (a <= b)
    assert (x == y) == (a == b)


@given(twice_values)
def test_float_conversion_exact(a):
    assert float(HalfInteger(a)) == a / 2.0


@given(twice_values)
def test_hash_consistent_with_eq(a):
    assert hash(HalfInteger(a)) == hash(HalfInteger(a))
    assert HalfInteger(a) == HalfInteger(a)
