import math

import pytest

from dnes.intervals import IntervalSet


def test_normalization_sorts_and_merges():
    s = IntervalSet(((2.0, 3.0), (0.0, 1.5), (1.0, 2.5)))
    assert s.intervals == ((0.0, 3.0),)


def test_empty_pieces_dropped():
    assert IntervalSet(((1.0, 1.0), (3.0, 2.0))).is_empty
    assert IntervalSet.empty().is_empty


def test_contains_is_open():
    s = IntervalSet.open(0.0, 1.0)
    assert 0.5 in s
    assert 0.0 not in s
    assert 1.0 not in s


def test_infinite_endpoints():
    s = IntervalSet.open(-math.inf, 1.5)
    assert -1e12 in s
    assert 2.0 not in s
    assert math.isinf(s.measure())


def test_intersect_and_union():
    a = IntervalSet(((0.0, 2.0), (3.0, 5.0)))
    b = IntervalSet.open(1.0, 4.0)
    assert a.intersect(b).intervals == ((1.0, 2.0), (3.0, 4.0))
    assert a.union(b).intervals == ((0.0, 5.0),)


def test_measure():
    s = IntervalSet(((0.0, 1.0), (2.0, 4.0)))
    assert s.measure() == pytest.approx(3.0)


def test_str_parse_round_trip():
    s = IntervalSet(((-math.inf, 1.5), (2.0, 3.0)))
    assert str(s) == "(-inf, 1.5) u (2, 3)"
    assert IntervalSet.parse(str(s)) == s
    assert IntervalSet.parse("{}").is_empty
    assert str(IntervalSet.empty()) == "{}"


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        IntervalSet.parse("[1, 2]")
