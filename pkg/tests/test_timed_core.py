from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from alttimed.timed_core import (INF, Interval, ParseError, PointedTimedWord, TimedWord,
                                 in_shifted, interval_contains, interval_intersect,
                                 interval_shift, parse_interval, parse_timed_word,
                                 serialize_timed_word, to_rational)


def test_rationals():
    assert to_rational("3/4") == Fraction(3, 4)
    assert to_rational("0.25") == Fraction(1, 4)
    assert to_rational(" 7 ") == 7
    for bad in ["", "1/0", "a", "1/2/3", "1e3"]:
        with pytest.raises(ParseError):
            to_rational(bad)


def test_interval_parse_and_print():
    for s in ["[0,0]", "(1,2)", "[2,inf)", "(-inf,3]", "(-2,-1]"]:
        assert str(parse_interval(s)) == s
    for bad in ["[1,inf]", "[-inf,0)", "(1,1)", "[2,1]", "[1/2,1]", "1,2"]:
        with pytest.raises(ParseError):
            parse_interval(bad)


def test_interval_construction_rules():
    with pytest.raises(ValueError):
        Interval(Fraction(1, 2), 1)
    with pytest.raises(AttributeError):
        Interval(0, 1).lo = 3
    assert Interval(-INF, 0).lo_open
    assert Interval(0, 0).punctual


def test_containment_at_endpoints():
    iv = parse_interval("(1,2]")
    assert not interval_contains(iv, 1)
    assert interval_contains(iv, Fraction(3, 2))
    assert interval_contains(iv, 2)
    assert 5 in parse_interval("[2,inf)")


def test_neg_and_shift():
    iv = parse_interval("[1,3)")
    assert str(iv.neg()) == "(-3,-1]"
    b = interval_shift(iv, Fraction(1, 2))
    assert in_shifted(b, Fraction(3, 2)) and not in_shifted(b, Fraction(7, 2))


def test_intersect():
    a, b = parse_interval("[0,2)"), parse_interval("(1,5]")
    assert interval_intersect([a, b]) == parse_interval("(1,2)")
    assert interval_intersect([parse_interval("[0,1)"), parse_interval("[1,2]")]) is None
    with pytest.raises(ValueError):
        interval_intersect([])


ends = st.one_of(st.integers(-4, 4), st.just(INF), st.just(-INF))


@st.composite
def intervals(draw):
    lo = draw(st.one_of(st.integers(-4, 4), st.just(-INF)))
    hi = draw(st.one_of(st.integers(-4, 4), st.just(INF)))
    if lo > hi:
        lo, hi = hi, lo
        if lo == INF or hi == -INF:
            lo, hi = -INF, INF
    lo_open, hi_open = draw(st.booleans()), draw(st.booleans())
    if lo == hi:
        lo_open = hi_open = False
    return Interval(lo, hi, lo_open, hi_open)


points = st.fractions(min_value=-6, max_value=6, max_denominator=4)


@given(intervals(), intervals(), points)
def test_intersection_is_pointwise_and(a, b, v):
    c = interval_intersect([a, b])
    both = interval_contains(a, v) and interval_contains(b, v)
    assert both == (c is not None and interval_contains(c, v))


@given(intervals(), points)
def test_neg_mirrors(a, v):
    assert interval_contains(a, v) == interval_contains(a.neg(), -v)


@given(intervals())
def test_interval_text_round_trip(a):
    assert parse_interval(str(a)) == a


def test_word_rules():
    w = parse_timed_word("a @ 0 ; a,b @ 1/2 ; b @ 1/2")
    assert len(w) == 3 and list(w.dom()) == [1, 2, 3]
    assert w.props(2) == {"a", "b"} and w.ts(3) == Fraction(1, 2)
    with pytest.raises(ParseError):
        parse_timed_word("a @ 1")
    with pytest.raises(ParseError):
        parse_timed_word("a @ 0 ; b @ -1")
    with pytest.raises(ParseError):
        parse_timed_word("a @ 0 ; @ 1")
    assert parse_timed_word("a @ 1", strict_origin=False).ts(1) == 1
    with pytest.raises(ValueError):
        TimedWord([(frozenset(), 0)])
    with pytest.raises(ValueError):
        PointedTimedWord(w, 4)


words = st.lists(st.tuples(st.sets(st.sampled_from("abc"), min_size=1),
                           st.fractions(0, 3, max_denominator=5)), min_size=1, max_size=6)


@given(words)
def test_word_round_trip(raw):
    ts = sorted(t for _, t in raw)
    ts = [t - ts[0] for t in ts]
    w = TimedWord([(p, t) for (p, _), t in zip(raw, ts)])
    assert parse_timed_word(serialize_timed_word(w)) == w
