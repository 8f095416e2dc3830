import random

import pytest
from hypothesis import given, settings, strategies as st

from alttimed import fixtures as fx
from alttimed import gen
from alttimed.automata import Nfa, universal_nfa
from alttimed.pnemtl import (SCHEDULES, Atom, Evaluator, Mod, Since, Until, all_letters,
                             arity, brute_mod, check_nonadjacent_intervals,
                             check_nonadjacent_pnemtl, eval_pnemtl, expand_degenerate,
                             has_degenerate, language_member, modal_depth, mtl_to_pnemtl,
                             props_of, seg, segment_plan, size, subformulas)
from alttimed.timed_core import INF, Interval, parse_interval

iv = parse_interval
AB = ["a", "b"]


def test_example_modality():
    phi, w = fx.ex4(), fx.word(fx.EX4_WORD)
    assert eval_pnemtl(phi, w, 1)
    assert language_member(phi, w)
    # break the middle block: the b's are no longer followed by an a
    w2 = fx.word("a @ 0 ; a @ 3/2 ; b @ 17/10 ; b @ 19/10 ; b @ 5/2 ; a @ 27/10")
    assert not eval_pnemtl(phi, w2, 1)


def test_modality_shape_checks():
    u = universal_nfa(all_letters(1))
    with pytest.raises(ValueError):
        Mod("G", (iv("[0,1]"),), (u, u), (Atom("a"),))
    with pytest.raises(ValueError):
        Mod("F", (iv("[0,1]"),), (u,), (Atom("a"),))
    with pytest.raises(ValueError):
        Mod("F", (), (universal_nfa(all_letters(2)),), (Atom("a"),))


def test_segment_plans():
    assert segment_plan("F", "verbatim", 1, [3], 5) == [[2, 3], [3, 4, 5]]
    assert segment_plan("F", "inclusive", 1, [3], 5) == [[1, 2, 3], [3, 4, 5]]
    assert segment_plan("F", "verbatim", 1, [5], 5) is None
    assert segment_plan("F", "inclusive", 1, [5], 5) == [[1, 2, 3, 4, 5], [5]]
    assert segment_plan("P", "verbatim", 5, [3], 5) == [[4, 3], [3, 2, 1]]
    assert segment_plan("F", "verbatim", 3, [2], 5) is None
    with pytest.raises(ValueError):
        segment_plan("F", "lazy", 1, [], 3)


def test_seg():
    w = fx.word("a @ 0 ; b @ 1 ; a,b @ 2")
    S = [Atom("a"), Atom("b")]
    assert seg(w, 1, 3, S) == [{S[0]}, {S[1]}, {S[0], S[1]}]
    assert seg(w, 3, 2, S, "-") == [{S[0], S[1]}, {S[1]}]
    with pytest.raises(ValueError):
        seg(w, 3, 1, S)


def test_metrics():
    a, b = Atom("a"), Atom("b")
    phi = Until(iv("(0,1)"), a, Since(iv("[1,2]"), b, a)) & ~a
    assert modal_depth(phi) == 2 and arity(phi) == 1
    assert props_of(phi) == {"a", "b"}
    assert arity(fx.ex4()) == 2 and size(fx.ex4()) == 3


def test_nonadjacency_examples():
    assert check_nonadjacent_intervals([iv("(2,3)"), iv("(4,5)"), iv("(2,5)")]).verdict
    r = check_nonadjacent_intervals([iv("(0,1)"), iv("(1,2)")])
    assert not r and r.witnesses == [(iv("(1,2)"), iv("(0,1)"))]
    assert not check_nonadjacent_intervals([iv("[1,1]")])
    assert not check_nonadjacent_intervals([iv("[0,0]")])
    assert check_nonadjacent_intervals([iv("[0,inf)")])
    # adjacency is per modality
    a = Atom("a")
    phi = Until(iv("(0,1)"), a, a) & Until(iv("(1,2)"), a, a)
    assert check_nonadjacent_pnemtl(phi).verdict
    assert not check_nonadjacent_pnemtl(Until(iv("(0,1)"), a, Until(iv("[1,1]"), a, a)))


ivs = st.builds(lambda lo, w, lo_o, hi_o, inf: Interval(lo, INF if inf else lo + w,
                                                         lo_o and w > 0, hi_o and w > 0),
                st.integers(0, 4), st.integers(0, 3), st.booleans(), st.booleans(),
                st.booleans())


@given(st.lists(ivs, min_size=1, max_size=4))
def test_nonadjacency_definition(xs):
    # adjacent iff some infimum equals some supremum
    adj = any(a.lo == b.hi for a in xs for b in xs)
    assert check_nonadjacent_intervals(xs).verdict == (not adj)


def random_case(seed):
    rng = random.Random(seed)
    phi = gen.random_pnemtl(rng, AB, depth=2, max_k=2)
    words = [gen.random_word(rng, AB, max_len=5, den=4, span=3) for _ in range(4)]
    return phi, words


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(SCHEDULES))
def test_evaluator_matches_tuple_enumeration(seed, schedule):
    phi, words = random_case(seed)
    mods = [x for x in subformulas(phi) if isinstance(x, Mod)]
    for w in words:
        ev = Evaluator(w, schedule)
        for m in mods:
            for i in w.dom():
                assert ev.holds(m, i) == brute_mod(m, w, i, lambda p: ev.letter(m.args, p),
                                                   schedule)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_until_since_as_modalities(seed):
    rng = random.Random(seed)
    phi = gen.random_pnemtl(rng, AB, depth=2, mtl=True)
    psi = mtl_to_pnemtl(phi)
    for _ in range(4):
        w = gen.random_word(rng, AB, max_len=5, den=4, span=3)
        for i in w.dom():
            assert eval_pnemtl(phi, w, i) == eval_pnemtl(psi, w, i, "inclusive")


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["F", "P"]))
def test_degenerate_expansion(seed, kind):
    rng = random.Random(seed)
    L = all_letters(2)
    a = gen.random_nfa(rng, sorted(L, key=sorted), 3)
    a = Nfa(L, a.states, a.initial, a.finals, a.trans)
    phi = Mod(kind, (), (a,), (Atom("a"), Atom("b")))
    psi = expand_degenerate(phi)
    assert has_degenerate(phi) and not has_degenerate(psi)
    for _ in range(5):
        w = gen.random_word(rng, AB, max_len=5, den=4, span=3)
        for i in w.dom():
            assert eval_pnemtl(phi, w, i, "inclusive") == eval_pnemtl(psi, w, i, "inclusive")
    with pytest.raises(ValueError):
        expand_degenerate(phi, "verbatim")


def test_point_outside_word():
    with pytest.raises(ValueError):
        eval_pnemtl(Atom("a"), fx.word("a @ 0"), 2)
