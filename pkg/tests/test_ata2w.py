import random

import pytest
from hypothesis import given, settings, strategies as st

from alttimed import fixtures as fx
from alttimed import gen
from alttimed.ata2w import (ACCEPT, FULL, PROP1, REJECT, Ata, accepting_tree, accepts,
                            boolean_combine, check_nonadjacent_ata, complement, delta_tr,
                            format_tree, from_origin, is_island_normal, is_rfl, islands,
                            reset_cycles, reset_depth, runs_are_finite, succ,
                            to_island_normal_form)
from alttimed.automata import LEFT, RIGHT, TOP, Dnf
from alttimed.syntax import parse_pnemtl
from alttimed.timed_core import parse_interval
from alttimed.translate import pnemtl_to_ata

iv = parse_interval
A_, B_ = frozenset("a"), frozenset("b")
AB = ["a", "b"]


def later_b_within(lo_hi="[1,2]"):
    """Forward location that looks for a b whose distance from the start
    head lies in the interval."""
    d = {}
    for c in (A_, B_, A_ | B_):
        d[("q", c)] = [(FULL, Dnf.atom("q"))] + ([(iv(lo_hi), TOP)] if "b" in c else [])
    return Ata({"a", "b"}, {"q"}, set(), "q", d)


def test_hand_automaton():
    A = later_b_within()
    w = fx.word("a @ 0 ; a @ 1/2 ; b @ 3/2 ; a @ 3")
    assert accepts(A, w, 0) and accepts(A, w, 1)
    assert accepts(A, w, 2)           # the b is exactly one unit later
    assert not accepts(A, w, 3) and not accepts(A, w, 4)


def test_hand_automaton_brute_force():
    A = later_b_within()
    rng = random.Random(0)
    for _ in range(100):
        w = gen.random_word(rng, AB, 5, den=4, span=3)
        for i in w.dom():
            want = any("b" in w.props(j) and 1 <= w.ts(j) - w.ts(i) <= 2
                       for j in range(i + 1, len(w) + 1))
            assert accepts(A, w, i) == want


def test_transition_helpers():
    A = later_b_within()
    assert delta_tr(A, "q", B_, 1) == Dnf.atom("q") | TOP
    assert delta_tr(A, "q", B_, 3) == Dnf.atom("q")
    w = fx.word("a @ 0 ; b @ 1")
    assert succ(A, w, ("q", 0, 1)) in ([frozenset([("q", 1, 2)]), frozenset([ACCEPT])],
                                      [frozenset([ACCEPT]), frozenset([("q", 1, 2)])])
    assert succ(A, w, ("q", 1, 2)) == [frozenset([REJECT])]
    assert succ(A, w, ACCEPT) == [frozenset([ACCEPT])]


def test_validation():
    with pytest.raises(ValueError):
        Ata({"a"}, {"q"}, {"q"}, "q", {})
    with pytest.raises(ValueError):
        Ata({"a"}, {"q"}, set(), "r", {})
    with pytest.raises(ValueError):
        Ata({"a"}, {"q"}, set(), "q", {("q", RIGHT): [(FULL, Dnf.atom("q"))]})
    with pytest.raises(ValueError):
        Ata({"a"}, set(), {"p"}, "p", {("p", LEFT): [(FULL, Dnf.atom("p", reset=True))]})
    with pytest.raises(ValueError):
        Ata({"a"}, {"q"}, set(), "q", {("q", frozenset("z")): [(FULL, TOP)]})
    with pytest.raises(ValueError):
        accepts(later_b_within(), fx.word("a @ 0"), 5)


def test_run_tree():
    A = later_b_within()
    w = fx.word("a @ 0 ; b @ 1")
    tree = accepting_tree(A, w, 0)
    assert tree is not None and "TOP" in format_tree(tree)
    assert accepting_tree(A, fx.word("a @ 0"), 0) is None
    assert format_tree(None) == "no accepting run"


def test_clock_invariant_counters():
    before = PROP1["runs"]
    accepts(later_b_within(), fx.word("a @ 0 ; b @ 1"), 1)
    assert PROP1["runs"] == before + 1 and PROP1["violations"] == 0


def self_reset():
    # q resets into itself on every a: not rfl
    d = {("q", A_): [(FULL, Dnf.atom("q", reset=True))], ("q", RIGHT): [(FULL, TOP)]}
    return Ata({"a"}, {"q"}, set(), "q", d)


def test_reset_structure():
    A = self_reset()
    assert not is_rfl(A)
    assert reset_cycles(A) and reset_cycles(A)[0]
    with pytest.raises(ValueError):
        reset_depth(A)
    B = later_b_within()
    assert is_rfl(B) and reset_cycles(B) == [] and reset_depth(B) == 0
    assert reset_depth(pnemtl_to_ata(fx.ex4(), "verbatim")) == 0
    C = pnemtl_to_ata(parse_pnemtl("(U (0,1) a (U (1,2) b a))"), "verbatim")
    assert is_rfl(C) and reset_depth(C) >= 1


def test_island_normal_form():
    # p is reached both freely and through a reset: not normal
    d = {("q", A_): [(FULL, Dnf.atom("p") & Dnf.atom("p", reset=True))],
         ("p", A_): [(iv("[0,1]"), Dnf.atom("p")), (iv("(1,2)"), TOP)]}
    A = Ata({"a"}, {"q", "p"}, set(), "q", d)
    assert not is_island_normal(A)
    N = to_island_normal_form(A)
    assert is_island_normal(N) and islands(N).normal
    rng = random.Random(4)
    for _ in range(60):
        w = gen.random_word(rng, ["a"], 5, den=4, span=3)
        for i in range(0, len(w) + 1):
            assert accepts(A, w, i) == accepts(N, w, i)


def test_nonadjacency_per_island():
    A = later_b_within("[1,1]")
    assert not check_nonadjacent_ata(A).verdict
    assert check_nonadjacent_ata(later_b_within("(1,2)")).verdict


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_complement_dual(seed):
    rng = random.Random(seed)
    A = gen.random_ata(rng, AB)
    assert runs_are_finite(A)
    C = complement(A)
    assert check_nonadjacent_ata(C).verdict or not check_nonadjacent_ata(A).verdict
    for _ in range(4):
        w = gen.random_word(rng, AB, 4, den=4, span=3)
        # a backward start on the left endmarker falls off in both
        for i in range(0 if A.initial in A.forward else 1, len(w) + 1):
            assert accepts(C, w, i) != accepts(A, w, i)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_boolean_combinations(seed):
    rng = random.Random(seed)
    A, B = gen.random_ata(rng, AB), gen.random_ata(rng, AB)
    U, I = boolean_combine("union", A, B), boolean_combine("intersection", A, B)
    for _ in range(4):
        w = gen.random_word(rng, AB, 4, den=4, span=3)
        for i in range(0, len(w) + 1):
            a, b = accepts(A, w, i), accepts(B, w, i)
            assert accepts(U, w, i) == (a or b)
            assert accepts(I, w, i) == (a and b)
    with pytest.raises(ValueError):
        boolean_combine("xor", A, B)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_origin_wrapper(seed):
    rng = random.Random(seed)
    A = gen.random_ata(rng, AB)
    O = from_origin(A)
    for _ in range(5):
        w = gen.random_word(rng, AB, 5, den=4, span=3)
        assert accepts(O, w, 1) == accepts(A, w, 0)


def test_runs_are_finite_rejects_ping_pong():
    d = {("f", A_): [(FULL, Dnf.atom("b"))], ("b", A_): [(FULL, Dnf.atom("f"))]}
    assert not runs_are_finite(Ata({"a"}, {"f"}, {"b"}, "f", d))


def test_fixture_automata():
    E = fx.anbn_ata()
    for w, v in fx.anbn_words():
        assert accepts(E, w) == v
    D = fx.insterr_ata()
    assert is_rfl(D) and check_nonadjacent_ata(D).verdict
    for s, v in fx.INSTERR_WORDS:
        assert accepts(D, fx.word(s)) == v
    # the guard shapes as printed reject a word of the language
    P = fx.insterr_ata_printed()
    assert any(accepts(P, fx.word(s)) != v for s, v in fx.INSTERR_WORDS)
