import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from alttimed import gen
from alttimed.gqmso import pos_formula
from alttimed.mso import (Eq, Ex, ExSO, In, Lt, Q, Sym, eval_mso, forall, forall_so, free_vars,
                          implies, is_first, is_last, mand, mnot, mor, mso_to_nfa, nfa_to_mso,
                          rename_fo, succ)

A, B, AB = frozenset("a"), frozenset("b"), frozenset("ab")
LETTERS = [A, B, AB]


def words(n, letters=LETTERS):
    for k in range(n + 1):
        yield from itertools.product(letters, repeat=k)


def even_b():
    # a set X holding exactly every second b, starting with the first one
    bx = lambda x: Q("b", x)
    first_b = lambda x: mand([bx(x), mnot(Ex("y", mand([Lt("y", x), bx("y")])))])
    next_b = lambda x, y: mand([Lt(x, y), bx(x), bx(y),
                                mnot(Ex("z", mand([Lt(x, "z"), Lt("z", y), bx("z")])))])
    last_b = lambda x: mand([bx(x), mnot(Ex("y", mand([Lt(x, "y"), bx("y")])))])
    return ExSO("X", mand([
        forall("x", implies(first_b("x"), In("X", "x"))),
        forall("x", forall("y", implies(next_b("x", "y"),
                                        mor([mand([In("X", "x"), mnot(In("X", "y"))]),
                                             mand([mnot(In("X", "x")), In("X", "y")])])))),
        forall("x", implies(In("X", "x"), Q("b", "x"))),
        mnot(Ex("x", mand([last_b("x"), In("X", "x")]))),
    ]))


def test_even_number_of_b():
    phi = even_b()
    N = mso_to_nfa(phi, LETTERS)
    for w in words(5):
        want = sum(1 for c in w if "b" in c) % 2 == 0
        assert eval_mso(phi, list(w)) == want == N.accepts(w)


def test_free_variables():
    phi = mand([Lt("x", "y"), Ex("z", In("X", "z"))])
    assert free_vars(phi) == ({"x", "y"}, {"X"})
    assert free_vars(forall_so("X", Eq("x", "x"))) == ({"x"}, set())
    assert free_vars(rename_fo(Lt("x", "y"), "x", "u")) == ({"u", "y"}, set())


def test_helpers():
    w = [A, B, AB]
    assert eval_mso(Ex("x", mand([is_first("x"), Q("a", "x")])), w)
    assert eval_mso(Ex("x", mand([is_last("x"), Sym(AB, "x")])), w)
    assert eval_mso(succ("x", "y"), w, {"x": 2, "y": 3})
    assert not eval_mso(succ("x", "y"), w, {"x": 1, "y": 3})
    assert eval_mso(Ex("p", mand([pos_formula(2, "p"), Q("b", "p")])), w)
    with pytest.raises(ValueError):
        eval_mso(Lt("x", "y"), w, {"x": 0, "y": 1})


def test_free_variable_tracks():
    phi = Lt("x", "y")
    N = mso_to_nfa(phi, [A])
    # symbols are (letter, vars at position)
    x, y, none = frozenset("x"), frozenset("y"), frozenset()
    assert N.accepts([(A, x), (A, none), (A, y)])
    assert not N.accepts([(A, y), (A, x)])
    assert not N.accepts([(A, x), (A, x), (A, y)])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_compiler_matches_evaluator(seed):
    phi = gen.random_mso(random.Random(seed), ["a", "b"], depth=3)
    N = mso_to_nfa(phi, LETTERS)
    for w in words(4):
        assert N.accepts(w) == eval_mso(phi, list(w))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_automaton_as_formula(seed):
    rng = random.Random(seed)
    a = gen.random_nfa(rng, [A, B], 3)
    up = nfa_to_mso(a, "i", "j")
    down = nfa_to_mso(a, "i", "j", direction="-")
    for w in words(4, [A, B]):
        for i in range(1, len(w) + 1):
            for j in range(1, len(w) + 1):
                env = {"i": i, "j": j}
                if i <= j:
                    assert eval_mso(up, list(w), env) == a.accepts(w[i - 1:j])
                if i >= j:
                    assert eval_mso(down, list(w), env) == a.accepts(w[j - 1:i][::-1])
