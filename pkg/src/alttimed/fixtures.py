"""Worked examples used as regression fixtures.

Each builder returns a fresh object. Words are given as text in the timed
word format so they read the same as the corpus files under ``corpus/``.
"""

from .ata2w import FULL, Ata
from .automata import LEFT, RIGHT, TOP, Dnf, Nfa
from .gqmso import block, exists_in, pos_formula, successor
from .interval_words import parse_interval_word
from .mso import Eq, Ex, ExSO, In, Lt, Q, forall, implies, le, mand, mnot, mor
from .pnemtl import Atom, F, P, all_letters, conj
from .timed_core import Interval, parse_interval, parse_timed_word

iv = parse_interval


# ------------------------------------------------------------------ words

def word(text, strict_origin=True):
    return parse_timed_word(text, strict_origin=strict_origin)


# consistency example: kappa, and three words checked at position 3
EX1_KAPPA = "a,b|(-1,0) ; b|(-1,0) ; a|anch ; b|[2,3]"
EX1_RHO = "a,b @ 0 ; b @ 1/2 ; a @ 19/20 ; b @ 3"
EX1_RHO1 = "a,b @ 0 ; b @ 4/5 ; a @ 9/10 ; b @ 3"
EX1_RHO2 = "a,b @ 0 ; b @ 1/2 ; a @ 11/10 ; b @ 3"


def ex1():
    """(kappa, {name: (word, expected consistency at 3)})."""
    return parse_interval_word(EX1_KAPPA), {
        "rho": (word(EX1_RHO), True),
        "rho1": (word(EX1_RHO1), True),
        "rho2": (word(EX1_RHO2), False),
    }


# ------------------------------------------------------------- helpers

def _nfa(alphabet, init, finals, edges):
    states = {init} | set(finals) | {p for p, _, _ in edges} | {q for _, _, q in edges}
    trans = {}
    for p, c, q in edges:
        trans.setdefault((p, c), set()).add(q)
    return Nfa(alphabet, states, {init}, finals, trans)


def _dnf(*disjuncts):
    """Each disjunct is (free locations, reset locations)."""
    return Dnf([(frozenset(f), frozenset(r)) for f, r in disjuncts])


def _free(*qs):
    return _dnf((qs, ()))


def _add(delta, q, c, g, f):
    delta.setdefault((q, c), []).append((g, f))


B = frozenset(["b"])


# ------------------------------------------- even b's in the past unit

def ex2():
    """Every a has a positive even number of b's in the unit before it.

    The window [t-1, t] is pinned by its first and last positions; a parity
    labelling O of the b's in that window must start in O and end outside O.
    """
    t, tf, tl, tp = "t", "tf", "tl", "tp"
    u, v, w, O = "u", "v", "w", "O"

    def in_win(x):
        return mand([le(tf, x), le(x, tl)])

    def next_b(x, y):
        # y is the first b after x
        return mand([Lt(x, y), Q("b", y),
                     mnot(Ex(w, mand([Lt(x, w), Lt(w, y), Q("b", w)])))])

    alternation = forall(u, forall(v, implies(
        mand([in_win(u), in_win(v), Q("b", u), next_b(u, v)]),
        mor([mand([In(O, u), mnot(In(O, v))]), mand([mnot(In(O, u)), In(O, v)])]))))
    first_b = forall(u, implies(mand([in_win(u), Q("b", u),
                                      mnot(Ex(w, mand([in_win(w), Lt(w, u), Q("b", w)])))]),
                                In(O, u)))
    last_b = forall(u, implies(mand([in_win(u), Q("b", u),
                                     mnot(Ex(w, mand([in_win(w), Lt(u, w), Q("b", w)])))]),
                               mnot(In(O, u))))
    some_b = Ex(u, mand([in_win(u), Q("b", u)]))
    unit = Interval(-1, 0)
    gamma = mand([le(tf, tp), le(tp, tl), some_b, ExSO(O, mand([alternation, first_b, last_b]))])
    psi = block(t, [("E", tf, unit), ("E", tl, unit), ("A", tp, unit)], gamma)
    return forall(t, implies(Q("a", t), psi))


def ex2_reference(w):
    """Direct check of the same property."""
    for i in w.dom():
        if "a" in w.props(i):
            n = sum(1 for j in w.dom()
                    if "b" in w.props(j) and w.ts(i) - 1 <= w.ts(j) <= w.ts(i))
            if n == 0 or n % 2:
                return False
    return True


# ------------------------------------------------------- L_insterr

def first_part(t1):
    """b at the first position, then exactly two points in the first unit."""
    t2, t3, t4 = "t2", "t3", "t4"
    inner = mand([pos_formula(2, t2), pos_formula(3, t3),
                  mnot(exists_in(t1, t4, iv("(0,1)"), pos_formula(4, t4)))])
    return mand([pos_formula(1, t1),
                 block(t1, [("E", t2, iv("(0,1)")), ("E", t3, iv("(0,1)"))], inner)])


def ex3():
    """Exactly one b in [tau2+1, tau3+1] after a prefix of the right shape."""
    t1, p, q, t = "t1", "p", "q", "t"

    def window(x):
        return mand([exists_in(x, t, iv("[-1,0)"), pos_formula(3, t)),
                     mnot(exists_in(x, t, iv("(-1,0)"), pos_formula(2, t)))])

    psi1 = Ex(t1, first_part(t1))
    psi3 = Ex(p, mand([window(p), forall(q, implies(window(q), Eq(p, q)))]))
    return mand([psi1, psi3])


def ex3_na():
    """Non-adjacent variant: a position t5 in the window whose predecessor
    is before it and whose successor (if any) is after it.

    Outside the shared prefix every metric block has a single quantifier.
    """
    t0, t4, t5, t6, t = "t0", "t4", "t5", "t6", "t"
    pred_before = exists_in(t4, t, iv("(-1,0]"), pos_formula(2, t))
    in_window = mand([exists_in(t5, t, iv("(-inf,-1]"), pos_formula(2, t)),
                      exists_in(t5, t, iv("[-1,0)"), pos_formula(3, t))])
    succ_after = forall(t6, implies(successor(t5, t6),
                                    exists_in(t6, t, iv("(-inf,-1)"), pos_formula(3, t))))
    return mand([Ex(t0, first_part(t0)),
                 Ex(t4, Ex(t5, mand([successor(t4, t5), pred_before, in_window, succ_after])))])


def insterr_reference(w):
    """Membership in L_insterr, checked directly on the word."""
    if len(w) < 3 or any(w.props(i) != B for i in w.dom()):
        return False
    ts = [w.ts(i) for i in w.dom()]
    if ts[0] != 0:
        return False
    inside = [k for k, x in enumerate(ts) if 0 < x < 1]
    if inside != [1, 2]:
        return False
    lo, hi = ts[1] + 1, ts[2] + 1
    return sum(1 for x in ts if lo <= x <= hi) == 1


INSTERR_WORDS = [
    ("b @ 0 ; b @ 3/10 ; b @ 3/5 ; b @ 7/5 ; b @ 2", True),
    ("b @ 0 ; b @ 3/10 ; b @ 3/5 ; b @ 7/5 ; b @ 3/2", False),
    ("b @ 0 ; b @ 3/10 ; b @ 3/5 ; b @ 13/10", True),
    ("b @ 0 ; b @ 3/10 ; b @ 3/5 ; b @ 8/5", True),
    ("b @ 0 ; b @ 3/10 ; b @ 3/5 ; b @ 1 ; b @ 17/10", False),
    ("b @ 0 ; b @ 3/10 ; b @ 3/5 ; b @ 1 ; b @ 3/2 ; b @ 17/10", True),
    ("b @ 0 ; b @ 3/10 ; b @ 3/5 ; b @ 4/5 ; b @ 7/5", False),
    ("b @ 0 ; b @ 3/10 ; b @ 3/5", False),
    ("b @ 0 ; b @ 1/2 ; b @ 1/2 ; b @ 3/2", True),
    ("b @ 0 ; b @ 0 ; b @ 3/5 ; b @ 7/5", False),
]


def _insterr_ata(g):
    """Islands Q0..Q5; ``g`` supplies the guards that differ between the
    corrected automaton and the one as printed."""
    fwd = {"q0", "q02", "q03", "q04", "q05", "q1", "q12", "q13"}
    bwd = {"q06", "q2", "q22", "q23", "q24", "q3", "q32", "q33",
           "q4", "q42", "q43", "q5", "q52", "q53", "q54"}
    d = {}
    # Q5: some point at least one unit before the caller is position 3
    _add(d, "q5", B, FULL, _free("q5"))
    _add(d, "q5", B, g["q5"], _free("q52"))
    _add(d, "q52", B, FULL, _free("q53"))
    _add(d, "q53", B, FULL, _free("q54"))
    _add(d, "q54", LEFT, FULL, TOP)
    # Q4: position 2 lies within one unit of the caller
    _add(d, "q4", B, g["q4"], _dnf((["q4"], ()), (["q42"], ())))
    _add(d, "q42", B, FULL, _free("q43"))
    _add(d, "q43", LEFT, FULL, TOP)
    # Q3: position 2 lies at least one unit before the caller
    _add(d, "q3", B, FULL, _free("q3"))
    _add(d, "q3", B, g["q3"], _free("q32"))
    _add(d, "q32", B, FULL, _free("q33"))
    _add(d, "q33", LEFT, FULL, TOP)
    # Q2: position 3 lies within one unit of the caller
    _add(d, "q2", B, g["q2"], _dnf((["q2"], ()), (["q22"], ())))
    _add(d, "q22", B, FULL, _free("q23"))
    _add(d, "q23", B, FULL, _free("q24"))
    _add(d, "q24", LEFT, FULL, TOP)
    # Q1: the fourth point is late enough
    _add(d, "q1", B, FULL, _free("q12"))
    _add(d, "q12", B, FULL, _free("q13"))
    _add(d, "q13", B, g["q1"], TOP)
    # Q0
    _add(d, "q0", B, FULL, _dnf((["q02"], ["q1"])))
    _add(d, "q02", B, iv("(0,1)"), _free("q03"))
    _add(d, "q03", B, iv("(0,1)"), _free("q04"))
    _add(d, "q04", B, FULL, _dnf((["q04"], ()), (["q05", "q06"], ["q2", "q3"])))
    _add(d, "q06", B, FULL, _dnf(((), ["q4"])))
    _add(d, "q05", B, FULL, _dnf(((), ["q5"])))
    _add(d, "q05", RIGHT, FULL, TOP)
    return Ata({"b"}, fwd, bwd, "q0", d)


def insterr_ata():
    """The two-way automaton for L_insterr with the guards fixed so that the
    islands check what their comments say."""
    return _insterr_ata({"q5": iv("(-inf,-1)"), "q4": iv("(-1,0]"), "q3": iv("(-inf,-1]"),
                         "q2": iv("[-1,0]"), "q1": iv("[1,inf)")})


def insterr_ata_printed():
    """Same automaton with the printed guard shapes (backward guards read as
    negative offsets)."""
    return _insterr_ata({"q5": iv("(-inf,-1)"), "q4": iv("[-1,0]"), "q3": iv("(-inf,-1)"),
                         "q2": iv("[-1,0]"), "q1": iv("(1,2)")})


# ------------------------------------------------------------ PnEMTL

def ex4():
    """F^2 over (1,2),(2,3): an a-block ending in b, a b-block ending in a,
    then only a's."""
    A, Bl = frozenset([0]), frozenset([1])
    L = all_letters(2)
    a1 = _nfa(L, 0, {1}, [(0, A, 0), (0, Bl, 1)])
    a2 = _nfa(L, 0, {1}, [(0, Bl, 0), (0, A, 1)])
    a3 = _nfa(L, 0, {0}, [(0, A, 0)])
    return F([iv("(1,2)"), iv("(2,3)")], [a1, a2, a3], [Atom("a"), Atom("b")])


EX4_WORD = "a @ 0 ; a @ 3/2 ; b @ 17/10 ; b @ 19/10 ; a @ 5/2 ; a @ 27/10"


def _any_parity_any(L, idx, odd):
    """One letter, then letters whose count of ``idx``-letters has the given
    parity, then one more letter."""
    edges = [("s", c, "e") for c in L]
    for c in L:
        flip = idx in c
        edges += [("e", c, "o" if flip else "e"), ("o", c, "e" if flip else "o")]
        edges.append(("o" if odd else "e", c, "end"))
    return _nfa(L, "s", {"end"}, edges)


def _parity(lo, hi, prop, odd, X):
    """The number of ``prop`` positions strictly between lo and hi is odd
    (or even). X marks the odd-numbered ones."""
    u, v, w = X + "u", X + "v", X + "w"

    def between(x):
        return mand([Lt(lo, x), Lt(x, hi), Q(prop, x)])

    def none_between(x, y):
        return mnot(Ex(w, mand([between(w), Lt(x, w), Lt(w, y)])))

    def is_first(x):
        return mnot(Ex(w, mand([between(w), Lt(w, x)])))

    def is_last(x):
        return mnot(Ex(w, mand([between(w), Lt(x, w)])))

    first = forall(u, implies(mand([between(u), is_first(u)]), In(X, u)))
    alt = forall(u, forall(v, implies(
        mand([between(u), between(v), Lt(u, v), none_between(u, v)]),
        mor([mand([In(X, u), mnot(In(X, v))]), mand([mnot(In(X, u)), In(X, v)])]))))
    last = forall(u, implies(mand([between(u), is_last(u)]),
                             In(X, u) if odd else mnot(In(X, u))))
    out = ExSO(X, mand([first, alt, last]))
    if odd:
        out = mand([Ex(u, between(u)), out])
    return out


def exE_gqmso():
    """Even number of b's strictly between t and t1 in t+(0,1), odd number
    of a's strictly between t2 in t+(-1,0) and t."""
    t, t1, t2 = "t", "t1", "t2"
    body = mand([_parity(t, t1, "b", False, "X"), _parity(t2, t, "a", True, "Y")])
    return block(t, [("E", t1, iv("(0,1)")), ("E", t2, iv("(-1,0)"))], body)


# the pair agrees under the inclusive schedule, where the witness may be the
# last (or first) position and segments share their boundary letters
EXE_SCHEDULE = "inclusive"


def exE_pnemtl():
    L = all_letters(2)
    anyplus = _nfa(L, 0, {1}, [(0, c, 1) for c in L] + [(1, c, 1) for c in L])
    args = [Atom("a"), Atom("b")]
    fut = F([iv("(0,1)")], [_any_parity_any(L, 1, False), anyplus], args)
    past = P([iv("(0,1)")], [_any_parity_any(L, 0, True), anyplus], args)
    return conj([fut, past])


def exE_reference(w, i):
    ti = w.ts(i)
    ok_f = any(0 < w.ts(j) - ti < 1 and
               sum(1 for k in range(i + 1, j) if "b" in w.props(k)) % 2 == 0
               for j in range(i + 1, len(w) + 1))
    ok_p = any(-1 < w.ts(j) - ti < 0 and
               sum(1 for k in range(j + 1, i) if "a" in w.props(k)) % 2 == 1
               for j in range(1, i))
    return ok_f and ok_p


# ------------------------------------------------------------ a^n b^n

def anbn_ata():
    """Every a in (0,1) is matched by a b one unit later and every b in
    (1,2) by an a one unit earlier."""
    a, b = frozenset(["a"]), frozenset(["b"])
    d = {}
    _add(d, "q0", a, iv("(0,1)"), _dnf((["q0"], ["q1"])))
    _add(d, "q0", b, iv("(1,2)"), _dnf((["q0"], ["p1"])))
    _add(d, "q0", RIGHT, FULL, TOP)
    for c in (a, b):
        for g in (iv("[0,1)"), iv("(1,inf)")):
            _add(d, "q1", c, g, _free("q1"))
        for g in (iv("(-inf,-1)"), iv("(-1,0]")):
            _add(d, "p1", c, g, _free("p1"))
    _add(d, "q1", b, iv("[1,1]"), TOP)
    _add(d, "p1", a, iv("[-1,-1]"), TOP)
    return Ata({"a", "b"}, {"q0", "q1"}, {"p1"}, "q0", d)


ANBN_WORDS = [
    ("a @ 1/5 ; a @ 3/10 ; b @ 6/5 ; b @ 13/10", True),
    ("a @ 1/5 ; b @ 6/5 ; b @ 13/10", False),
    ("a @ 1/5 ; b @ 6/5", True),
    ("a @ 1/5 ; a @ 3/10 ; b @ 6/5", False),
    ("a @ 1/5 ; b @ 7/5", False),
    ("a @ 1/5 ; a @ 1/2 ; b @ 6/5 ; b @ 3/2", True),
]


def anbn_words():
    return [(word(s, strict_origin=False), v) for s, v in ANBN_WORDS]
