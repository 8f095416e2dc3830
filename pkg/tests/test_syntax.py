import pathlib
import random

import pytest
from hypothesis import given, settings, strategies as st

from alttimed import fixtures as fx
from alttimed import gen
from alttimed.ata2w import accepts
from alttimed.automata import twoway_afa_accepts
from alttimed.formats import (detect_kind, parse_2afa, parse_ata, parse_guard, parse_nfa,
                              serialize_ata, serialize_nfa)
from alttimed.gqmso import eval_gqmso
from alttimed.interval_words import parse_interval_word
from alttimed.pnemtl import eval_pnemtl
from alttimed.syntax import (formula_kind, parse_gqmso, parse_pnemtl, serialize_gqmso,
                             serialize_pnemtl)
from alttimed.timed_core import ParseError, parse_interval, parse_timed_word

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"
AB = ["a", "b"]


def body(path):
    return "\n".join(l.split("#", 1)[0] for l in path.read_text().splitlines())


def sample(rng, n=6):
    return [gen.random_word(rng, AB, 4, den=4, span=3) for _ in range(n)]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_pnemtl_round_trip(seed):
    rng = random.Random(seed)
    phi = gen.random_pnemtl(rng, AB, depth=2, max_k=2)
    text = serialize_pnemtl(phi)
    back = parse_pnemtl(text)
    assert serialize_pnemtl(back) == text
    for w in sample(rng):
        for i in w.dom():
            assert eval_pnemtl(back, w, i) == eval_pnemtl(phi, w, i)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_gqmso_round_trip(seed):
    rng = random.Random(seed)
    psi = gen.random_block(rng, AB, nest=0.3)
    text = serialize_gqmso(psi)
    back = parse_gqmso(text)
    assert serialize_gqmso(back) == text
    for w in sample(rng):
        for i in w.dom():
            assert eval_gqmso(back, w, {"t": i}) == eval_gqmso(psi, w, {"t": i})


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_ata_round_trip(seed):
    rng = random.Random(seed)
    A = gen.random_ata(rng, AB)
    text = serialize_ata(A)
    assert detect_kind(text) == "ata"
    B = parse_ata(text)
    for w in sample(rng):
        for i in range(len(w) + 1):
            assert accepts(A, w, i) == accepts(B, w, i)


def test_nfa_text():
    text = ("kind: nfa\nalphabet: a, b\nstates: p, q\ninitial: p\nfinal: q\n"
            "trans: p --a--> q\ntrans: q --b--> p\n")
    a = parse_nfa(text)
    assert detect_kind(text) == "nfa"
    assert a.accepts(["a", "b", "a"]) and not a.accepts(["a", "b"])
    assert serialize_nfa(parse_nfa(serialize_nfa(a))) == serialize_nfa(a)
    with pytest.raises(ParseError):
        parse_nfa("alphabet: a\nstates: p\ntrans: p -a- p\n")
    with pytest.raises(ParseError):
        parse_nfa("alphabet: a\n")


def test_twoway_text():
    # walk right to the end marker, then check the last letter from the left
    text = """kind: 2afa
alphabet: a, b
dir: r = fwd
dir: l = bwd
initial: r
trans: (r, a) -> r
trans: (r, b) -> r
trans: (r, -|) -> l
trans: (l, b) -> TOP
"""
    A = parse_2afa(text)
    assert twoway_afa_accepts(A, ["a", "b"])
    assert not twoway_afa_accepts(A, ["b", "a"])
    with pytest.raises(ParseError):
        parse_2afa("alphabet: a\ndir: r = fwd\ninitial: r\ntrans: r a TOP\n")


def test_guards():
    assert parse_guard("x in [1,2)") == [parse_interval("[1,2)")]
    assert parse_guard("x != 1") == [parse_interval("(-inf,1)"), parse_interval("(1,inf)")]


def test_parse_errors():
    for bad in ["(U (0,1) a", "(F (I (0,1)) (auts X) (args a))", "(U [2,1] a b)"]:
        with pytest.raises(ParseError):
            parse_pnemtl(bad)
    with pytest.raises(ParseError):
        parse_gqmso("(exists x (Q a x)")
    with pytest.raises(ParseError):
        parse_ata("kind: ata\nalphabet: a\ndir: q = sideways\ninitial: q\n")


def test_formula_kinds():
    assert formula_kind("(U (0,1) a b)") == "pnemtl"
    assert formula_kind("(exists x (Q a x))") == "gqmso"
    assert detect_kind("; comment\n(U (0,1) a b)") == "formula"


def test_corpus_words():
    for s, v in fx.INSTERR_WORDS:
        assert fx.word(s) == parse_timed_word(s)
    tws = sorted(CORPUS.glob("*.tw"))
    assert len(tws) >= 19
    for p in tws:
        # the a^n b^n words do not start at time 0
        w = parse_timed_word(body(p), strict_origin=not p.name.startswith("anbn"))
        assert len(w) >= 1
    kappa = parse_interval_word(body(CORPUS / "ex1_kappa.iw"))
    assert len(kappa) == 4


def test_corpus_insertion_error_labels():
    D = parse_ata((CORPUS / "insterr.ata").read_text())
    for p in sorted(CORPUS.glob("insterr_*.tw")):
        label = p.read_text().splitlines()[0].endswith("True")
        assert accepts(D, parse_timed_word(body(p))) == label


def test_corpus_anbn_labels():
    E = parse_ata((CORPUS / "anbn.ata").read_text())
    for p in sorted(CORPUS.glob("anbn_*.tw")):
        label = p.read_text().splitlines()[0].endswith("True")
        assert accepts(E, parse_timed_word(body(p), strict_origin=False)) == label


def test_corpus_formulas_match_fixtures():
    rng = random.Random(11)
    ex4 = parse_pnemtl((CORPUS / "ex4.pnemtl").read_text())
    assert eval_pnemtl(ex4, parse_timed_word(body(CORPUS / "ex4.tw")), 1)
    pairs = [("ex2_even_b.gqmso", fx.ex2()), ("ex3_insterr.gqmso", fx.ex3()),
             ("ex3_insterr_na.gqmso", fx.ex3_na())]
    for name, ref in pairs:
        psi = parse_gqmso((CORPUS / name).read_text())
        for w in sample(rng, 10):
            assert eval_gqmso(psi, w) == eval_gqmso(ref, w)
    pe = parse_pnemtl((CORPUS / "pairE.pnemtl").read_text())
    ge = parse_gqmso((CORPUS / "pairE.gqmso").read_text())
    for w in sample(rng, 20):
        for i in w.dom():
            assert eval_pnemtl(pe, w, i, fx.EXE_SCHEDULE) == eval_gqmso(ge, w, {"t": i})
