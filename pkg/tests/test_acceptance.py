"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line."""
import itertools
import random
import time
from collections import Counter
from fractions import Fraction

from conftest import record

from alttimed import fixtures as fx
from alttimed import gen
from alttimed.ata2w import PROP1, accepts, check_nonadjacent_ata, from_origin
from alttimed.automata import twoway_afa_accepts, twoway_afa_to_nfa
from alttimed.gqmso import (check_nonadjacent_gqmso, elimination_case, eliminate_universal_metric,
                            eval_gqmso, exists_in, is_af, pos_formula)
from alttimed.interval_words import collapse, consistent, normalize, sample_consistent
from alttimed.mso import Ex, Q, Sym, eval_mso, mand, mso_to_nfa, nfa_to_mso
from alttimed.pnemtl import check_nonadjacent_intervals, check_nonadjacent_pnemtl, eval_pnemtl
from alttimed.timed_core import PointedTimedWord, TimedWord, parse_interval
from alttimed.translate import (abs_of, ata_to_pnemtl, gqmso_to_pnemtl, pnemtl_to_ata,
                                pnemtl_to_gqmso)

iv = parse_interval
AB = ["a", "b"]


# 1 ------------------------------------------------------------------

def _nested_blocks():
    # outer block with two intervals and a nested block with a third
    from alttimed.gqmso import block

    def blk(i1, i2, i3):
        nested = exists_in("t2", "t3", iv(i3), Q("a", "t3"))
        body = mand([Ex("t", Q("a", "t")), nested])
        return block("t0", [("E", "t1", iv(i1)), ("E", "t2", iv(i2))], body)

    return blk("(2,3)", "(3,4)", "(4,5)"), blk("(2,3)", "(4,5)", "(3,4)")


def test_c01_nonadjacency_classifier():
    cases = [([iv("(2,3)"), iv("(4,5)"), iv("(2,5)")], True),
             ([iv("(0,1)"), iv("(1,2)")], False),
             ([iv("[1,1]")], False)]
    ok = all(check_nonadjacent_intervals(s).verdict == v for s, v in cases)
    bad_block, good_block = _nested_blocks()
    ok &= not check_nonadjacent_gqmso(bad_block).verdict
    ok &= check_nonadjacent_gqmso(good_block).verdict
    t = time.perf_counter()
    for _ in range(1000):
        check_nonadjacent_intervals(cases[0][0])
    per_call = (time.perf_counter() - t) / 1000
    ok &= per_call < 1e-3
    assert record(1, ok, "3 interval sets + 2 block formulas exact; %.1f us per call"
                  % (per_call * 1e6))


# 2 ------------------------------------------------------------------

def test_c02_example1_consistency():
    kappa, words = fx.ex1()
    got = {k: consistent(kappa, PointedTimedWord(w, 3)) for k, (w, _) in words.items()}
    ok = all(got[k] == v for k, (_, v) in words.items())
    assert record(2, ok, "consistency at 3: %s" % ", ".join("%s=%s" % kv for kv in sorted(got.items())))


# 3 ------------------------------------------------------------------

def _nearby(rng, kappa, den=4):
    """Pointed word with kappa's letters and random timestamps (mostly rejected)."""
    t, letters = Fraction(0), []
    for j in range(1, len(kappa) + 1):
        if j > 1:
            t += Fraction(rng.randint(0, 2 * den), den)
        letters.append((kappa.props(j), t))
    return PointedTimedWord(TimedWord(letters), kappa.anchor)


def test_c03_normalization_suite():
    t0 = time.time()
    rng = random.Random(3)
    bad = checked = accepted = 0
    bound_ok = True
    for k in range(1000):
        kappa = gen.random_interval_word(rng, AB, max_len=10, max_base=3)
        c, n = collapse(kappa), normalize(kappa)
        if len(n.restricted_points()) > 2 * len(kappa.base) ** 2 + 1:
            bound_ok = False
        pws = sample_consistent(kappa, 250, den=4, seed=k, span=3)
        pws += [_nearby(rng, kappa) for _ in range(500 - len(pws))]
        for pw in pws:
            v = consistent(kappa, pw)
            checked += 1
            accepted += v
            if consistent(c, pw) != v or consistent(n, pw) != v:
                bad += 1
    dt = time.time() - t0
    ok = bad == 0 and bound_ok and dt < 60
    assert record(3, ok, "1000 words, %d pointed samples (%d consistent), %d disagreements, "
                  "bound %s, %.1fs" % (checked, accepted, bad, "ok" if bound_ok else "broken", dt))


# 4 ------------------------------------------------------------------

def _words(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def test_c04_twoway_to_nfa():
    t0 = time.time()
    rng = random.Random(4)
    corpus = []
    for k in range(16):
        alphabet = ["a", "b", "c"][:rng.randint(2, 3)]
        corpus.append(gen.random_twoway_afa(rng, alphabet, rng.randint(2, 4)))
    # abstractions of small reset-free automata
    while len(corpus) < 22:
        A = gen.random_ata(rng, ["a"], n_loc=2)
        two = abs_of(A)
        if len(two.alphabet) <= 6:
            corpus.append(two)
    bad = total = 0
    for A in corpus:
        N = twoway_afa_to_nfa(A)
        syms = sorted(A.alphabet, key=repr)
        for w in _words(syms, 6 if len(syms) <= 4 else 5):
            total += 1
            if twoway_afa_accepts(A, w) != N.accepts(w):
                bad += 1
    dt = time.time() - t0
    ok = bad == 0 and dt < 300 and len(corpus) >= 20
    assert record(4, ok, "%d automata (6 abstractions), %d words, %d disagreements, %.1fs"
                  % (len(corpus), total, bad, dt))


# 5 ------------------------------------------------------------------

def test_c05_mso_compiler():
    rng = random.Random(5)
    letters = [frozenset("a"), frozenset("b"), frozenset("ab")]
    corpus = [gen.random_mso(rng, AB) for _ in range(26)]
    corpus += [Ex("p", mand([pos_formula(3, "p"), Q("a", "p")])),
               Ex("p", mand([pos_formula(2, "p"), Q("b", "p")])),
               Ex("p", mand([pos_formula(4, "p"), Q("b", "p")])),
               Ex("p", mand([pos_formula(1, "p"), Sym(frozenset("ab"), "p")]))]
    bad = total = 0
    for phi in corpus:
        N = mso_to_nfa(phi, letters)
        for w in _words(letters, 6):
            total += 1
            if N.accepts(w) != eval_mso(phi, list(w)):
                bad += 1
    # automaton -> formula over a slice i..j
    nbad = ntotal = 0
    for k in range(6):
        a = gen.random_nfa(rng, letters, 3)
        f = nfa_to_mso(a, "i", "j")
        for w in _words(letters, 4):
            for i in range(1, len(w) + 1):
                for j in range(i, len(w) + 1):
                    ntotal += 1
                    if eval_mso(f, list(w), {"i": i, "j": j}) != a.accepts(w[i - 1:j]):
                        nbad += 1
    ok = bad == 0 and nbad == 0 and len(corpus) >= 30
    assert record(5, ok, "%d formulas x %d words: %d bad; nfa_to_mso %d checks: %d bad"
                  % (len(corpus), total // len(corpus), bad, ntotal, nbad))


# 6 ------------------------------------------------------------------

def test_c06_pnemtl_to_ata():
    t0 = time.time()
    bad = total = 0
    for s in range(200):
        rng = random.Random(600 + s)
        phi = gen.random_pnemtl(rng, AB, depth=2, max_k=2)
        for sched in ("verbatim", "inclusive"):
            A = pnemtl_to_ata(phi, sched, props=AB)
            for _ in range(10):
                w = gen.random_word(rng, AB, max_len=6, den=4, span=4)
                i = rng.choice(list(w.dom()))
                total += 1
                if accepts(A, w, i) != eval_pnemtl(phi, w, i, sched):
                    bad += 1
    dt = time.time() - t0
    assert record(6, bad == 0 and dt < 600, "200 formulas x 2 schedules, %d pointed words, "
                  "%d disagreements, %.1fs" % (total, bad, dt))


# 7 ------------------------------------------------------------------

def _pointed_agreement(A, phi, words):
    bad = n = 0
    for w in words:
        for i in w.dom():
            n += 1
            bad += accepts(A, w, i) != eval_pnemtl(phi, w, i, "inclusive")
    return bad, n


def test_c07_ata_to_pnemtl():
    bad = n = na_bad = 0
    for s in range(50):
        rng = random.Random(700 + s)
        A = gen.random_ata(rng, AB, n_loc=3)
        phi = ata_to_pnemtl(A)
        if check_nonadjacent_ata(A).verdict and not check_nonadjacent_pnemtl(phi).verdict:
            na_bad += 1
        b, k = _pointed_agreement(A, phi, [gen.random_word(rng, AB, 5, den=4, span=4)
                                           for _ in range(20)])
        bad += b
        n += k
    rng = random.Random(77)
    # a^n b^n: pointed agreement, plus the fixture words from head 0
    E5 = fx.anbn_ata()
    phi5 = ata_to_pnemtl(E5)
    b, k = _pointed_agreement(E5, phi5, [gen.random_word(rng, AB, 5, den=10, span=2)
                                         for _ in range(20)])
    bad, n = bad + b, n + k
    ex5_words = all(accepts(E5, w) == v for w, v in fx.anbn_words())
    # insertion-error automaton: pointed agreement and, through the origin
    # wrapper, word acceptance on the hand-made words
    D1 = fx.insterr_ata()
    phi_d = ata_to_pnemtl(D1)
    b, k = _pointed_agreement(D1, phi_d, [gen.insterr_word(rng, noise=0.15) for _ in range(20)])
    bad, n = bad + b, n + k
    phi_o = ata_to_pnemtl(from_origin(D1))
    d1_words = all(eval_pnemtl(phi_o, fx.word(s), 1, "inclusive") == v
                   for s, v in fx.INSTERR_WORDS)
    na_fix = check_nonadjacent_ata(D1).verdict and check_nonadjacent_pnemtl(phi_d).verdict \
        and check_nonadjacent_pnemtl(phi_o).verdict
    ok = bad == 0 and na_bad == 0 and ex5_words and d1_words and na_fix
    assert record(7, ok, "50 random + 2 fixtures, %d pointed checks, %d disagreements, "
                  "NA kept (%d lost), fixture words %s" % (n, bad, na_bad,
                                                           "ok" if ex5_words and d1_words else "BAD"))


# 8 ------------------------------------------------------------------

def test_c08_universal_elimination():
    shapes = gen.interval_shapes()
    seen_shapes, cases = set(), Counter()
    bad = n = 0
    all_af = True
    for s in range(60):
        rng = random.Random(800 + s)
        b = gen.random_block(rng, AB, shapes=shapes)
        if s < len(shapes):
            # make sure every shape sits under a universal quantifier once
            k, v, _ = b.quants[0]
            b = type(b)(b.anchor, (("A", v, shapes[s]),) + b.quants[1:], b.body)
        seen_shapes |= {x for _, _, x in b.quants}
        e = eliminate_universal_metric(b)
        all_af &= is_af(e)
        for _ in range(8):
            w = gen.random_word(rng, AB, max_len=5, den=4, span=2)
            for i in w.dom():
                n += 1
                cases[elimination_case(b, w, i)] += 1
                bad += eval_gqmso(b, w, {"t": i}) != eval_gqmso(e, w, {"t": i})
    ok = bad == 0 and n >= 1000 and all_af and len(cases) == 3 and seen_shapes >= set(shapes)
    assert record(8, ok, "60 blocks, %d triples, %d disagreements, cases %s, %d/%d shapes, AF %s"
                  % (n, bad, dict(cases), len(seen_shapes & set(shapes)), len(shapes), all_af))


# 9 ------------------------------------------------------------------

def test_c09_gqmso_pnemtl_loop():
    bad = n = na_bad = 0
    # GQMSO -> PnEMTL
    shapes = gen.interval_shapes()
    for s in range(25):
        rng = random.Random(900 + s)
        universal = s % 4 == 0
        psi = gen.random_block(rng, AB, max_q=1 if universal else 2, shapes=shapes,
                               universal=universal, nest=0.0 if universal else 0.2)
        phi = gqmso_to_pnemtl(psi, props=AB)
        if is_af(psi) and check_nonadjacent_gqmso(psi).verdict and \
                not check_nonadjacent_pnemtl(phi).verdict:
            na_bad += 1
        for _ in range(4):
            w = gen.random_word(rng, AB, max_len=5, den=4, span=4)
            for i in w.dom():
                n += 1
                bad += eval_gqmso(psi, w, {"t": i}) != eval_pnemtl(phi, w, i, "inclusive")
    # PnEMTL -> GQMSO -> PnEMTL, three-way
    for s in range(25):
        rng = random.Random(950 + s)
        phi = gen.random_pnemtl(rng, AB, depth=1 + (s % 5 == 0), max_k=2)
        sched = ("verbatim", "inclusive")[s % 2]
        psi = pnemtl_to_gqmso(phi, sched)
        phi2 = gqmso_to_pnemtl(psi, props=AB)
        if check_nonadjacent_pnemtl(phi).verdict and not (
                check_nonadjacent_gqmso(psi).verdict and check_nonadjacent_pnemtl(phi2).verdict):
            na_bad += 1
        for _ in range(4):
            w = gen.random_word(rng, AB, max_len=5, den=4, span=4)
            for i in w.dom():
                n += 1
                v = eval_pnemtl(phi, w, i, sched)
                bad += v != eval_gqmso(psi, w, {"t": i}) or v != eval_pnemtl(phi2, w, i, "inclusive")
    ok = bad == 0 and na_bad == 0 and n >= 500
    assert record(9, ok, "50 specs, %d samples, %d disagreements, NA lost %d" % (n, bad, na_bad))


# 10 -----------------------------------------------------------------

def test_c10_insterr_three_way():
    psi, psi_na, D1 = fx.ex3(), fx.ex3_na(), fx.insterr_ata()
    rng = random.Random(10)
    bad = members = 0
    for k in range(500):
        w = gen.insterr_word(rng, max_len=6, den=10) if k % 2 else \
            gen.random_word(rng, ["b"], max_len=6, den=10, span=2)
        vs = {eval_gqmso(psi, w), eval_gqmso(psi_na, w), accepts(D1, w), fx.insterr_reference(w)}
        members += eval_gqmso(psi, w)
        bad += len(vs) > 1
    hand = all(eval_gqmso(psi, fx.word(s)) == v and eval_gqmso(psi_na, fx.word(s)) == v
               and accepts(D1, fx.word(s)) == v for s, v in fx.INSTERR_WORDS)
    ok = bad == 0 and hand
    assert record(10, ok, "500 random words (%d in the language), %d disagreements; 10 hand "
                  "words %s" % (members, bad, "ok" if hand else "BAD"))


# 11 -----------------------------------------------------------------

def test_c11_clock_invariant():
    # fresh reset-free runs, on top of whatever earlier tests already did
    rng = random.Random(11)
    for s in range(30):
        A = gen.random_ata(rng, AB)
        for _ in range(5):
            w = gen.random_word(rng, AB, 5, den=4, span=4)
            for i in range(0, len(w) + 2):
                accepts(A, w, i)
    ok = PROP1["violations"] == 0 and PROP1["runs"] > 0
    assert record(11, ok, "%d reset-free runs, %d states checked, %d violations"
                  % (PROP1["runs"], PROP1["checked"], PROP1["violations"]))


# 12 -----------------------------------------------------------------

def test_c12_mutation_kill_rate():
    from alttimed.fuzz import FuzzConfig, kill_rate, kill_report
    rep = kill_report(FuzzConfig())
    rate = kill_rate(rep)
    per_pair = Counter(m.pair for m, _, _ in rep)
    alive = [m.name for m, k, _ in rep if not k]
    ok = rate >= 0.9 and min(per_pair.values()) >= 3
    assert record(12, ok, "%d/%d mutants killed (%.0f%%)%s" % (
        len(rep) - len(alive), len(rep), 100 * rate, "; alive: " + ", ".join(alive) if alive else ""))
