"""Random generators for words, intervals, automata and formulas."""
import itertools
import random
from fractions import Fraction

from .ata2w import FULL, Ata, nonempty_letters
from .automata import Dnf, Nfa, RIGHT, LEFT
from .pnemtl import (And, Atom, Mod, Not, Or, Since, Until, all_letters)
from .timed_core import INF, Interval, TimedWord


def rng_of(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_word(rng, props, max_len=5, den=10, span=3, min_len=1, strict_origin=True):
    rng = rng_of(rng)
    n = rng.randint(min_len, max_len)
    letters = nonempty_letters(props)
    ts = [Fraction(0)] if strict_origin else [Fraction(rng.randint(0, den), den)]
    for _ in range(n - 1):
        ts.append(ts[-1] + Fraction(rng.choice([0, 0] + list(range(1, span * den // 2 + 1))), den))
    return TimedWord([(rng.choice(letters), t) for t in ts], strict_origin)


def all_words(props, n, times):
    """Every word of length n over a list of nondecreasing timestamp tuples."""
    letters = nonempty_letters(props)
    for ts in times:
        for ls in itertools.product(letters, repeat=n):
            yield TimedWord(list(zip(ls, ts)))


def random_interval(rng, lo=-2, hi=3, nonneg=False):
    rng = rng_of(rng)
    while True:
        a = rng.randint(0 if nonneg else lo, hi)
        b = rng.choice([a, a + 1, a + 2, INF])
        lo_open = rng.random() < 0.5
        hi_open = b == INF or rng.random() < 0.5
        if a == b and (lo_open or hi_open):
            continue
        return Interval(a, b, lo_open, hi_open)


def random_na_set(rng, k, nonneg=True, tries=200):
    """k intervals with no inf equal to a sup (self-pairs included)."""
    from .pnemtl import check_nonadjacent_intervals
    rng = rng_of(rng)
    for _ in range(tries):
        ivs = [random_interval(rng, nonneg=nonneg) for _ in range(k)]
        if check_nonadjacent_intervals(ivs).verdict:
            return ivs
    return [Interval(0, INF, False, True)] * k


def random_nfa(rng, alphabet, n_states=3, density=0.35):
    rng = rng_of(rng)
    states = list(range(n_states))
    trans = {}
    for q in states:
        for c in alphabet:
            for r in states:
                if rng.random() < density:
                    trans.setdefault((q, c), set()).add(r)
    finals = {q for q in states if rng.random() < 0.4} or {rng.choice(states)}
    return Nfa(alphabet, states, {0}, finals, trans)


def random_pnemtl(rng, props, depth=2, na=True, max_k=2, mtl=False):
    rng = rng_of(rng)
    atoms = [Atom(p) for p in sorted(props)]

    def go(d):
        r = rng.random()
        if d == 0 or r < 0.25:
            return rng.choice(atoms)
        if r < 0.4:
            return Not(go(d - 1))
        if r < 0.55:
            return rng.choice([And, Or])((go(d - 1), go(d - 1)))
        if mtl or r < 0.65:
            iv = random_na_set(rng, 1)[0] if na else random_interval(rng, nonneg=True)
            return rng.choice([Until, Since])(iv, go(d - 1), go(d - 1))
        k = rng.randint(1, max_k)
        ivs = random_na_set(rng, k) if na else [random_interval(rng, nonneg=True) for _ in range(k)]
        nargs = rng.randint(1, 2)
        args = tuple(go(d - 1) for _ in range(nargs))
        letters = sorted(all_letters(nargs), key=sorted)
        auts = tuple(random_nfa(rng, letters, rng.randint(1, 3), 0.45) for _ in range(k + 1))
        return Mod(rng.choice("FP"), tuple(ivs), auts, args)

    return go(depth)


def random_ata(rng, props, n_loc=3, na=True, tries=100):
    """Small random reset-free ATA whose runs are finite."""
    from .ata2w import runs_are_finite
    rng = rng_of(rng)
    for _ in range(tries):
        A = _random_ata(rng, props, n_loc, na)
        if runs_are_finite(A):
            return A
    raise RuntimeError("no finite-run automaton found")


def _random_ata(rng, props, n_loc, na):
    ivs = random_na_set(rng, 2, nonneg=False) if na else [random_interval(rng) for _ in range(2)]
    locs = ["q%d" % k for k in range(n_loc)]
    fwd = [q for q in locs if rng.random() < 0.6] or [locs[0]]
    bwd = [q for q in locs if q not in fwd]
    order = {q: k for k, q in enumerate(locs)}
    letters = nonempty_letters(props)
    delta = {}
    for q in locs:
        for c in letters + [LEFT, RIGHT]:
            for _ in range(rng.randint(0, 2)):
                g = rng.choice(ivs + [FULL])
                cands = [t for t in locs if order[t] > order[q] or
                         (t == q) or ((t in fwd) == (q in fwd))]
                if c == RIGHT and q in fwd or c == LEFT and q in bwd:
                    cands = [t for t in locs if (t in fwd) != (q in fwd)]
                ds = []
                for _ in range(rng.randint(1, 2)):
                    free = set(rng.sample(cands, min(len(cands), rng.randint(0, 2)))) if cands else set()
                    # keep each part one-way: only move to later locations or same-direction ones
                    free = {t for t in free if order[t] > order[q] or (t in fwd) == (q in fwd)}
                    if c == RIGHT and q in fwd:
                        free = {t for t in free if t in bwd}
                    if c == LEFT and q in bwd:
                        free = {t for t in free if t in fwd}
                    ds.append((frozenset(free), frozenset()))
                delta.setdefault((q, c), []).append((g, Dnf(ds)))
    return Ata(props, fwd, bwd, locs[0], delta)


def random_block(rng, props, max_q=3, anchor="t", shapes=None, universal=True, nest=0.0):
    """Random metric block with a quantifier-free body over the block
    variables and the anchor. With ``universal`` at least one quantifier is
    universal; ``nest`` is the chance that an atom is an existential block
    anchored at a block variable."""
    from .gqmso import MetricBlock
    from .mso import Eq, Lt, Q, mand, mnot, mor
    rng = rng_of(rng)
    n = rng.randint(1, max_q)
    kinds = [rng.choice("EA") for _ in range(n)]
    if universal and "A" not in kinds:
        kinds[rng.randrange(n)] = "A"
    if not universal:
        kinds = ["E"] * n
    quants = []
    for k, kind in enumerate(kinds):
        iv = rng.choice(shapes) if shapes else random_interval(rng, lo=-2, hi=2)
        quants.append((kind, "u%d" % k, iv))
    vs = [anchor] + [v for _, v, _ in quants]
    props = sorted(props)

    def atom():
        r = rng.random()
        if rng.random() < nest:
            v = rng.choice(vs[1:])
            w = "%s_n" % v
            iv = rng.choice(shapes) if shapes else random_interval(rng, lo=-2, hi=2)
            return MetricBlock(v, (("E", w, iv),), Q(rng.choice(props), w))
        if r < 0.6:
            return Q(rng.choice(props), rng.choice(vs[1:]))
        x, y = rng.sample(vs, 2) if len(vs) > 1 else (vs[0], vs[0])
        return Lt(x, y) if r < 0.85 else Eq(x, y)

    def go(d):
        if d == 0 or rng.random() < 0.3:
            a = atom()
            return mnot(a) if rng.random() < 0.3 else a
        return (mand if rng.random() < 0.5 else mor)([go(d - 1), go(d - 1)])

    return MetricBlock(anchor, tuple(quants), go(2))


def interval_shapes():
    """One interval of each shape: open/closed ends, bounded/unbounded,
    left of, around and right of the anchor, and a point."""
    out = []
    for lo, hi in [(-2, -1), (-1, 0), (-1, 1), (0, 1), (1, 2), (0, 0), (1, 1)]:
        for lo_open in (False, True):
            for hi_open in (False, True):
                if lo == hi and (lo_open or hi_open):
                    continue
                out.append(Interval(lo, hi, lo_open, hi_open))
    for c in (-1, 0, 1):
        out.append(Interval(c, INF, False, True))
        out.append(Interval(c, INF, True, True))
        out.append(Interval(-INF, c, True, False))
        out.append(Interval(-INF, c, True, True))
    return out


def insterr_word(rng, max_len=6, den=10, noise=0.0):
    """Word biased towards the shape of the insertion-error language: b at 0,
    two more points inside (0,1), then anything. With ``noise`` > 0 some
    letters become a or ab."""
    from .timed_core import TimedWord
    rng = rng_of(rng)
    n = rng.randint(1, max_len)
    letters = [(frozenset("b"), Fraction(0))]
    t = Fraction(0)
    for k in range(1, n):
        if k <= 2 and rng.random() < 0.8:
            t = t + Fraction(rng.randint(1, den // 3), den)
        else:
            t = t + Fraction(rng.randint(0, den), den)
        letters.append((frozenset("b" if rng.random() >= noise else rng.choice(["a", "ab"])), t))
    return TimedWord(letters)


def random_twoway_afa(rng, alphabet, n_states=3, density=0.4):
    """Small random 2AFA; endmarker moves are kept inside the tape."""
    from .automata import BOT, TwoWayAfa
    rng = rng_of(rng)
    states = ["s%d" % k for k in range(n_states)]
    fwd = [q for q in states if rng.random() < 0.6] or [states[0]]
    bwd = [q for q in states if q not in fwd]
    delta = {}
    for q in states:
        for c in list(alphabet) + [LEFT, RIGHT]:
            if rng.random() > density and c not in (LEFT, RIGHT):
                continue
            cands = states
            if c == RIGHT and q in fwd:
                cands = bwd
            if c == LEFT and q in bwd:
                cands = fwd
            ds = []
            for _ in range(rng.randint(1, 2)):
                k = rng.randint(0, min(2, len(cands)))
                ds.append((frozenset(rng.sample(cands, k)), frozenset()))
            if not cands and rng.random() < 0.5:
                continue
            delta[(q, c)] = Dnf(ds) if cands or rng.random() < 0.5 else BOT
    return TwoWayAfa(alphabet, fwd, bwd, states[0], delta)


def random_mso(rng, props, depth=4, so=True):
    """Random MSO sentence over Q atoms, order, successor and one set variable."""
    from .mso import Ex, ExSO, In, Lt, MNot, Q, mand, mor, succ
    rng = rng_of(rng)
    props = sorted(props)
    count = itertools.count()

    def atom(fo, sov):
        x = rng.choice(fo)
        s = rng.random()
        if s < 0.2 and len(fo) > 1:
            return Lt(*rng.sample(fo, 2))
        if s < 0.35 and len(fo) > 1:
            u, v = rng.sample(fo, 2)
            return succ(u, v, "_s%d" % next(count))
        if s < 0.5 and sov:
            return In(rng.choice(sov), x)
        return Q(rng.choice(props), x)

    def go(d, fo, sov):
        r = rng.random()
        if fo and (d == 0 or r < 0.15):
            return atom(fo, sov)
        if not fo or d == 0 or r < 0.45:
            v = "x%d" % next(count)
            return Ex(v, go(max(d - 1, 0), fo + [v], sov))
        if so and not sov and r < 0.55:
            X = "X%d" % next(count)
            return ExSO(X, go(d - 1, fo, sov + [X]))
        if r < 0.7:
            return MNot(go(d - 1, fo, sov))
        return (mand if rng.random() < 0.5 else mor)([go(d - 1, fo, sov), go(d - 1, fo, sov)])

    return go(depth, [], [])


def random_interval_word(rng, props, max_len=10, max_base=3, den=None):
    """Random anchored interval word with at most ``max_base`` distinct marks."""
    from .interval_words import ANCH, IntervalWord
    rng = rng_of(rng)
    n = rng.randint(1, max_len)
    base = [random_interval(rng) for _ in range(rng.randint(0, max_base))]
    a = rng.randint(1, n)
    letters = nonempty_letters(props)
    out = []
    for j in range(1, n + 1):
        marks = {iv for iv in base if rng.random() < 0.35}
        if j == a:
            marks = {ANCH}
        out.append((rng.choice(letters), frozenset(marks)))
    return IntervalWord(out, base)
