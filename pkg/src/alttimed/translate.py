"""Translations between PnEMTL, timed ATAs and GQMSO.

Formula outputs of ``nfa_to_pnemtl``, ``ata_to_pnemtl`` and
``gqmso_to_pnemtl`` are meant for the inclusive schedule; ``pnemtl_to_ata``
and ``pnemtl_to_gqmso`` take the schedule of their input as a parameter.
"""
import itertools

from .ata2w import (ACCEPT, FULL, REJECT, Ata, complement, is_rfl,
                    is_island_normal, nonempty_letters, to_island_normal_form, trim)
from .automata import (BOT, DEFAULT_STATE_CAP, LEFT, RIGHT, TOP, Dnf, Nfa,
                       dnf_or, minimize, reverse, twoway_afa_to_nfa, TwoWayAfa)
from .interval_words import ANCH
from .mso import (FF, TT, Eq, Ex, ExSO, Lt, MAnd, MNot, MOr, MTrue, Q, forall, free_vars,  # noqa: F401 (FF: mutants)
                  implies, is_first, is_last, mand, mnot, mor, mso_children, mso_to_nfa,
                  nfa_to_mso, rename_fo)
from .pnemtl import (FALSE, TRUE, And, Atom, Mod, Not, Or, Since, Top, Until, all_letters,
                     conj, disj, expand_degenerate, letter_formula, mtl_to_pnemtl,
                     subformulas, props_of)
from .timed_core import INF, Interval, interval_contains, interval_intersect

NONNEG = Interval(0, INF, False, True)


def _is_prop(phi):
    return not any(isinstance(x, (Mod, Until, Since)) for x in subformulas(phi))


def prop_value(phi, sigma):
    if isinstance(phi, Atom):
        return phi.name in sigma
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Not):
        return not prop_value(phi.arg, sigma)
    if isinstance(phi, And):
        return all(prop_value(x, sigma) for x in phi.args)
    if isinstance(phi, Or):
        return any(prop_value(x, sigma) for x in phi.args)
    raise TypeError("not propositional: %r" % (phi,))


# ====================================================== PnEMTL -> ATA

class _AtaBuilder:
    def __init__(self, props, schedule):
        self.props = frozenset(props)
        self.schedule = schedule
        self.letters = nonempty_letters(self.props)
        self.fwd, self.bwd, self.delta = set(), set(), {}
        self.memo, self.negmemo = {}, {}
        self.keep = []
        self.count = itertools.count()

    def loc(self, tag, forward):
        q = (tag, next(self.count))
        (self.fwd if forward else self.bwd).add(q)
        return q

    def add(self, q, c, g, f):
        if not f.is_bot():
            self.delta.setdefault((q, c), []).append((g, f))

    def automaton(self, init):
        return Ata(self.props, self.fwd, self.bwd, init, self.delta)

    # -- nodes

    def build(self, phi):
        key = id(phi)
        if key not in self.memo:
            self.keep.append(phi)
            self.memo[key] = self._build(phi)
        return self.memo[key]

    def negate(self, phi):
        key = id(phi)
        if key not in self.negmemo:
            q = self.build(phi)
            B = complement(trim(self.automaton(q)))
            tag = next(self.count)

            def ren(t):
                return ("neg", tag, t)
            for t in B.forward:
                self.fwd.add(ren(t))
            for t in B.backward:
                self.bwd.add(ren(t))
            for (t, c), items in B.delta.items():
                for g, f in items:
                    self.add(ren(t), c, g, f.rename(ren))
            self.negmemo[key] = ren(B.initial)
        return self.negmemo[key]

    def _test(self, pred):
        """Check the letter at the start head."""
        u, u2 = self.loc("look", True), self.loc("look'", False)
        for c in self.letters + [RIGHT]:
            self.add(u, c, FULL, Dnf.atom(u2))
        for c in self.letters:
            if pred(c):
                self.add(u2, c, FULL, TOP)
        return u

    def _build(self, phi):
        if _is_prop(phi):
            return self._test(lambda c: prop_value(phi, c))
        if isinstance(phi, Not):
            return self.negate(phi.arg)
        if isinstance(phi, (And, Or)):
            inits = [self.build(x) for x in phi.args]
            u, u2 = self.loc("split", True), self.loc("split'", False)
            for c in self.letters + [RIGHT]:
                self.add(u, c, FULL, Dnf.atom(u2))
            lits = [Dnf.atom(q, reset=True) for q in inits]
            if isinstance(phi, Or):
                body = dnf_or(lits)
            else:
                body = TOP
                for d in lits:
                    body = body & d
            for c in self.letters:
                self.add(u2, c, FULL, body)
            return u
        if isinstance(phi, (Until, Since)):
            # only the top modality is rewritten; the arguments keep their
            # own form so nested U/S are not read under a Mod schedule
            m = mtl_to_pnemtl(phi)
            return self._mod(Mod(m.kind, m.intervals, m.automata, (phi.left, phi.right)), "inclusive")
        if isinstance(phi, Mod):
            return self._mod(phi, self.schedule)
        raise TypeError(phi)

    def _mod(self, phi, schedule):
        k = phi.k
        auts = phi.automata
        fwd = phi.kind == "F"
        end = RIGHT if fwd else LEFT
        props_idx = [b for b, s in enumerate(phi.args) if _is_prop(s)]
        wit_idx = [b for b, s in enumerate(phi.args) if not _is_prop(s)]
        pos = {b: self.build(phi.args[b]) for b in wit_idx}
        neg = {b: self.negate(phi.args[b]) for b in wit_idx}
        reads = {}
        for sigma in self.letters:
            base = frozenset(b for b in props_idx if prop_value(phi.args[b], sigma))
            opts = []
            for r in range(len(wit_idx) + 1):
                for W in itertools.combinations(wit_idx, r):
                    W = frozenset(W)
                    wit = Dnf.conj((), [pos[b] if b in W else neg[b] for b in wit_idx])
                    opts.append((base | W, wit))
            reads[sigma] = opts
        INIT = ("init",)
        locs = {}
        todo = []

        def state(j, q, fresh=False):
            key = (j, q, fresh)
            if key not in locs:
                locs[key] = self.loc(("chain", j), fwd)
                todo.append(key)
            return locs[key]

        def step(j, q, c):
            a = auts[j]
            return a.step(a.initial, c) if q is INIT else a.succ(q, c)

        def enter(j, qs):
            fresh = schedule == "verbatim" and j == k and k > 0
            return dnf_or([Dnf.atom(state(j, q, fresh)) for q in sorted(qs, key=repr)])

        if schedule == "verbatim" and k:
            start = state(0, INIT)
        else:
            r0, r1 = self.loc("rewind", fwd), self.loc("rewind'", not fwd)
            for c in self.letters + [end]:
                self.add(r0, c, FULL, Dnf.atom(r1))
            for sigma in self.letters:
                for c, wit in reads[sigma]:
                    qs = step(0, INIT, c)
                    if qs:
                        self.add(r1, sigma, FULL,
                                 dnf_or([Dnf.atom(state(0, q)) for q in sorted(qs, key=repr)]) & wit)
            start = r0
        while todo:
            key = todo.pop()
            j, q, fresh = key
            here = locs[key]
            for sigma in self.letters:
                for c, wit in reads[sigma]:
                    qs = step(j, q, c)
                    if qs:
                        self.add(here, sigma, FULL,
                                 dnf_or([Dnf.atom(state(j, t)) for t in sorted(qs, key=repr)]) & wit)
                    if j < k and qs & auts[j].finals:
                        g = phi.intervals[j] if fwd else phi.intervals[j].neg()
                        if schedule == "verbatim" and j + 1 < k:
                            f = Dnf.atom(state(j + 1, INIT))
                        else:
                            f = enter(j + 1, step(j + 1, INIT, c))
                        self.add(here, sigma, g, f & wit)
            if j == k and q is not INIT and q in auts[k].finals and not fresh:
                self.add(here, end, FULL, TOP)
        return start


def pnemtl_to_ata(phi, schedule="verbatim", props=None):
    """Timed ATA accepting rho,i iff phi holds at i under ``schedule``."""
    props = frozenset(props or ()) | props_of(phi)
    if not props:
        props = frozenset(["p"])
    b = _AtaBuilder(props, schedule)
    init = b.build(phi)
    return trim(b.automaton(init))


# ====================================================== ABS (ATA -> 2AFA)

def _mark_sets(intervals):
    ivs = sorted(intervals)
    out = []
    for r in range(len(ivs) + 1):
        for J in itertools.combinations(ivs, r):
            if not J or interval_intersect(J) is not None:
                out.append(frozenset(J))
    return out


def abs_alphabet(props, intervals):
    letters = []
    for sigma in nonempty_letters(props):
        for J in _mark_sets(intervals):
            letters.append((sigma, J))
        letters.append((sigma, frozenset([ANCH])))
    return letters


def abs_of(A, props=None):
    """Untimed two-way automaton over anchored interval words for a
    reset-free ATA: it accepts an interval word iff every consistent pointed
    word is accepted by A at the anchor."""
    if A.has_resets():
        raise ValueError("abs_of needs a reset-free automaton")
    props = frozenset(props or A.props)
    ivs = sorted(g for g in A.guards() if g != FULL)
    alphabet = abs_alphabet(props, ivs)
    fwd = set(A.forward)
    bwd = set(A.backward)
    init2, check = ("ABS", "init"), ("ABS", "check")
    fwd |= {init2, check}
    chk_r = {g: ("ABS", "last", g) for g in ivs}
    chk_l = {g: ("ABS", "first", g) for g in ivs}
    bwd |= set(chk_r.values())
    fwd |= set(chk_l.values())
    delta = {}

    def put(q, c, f):
        if not f.is_bot():
            delta[(q, c)] = delta.get((q, c), BOT) | f

    def formula(q, sigma, ok):
        out = BOT
        for g, f in A.delta.get((q, sigma), ()):
            if ok(g):
                out = out | f
        return out

    for (sigma, J) in alphabet:
        anchor = ANCH in J
        for q in A.locations:
            if anchor:
                put(q, (sigma, J), formula(q, sigma, lambda g: interval_contains(g, 0)))
            else:
                put(q, (sigma, J), formula(q, sigma, lambda g: g == FULL or g in J))
        for g in ivs:
            hit = interval_contains(g, 0) if anchor else g in J
            if hit:
                put(chk_r[g], (sigma, J), TOP)
                put(chk_l[g], (sigma, J), TOP)
        if anchor:
            start = TOP if A.initial == ACCEPT else BOT if A.initial == REJECT else Dnf.atom(A.initial)
            put(init2, (sigma, J), Dnf.atom(check) & start)
        else:
            put(init2, (sigma, J), Dnf.atom(init2))
            put(check, (sigma, J), Dnf.atom(check))
    put(check, RIGHT, TOP)
    for q in A.locations:
        for c, chk in ((RIGHT, chk_r), (LEFT, chk_l)):
            out = BOT
            for g, f in A.delta.get((q, c), ()):
                out = out | (f if g == FULL else f & Dnf.atom(chk[g]))
            put(q, c, out)
    return TwoWayAfa(alphabet, fwd, bwd, init2, delta)


# ====================================================== NFA -> PnEMTL

def _collapse_mark(M):
    if ANCH in M:
        return ANCH
    if not M:
        return None
    return interval_intersect(list(M))


def _kind_of(K):
    """Role of a mark for positions read away from the point (distance >= 0)."""
    if K is None:
        return "free"
    pos = interval_intersect([K, NONNEG])
    if pos is None:
        return "never"
    zero = interval_contains(pos, 0)
    if zero and pos.hi == INF:
        return "free"
    if zero:
        return "last"
    if pos.hi == INF:
        return "first"
    return "two"


def _plans(kinds):
    """Checkpoint event sequences: tuples of (role, mark)."""
    marks = sorted(kinds, key=lambda K: K.key())
    per = []
    for K in marks:
        t = kinds[K]
        if t == "last":
            per.append([(), (("L", K),)])
        elif t == "first":
            per.append([(), (("F", K),)])
        else:
            per.append([(), (("S", K),), (("F", K), ("L", K))])
    seen = set()
    for choice in itertools.product(*per):
        events = [e for evs in choice for e in evs]
        for perm in set(itertools.permutations(events)):
            ok = True
            for K in marks:
                if ("F", K) in perm and ("L", K) in perm and \
                        perm.index(("F", K)) > perm.index(("L", K)):
                    ok = False
                    break
            if ok and perm not in seen:
                seen.add(perm)
                yield perm


def _allowed(plan, kinds, w):
    """Marks usable strictly between checkpoints w-1 and w (phase w)."""
    out = {None}
    idx = {e: n for n, e in enumerate(plan)}
    for K, t in kinds.items():
        if t == "free":
            out.add(K)
            continue
        f, l = idx.get(("F", K)), idx.get(("L", K))
        if t == "last" and l is not None and w <= l:
            out.add(K)
        elif t == "first" and f is not None and w > f:
            out.add(K)
        elif t == "two" and f is not None and l is not None and f < w <= l:
            out.add(K)
    return out


def _directional(N, kind, args, index, cap):
    """Formula: the word strictly beyond the point (read away from it) can
    be marked so that N accepts and every mark is satisfied by the distance
    of its position from the point."""
    trans = {}
    kinds = {}
    for (q, (sigma, K)), qs in N.trans.items():
        t = _kind_of(K)
        if t == "never":
            continue
        if t == "free":
            K = None
        else:
            kinds[K] = t
        trans.setdefault((q, (sigma, K)), set()).update(qs)
    letters = {c for (_, c) in trans}
    N2 = Nfa(letters, N.states, N.initial, N.finals, trans).trim()
    if not N2.finals:
        return FALSE
    D = minimize(N2, cap).trim()
    if not D.finals:
        return FALSE
    used = {K for (_, (_, K)) in D.trans if K is not None}
    kinds = {K: t for K, t in kinds.items() if K in used}
    n = len(args)
    allletters = all_letters(n)

    def code(sigma):
        return frozenset(index[p] for p in sigma)

    (d0,) = D.initial
    out = []
    for plan in _plans(kinds):
        k = len(plan)
        allow = [_allowed(plan, kinds, w) for w in range(k + 1)]

        def closure(states, w):
            seen = set(states)
            todo = list(states)
            while todo:
                s = todo.pop()
                for (q, (sigma, K)), qs in D.trans.items():
                    if q == s and K in allow[w]:
                        for r in qs:
                            if r not in seen:
                                seen.add(r)
                                todo.append(r)
            return seen

        def hop(s, w):
            res = set()
            for m in closure({s}, w):
                for (q, (sigma, K)), qs in D.trans.items():
                    if q == m and K == plan[w][1]:
                        res |= qs
            return res

        good = [None] * (k + 1)
        good[k] = {s for s in D.states if closure({s}, k) & D.finals}
        for w in range(k - 1, -1, -1):
            good[w] = {s for s in D.states if hop(s, w) & good[w + 1]}
        if d0 not in good[0]:
            continue

        def tuples(s, w):
            if w == k:
                yield ()
                return
            for t in sorted(hop(s, w) & good[w + 1], key=repr):
                for rest in tuples(t, w + 1):
                    yield (t,) + rest

        for tup in tuples(d0, 0):
            chain = (d0,) + tup
            automata = []
            for w in range(k + 1):
                skip = ("skip",)
                endq = ("end",)
                tr = {(skip, c): {("d", chain[w])} for c in allletters}
                for (q, (sigma, K)), qs in D.trans.items():
                    c = code(sigma)
                    if K in allow[w]:
                        tr.setdefault((("d", q), c), set()).update(("d", r) for r in qs)
                    if w < k and K == plan[w][1] and chain[w + 1] in qs:
                        tr.setdefault((("d", q), c), set()).add(endq)
                states = {skip, endq} | {("d", q) for q in D.states}
                fin = {endq} if w < k else {("d", q) for q in D.finals}
                automata.append(Nfa(allletters, states, {skip}, fin, tr).trim().relabel())
            out.append(Mod(kind, tuple(K for _, K in plan), tuple(automata), args))
    return disj(out)


def nfa_to_pnemtl(A, props=None, cap=DEFAULT_STATE_CAP, expand=True):
    """Formula (inclusive schedule) that holds at rho,i iff some anchored
    interval word accepted by A is consistent with rho,i.

    Letters of A are pairs (props, marks). Marks are collapsed to their
    intersection; letters with contradictory marks are dropped.
    """
    if props is None:
        props = set()
        for (_, (sigma, _)) in A.trans:
            props |= set(sigma)
    props = sorted(props)
    index = {p: k for k, p in enumerate(props)}
    args = tuple(Atom(p) for p in props)
    trans = {}
    for (q, (sigma, M)), qs in A.trans.items():
        K = _collapse_mark(M)
        if K is None and M:
            continue
        if not sigma or not set(sigma) <= set(props):
            continue
        trans.setdefault((q, (frozenset(sigma), K)), set()).update(qs)
    C = Nfa({c for (_, c) in trans}, A.states, A.initial, A.finals, trans).trim()
    if not C.finals:
        return FALSE
    plain = {key: qs for key, qs in C.trans.items() if key[1][1] != ANCH}
    anchored = {key: qs for key, qs in C.trans.items() if key[1][1] == ANCH}
    letters = {c for (_, c) in plain}
    fut, past = {}, {}

    def future(p):
        if p not in fut:
            N = Nfa(letters, C.states, {p}, C.finals, plain)
            fut[p] = _directional(N, "F", args, index, cap)
        return fut[p]

    def before(p):
        if p not in past:
            N = Nfa(letters, C.states, C.initial, {p}, plain).trim()
            if not N.finals:
                past[p] = FALSE
            else:
                R = reverse(N)
                rtrans = {}
                for (q, (sigma, K)), qs in R.trans.items():
                    K2 = None if K is None else K.neg()
                    rtrans.setdefault((q, (sigma, K2)), set()).update(qs)
                R2 = Nfa({c for (_, c) in rtrans}, R.states, R.initial, R.finals, rtrans)
                past[p] = _directional(R2, "P", args, index, cap)
        return past[p]

    by_p = {}
    for (p, (sigma, _)), qs in anchored.items():
        for q in qs:
            by_p.setdefault(p, []).append((sigma, q))
    parts = []
    for p in sorted(by_p, key=repr):
        pre = before(p)
        if pre is FALSE:
            continue
        alts = []
        for sigma, q in sorted(by_p[p], key=lambda x: (sorted(x[0]), repr(x[1]))):
            f = future(q)
            if f is FALSE:
                continue
            alts.append(conj([letter_formula(props, sigma), f]))
        if alts:
            parts.append(conj([pre, disj(alts)]))
    phi = disj(parts)
    return expand_degenerate(phi) if expand else phi


# ====================================================== ATA -> PnEMTL

def substitute(phi, table):
    """Replace atoms by formulas (``table`` maps names to formulas)."""
    memo = {}

    def go(x):
        if id(x) in memo:
            return memo[id(x)]
        if isinstance(x, Atom):
            r = table.get(x.name, x)
        elif isinstance(x, Top):
            r = x
        elif isinstance(x, Not):
            r = Not(go(x.arg))
        elif isinstance(x, And):
            r = And(tuple(go(y) for y in x.args))
        elif isinstance(x, Or):
            r = Or(tuple(go(y) for y in x.args))
        elif isinstance(x, Mod):
            r = Mod(x.kind, x.intervals, x.automata, tuple(go(y) for y in x.args))
        elif isinstance(x, (Until, Since)):
            r = type(x)(x.interval, go(x.left), go(x.right))
        else:
            raise TypeError(x)
        memo[id(x)] = r
        return r

    return go(phi)


def reset_free_to_pnemtl(A, props=None, cap=DEFAULT_STATE_CAP, expand=True):
    """Reset-free ATA -> ABS -> one-way DFA -> formula."""
    props = frozenset(props or A.props)
    if A.initial == ACCEPT:
        return TRUE
    if A.initial == REJECT:
        return FALSE
    two = abs_of(A, props)
    dfa = twoway_afa_to_nfa(two, cap)
    return nfa_to_pnemtl(dfa, props, cap, expand)


class _AtaTranslator:
    def __init__(self, A, cap):
        if not is_island_normal(A):
            A = to_island_normal_form(A)
        if not is_rfl(A):
            raise ValueError("automaton has a reset loop (not RFL)")
        self.sigma = A.props
        # peek locations turn endmarker resets into position properties
        fwd, bwd, delta = set(A.forward), set(A.backward), dict(A.delta)
        self.peek = {}
        for (q, c), items in A.delta.items():
            if c not in (LEFT, RIGHT):
                continue
            for _, f in items:
                for r in f.bound():
                    key = (c, r)
                    if key not in self.peek:
                        u = ("peek", c, r)
                        (fwd if c == RIGHT else bwd).add(u)
                        delta[(u, c)] = [(FULL, Dnf.atom(r, reset=True))]
                        self.peek[key] = u
        self.A = Ata(A.props, fwd, bwd, A.initial, delta)
        self.cap = cap
        self.memo = {}
        self.count = itertools.count()

    def island(self, h):
        A = self.A
        seen, todo = {h}, [h]
        while todo:
            q = todo.pop()
            for c in A.symbols():
                for _, f in A.delta.get((q, c), ()):
                    for t in f.free():
                        if t not in seen:
                            seen.add(t)
                            todo.append(t)
        return seen

    def tr(self, h):
        if h in self.memo:
            return self.memo[h]
        A = self.A
        locs = self.island(h)
        bits = {}

        def bit(kind, r):
            key = (kind, r)
            if key not in bits:
                bits[key] = "_w%d" % next(self.count)
            return bits[key]

        for q in locs:
            for c in A.symbols():
                for _, f in A.delta.get((q, c), ()):
                    for r in f.bound():
                        bit(c if c in (LEFT, RIGHT) else "letter", r)
        W = sorted(bits.values())
        props2 = self.sigma | frozenset(W)
        fwd, bwd, delta = set(), set(), {}
        for q in locs:
            (fwd if q in A.forward else bwd).add(q)

        def put(q, c, g, f):
            if not f.is_bot():
                delta.setdefault((q, c), []).append((g, f))

        wsubsets = [frozenset(s) for r in range(len(W) + 1) for s in itertools.combinations(W, r)]
        for q in locs:
            for sigma in nonempty_letters(self.sigma):
                for g, f in A.delta.get((q, sigma), ()):
                    for Wp in wsubsets:
                        out = BOT
                        for free, reset in f.disjuncts:
                            if {bit("letter", r) for r in reset} <= Wp:
                                out = out | Dnf.conj(free)
                        put(q, sigma | Wp, g, out)
            for c in (LEFT, RIGHT):
                for g, f in A.delta.get((q, c), ()):
                    out = BOT
                    for free, reset in f.disjuncts:
                        if not reset:
                            out = out | Dnf.conj(free)
                            continue
                        need = frozenset(bit(c, r) for r in reset)
                        p1 = ("peek1", q, c, free, reset)
                        p2 = ("peek2", q, c, free, reset)
                        if c == RIGHT:
                            bwd.add(p1)
                            fwd.add(p2)
                        else:
                            fwd.add(p1)
                            bwd.add(p2)
                        for sigma in nonempty_letters(self.sigma):
                            for Wp in wsubsets:
                                if need <= Wp:
                                    put(p1, sigma | Wp, FULL, Dnf.atom(p2))
                        put(p2, c, FULL, Dnf.conj(free))
                        out = out | Dnf.atom(p1)
                    put(q, c, g, out)
        top = Ata(props2, fwd, bwd, h, delta)
        phi = reset_free_to_pnemtl(top, props2, self.cap, expand=False)
        table = {}
        for (kind, r), name in bits.items():
            if kind == "letter":
                table[name] = self.tr(r)
            else:
                table[name] = self.tr(self.peek[(kind, r)])
        phi = substitute(phi, table)
        self.memo[h] = phi
        return phi


def ata_to_pnemtl(A, cap=DEFAULT_STATE_CAP):
    """Formula (inclusive schedule) holding at rho,i iff A accepts rho,i.

    The automaton must be reset-loop free; islands are translated bottom-up
    and every reset is replaced by a witness proposition.
    """
    if A.initial == ACCEPT:
        return TRUE
    if A.initial == REJECT:
        return FALSE
    t = _AtaTranslator(A, cap)
    return expand_degenerate(t.tr(t.A.initial))


# ====================================================== PnEMTL -> GQMSO

class _GqBuilder:
    def __init__(self, schedule):
        self.schedule = schedule
        self.count = itertools.count()
        self.memo = {}
        self.keep = []

    def var(self, tag):
        return "%s%d" % (tag, next(self.count))

    def at(self, phi, x):
        # one template per subformula, instantiated by renaming its anchor,
        # so that equal subformulas stay syntactically equal
        key = id(phi)
        if key not in self.memo:
            self.keep.append(phi)
            a = self.var("_x")
            self.memo[key] = (a, self._at(phi, a))
        a, tmpl = self.memo[key]
        return tmpl if a == x else rename_fo(tmpl, a, x)

    def _at(self, phi, x):
        from .gqmso import MetricBlock
        if isinstance(phi, Atom):
            return Q(phi.name, x)
        if isinstance(phi, Top):
            return TT
        if isinstance(phi, Not):
            return mnot(self.at(phi.arg, x))
        if isinstance(phi, And):
            return mand([self.at(a, x) for a in phi.args])
        if isinstance(phi, Or):
            return mor([self.at(a, x) for a in phi.args])
        if isinstance(phi, (Until, Since)):
            j, k = self.var("j"), self.var("k")
            fut = isinstance(phi, Until)
            iv = phi.interval if fut else phi.interval.neg()
            order = Lt(x, j) if fut else Lt(j, x)
            between = mand([Lt(x, k), Lt(k, j)]) if fut else mand([Lt(j, k), Lt(k, x)])
            body = mand([order, self.at(phi.right, j),
                         forall(k, implies(between, self.at(phi.left, k)))])
            return MetricBlock(x, (("E", j, iv),), body)
        if isinstance(phi, Mod):
            return self._mod(phi, x)
        raise TypeError(phi)

    def _mod(self, phi, x):
        from .gqmso import MetricBlock
        fut = phi.kind == "F"
        direction = "+" if fut else "-"
        verbatim = self.schedule == "verbatim"
        args = phi.args

        def letter_pred(c, y):
            return mand([self.at(s, y) if b in c else mnot(self.at(s, y))
                         for b, s in enumerate(args)])

        def seg(a, i, j):
            return nfa_to_mso(a, i, j, letter_pred, direction)

        def after(u, v):
            # v is strictly beyond u in reading direction
            return Lt(u, v) if fut else Lt(v, u)

        def nxt(u, s):
            from .mso import succ
            return succ(u, s, self.var("z")) if fut else succ(s, u, self.var("z"))

        k = phi.k
        ts = [x] + [self.var("t") for _ in range(k)]
        conds = [after(ts[w], ts[w + 1]) for w in range(k)]
        for w in range(k):
            if verbatim:
                s = self.var("s")
                conds.append(Ex(s, mand([nxt(ts[w], s), seg(phi.automata[w], s, ts[w + 1])])))
            else:
                conds.append(seg(phi.automata[w], ts[w], ts[w + 1]))
        e = self.var("e")
        edge = is_last(e, self.var("z")) if fut else is_first(e, self.var("z"))
        tail = [edge, seg(phi.automata[k], ts[k], e)]
        if verbatim and k:
            tail.append(after(ts[k], e))
        conds.append(Ex(e, mand(tail)))
        body = mand(conds)
        if not k:
            return body
        quants = tuple(("E", ts[w + 1], iv if fut else iv.neg())
                       for w, iv in enumerate(phi.intervals))
        return MetricBlock(x, quants, body)


def pnemtl_to_gqmso(phi, schedule="verbatim", var="t"):
    """GQMSO formula with free variable ``var`` equivalent to phi at var."""
    return _GqBuilder(schedule).at(phi, var)


# ====================================================== GQMSO -> PnEMTL

def _gq_props(psi):
    out = set()
    stack = [psi]
    while stack:
        x = stack.pop()
        if isinstance(x, Q) and isinstance(x.a, str) and x.a != ANCH:
            out.add(x.a)
        stack.extend(mso_children(x))
    return out


class _PnBuilder:
    def __init__(self, props, cap):
        self.props = frozenset(props)
        self.cap = cap
        self.count = itertools.count()
        self.witness = {}

    def to_pn(self, psi, t0):
        from .gqmso import MetricBlock
        fo, so = free_vars(psi)
        if so or not fo <= {t0}:
            raise ValueError("formula must have at most the free variable %s" % t0)
        if isinstance(psi, MTrue):
            return TRUE
        if isinstance(psi, MNot):
            return Not(self.to_pn(psi.arg, t0))
        if isinstance(psi, MAnd):
            return conj([self.to_pn(a, t0) for a in psi.args])
        if isinstance(psi, MOr):
            return disj([self.to_pn(a, t0) for a in psi.args])
        if isinstance(psi, Q) and psi.x == t0 and isinstance(psi.a, str):
            return Atom(psi.a)
        if isinstance(psi, MetricBlock) and psi.anchor == t0:
            return self._block(psi)
        return self._untimed(psi, t0, [])

    def _witnessed(self, psi, table):
        """Replace maximal nested blocks by witness atoms Q(w, anchor)."""
        from .gqmso import MetricBlock
        if isinstance(psi, MetricBlock):
            # blocks equal up to their anchor share one witness
            key = rename_fo(psi, psi.anchor, "_anchor")
            if key not in self.witness:
                name = "_g%d" % next(self.count)
                self.witness[key] = (name, self.to_pn(key, "_anchor"))
            name, sub = self.witness[key]
            table[name] = sub
            return Q(name, psi.anchor)
        if isinstance(psi, MNot):
            return MNot(self._witnessed(psi.arg, table))
        if isinstance(psi, MAnd):
            return MAnd(tuple(self._witnessed(a, table) for a in psi.args))
        if isinstance(psi, MOr):
            return MOr(tuple(self._witnessed(a, table) for a in psi.args))
        if isinstance(psi, Ex):
            return Ex(psi.x, self._witnessed(psi.body, table))
        if isinstance(psi, ExSO):
            return ExSO(psi.X, self._witnessed(psi.body, table))
        return psi

    def _block(self, b):
        if any(k != "E" for k, _, _ in b.quants):
            raise ValueError("universal metric quantifier left; eliminate it first")
        return self._untimed(b.body, b.anchor, list(b.quants))

    def _untimed(self, body, t0, quants):
        table = {}
        body = self._witnessed(body, table)
        ivs = sorted({iv for _, _, iv in quants})
        marks = []
        for _, v, iv in quants:
            m = Q(iv, v)
            if interval_contains(iv, 0):
                m = mor([m, Eq(v, t0)])
            marks.append(m)
        inner = mand(marks + [body])
        for _, v, _ in reversed(quants):
            inner = Ex(v, inner)
        u = "_u%d" % next(self.count)
        uniq = forall(u, implies(Q(ANCH, u), Eq(u, t0)))
        sentence = Ex(t0, mand([Q(ANCH, t0), uniq, inner]))
        W = sorted(table)
        letters = []
        for sigma in nonempty_letters(self.props):
            for r in range(len(W) + 1):
                for Wp in itertools.combinations(W, r):
                    for J in _mark_sets(ivs) + [frozenset([ANCH])]:
                        letters.append((sigma | frozenset(Wp), J))
        a = mso_to_nfa(sentence, letters, self.cap)
        phi = nfa_to_pnemtl(a, sorted(self.props | set(W)), self.cap, expand=False)
        return substitute(phi, table)


def gqmso_to_pnemtl(psi, var="t", props=None, cap=DEFAULT_STATE_CAP):
    """Formula (inclusive schedule) holding at i iff psi holds with var = i.

    Universal metric quantifiers are eliminated first; every nested block is
    then replaced by a witness proposition and the untimed rest is compiled
    to an automaton over anchored interval words.
    """
    from .gqmso import eliminate_all, is_af
    if not is_af(psi):
        psi = eliminate_all(psi)
    props = set(props or ()) | _gq_props(psi)
    if not props:
        props = {"p"}
    return expand_degenerate(_PnBuilder(props, cap).to_pn(psi, var))
