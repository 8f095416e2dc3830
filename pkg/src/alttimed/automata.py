"""Untimed automata: NFAs, DNF transition formulas and two-way alternating
finite automata with endmarkers.
"""
import itertools
from collections import deque

LEFT = "|-"
RIGHT = "-|"
ENDMARKERS = (LEFT, RIGHT)
DEFAULT_STATE_CAP = 100000


class ResourceLimit(RuntimeError):
    """A construction exceeded its configured state budget."""


class Dnf:
    """Positive formula in disjunctive normal form.

    Each disjunct is a pair (free, reset) of frozensets of locations; the
    reset part holds targets written ``x.q``. The empty disjunct is TOP and the
    empty disjunction is BOT.
    """

    __slots__ = ("disjuncts",)

    def __init__(self, disjuncts=()):
        ds = set()
        for free, reset in disjuncts:
            ds.add((frozenset(free), frozenset(reset)))
        object.__setattr__(self, "disjuncts", frozenset(ds))

    def __setattr__(self, k, v):
        raise AttributeError("Dnf is immutable")

    @classmethod
    def atom(cls, q, reset=False):
        one, none = frozenset([q]), frozenset()
        return cls([(none, one)]) if reset else cls([(one, none)])

    @classmethod
    def conj(cls, free=(), reset=()):
        return cls([(frozenset(free), frozenset(reset))])

    def is_top(self):
        return ((frozenset(), frozenset())) in self.disjuncts

    def is_bot(self):
        return not self.disjuncts

    def __or__(self, other):
        return Dnf(self.disjuncts | other.disjuncts)

    def __and__(self, other):
        out = []
        for f1, r1 in self.disjuncts:
            for f2, r2 in other.disjuncts:
                out.append((f1 | f2, r1 | r2))
        return Dnf(out)

    def simplified(self):
        """Drop disjuncts subsumed by a smaller one."""
        ds = sorted(self.disjuncts, key=lambda d: len(d[0]) + len(d[1]))
        keep = []
        for f, r in ds:
            if any(f2 <= f and r2 <= r for f2, r2 in keep):
                continue
            keep.append((f, r))
        return Dnf(keep)

    def locations(self):
        out = set()
        for f, r in self.disjuncts:
            out |= f | r
        return out

    def free(self):
        out = set()
        for f, _ in self.disjuncts:
            out |= f
        return out

    def bound(self):
        out = set()
        for _, r in self.disjuncts:
            out |= r
        return out

    def has_resets(self):
        return any(r for _, r in self.disjuncts)

    def rename(self, fn):
        return Dnf([(frozenset(fn(q) for q in f), frozenset(fn(q) for q in r))
                    for f, r in self.disjuncts])

    def dual(self, fn=lambda q: q):
        """Swap conjunction and disjunction (literals renamed with ``fn``).

        The result is converted back to DNF by distribution.
        """
        res = TOP
        for f, r in self.disjuncts:
            clause = Dnf([((fn(q),), ()) for q in f] + [((), (fn(q),)) for q in r])
            res = res & clause
        return res.simplified()

    def __eq__(self, other):
        return isinstance(other, Dnf) and self.disjuncts == other.disjuncts

    def __hash__(self):
        return hash(self.disjuncts)

    def __str__(self):
        if self.is_bot():
            return "BOT"
        parts = []
        for f, r in sorted(self.disjuncts, key=lambda d: (sorted(map(str, d[0])), sorted(map(str, d[1])))):
            lits = sorted(str(q) for q in f) + sorted("x.%s" % q for q in r)
            if not lits:
                parts.append("TOP")
            elif len(lits) == 1:
                parts.append(lits[0])
            else:
                parts.append("(" + " & ".join(lits) + ")")
        return " | ".join(parts)

    def __repr__(self):
        return "Dnf(%s)" % self


TOP = Dnf([((), ())])
BOT = Dnf()


def dnf_or(items):
    out = BOT
    for d in items:
        out = out | d
    return out


def dnf_and(items):
    out = TOP
    for d in items:
        out = out & d
    return out


class Nfa:
    """Nondeterministic finite automaton without epsilon moves.

    ``trans`` maps (state, symbol) to a set of successor states.
    """

    def __init__(self, alphabet, states, initial, finals, trans, check=True):
        self.alphabet = frozenset(alphabet)
        self.states = frozenset(states)
        self.initial = frozenset(initial)
        self.finals = frozenset(finals)
        if not check:
            # internal constructions build well-formed tables already
            self.trans = {k: frozenset(v) for k, v in trans.items() if v}
            return
        t = {}
        for (q, a), qs in trans.items():
            if q not in self.states:
                raise ValueError("transition from undeclared state %r" % (q,))
            if a not in self.alphabet:
                raise ValueError("transition on undeclared symbol %r" % (a,))
            qs = frozenset(qs)
            if not qs <= self.states:
                raise ValueError("transition to undeclared state")
            if qs:
                t[(q, a)] = qs
        self.trans = t
        if not self.initial <= self.states or not self.finals <= self.states:
            raise ValueError("initial/final states must be declared")

    def __repr__(self):
        return "Nfa(%d states, %d symbols)" % (len(self.states), len(self.alphabet))

    def succ(self, q, a):
        return self.trans.get((q, a), frozenset())

    def step(self, qs, a):
        out = set()
        for q in qs:
            out |= self.trans.get((q, a), frozenset())
        return frozenset(out)

    def run(self, word, start=None):
        cur = self.initial if start is None else frozenset(start)
        for a in word:
            if a not in self.alphabet:
                raise ValueError("symbol %r not in alphabet" % (a,))
            cur = self.step(cur, a)
            if not cur:
                break
        return cur

    def accepts(self, word):
        return bool(self.run(word) & self.finals)

    def is_deterministic(self):
        return len(self.initial) <= 1 and all(len(v) <= 1 for v in self.trans.values())

    def language(self, max_len, alphabet=None):
        """All accepted words up to ``max_len`` (as tuples)."""
        syms = sorted(self.alphabet if alphabet is None else alphabet, key=repr)
        out = set()
        frontier = [((), self.initial)]
        for n in range(max_len + 1):
            nxt = []
            for w, qs in frontier:
                if qs & self.finals:
                    out.add(w)
                if n < max_len:
                    for a in syms:
                        q2 = self.step(qs, a)
                        if q2:
                            nxt.append((w + (a,), q2))
            frontier = nxt
        return out

    def trim(self):
        fwd = set(self.initial)
        todo = list(self.initial)
        adj = {}
        for (q, a), qs in self.trans.items():
            adj.setdefault(q, set()).update(qs)
        while todo:
            q = todo.pop()
            for r in adj.get(q, ()):
                if r not in fwd:
                    fwd.add(r)
                    todo.append(r)
        radj = {}
        for q, rs in adj.items():
            for r in rs:
                radj.setdefault(r, set()).add(q)
        bwd = set(self.finals)
        todo = list(self.finals)
        while todo:
            q = todo.pop()
            for r in radj.get(q, ()):
                if r not in bwd:
                    bwd.add(r)
                    todo.append(r)
        keep = fwd & bwd
        trans = {}
        for (q, a), qs in self.trans.items():
            if q in keep:
                s = qs & keep
                if s:
                    trans[(q, a)] = s
        return Nfa(self.alphabet, keep, self.initial & keep, self.finals & keep, trans, check=False)

    def relabel(self):
        """Rename states to consecutive integers."""
        order = sorted(self.states, key=repr)
        m = {q: k for k, q in enumerate(order)}
        trans = {(m[q], a): {m[r] for r in qs} for (q, a), qs in self.trans.items()}
        return Nfa(self.alphabet, range(len(order)), {m[q] for q in self.initial},
                   {m[q] for q in self.finals}, trans)

    def with_alphabet(self, alphabet):
        alphabet = frozenset(alphabet)
        trans = {k: v for k, v in self.trans.items() if k[1] in alphabet}
        return Nfa(alphabet, self.states, self.initial, self.finals, trans)


def nfa_slice(a, q, finals):
    """A[q, F']: same structure, new initial state and final set."""
    finals = frozenset(finals)
    if q not in a.states or not finals <= a.states:
        raise ValueError("undeclared state in slice")
    return Nfa(a.alphabet, a.states, {q}, finals, a.trans)


def determinize(a, cap=DEFAULT_STATE_CAP, alphabet=None):
    syms = sorted(a.alphabet if alphabet is None else alphabet, key=repr)
    start = frozenset(a.initial)
    index = {start: 0}
    todo = deque([start])
    trans = {}
    finals = set()
    while todo:
        s = todo.popleft()
        k = index[s]
        if s & a.finals:
            finals.add(k)
        for c in syms:
            t = a.step(s, c)
            if t not in index:
                if len(index) >= cap:
                    raise ResourceLimit("determinization exceeded %d states" % cap)
                index[t] = len(index)
                todo.append(t)
            trans[(k, c)] = {index[t]}
    return Nfa(frozenset(syms) | a.alphabet, range(len(index)), {0}, finals, trans, check=False)


def minimize(a, cap=DEFAULT_STATE_CAP):
    """Minimal complete DFA (Moore partition refinement)."""
    d = a if a.is_deterministic() and _complete(a) else determinize(a, cap)
    syms = sorted(d.alphabet, key=repr)
    states = sorted(d.states, key=repr)
    succ = {q: tuple(next(iter(d.trans[(q, c)])) for c in syms) for q in states}
    block = {q: int(q in d.finals) for q in states}
    while True:
        sig = {q: (block[q],) + tuple(block[r] for r in succ[q]) for q in states}
        ids = {}
        nb = {}
        for q in states:
            nb[q] = ids.setdefault(sig[q], len(ids))
        if len(ids) == len(set(block.values())):
            block = nb
            break
        block = nb
    trans = {}
    for q in states:
        for c, r in zip(syms, succ[q]):
            trans[(block[q], c)] = {block[r]}
    init = {block[q] for q in d.initial}
    fin = {block[q] for q in d.finals}
    return Nfa(d.alphabet, set(block.values()), init, fin, trans, check=False)


def _complete(a):
    if len(a.initial) != 1:
        return False
    return all((q, c) in a.trans for q in a.states for c in a.alphabet)


def complement(a, cap=DEFAULT_STATE_CAP):
    d = determinize(a, cap)
    return Nfa(d.alphabet, d.states, d.initial, d.states - d.finals, d.trans, check=False)


def product(a, b, mode="and"):
    alphabet = a.alphabet | b.alphabet
    if mode == "or":
        # completion keeps union exact on symbols only one side knows
        a, b = _with_sink(a, alphabet), _with_sink(b, alphabet)
    start = [(p, q) for p in a.initial for q in b.initial]
    seen = set(start)
    todo = list(start)
    trans = {}
    while todo:
        p, q = todo.pop()
        for c in alphabet:
            for p2 in a.succ(p, c):
                for q2 in b.succ(q, c):
                    trans.setdefault(((p, q), c), set()).add((p2, q2))
                    if (p2, q2) not in seen:
                        seen.add((p2, q2))
                        todo.append((p2, q2))
    if mode == "and":
        fin = {(p, q) for p, q in seen if p in a.finals and q in b.finals}
    else:
        fin = {(p, q) for p, q in seen if p in a.finals or q in b.finals}
    return Nfa(alphabet, seen, start, fin, trans, check=False)


def _with_sink(a, alphabet):
    sink = ("sink",)
    while sink in a.states:
        sink = sink + ("'",)
    trans = dict(a.trans)
    for q in list(a.states) + [sink]:
        for c in alphabet:
            if (q, c) not in trans:
                trans[(q, c)] = {sink}
    init = a.initial or {sink}
    return Nfa(alphabet, a.states | {sink}, init, a.finals, trans)


def union(a, b):
    """Disjoint union (keeps nondeterminism, no product blow-up)."""
    ta = {((0, q), c): {(0, r) for r in qs} for (q, c), qs in a.trans.items()}
    ta.update({((1, q), c): {(1, r) for r in qs} for (q, c), qs in b.trans.items()})
    return Nfa(a.alphabet | b.alphabet,
               {(0, q) for q in a.states} | {(1, q) for q in b.states},
               {(0, q) for q in a.initial} | {(1, q) for q in b.initial},
               {(0, q) for q in a.finals} | {(1, q) for q in b.finals}, ta)


def intersection(a, b):
    return product(a, b, "and")


def concat(a, b):
    """L(a) . L(b) by epsilon-free gluing."""
    A = {(0, q) for q in a.states}
    B = {(1, q) for q in b.states}
    trans = {}
    for (q, c), qs in a.trans.items():
        trans.setdefault(((0, q), c), set()).update((0, r) for r in qs)
        if qs & a.finals:
            trans[((0, q), c)].update((1, r) for r in b.initial)
    for (q, c), qs in b.trans.items():
        trans.setdefault(((1, q), c), set()).update((1, r) for r in qs)
    init = {(0, q) for q in a.initial}
    if a.initial & a.finals:
        init |= {(1, q) for q in b.initial}
    return Nfa(a.alphabet | b.alphabet, A | B, init, {(1, q) for q in b.finals}, trans)


def reverse(a):
    trans = {}
    for (q, c), qs in a.trans.items():
        for r in qs:
            trans.setdefault((r, c), set()).add(q)
    return Nfa(a.alphabet, a.states, a.finals, a.initial, trans)


def letters_nfa(alphabet, letters):
    """One-letter language over the given subset of symbols."""
    return Nfa(alphabet, {0, 1}, {0}, {1}, {(0, c): {1} for c in letters})


def epsilon_nfa(alphabet):
    return Nfa(alphabet, {0}, {0}, {0}, {})


def universal_nfa(alphabet, nonempty=False):
    if nonempty:
        return Nfa(alphabet, {0, 1}, {0}, {1},
                   {(q, c): {1} for q in (0, 1) for c in alphabet})
    return Nfa(alphabet, {0}, {0}, {0}, {(0, c): {0} for c in alphabet})


def letter_concat(left, a, right):
    """S . A . S' where S, S' are symbol sets (None means the empty word)."""
    out = a
    if left is not None:
        out = concat(letters_nfa(a.alphabet, left), out)
    if right is not None:
        out = concat(out, letters_nfa(a.alphabet, right))
    return out


def nfa_combine(kind, *args):
    if kind == "union":
        return union(*args)
    if kind == "intersection":
        return intersection(*args)
    if kind == "complement":
        return complement(*args)
    if kind == "concat":
        return concat(*args)
    if kind == "reverse":
        return reverse(*args)
    if kind == "letter-concat-left":
        a, letters = args
        return letter_concat(letters, a, None)
    if kind == "letter-concat-right":
        a, letters = args
        return letter_concat(None, a, letters)
    raise ValueError("unknown combination %r" % kind)


def nfa_from_words(alphabet, words):
    """Trie automaton for a finite set of words."""
    states = {()}
    trans = {}
    for w in words:
        for k in range(len(w)):
            states.add(tuple(w[:k + 1]))
            trans.setdefault((tuple(w[:k]), w[k]), set()).add(tuple(w[:k + 1]))
    return Nfa(alphabet, states, {()}, {tuple(w) for w in words}, trans)


def bounded_equal(a, b, max_len, alphabet=None):
    """First word (shortlex) up to max_len on which the automata differ."""
    syms = sorted(alphabet or (a.alphabet | b.alphabet), key=repr)
    for n in range(max_len + 1):
        for w in itertools.product(syms, repeat=n):
            if a.accepts(w) != b.accepts(w):
                return w
    return None


def horn_fixpoint(rules):
    """Least set of nodes closed under ``rules[n]``: a list of target sets,
    n is derived once every node of one of its sets is derived.

    Returns a dict node -> index of the rule that derived it.
    """
    acc = {}
    waiting = {}
    count = {}
    todo = []
    for n, bodies in rules.items():
        for k, body in enumerate(bodies):
            count[(n, k)] = len(body)
            if not body:
                if n not in acc:
                    acc[n] = k
                    todo.append(n)
            for t in body:
                waiting.setdefault(t, []).append((n, k))
    while todo:
        t = todo.pop()
        for n, k in waiting.get(t, ()):
            count[(n, k)] -= 1
            if count[(n, k)] == 0 and n not in acc:
                acc[n] = k
                todo.append(n)
    return acc


class TwoWayAfa:
    """Two-way alternating finite automaton over ``|- w -|``.

    A state at head h moves to h+1 (forward) or h-1 (backward), reads the
    symbol found there and continues with one disjunct of its formula; all
    locations of the chosen disjunct run from the new head position.
    """

    def __init__(self, alphabet, forward, backward, initial, delta):
        self.alphabet = frozenset(alphabet)
        self.forward = frozenset(forward)
        self.backward = frozenset(backward)
        if self.forward & self.backward:
            raise ValueError("forward and backward states overlap")
        self.initial = initial
        self.delta = {}
        states = self.forward | self.backward
        for (q, c), f in delta.items():
            if q not in states:
                raise ValueError("undeclared state %r" % (q,))
            if c not in self.alphabet and c not in ENDMARKERS:
                raise ValueError("undeclared symbol %r" % (c,))
            if f.has_resets():
                raise ValueError("untimed automata cannot reset a clock")
            if not f.locations() <= states:
                raise ValueError("formula mentions undeclared states")
            if c == LEFT and q in self.backward and f.locations() & self.backward:
                raise ValueError("backward state %r falls off the left end" % (q,))
            if c == RIGHT and q in self.forward and f.locations() & self.forward:
                raise ValueError("forward state %r falls off the right end" % (q,))
            self.delta[(q, c)] = f

    @property
    def states(self):
        return self.forward | self.backward

    def formula(self, q, c):
        return self.delta.get((q, c), BOT)

    def accepts(self, word, start=0):
        return twoway_afa_accepts(self, word, start)


def twoway_afa_accepts(A, word, start=0):
    """Least-fixpoint acceptance from ``(initial, start)`` on ``|- word -|``."""
    if A.initial is True or A.initial == "TOP":
        return True
    if A.initial is False or A.initial == "BOT":
        return False
    tape = (LEFT,) + tuple(word) + (RIGHT,)
    for c in word:
        if c not in A.alphabet:
            raise ValueError("symbol %r not in alphabet" % (c,))
    last = len(tape) - 1

    def moves(node):
        q, h = node
        h2 = h + 1 if q in A.forward else h - 1
        if h2 < 0 or h2 > last:
            return h2, ()
        return h2, A.formula(q, tape[h2]).disjuncts

    start_node = (A.initial, start)
    nodes = {start_node: None}
    todo = [start_node]
    while todo:
        n = todo.pop()
        h2, ds = moves(n)
        nodes[n] = (h2, ds)
        for f, _ in ds:
            for t in f:
                m = (t, h2)
                if m not in nodes:
                    nodes[m] = None
                    todo.append(m)
    acc = horn_fixpoint({n: [frozenset((t, h2) for t in f) for f, _ in ds]
                         for n, (h2, ds) in nodes.items()})
    return start_node in acc


def twoway_afa_to_nfa(A, cap=DEFAULT_STATE_CAP, minimal=True):
    """Equivalent one-way DFA (as an Nfa) for acceptance from head 0.

    Cut the tape between positions p and p+1. Everything left of the cut is
    summarised by two monotone maps of the set X of forward states that
    succeed when reading position p+1: the backward states that succeed when
    reading position p, and whether the initial configuration succeeds. The
    nested least fixpoints (Bekic) make this summary exact, and the summary of
    the next prefix depends only on the previous summary and the next symbol.
    """
    fwd = sorted(A.forward, key=repr)
    bwd = sorted(A.backward, key=repr)
    fi = {q: k for k, q in enumerate(fwd)}
    bi = {q: k for k, q in enumerate(bwd)}
    nf = len(fwd)
    nX = 1 << nf
    syms = sorted(A.alphabet, key=repr)
    order = fwd + bwd

    def encode(c):
        # per state: list of (fwd mask, bwd mask) disjuncts
        out = []
        for q in order:
            ds = []
            for f, _ in A.formula(q, c).disjuncts:
                fm = sum(1 << fi[t] for t in f if t in fi)
                bm = sum(1 << bi[t] for t in f if t in bi)
                ds.append((fm, bm))
            out.append(ds)
        return out

    enc = {c: encode(c) for c in list(syms) + [LEFT, RIGHT]}

    def solve(c, G, X):
        """Least fixpoint at one position; returns (fwd mask, bwd mask)."""
        table = enc[c]
        F = B = 0
        while True:
            gb = G[F] if G is not None else 0
            nF = nB = 0
            for k, ds in enumerate(table):
                for fm, bm in ds:
                    if fm & ~X == 0 and bm & ~gb == 0:
                        if k < nf:
                            nF |= 1 << k
                        else:
                            nB |= 1 << (k - nf)
                        break
            if nF == F and nB == B:
                return F, B
            F, B = nF, nB

    def advance(state, c):
        G, H = state
        newG = []
        newH = []
        for X in range(nX):
            F, B = solve(c, G, X)
            newG.append(B)
            newH.append(H[F])
        return (tuple(newG), tuple(newH))

    init_fwd = A.initial in fi
    H0 = tuple(bool(init_fwd and X >> fi[A.initial] & 1) for X in range(nX))
    G0 = tuple(solve(LEFT, None, X)[1] for X in range(nX))
    start = (G0, H0)
    index = {start: 0}
    todo = deque([start])
    trans = {}
    finals = set()
    while todo:
        s = todo.popleft()
        k = index[s]
        F, _ = solve(RIGHT, s[0], 0)
        if s[1][F]:
            finals.add(k)
        for c in syms:
            t = advance(s, c)
            if t not in index:
                if len(index) >= cap:
                    raise ResourceLimit("two-way conversion exceeded %d states" % cap)
                index[t] = len(index)
                todo.append(t)
            trans[(k, c)] = {index[t]}
    out = Nfa(A.alphabet, range(len(index)), {0}, finals, trans)
    return minimize(out) if minimal else out


def nfa_as_twoway(a):
    """Embed a one-way NFA as a forward-only 2AFA started at head 0."""
    init = ("start",)
    fwd = set(a.states) | {init}
    acc = ("accept",)
    bwd = {acc}
    delta = {}
    for q in a.states:
        for c in a.alphabet:
            qs = a.succ(q, c)
            if qs:
                delta[(q, c)] = Dnf([((r,), ()) for r in qs])
        if q in a.finals:
            delta[(q, RIGHT)] = TOP
    # the head starts on |- so the first move reads position 1
    for c in a.alphabet:
        qs = a.step(a.initial, c)
        if qs:
            delta[(init, c)] = Dnf([((r,), ()) for r in qs])
    if a.initial & a.finals:
        delta[(init, RIGHT)] = TOP
    return TwoWayAfa(a.alphabet, fwd, bwd, init, delta)
