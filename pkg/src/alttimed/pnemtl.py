"""PnEMTL and MTL: syntax trees, pointed-word semantics, metrics and the
non-adjacency check.

A modality ``Mod`` carries k intervals, k+1 automata and an argument tuple
``args``. Its automata read letters that are frozensets of argument indices
(the exact set of arguments true at a position).

Two segment schedules are supported:

``verbatim``
    F: i0 < i1 < ... < ik < n, segment w covers i_{w-1}+1 .. i_w and the last
    one covers i_k .. n. P mirrors it with i_k > 1.
``inclusive``
    F: i0 < i1 < ... < ik <= n, segment w covers i_{w-1} .. i_w (boundary
    letters shared by neighbouring segments) and the last one i_k .. n.
    P mirrors it with i_k >= 1.

A modality with k = 0 (one automaton reading i0 .. n, or i0 down to 1) is
allowed internally; ``expand_degenerate`` rewrites it into k >= 1 form.
"""
import itertools
from dataclasses import dataclass
from typing import Tuple

from .automata import Nfa, universal_nfa
from .timed_core import INF, Interval, interval_contains

SCHEDULES = ("verbatim", "inclusive")


class Formula:
    """Base class; nodes compare by identity and are treated as immutable."""

    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True, eq=False)
class Atom(Formula):
    name: str


@dataclass(frozen=True, eq=False)
class Top(Formula):
    pass


@dataclass(frozen=True, eq=False)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, eq=False)
class And(Formula):
    args: Tuple[Formula, ...]


@dataclass(frozen=True, eq=False)
class Or(Formula):
    args: Tuple[Formula, ...]


@dataclass(frozen=True, eq=False)
class Mod(Formula):
    kind: str
    intervals: Tuple[Interval, ...]
    automata: Tuple[Nfa, ...]
    args: Tuple[Formula, ...]

    def __post_init__(self):
        if self.kind not in ("F", "P"):
            raise ValueError("modality kind must be F or P")
        if len(self.automata) != len(self.intervals) + 1:
            raise ValueError("a modality with k intervals needs k+1 automata")
        letters = all_letters(len(self.args))
        for a in self.automata:
            if not a.alphabet <= letters:
                raise ValueError("automaton alphabet must be subsets of argument indices")

    @property
    def k(self):
        return len(self.intervals)


@dataclass(frozen=True, eq=False)
class Until(Formula):
    interval: Interval
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Since(Formula):
    interval: Interval
    left: Formula
    right: Formula


TRUE = Top()
FALSE = Not(TRUE)


def all_letters(n):
    return frozenset(frozenset(c) for r in range(n + 1)
                     for c in itertools.combinations(range(n), r))


def conj(items):
    items = [x for x in items if not isinstance(x, Top)]
    if not items:
        return TRUE
    return items[0] if len(items) == 1 else And(tuple(items))


def disj(items):
    items = list(items)
    if not items:
        return FALSE
    return items[0] if len(items) == 1 else Or(tuple(items))


def implies(a, b):
    return Or((Not(a), b))


def F(intervals, automata, args):
    return Mod("F", tuple(intervals), tuple(automata), tuple(args))


def P(intervals, automata, args):
    return Mod("P", tuple(intervals), tuple(automata), tuple(args))


# ---------------------------------------------------------------- semantics

def segment_plan(kind, schedule, i0, cps, n):
    """Position ranges read by each automaton, in reading order.

    Returns a list of k+1 lists of positions, or None when the checkpoint
    tuple is not admissible under the schedule.
    """
    if schedule not in SCHEDULES:
        raise ValueError("unknown schedule %r" % schedule)
    k = len(cps)
    chain = [i0] + list(cps)
    if kind == "F":
        if any(chain[w] >= chain[w + 1] for w in range(k)):
            return None
        if k and (cps[-1] > n or (schedule == "verbatim" and cps[-1] >= n)):
            return None
        segs = []
        for w in range(1, k + 1):
            lo = chain[w - 1] + (1 if schedule == "verbatim" else 0)
            segs.append(list(range(lo, chain[w] + 1)))
        segs.append(list(range(chain[-1], n + 1)))
        return segs
    if any(chain[w] <= chain[w + 1] for w in range(k)):
        return None
    if k and (cps[-1] < 1 or (schedule == "verbatim" and cps[-1] <= 1)):
        return None
    segs = []
    for w in range(1, k + 1):
        hi = chain[w - 1] - (1 if schedule == "verbatim" else 0)
        segs.append(list(range(hi, chain[w] - 1, -1)))
    segs.append(list(range(chain[-1], 0, -1)))
    return segs


class Evaluator:
    """Memoising evaluator for one timed word."""

    def __init__(self, word, schedule="verbatim"):
        if schedule not in SCHEDULES:
            raise ValueError("unknown schedule %r" % schedule)
        self.word = word
        self.schedule = schedule
        self.memo = {}

    def holds(self, phi, i):
        key = (id(phi), i)
        v = self.memo.get(key)
        if v is None:
            v = self._eval(phi, i)
            self.memo[key] = v
            # keep the node alive so its id is not reused during this call
            self.memo[("node", id(phi))] = phi
        return v

    def letter(self, args, p):
        return frozenset(k for k, s in enumerate(args) if self.holds(s, p))

    def _eval(self, phi, i):
        w = self.word
        if isinstance(phi, Atom):
            return phi.name in w.props(i)
        if isinstance(phi, Top):
            return True
        if isinstance(phi, Not):
            return not self.holds(phi.arg, i)
        if isinstance(phi, And):
            return all(self.holds(x, i) for x in phi.args)
        if isinstance(phi, Or):
            return any(self.holds(x, i) for x in phi.args)
        if isinstance(phi, Mod):
            return self._mod(phi, i)
        if isinstance(phi, Until):
            for j in range(i + 1, len(w) + 1):
                if interval_contains(phi.interval, w.ts(j) - w.ts(i)) and self.holds(phi.right, j):
                    return True
                if not self.holds(phi.left, j):
                    return False
            return False
        if isinstance(phi, Since):
            for j in range(i - 1, 0, -1):
                if interval_contains(phi.interval, w.ts(i) - w.ts(j)) and self.holds(phi.right, j):
                    return True
                if not self.holds(phi.left, j):
                    return False
            return False
        raise TypeError("not a formula: %r" % (phi,))

    def _mod(self, phi, i):
        w = self.word
        n = len(w)
        sign = 1 if phi.kind == "F" else -1
        end = n if sign > 0 else 1
        shift = sign if self.schedule == "verbatim" else 0
        cache = {}

        def letter(p):
            if p not in cache:
                cache[p] = self.letter(phi.args, p)
            return cache[p]

        def run(aut, lo, hi):
            # positions lo..hi in reading direction
            return aut.accepts([letter(p) for p in range(lo, hi + sign, sign)])

        def search(prev, k):
            if k == phi.k:
                if k and shift and prev == end:
                    return False
                return run(phi.automata[k], prev, end)
            j = prev + sign
            while 1 <= j <= n:
                d = (w.ts(j) - w.ts(i)) * sign
                if interval_contains(phi.intervals[k], d) and \
                        run(phi.automata[k], prev + shift, j) and search(j, k + 1):
                    return True
                j += sign
            return False

        return search(i, 0)


def eval_pnemtl(phi, word, i, schedule="verbatim"):
    if i not in word.dom():
        raise ValueError("position %r outside the word" % (i,))
    return Evaluator(word, schedule).holds(phi, i)


def eval_mtl(phi, word, i):
    return eval_pnemtl(phi, word, i)


def language_member(phi, word, schedule="verbatim"):
    return len(word) > 0 and eval_pnemtl(phi, word, 1, schedule)


def seg(word, x, y, S, direction="+", schedule="verbatim"):
    """Seg+ (x..y) or Seg- (from y down to x) over the argument list S."""
    ev = Evaluator(word, schedule)
    n = len(word)
    if not (1 <= x <= n and 1 <= y <= n):
        raise ValueError("segment outside the word")
    if direction == "+":
        if x > y:
            raise ValueError("Seg+ needs x <= y")
        rng = range(x, y + 1)
    else:
        if y > x:
            raise ValueError("Seg- needs y <= x")
        rng = range(x, y - 1, -1)
    return [frozenset(S[k] for k in ev.letter(tuple(S), p)) for p in rng]


def brute_mod(phi, word, i, letter_fn, schedule="verbatim"):
    """Reference semantics of one modality by plain tuple enumeration."""
    n = len(word)
    if phi.kind == "F":
        pool = range(i + 1, n + 1)
        tuples = itertools.combinations(pool, phi.k)
    else:
        pool = range(i - 1, 0, -1)
        tuples = itertools.combinations(pool, phi.k)
    for cps in tuples:
        segs = segment_plan(phi.kind, schedule, i, list(cps), n)
        if segs is None:
            continue
        good = True
        for w_idx, j in enumerate(cps):
            d = word.ts(j) - word.ts(i) if phi.kind == "F" else word.ts(i) - word.ts(j)
            if not interval_contains(phi.intervals[w_idx], d):
                good = False
                break
        if good and all(phi.automata[k].accepts([letter_fn(p) for p in s]) for k, s in enumerate(segs)):
            return True
    return False


# ------------------------------------------------------------------ metrics

def subformulas(phi):
    seen = {}
    todo = [phi]
    while todo:
        x = todo.pop()
        if id(x) in seen:
            continue
        seen[id(x)] = x
        todo.extend(children(x))
    return list(seen.values())


def children(phi):
    if isinstance(phi, Not):
        return [phi.arg]
    if isinstance(phi, (And, Or)):
        return list(phi.args)
    if isinstance(phi, Mod):
        return list(phi.args)
    if isinstance(phi, (Until, Since)):
        return [phi.left, phi.right]
    return []


def arity(phi):
    ks = [x.k for x in subformulas(phi) if isinstance(x, Mod)]
    ks += [1 for x in subformulas(phi) if isinstance(x, (Until, Since))]
    return max(ks, default=0)


def modal_depth(phi):
    if isinstance(phi, (Atom, Top)):
        return 0
    if isinstance(phi, Not):
        return modal_depth(phi.arg)
    if isinstance(phi, (And, Or)):
        return max(modal_depth(x) for x in phi.args)
    if isinstance(phi, Mod):
        return 1 + max((modal_depth(x) for x in phi.args), default=0)
    if isinstance(phi, (Until, Since)):
        return 1 + max(modal_depth(phi.left), modal_depth(phi.right))
    raise TypeError(phi)


def props_of(phi):
    return {x.name for x in subformulas(phi) if isinstance(x, Atom)}


def size(phi):
    return len(subformulas(phi))


class NonAdjacencyReport:
    def __init__(self, witnesses=()):
        self.witnesses = list(witnesses)

    @property
    def verdict(self):
        return not self.witnesses

    def __bool__(self):
        return self.verdict

    def __repr__(self):
        if self.verdict:
            return "NonAdjacencyReport(non-adjacent)"
        return "NonAdjacencyReport(adjacent: %s)" % ", ".join(
            "(%s, %s)" % (a, b) for a, b in self.witnesses)


def check_nonadjacent_intervals(intervals):
    """Pairs (I1, I2) of the set with inf(I1) = sup(I2), self-pairs included."""
    ivs = sorted(set(intervals))
    wit = []
    for a in ivs:
        for b in ivs:
            if a.lo != -INF and a.lo == b.hi:
                wit.append((a, b))
    return NonAdjacencyReport(wit)


def modality_interval_sets(phi):
    out = []
    for x in subformulas(phi):
        if isinstance(x, Mod) and x.k:
            out.append(tuple(x.intervals))
        elif isinstance(x, (Until, Since)):
            out.append((x.interval,))
    return out


def check_nonadjacent_pnemtl(phi):
    wit = []
    for ivs in modality_interval_sets(phi):
        wit.extend(check_nonadjacent_intervals(ivs).witnesses)
    return NonAdjacencyReport(wit)


def is_mtl(phi):
    return not any(isinstance(x, Mod) for x in subformulas(phi))


# ------------------------------------------------------- helper constructors

def exact_letter(args, letter):
    """Formula true at a position iff exactly the arguments in ``letter`` hold."""
    parts = []
    for k, s in enumerate(args):
        parts.append(s if k in letter else Not(s))
    return conj(parts)


def letter_formula(props, sigma):
    """Exact proposition set ``sigma`` over the universe ``props``."""
    return conj([Atom(p) if p in sigma else Not(Atom(p)) for p in sorted(props)])


def mtl_to_pnemtl(phi):
    """Rewrite U_I / S_I into one-interval modalities (inclusive schedule)."""
    if isinstance(phi, (Atom, Top)):
        return phi
    if isinstance(phi, Not):
        return Not(mtl_to_pnemtl(phi.arg))
    if isinstance(phi, And):
        return And(tuple(mtl_to_pnemtl(x) for x in phi.args))
    if isinstance(phi, Or):
        return Or(tuple(mtl_to_pnemtl(x) for x in phi.args))
    if isinstance(phi, Mod):
        return Mod(phi.kind, phi.intervals, phi.automata, tuple(mtl_to_pnemtl(x) for x in phi.args))
    if isinstance(phi, (Until, Since)):
        args = (mtl_to_pnemtl(phi.left), mtl_to_pnemtl(phi.right))
        letters = all_letters(2)
        # segment: anchor letter, then left-letters, then a right-letter
        trans = {}
        for c in letters:
            trans[(0, c)] = {1}
            if 0 in c:
                trans[(1, c)] = {1}
            if 1 in c:
                trans.setdefault((1, c), set()).add(2)
        a1 = Nfa(letters, {0, 1, 2}, {0}, {2}, trans)
        a2 = universal_nfa(letters, nonempty=True)
        kind = "F" if isinstance(phi, Until) else "P"
        return Mod(kind, (phi.interval,), (a1, a2), args)
    raise TypeError(phi)


def expand_degenerate(phi, schedule="inclusive"):
    """Replace k = 0 modalities by equivalent k >= 1 formulas.

    Under the inclusive schedule ``M^0(A)`` (the whole segment from the point
    to the word end is in L(A)) equals: the point is the last one and its
    letter is in L(A), or some later checkpoint splits the segment, with the
    shared checkpoint letter read by both halves.
    """
    if schedule != "inclusive":
        raise ValueError("degenerate modalities are only expanded for the inclusive schedule")
    memo = {}

    def go(x):
        if id(x) in memo:
            return memo[id(x)]
        if isinstance(x, (Atom, Top)):
            r = x
        elif isinstance(x, Not):
            r = Not(go(x.arg))
        elif isinstance(x, And):
            r = And(tuple(go(y) for y in x.args))
        elif isinstance(x, Or):
            r = Or(tuple(go(y) for y in x.args))
        elif isinstance(x, (Until, Since)):
            r = type(x)(x.interval, go(x.left), go(x.right))
        elif isinstance(x, Mod):
            args = tuple(go(y) for y in x.args)
            if x.k:
                r = Mod(x.kind, x.intervals, x.automata, args)
            else:
                r = _expand_k0(x.kind, x.automata[0], args)
        else:
            raise TypeError(x)
        memo[id(x)] = r
        return r

    return go(phi)


def _expand_k0(kind, a, args):
    n = len(args)
    letters = all_letters(n)
    nonneg = Interval(0, INF, False, True)
    a = a.trim() if a.finals else a
    single = disj(exact_letter(args, c) for c in sorted(letters, key=sorted) if a.accepts([c]))
    uni = universal_nfa(letters, nonempty=True)
    last = Not(Mod(kind, (nonneg,), (uni, uni), args))
    parts = [conj([last, single])]
    # A split at checkpoint c: first half ends after reading c in state q,
    # second half re-reads c (ignored) and continues from q.
    for q in sorted(a.states, key=repr):
        first = Nfa(a.alphabet | letters, a.states, a.initial, {q}, a.trans)
        skip = ("skip",)
        trans = dict(a.trans)
        for c in letters:
            trans[(skip, c)] = {q}
        second = Nfa(a.alphabet | letters, set(a.states) | {skip}, {skip}, a.finals, trans)
        if not first.trim().finals or not second.trim().finals:
            continue
        parts.append(Mod(kind, (nonneg,), (first, second), args))
    return disj(parts)


def has_degenerate(phi):
    return any(isinstance(x, Mod) and x.k == 0 for x in subformulas(phi))
