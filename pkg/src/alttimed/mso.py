"""MSO[<] over finite words: syntax, direct evaluation, compilation to NFAs
(tracks for free variables) and the run encoding of an NFA as a formula.

Positions are 1-based. A letter may be a frozenset of propositions, an
interval-word letter ``(props, marks)`` or a plain symbol.
"""
import itertools
from dataclasses import dataclass
from typing import Any, Tuple

from .automata import (DEFAULT_STATE_CAP, Nfa, ResourceLimit, complement, minimize,
                       product, union)

SO_CAP = 8


class Mso:
    def __and__(self, other):
        return MAnd((self, other))

    def __or__(self, other):
        return MOr((self, other))

    def __invert__(self):
        return MNot(self)


@dataclass(frozen=True)
class MTrue(Mso):
    pass


@dataclass(frozen=True)
class Eq(Mso):
    x: str
    y: str


@dataclass(frozen=True)
class Lt(Mso):
    x: str
    y: str


@dataclass(frozen=True)
class Q(Mso):
    """Proposition (or mark) ``a`` holds at ``x``."""
    a: Any
    x: str


@dataclass(frozen=True)
class Sym(Mso):
    """The letter at ``x`` is exactly ``c``."""
    c: Any
    x: str


@dataclass(frozen=True)
class In(Mso):
    X: str
    x: str


@dataclass(frozen=True)
class MNot(Mso):
    arg: Mso


@dataclass(frozen=True)
class MAnd(Mso):
    args: Tuple[Mso, ...]


@dataclass(frozen=True)
class MOr(Mso):
    args: Tuple[Mso, ...]


@dataclass(frozen=True)
class Ex(Mso):
    x: str
    body: Mso


@dataclass(frozen=True)
class ExSO(Mso):
    X: str
    body: Mso


TT = MTrue()
FF = MNot(TT)


def mand(items):
    items = [x for x in items if x != TT]
    if any(x == FF for x in items):
        return FF
    if not items:
        return TT
    return items[0] if len(items) == 1 else MAnd(tuple(items))


def mor(items):
    items = [x for x in items if x != FF]
    if any(x == TT for x in items):
        return TT
    if not items:
        return FF
    return items[0] if len(items) == 1 else MOr(tuple(items))


def mnot(x):
    if isinstance(x, MNot):
        return x.arg
    return MNot(x)


def implies(a, b):
    return mor([mnot(a), b])


def forall(x, body):
    return MNot(Ex(x, mnot(body)))


def forall_so(X, body):
    return MNot(ExSO(X, mnot(body)))


def le(x, y):
    return MOr((Lt(x, y), Eq(x, y)))


def succ(u, v, fresh="_s"):
    """v is the position right after u."""
    return MAnd((Lt(u, v), MNot(Ex(fresh, MAnd((Lt(u, fresh), Lt(fresh, v)))))))


def is_first(x, fresh="_f"):
    return MNot(Ex(fresh, Lt(fresh, x)))


def is_last(x, fresh="_l"):
    return MNot(Ex(fresh, Lt(x, fresh)))


def has(letter, a):
    if isinstance(letter, tuple) and len(letter) == 2 and isinstance(letter[0], frozenset):
        return a in letter[0] or a in letter[1]
    if isinstance(letter, (frozenset, set)):
        return a in letter
    return letter == a


# --------------------------------------------------------------- variables

def free_vars(phi):
    """(first-order, second-order) free variables."""
    return _fv(phi)


def _fv(phi):
    if isinstance(phi, MTrue):
        return frozenset(), frozenset()
    if isinstance(phi, (Eq, Lt)):
        return frozenset([phi.x, phi.y]), frozenset()
    if isinstance(phi, (Q, Sym)):
        return frozenset([phi.x]), frozenset()
    if isinstance(phi, In):
        return frozenset([phi.x]), frozenset([phi.X])
    if isinstance(phi, MNot):
        return _fv(phi.arg)
    if isinstance(phi, (MAnd, MOr)):
        fo, so = frozenset(), frozenset()
        for a in phi.args:
            f, s = _fv(a)
            fo |= f
            so |= s
        return fo, so
    if isinstance(phi, Ex):
        f, s = _fv(phi.body)
        return f - {phi.x}, s
    if isinstance(phi, ExSO):
        f, s = _fv(phi.body)
        return f, s - {phi.X}
    extra = getattr(phi, "free_vars", None)
    if extra is not None:
        return extra()
    raise TypeError("not an MSO formula: %r" % (phi,))


def rename_fo(phi, old, new):
    """Replace free occurrences of the first-order variable ``old``; ``new``
    must not be bound inside phi."""
    def r(v):
        return new if v == old else v
    if isinstance(phi, (MTrue,)):
        return phi
    if isinstance(phi, (Eq, Lt)):
        return type(phi)(r(phi.x), r(phi.y))
    if isinstance(phi, Q):
        return Q(phi.a, r(phi.x))
    if isinstance(phi, Sym):
        return Sym(phi.c, r(phi.x))
    if isinstance(phi, In):
        return In(phi.X, r(phi.x))
    if isinstance(phi, MNot):
        return MNot(rename_fo(phi.arg, old, new))
    if isinstance(phi, (MAnd, MOr)):
        return type(phi)(tuple(rename_fo(a, old, new) for a in phi.args))
    if isinstance(phi, Ex):
        return phi if phi.x == old else Ex(phi.x, rename_fo(phi.body, old, new))
    if isinstance(phi, ExSO):
        return ExSO(phi.X, rename_fo(phi.body, old, new))
    hook = getattr(phi, "rename_fo", None)
    if hook is not None:
        return hook(old, new)
    raise TypeError("not an MSO formula: %r" % (phi,))


def mso_children(phi):
    if isinstance(phi, MNot):
        return [phi.arg]
    if isinstance(phi, (MAnd, MOr)):
        return list(phi.args)
    if isinstance(phi, (Ex, ExSO)):
        return [phi.body]
    kids = getattr(phi, "children", None)
    return kids() if kids else []


# -------------------------------------------------------------- evaluation

class MsoEvaluator:
    """Direct recursive evaluation with memoisation on relevant variables."""

    def __init__(self, letters, so_cap=SO_CAP):
        self.letters = list(letters)
        self.n = len(self.letters)
        self.so_cap = so_cap
        self.memo = {}
        self.fv = {}

    def free(self, phi):
        key = id(phi)
        r = self.fv.get(key)
        if r is None:
            f, s = free_vars(phi)
            r = (tuple(sorted(f)), tuple(sorted(s)), phi)
            self.fv[key] = r
        return r[0], r[1]

    def letter(self, p):
        return self.letters[p - 1]

    def holds(self, phi, env):
        fo, so = self.free(phi)
        try:
            key = (id(phi), tuple(env[v] for v in fo), tuple(env[v] for v in so))
        except KeyError as e:
            raise ValueError("unassigned variable %s" % e)
        r = self.memo.get(key)
        if r is None:
            r = self._eval(phi, env)
            self.memo[key] = r
        return r

    def _eval(self, phi, env):
        if isinstance(phi, MTrue):
            return True
        if isinstance(phi, Eq):
            return env[phi.x] == env[phi.y]
        if isinstance(phi, Lt):
            return env[phi.x] < env[phi.y]
        if isinstance(phi, Q):
            return has(self.letter(env[phi.x]), phi.a)
        if isinstance(phi, Sym):
            return self.letter(env[phi.x]) == phi.c
        if isinstance(phi, In):
            return env[phi.x] in env[phi.X]
        if isinstance(phi, MNot):
            return not self.holds(phi.arg, env)
        if isinstance(phi, MAnd):
            return all(self.holds(a, env) for a in phi.args)
        if isinstance(phi, MOr):
            return any(self.holds(a, env) for a in phi.args)
        if isinstance(phi, Ex):
            env2 = dict(env)
            for p in range(1, self.n + 1):
                env2[phi.x] = p
                if self.holds(phi.body, env2):
                    return True
            return False
        if isinstance(phi, ExSO):
            if self.n > self.so_cap:
                raise ResourceLimit("second-order quantifier over a word longer than %d"
                                    % self.so_cap)
            env2 = dict(env)
            dom = range(1, self.n + 1)
            for r in range(self.n + 1):
                for sub in itertools.combinations(dom, r):
                    env2[phi.X] = frozenset(sub)
                    if self.holds(phi.body, env2):
                        return True
            return False
        return self.extra(phi, env)

    def extra(self, phi, env):
        raise TypeError("not an MSO formula: %r" % (phi,))


def eval_mso(phi, word, assignment=None, so_cap=SO_CAP):
    """Evaluate on a sequence of letters (1-based positions in the assignment)."""
    env = dict(assignment or {})
    for v, p in env.items():
        ps = p if isinstance(p, (set, frozenset)) else [p]
        for x in ps:
            if not 1 <= x <= len(word):
                raise ValueError("variable %s assigned outside the word" % v)
    return MsoEvaluator(word, so_cap).holds(phi, env)


# ---------------------------------------------------------------- compiler

def _subsets(vs):
    vs = sorted(vs)
    return [frozenset(c) for r in range(len(vs) + 1) for c in itertools.combinations(vs, r)]


class _Compiler:
    def __init__(self, letters, cap):
        self.letters = list(letters)
        self.cap = cap
        self.memo = {}

    def alphabet(self, fv):
        return [(c, S) for c in self.letters for S in _subsets(fv)]

    def exists_pos(self, fv, pred):
        syms = self.alphabet(fv)
        trans = {}
        for s in syms:
            trans[(0, s)] = {0} | ({1} if pred(*s) else set())
            trans[(1, s)] = {1}
        return Nfa(syms, {0, 1}, {0}, {1}, trans, check=False)

    def lift(self, a, fv_from, fv_to):
        if fv_from == fv_to:
            return a
        fv_from = frozenset(fv_from)
        syms = self.alphabet(fv_to)
        trans = {}
        for q in a.states:
            for c, S in syms:
                t = a.succ(q, (c, S & fv_from))
                if t:
                    trans[(q, (c, S))] = t
        return Nfa(syms, a.states, a.initial, a.finals, trans, check=False)

    def project(self, a, fv, var):
        fv2 = tuple(v for v in fv if v != var)
        syms = self.alphabet(fv2)
        trans = {}
        for (q, (c, S)), t in a.trans.items():
            trans.setdefault((q, (c, S - {var})), set()).update(t)
        return fv2, Nfa(syms, a.states, a.initial, a.finals, trans, check=False)

    def singleton(self, fv, x):
        syms = self.alphabet(fv)
        trans = {}
        for s in syms:
            if x in s[1]:
                trans[(0, s)] = {1}
            else:
                trans[(0, s)] = {0}
                trans[(1, s)] = {1}
        return Nfa(syms, {0, 1}, {0}, {1}, trans, check=False)

    def small(self, a):
        a = a.trim()
        if not a.finals:
            return Nfa(a.alphabet, {0}, {0}, set(), {})
        return minimize(a, self.cap)

    def compile(self, phi):
        key = phi
        if key in self.memo:
            return self.memo[key]
        r = self._compile(phi)
        self.memo[key] = r
        return r

    def _compile(self, phi):
        if isinstance(phi, MTrue):
            fv = ()
            syms = self.alphabet(fv)
            return fv, Nfa(syms, {0}, {0}, {0}, {(0, s): {0} for s in syms})
        if isinstance(phi, Eq):
            fv = tuple(sorted({phi.x, phi.y}))
            return fv, self.exists_pos(fv, lambda c, S: phi.x in S and phi.y in S)
        if isinstance(phi, Lt):
            fv = tuple(sorted({phi.x, phi.y}))
            if phi.x == phi.y:
                syms = self.alphabet(fv)
                return fv, Nfa(syms, {0}, {0}, set(), {})
            syms = self.alphabet(fv)
            trans = {}
            for s in syms:
                S = s[1]
                trans[(0, s)] = {0} | ({1} if phi.x in S and phi.y not in S else set())
                trans[(1, s)] = {1} | ({2} if phi.y in S else set())
                trans[(2, s)] = {2}
            return fv, Nfa(syms, {0, 1, 2}, {0}, {2}, trans)
        if isinstance(phi, Q):
            fv = (phi.x,)
            return fv, self.exists_pos(fv, lambda c, S: phi.x in S and has(c, phi.a))
        if isinstance(phi, Sym):
            fv = (phi.x,)
            return fv, self.exists_pos(fv, lambda c, S: phi.x in S and c == phi.c)
        if isinstance(phi, In):
            fv = tuple(sorted({phi.x, phi.X}))
            return fv, self.exists_pos(fv, lambda c, S: phi.x in S and phi.X in S)
        if isinstance(phi, MNot):
            fv, a = self.compile(phi.arg)
            return fv, self.small(complement(a, self.cap))
        if isinstance(phi, (MAnd, MOr)):
            parts = [self.compile(x) for x in phi.args]
            fv = tuple(sorted(set().union(*(set(f) for f, _ in parts))))
            acc = None
            for f, a in parts:
                a = self.lift(a, f, fv)
                if acc is None:
                    acc = a
                elif isinstance(phi, MAnd):
                    acc = self.small(product(acc, a, "and"))
                else:
                    acc = self.small(union(acc, a))
            return fv, acc
        if isinstance(phi, (Ex, ExSO)):
            var = phi.x if isinstance(phi, Ex) else phi.X
            fv, a = self.compile(phi.body)
            fv2 = tuple(sorted(set(fv) | {var}))
            a = self.lift(a, fv, fv2)
            if isinstance(phi, Ex):
                a = product(a, self.singleton(fv2, var), "and")
            fv3, b = self.project(a, fv2, var)
            return fv3, self.small(b)
        raise TypeError("cannot compile %r" % (phi,))


def mso_to_nfa(phi, letters, cap=DEFAULT_STATE_CAP, tracks=None):
    """Compile an MSO formula to an automaton.

    For a sentence the result reads plain letters. With free variables the
    symbols are pairs (letter, set of variables at that position); first-order
    variables are constrained to occur exactly once. ``tracks`` may list extra
    variables to include in the symbols.
    """
    letters = list(letters)
    rep = _letter_classes(phi, letters)
    comp = _Compiler(sorted(set(rep.values()), key=letters.index), cap)
    fv, a = comp.compile(phi)
    fo, so = free_vars(phi)
    want = tuple(sorted(set(fv) | set(tracks or ())))
    a = comp.lift(a, fv, want)
    for x in sorted(fo):
        a = product(a, comp.singleton(want, x), "and")
    a = comp.small(a)
    # expand representatives back to every letter of their class
    if want:
        syms = [(c, S) for c in letters for S in _subsets(want)]
        trans = {(q, (c, S)): a.succ(q, (rep[c], S)) for q in a.states for c, S in syms}
    else:
        syms = letters
        trans = {(q, c): a.succ(q, (rep[c], frozenset())) for q in a.states for c in letters}
    return Nfa(syms, a.states, a.initial, a.finals, trans, check=False)


def _letter_classes(phi, letters):
    """Map each letter to a representative letter satisfying the same atoms
    of phi."""
    qs, cs = set(), set()
    stack = [phi]
    while stack:
        x = stack.pop()
        if isinstance(x, Q):
            qs.add(x.a)
        elif isinstance(x, Sym):
            cs.add(x.c)
        stack.extend(mso_children(x))
    qs = sorted(qs, key=repr)
    cs = sorted(cs, key=repr)
    first = {}
    rep = {}
    for c in letters:
        sig = (tuple(has(c, a) for a in qs), tuple(c == d for d in cs))
        rep[c] = first.setdefault(sig, c)
    return rep


# --------------------------------------------------------- NFA as formula

_counter = itertools.count()


def nfa_to_mso(a, i, j, letter_pred=None, direction="+", prefix=None, bits=None):
    """Formula with free variables i, j saying: the letters from i to j
    (inclusive; i <= j for "+", i >= j for "-" read downwards) are accepted.

    States are encoded in binary over ceil(log2 |Q|) set variables; the state
    after reading a position is the code of that position.
    ``letter_pred(c, x)`` gives the formula "the letter at x is c" (default
    ``Sym``).
    """
    a = a.trim()
    if letter_pred is None:
        letter_pred = Sym
    if prefix is None:
        prefix = "_R%d_" % next(_counter)
    if not a.finals or not a.initial:
        return MAnd((Eq(i, i), Eq(j, j), FF))
    states = sorted(a.states, key=repr)
    nb = max(1, (len(states) - 1).bit_length())
    code = {q: k for k, q in enumerate(states)}
    Xs = ["%sX%d" % (prefix, b) for b in range(nb)]
    u, v = prefix + "u", prefix + "v"
    syms = sorted(a.alphabet, key=repr)

    def is_state(q, x):
        k = code[q]
        return mand([In(Xs[b], x) if k >> b & 1 else MNot(In(Xs[b], x)) for b in range(nb)])

    def in_range(x):
        if direction == "+":
            return mand([le(i, x), le(x, j)])
        return mand([le(j, x), le(x, i)])

    def nxt(x, y):
        return succ(x, y, prefix + "s") if direction == "+" else succ(y, x, prefix + "s")

    first = mor([mand([letter_pred(c, i), is_state(q, i)])
                 for c in syms for q in states if a.step(a.initial, c) and q in a.step(a.initial, c)])
    steps = []
    for p in states:
        for c in syms:
            for q in sorted(a.succ(p, c), key=repr):
                steps.append(mand([is_state(p, u), letter_pred(c, v), is_state(q, v)]))
    step = forall(u, forall(v, implies(mand([in_range(u), in_range(v), nxt(u, v)]),
                                       mor(steps))))
    final = mor([is_state(q, j) for q in states if q in a.finals])
    # codes outside the state range are excluded implicitly by the step rule
    body = mand([first, step, final])
    for X in reversed(Xs):
        body = ExSO(X, body)
    order = le(i, j) if direction == "+" else le(j, i)
    return mand([order, body])
