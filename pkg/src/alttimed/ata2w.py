"""Two-way one-clock alternating timed automata.

Transitions are stored as ``delta[(loc, symbol)] = [(guard, Dnf), ...]``.
Symbols are proposition sets (frozensets) or the endmarkers LEFT / RIGHT.
A guard is an Interval; FULL stands for an unguarded transition.
"""
import itertools
from collections import defaultdict

from .automata import BOT, ENDMARKERS, LEFT, RIGHT, TOP, Dnf, dnf_or, horn_fixpoint
from .pnemtl import NonAdjacencyReport, check_nonadjacent_intervals
from .timed_core import INF, Interval, interval_contains

FULL = Interval(-INF, INF)
ACCEPT = "TOP"
REJECT = "BOT"

# clock-invariant bookkeeping, read by the acceptance suite
PROP1 = {"checked": 0, "violations": 0, "runs": 0}


def nonempty_letters(props):
    props = sorted(props)
    return [frozenset(c) for r in range(1, len(props) + 1)
            for c in itertools.combinations(props, r)]


class Ata:
    def __init__(self, props, forward, backward, initial, delta):
        self.props = frozenset(props)
        self.forward = frozenset(forward)
        self.backward = frozenset(backward)
        if self.forward & self.backward:
            raise ValueError("forward and backward locations overlap")
        locs = self.forward | self.backward
        if initial not in locs and initial not in (ACCEPT, REJECT):
            raise ValueError("initial location %r undeclared" % (initial,))
        self.initial = initial
        d = {}
        for (q, c), items in delta.items():
            if q not in locs:
                raise ValueError("transition from undeclared location %r" % (q,))
            if c not in ENDMARKERS:
                c = frozenset(c)
                if not c or not c <= self.props:
                    raise ValueError("bad symbol %r" % (c,))
            out = []
            for g, f in items:
                if not isinstance(g, Interval):
                    raise ValueError("guard must be an Interval")
                if not f.locations() <= locs:
                    raise ValueError("formula mentions undeclared locations: %s" % f)
                if c == LEFT and q in self.backward and f.free() & self.backward:
                    raise ValueError("backward location %r falls off the left end" % (q,))
                if c == RIGHT and q in self.forward and f.free() & self.forward:
                    raise ValueError("forward location %r falls off the right end" % (q,))
                if c == LEFT and q in self.backward and f.bound() & self.backward:
                    raise ValueError("backward location %r falls off the left end" % (q,))
                if c == RIGHT and q in self.forward and f.bound() & self.forward:
                    raise ValueError("forward location %r falls off the right end" % (q,))
                if not f.is_bot():
                    out.append((g, f))
            if out:
                d[(q, c)] = out
        self.delta = d

    @property
    def locations(self):
        return self.forward | self.backward

    def symbols(self):
        return nonempty_letters(self.props) + [LEFT, RIGHT]

    def guards(self):
        return {g for items in self.delta.values() for g, _ in items}

    def has_resets(self):
        return any(f.has_resets() for items in self.delta.values() for _, f in items)

    def is_forward(self, q):
        return q in self.forward

    def __repr__(self):
        return "Ata(%d locations, init=%r)" % (len(self.locations), self.initial)


def delta_tr(A, q, a, mu):
    """Disjunction of the formulas whose guard admits ``mu``."""
    out = BOT
    for g, f in A.delta.get((q, a), ()):
        if interval_contains(g, mu):
            out = out | f
    return out


class _Tape:
    def __init__(self, word):
        self.word = word
        self.m = len(word)

    def sym(self, h):
        if h == 0:
            return LEFT
        if h == self.m + 1:
            return RIGHT
        return self.word.props(h)

    def tau(self, h):
        if h == 0:
            return 0
        if h == self.m + 1:
            return self.word.ts(self.m) if self.m else 0
        return self.word.ts(h)


def succ(A, word, state):
    """Successor configurations of one state (a list of frozensets).

    ACCEPT / REJECT map to themselves; a move off the tape yields REJECT.
    """
    if state in (ACCEPT, REJECT):
        return [frozenset([state])]
    q, mu, h = state
    tape = _Tape(word)
    h2 = h + 1 if A.is_forward(q) else h - 1
    if h2 < 0 or h2 > tape.m + 1:
        return [frozenset([REJECT])]
    mu2 = mu + tape.tau(h2) - tape.tau(h)
    f = delta_tr(A, q, tape.sym(h2), mu2)
    if f.is_bot():
        return [frozenset([REJECT])]
    out = []
    for free, reset in f.disjuncts:
        conf = {(t, mu2, h2) for t in free} | {(t, 0, h2) for t in reset}
        out.append(frozenset(conf) if conf else frozenset([ACCEPT]))
    return out


def _run_fixpoint(A, word, i, q0, mu0, verify):
    from fractions import Fraction
    tape = _Tape(word)
    last = tape.m + 1
    start = (q0, Fraction(mu0), i)
    check = verify and not A.has_resets() and mu0 == 0
    if check:
        PROP1["runs"] += 1
    base = tape.tau(i)
    nodes = {}
    todo = [start]
    nodes[start] = None
    while todo:
        n = todo.pop()
        q, mu, h = n
        if check:
            PROP1["checked"] += 1
            if mu != tape.tau(h) - base:
                PROP1["violations"] += 1
                raise AssertionError("reachability invariant broken at %r" % (n,))
        h2 = h + 1 if q in A.forward else h - 1
        if h2 < 0 or h2 > last:
            nodes[n] = (h2, mu, ())
            continue
        mu2 = mu + tape.tau(h2) - tape.tau(h)
        ds = tuple(delta_tr(A, q, tape.sym(h2), mu2).disjuncts)
        nodes[n] = (h2, mu2, ds)
        for free, reset in ds:
            for t in free:
                m2 = (t, mu2, h2)
                if m2 not in nodes:
                    nodes[m2] = None
                    todo.append(m2)
            for t in reset:
                m2 = (t, Fraction(0), h2)
                if m2 not in nodes:
                    nodes[m2] = None
                    todo.append(m2)
    rules = {}
    for n, (h2, mu2, ds) in nodes.items():
        rules[n] = [frozenset((t, mu2, h2) for t in free) | frozenset((t, 0, h2) for t in reset)
                    for free, reset in ds]
    won = horn_fixpoint(rules)
    acc = {n: nodes[n][2][k] for n, k in won.items()}
    return start, acc, nodes


def accepts(A, word, i=0, q0=None, mu0=0, verify=True):
    """Does (q0, mu0, i) eventually accept on ``word`` (least fixpoint)?

    With ``verify`` the clock invariant of reset-free runs is asserted on
    every reachable state.
    """
    q0 = A.initial if q0 is None else q0
    if q0 == ACCEPT:
        return True
    if q0 == REJECT:
        return False
    if not 0 <= i <= len(word) + 1:
        raise ValueError("start position outside the tape")
    start, acc, _ = _run_fixpoint(A, word, i, q0, mu0, verify)
    return start in acc


def accepts_pointed(A, word, i):
    return accepts(A, word, i)


def accepting_tree(A, word, i=0):
    """Accepting run tree as nested (state, children) pairs, or None."""
    q0 = A.initial
    if q0 in (ACCEPT, REJECT):
        return (q0, []) if q0 == ACCEPT else None
    start, acc, nodes = _run_fixpoint(A, word, i, q0, 0, False)
    if start not in acc:
        return None

    def build(n):
        free, reset = acc[n]
        h2, mu2, _ = nodes[n]
        kids = [(t, mu2, h2) for t in sorted(free, key=repr)] + \
               [(t, 0, h2) for t in sorted(reset, key=repr)]
        return (n, [build(k) for k in kids])

    return build(start)


def format_tree(tree, indent=0):
    if tree is None:
        return "no accepting run"
    (n, kids) = tree
    if isinstance(n, tuple):
        q, mu, h = n
        line = "%s(%s, %s, %d)" % ("  " * indent, q, mu, h)
    else:
        line = "  " * indent + str(n)
    if not kids:
        line += " -> TOP"
    return "\n".join([line] + [format_tree(k, indent + 1) for k in kids])


# ----------------------------------------------------------------- structure

def rename(A, fn):
    delta = {}
    for (q, c), items in A.delta.items():
        delta[(fn(q), c)] = [(g, f.rename(fn)) for g, f in items]
    init = A.initial if A.initial in (ACCEPT, REJECT) else fn(A.initial)
    return Ata(A.props, {fn(q) for q in A.forward}, {fn(q) for q in A.backward}, init, delta)


def free_edges(A):
    out = defaultdict(set)
    for (q, c), items in A.delta.items():
        for _, f in items:
            out[q] |= f.free()
    return out


def reset_edges(A):
    out = defaultdict(set)
    for (q, c), items in A.delta.items():
        for _, f in items:
            out[q] |= f.bound()
    return out


class IslandDecomposition:
    def __init__(self, islands, headers, reset_dag, normal, problems):
        self.islands = islands          # header -> frozenset of locations
        self.headers = headers          # list of headers
        self.reset_dag = reset_dag      # header -> set of headers
        self.normal = normal
        self.problems = problems

    def island_of(self, q):
        for h, locs in self.islands.items():
            if q in locs:
                return h
        return None

    def __repr__(self):
        return "IslandDecomposition(%s)" % ", ".join(
            "%s:{%s}" % (h, ",".join(sorted(map(str, s)))) for h, s in self.islands.items())


def _free_closure(A, h, fe):
    seen = {h}
    todo = [h]
    while todo:
        q = todo.pop()
        for t in fe.get(q, ()):
            if t not in seen:
                seen.add(t)
                todo.append(t)
    return seen


def islands(A):
    fe, re_ = free_edges(A), reset_edges(A)
    headers = []
    if A.initial not in (ACCEPT, REJECT):
        headers.append(A.initial)
    for q in sorted(A.locations, key=repr):
        for t in sorted(re_.get(q, ()), key=repr):
            if t not in headers:
                headers.append(t)
    isl = {}
    owner = {}
    problems = []
    for h in headers:
        cl = _free_closure(A, h, fe)
        isl[h] = frozenset(cl)
        for q in cl:
            if q in owner and owner[q] != h:
                problems.append("location %s shared by islands of %s and %s" % (q, owner[q], h))
            owner.setdefault(q, h)
    for q in A.locations:
        for t in fe.get(q, ()):
            if t in isl:
                problems.append("free transition %s -> header %s" % (q, t))
    dag = {h: set() for h in headers}
    for h, locs in isl.items():
        for q in locs:
            for t in re_.get(q, ()):
                dag[h].add(t)
    return IslandDecomposition(isl, headers, dag, not problems, sorted(set(problems)))


def is_island_normal(A):
    return islands(A).normal


def to_island_normal_form(A):
    """Equivalent automaton whose islands are disjoint and headers are
    entered only through resets (or as the initial location)."""
    if is_island_normal(A):
        return A
    fe = free_edges(A)
    re_ = reset_edges(A)
    headers = []
    if A.initial not in (ACCEPT, REJECT):
        headers.append(A.initial)
    for q in sorted(A.locations, key=repr):
        for t in sorted(re_.get(q, ()), key=repr):
            if t not in headers:
                headers.append(t)
    fwd, bwd, delta = set(), set(), {}

    def hdr(h):
        return (h, "hdr")

    def inner(h, q):
        return (h, q)

    for h in headers:
        cl = _free_closure(A, h, fe)
        copies = [(hdr(h), h)] + [(inner(h, q), q) for q in sorted(cl, key=repr)
                                  if q != h or _reenters(A, h, fe)]
        for new, q in copies:
            (fwd if q in A.forward else bwd).add(new)
            for c in A.symbols():
                items = A.delta.get((q, c))
                if not items:
                    continue
                delta[(new, c)] = [(g, Dnf([(frozenset(inner(h, t) for t in fr),
                                             frozenset(hdr(t) for t in rs))
                                            for fr, rs in f.disjuncts]))
                                   for g, f in items]
    init = A.initial if A.initial in (ACCEPT, REJECT) else hdr(A.initial)
    return Ata(A.props, fwd, bwd, init, delta)


def _reenters(A, h, fe):
    return any(h in fe.get(q, ()) for q in _free_closure(A, h, fe))


def is_rfl(A):
    """No cycle of the transition graph goes through a reset; checked on the
    island normal form."""
    return _acyclic(islands(to_island_normal_form(A)).reset_dag)


def _acyclic(dag):
    state = {}

    def visit(h):
        state[h] = 1
        for t in dag.get(h, ()):
            s = state.get(t)
            if s == 1:
                return False
            if s is None and not visit(t):
                return False
        state[h] = 2
        return True

    return all(state.get(h) == 2 or visit(h) for h in list(dag))


def reset_cycles(A):
    """Cycles of the island reset graph (on the island normal form), each as
    a list of island heads; empty iff the automaton is rfl."""
    import networkx as nx
    dag = islands(to_island_normal_form(A)).reset_dag
    g = nx.DiGraph()
    for h, ts in dag.items():
        for t in ts:
            g.add_edge(h, t)
    return [list(c) for c in nx.simple_cycles(g)]


def reset_depth(A):
    A = to_island_normal_form(A)
    dec = islands(A)
    if not _acyclic(dec.reset_dag):
        raise ValueError("automaton is not rfl")
    memo = {}

    def depth(h):
        if h not in memo:
            memo[h] = max((1 + depth(t) for t in dec.reset_dag.get(h, ())), default=0)
        return memo[h]

    if A.initial in (ACCEPT, REJECT):
        return 0
    return depth(A.initial)


def check_nonadjacent_ata(A):
    """Per-island non-adjacency of the guard intervals."""
    dec = islands(A)
    wit = []
    per = {}
    for h, locs in dec.islands.items():
        ivs = {g for q in locs for c in A.symbols() for g, _ in A.delta.get((q, c), ())
               if g != FULL}
        rep = check_nonadjacent_intervals(ivs)
        per[h] = rep
        wit.extend(rep.witnesses)
    report = NonAdjacencyReport(wit)
    report.per_island = per
    return report


def island_intervals(A):
    dec = islands(A)
    return {h: {g for q in locs for c in A.symbols() for g, _ in A.delta.get((q, c), ())
                if g != FULL}
            for h, locs in dec.islands.items()}


# ------------------------------------------------------------ boolean closure

def _complement_pieces(g):
    """Maximal intervals covering the reals minus g."""
    out = []
    if g.lo != -INF:
        out.append(Interval(-INF, g.lo, True, not g.lo_open))
    if g.hi != INF:
        out.append(Interval(g.hi, INF, not g.hi_open, True))
    return out


def _meet_all(groups):
    """Intersections choosing one piece from each group (nonempty only)."""
    from .timed_core import interval_intersect
    acc = [FULL]
    for pieces in groups:
        nxt = []
        for a in acc:
            for p in pieces:
                r = interval_intersect([a, p])
                if r is not None:
                    nxt.append(r)
        acc = nxt
    return acc


def complement(A):
    """Dual automaton: conjunction and disjunction swapped.

    For a location and symbol with guarded formulas f_g, the dual must be the
    conjunction of dual(f_g) over the guards that hold. For every subset H of
    guards we emit dual(f_H) guarded by "no guard outside H holds"; those
    guards are built from the complements of the original guards, whose
    endpoints are the original endpoints with inf and sup swapped, so a
    non-adjacent island stays non-adjacent.

    Exact when every run tree is finite (see ``runs_are_finite``) and the
    initial location does not fall off the tape on its first move: falling
    off rejects in both automata.
    """
    if A.initial == ACCEPT:
        return Ata(A.props, A.forward, A.backward, REJECT, {})
    if A.initial == REJECT:
        return Ata(A.props, A.forward, A.backward, ACCEPT, {})
    delta = {}
    for q in A.locations:
        for c in A.symbols():
            items = A.delta.get((q, c), [])
            merged = {}
            for g, f in items:
                merged[g] = merged.get(g, BOT) | f
            guards = sorted(merged)
            rows = []
            for r in range(len(guards) + 1):
                for H in itertools.combinations(guards, r):
                    out = [g for g in guards if g not in H]
                    if any(g == FULL for g in out):
                        continue
                    body = TOP
                    for g in H:
                        body = body & merged[g].dual()
                    if body.is_bot():
                        continue
                    for piece in _meet_all([_complement_pieces(g) for g in out]):
                        rows.append((piece, body))
            if rows:
                delta[(q, c)] = rows
    return Ata(A.props, A.forward, A.backward, A.initial, delta)


def runs_are_finite(A):
    """Sufficient check: every strongly connected part of the location graph
    moves in one direction only."""
    import networkx as nx
    g = nx.DiGraph()
    g.add_nodes_from(A.locations)
    for q, ts in free_edges(A).items():
        for t in ts:
            g.add_edge(q, t)
    for q, ts in reset_edges(A).items():
        for t in ts:
            g.add_edge(q, t)
    for comp in nx.strongly_connected_components(g):
        if len(comp) == 1:
            (q,) = comp
            if not g.has_edge(q, q):
                continue
        if comp & A.forward and comp & A.backward:
            return False
    return True


def _disjoint_pair(A, B):
    A2 = rename(A, lambda q: ("L", q))
    B2 = rename(B, lambda q: ("R", q))
    return A2, B2


def boolean_combine(kind, *args):
    if kind == "complement":
        (A,) = args
        return complement(A)
    if kind not in ("union", "intersection"):
        raise ValueError("unknown combination %r" % kind)
    if len(args) == 1:
        return args[0]
    A, B = args[0], args[1]
    rest = args[2:]
    out = _binary(kind, A, B)
    for C in rest:
        out = _binary(kind, out, C)
    return out


def _binary(kind, A, B):
    if A.props != B.props:
        props = A.props | B.props
        A = Ata(props, A.forward, A.backward, A.initial, A.delta)
        B = Ata(props, B.forward, B.backward, B.initial, B.delta)
    A2, B2 = _disjoint_pair(A, B)
    return dispatch(kind, [A2, B2])


def dispatch(kind, parts):
    """Fresh two-step prelude that returns to the start head with clock 0
    and then resets into the initial locations of ``parts``."""
    props = frozenset().union(*(p.props for p in parts))
    fwd = set().union(*(p.forward for p in parts))
    bwd = set().union(*(p.backward for p in parts))
    delta = {}
    for p in parts:
        delta.update(p.delta)
    u, u2 = ("u", kind, len(fwd)), ("u'", kind, len(bwd))
    while u in fwd | bwd:
        u = u + ("'",)
    while u2 in fwd | bwd:
        u2 = u2 + ("'",)
    fwd.add(u)
    bwd.add(u2)
    letters = nonempty_letters(props)
    for c in letters + [RIGHT]:
        delta[(u, c)] = [(FULL, Dnf.atom(u2))]

    def combine(inits):
        lits = []
        for q in inits:
            if q == ACCEPT:
                lits.append(TOP)
            elif q == REJECT:
                lits.append(BOT)
            else:
                lits.append(Dnf.atom(q, reset=True))
        if kind == "union":
            return dnf_or(lits)
        out = TOP
        for d in lits:
            out = out & d
        return out

    inits = [p.initial for p in parts]
    body = combine(inits)
    for c in letters:
        if not body.is_bot():
            delta[(u2, c)] = [(FULL, body)]
    # on the left endmarker a backward initial location would fall off
    left_inits = [q if q in (ACCEPT, REJECT) or q not in bwd else REJECT for q in inits]
    lbody = combine(left_inits)
    if not lbody.is_bot():
        delta[(u2, LEFT)] = [(FULL, lbody)]
    return Ata(props, fwd, bwd, u, delta)


def with_props(A, props):
    return Ata(frozenset(props) | A.props, A.forward, A.backward, A.initial, A.delta)


def trim(A):
    """Drop locations unreachable from the initial location."""
    if A.initial in (ACCEPT, REJECT):
        return Ata(A.props, (), (), A.initial, {})
    seen = {A.initial}
    todo = [A.initial]
    while todo:
        q = todo.pop()
        for c in A.symbols():
            for _, f in A.delta.get((q, c), ()):
                for t in f.locations():
                    if t not in seen:
                        seen.add(t)
                        todo.append(t)
    delta = {k: v for k, v in A.delta.items() if k[0] in seen}
    return Ata(A.props, A.forward & seen, A.backward & seen, A.initial, delta)


def size(A):
    return len(A.locations), sum(len(v) for v in A.delta.values())


ORIGIN = "origin"


def from_origin(A):
    """Automaton whose acceptance pointed at position 1 equals word
    acceptance (from the left endmarker) of A.

    A fresh backward location steps onto the left endmarker and hands over
    to the initial location without a reset or guard, so the clock there is
    tau_0 - tau_1; this is 0 exactly for words starting at time 0.
    """
    if A.initial in (ACCEPT, REJECT):
        return A
    if A.initial in A.backward:
        # started on the left endmarker it would fall off at once
        return Ata(A.props, A.forward, A.backward, REJECT, A.delta)
    if ORIGIN in A.locations:
        raise ValueError("location name %r already used" % ORIGIN)
    delta = {k: list(v) for k, v in A.delta.items()}
    delta[(ORIGIN, LEFT)] = [(FULL, Dnf([(frozenset([A.initial]), frozenset())]))]
    return Ata(A.props, A.forward, A.backward | {ORIGIN}, ORIGIN, delta)
