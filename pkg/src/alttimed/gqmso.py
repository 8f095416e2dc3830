"""GQMSO: MSO[<] with anchored blocks of metric quantifiers.

A ``MetricBlock(anchor, quants, body)`` stands for
``Q1 t1 in anchor+I1 ... Qj tj in anchor+Ij . body`` where each Q is "E"
(exists) or "A" (for all). All other nodes come from ``mso``.
"""
import itertools
from dataclasses import dataclass
from typing import Tuple

from .mso import (FF, TT, Ex, ExSO, Lt, MAnd, MNot, MOr, Mso,  # noqa: F401 (Lt: mutants)
                  MsoEvaluator, SO_CAP, forall, free_vars, implies, is_first,
                  is_last, le, mand, mnot, mor, mso_children, rename_fo, succ)
from .pnemtl import NonAdjacencyReport, check_nonadjacent_intervals
from .timed_core import INF, Interval, in_shifted, interval_shift


@dataclass(frozen=True)
class MetricBlock(Mso):
    anchor: str
    quants: Tuple[Tuple[str, str, Interval], ...]
    body: Mso

    def free_vars(self):
        fo, so = free_vars(self.body)
        bound = {v for _, v, _ in self.quants}
        return (fo - bound) | {self.anchor}, so

    def children(self):
        return [self.body]

    def rename_fo(self, old, new):
        if any(v == old for _, v, _ in self.quants):
            return MetricBlock(self.anchor, self.quants, self.body)
        return MetricBlock(new if self.anchor == old else self.anchor, self.quants,
                           rename_fo(self.body, old, new))


def block(anchor, quants, body):
    return MetricBlock(anchor, tuple((k, v, iv) for k, v, iv in quants), body)


def exists_in(anchor, var, iv, body):
    return MetricBlock(anchor, (("E", var, iv),), body)


def forall_in(anchor, var, iv, body):
    return MetricBlock(anchor, (("A", var, iv),), body)


# --------------------------------------------------------------- semantics

class GqmsoEvaluator(MsoEvaluator):
    def __init__(self, word, so_cap=SO_CAP):
        super().__init__([word.props(p) for p in word.dom()], so_cap)
        self.word = word

    def extra(self, phi, env):
        if isinstance(phi, MetricBlock):
            return self._block(phi, 0, dict(env))
        raise TypeError("not a GQMSO formula: %r" % (phi,))

    def _block(self, b, k, env):
        if k == len(b.quants):
            return self.holds(b.body, env)
        kind, var, iv = b.quants[k]
        bounds = interval_shift(iv, self.word.ts(env[b.anchor]))
        for p in range(1, self.n + 1):
            if not in_shifted(bounds, self.word.ts(p)):
                continue
            env[var] = p
            r = self._block(b, k + 1, env)
            if kind == "E" and r:
                return True
            if kind == "A" and not r:
                return False
        return kind == "A"


def eval_gqmso(phi, word, assignment=None, so_cap=SO_CAP):
    env = dict(assignment or {})
    fo, so = free_vars(phi)
    missing = (fo | so) - set(env)
    if missing:
        raise ValueError("unassigned free variables: %s" % ", ".join(sorted(missing)))
    return GqmsoEvaluator(word, so_cap).holds(phi, env)


# ------------------------------------------------------------ structure

def walk(phi):
    out = [phi]
    for c in mso_children(phi):
        out.extend(walk(c))
    return out


def blocks(phi):
    return [x for x in walk(phi) if isinstance(x, MetricBlock)]


def metric_depth(phi):
    if isinstance(phi, MetricBlock):
        return 1 + metric_depth(phi.body)
    return max((metric_depth(c) for c in mso_children(phi)), default=0)


def is_af(phi):
    return all(k == "E" for b in blocks(phi) for k, _, _ in b.quants)


def wellformed_problems(phi):
    """Scope violations: a block must have the anchor as its only free
    variable and no free second-order variable."""
    probs = []
    for b in blocks(phi):
        fo, so = b.free_vars()
        bound = [v for _, v, _ in b.quants]
        if b.anchor in bound:
            probs.append("block at %s rebinds its anchor" % b.anchor)
        if fo != {b.anchor}:
            extra = sorted(fo - {b.anchor})
            probs.append("block at %s has free first-order variables %s"
                         % (b.anchor, ", ".join(extra)))
        if so:
            probs.append("second-order variable %s occurs free in the scope of a metric "
                         "quantifier" % ", ".join(sorted(so)))
    return probs


def is_wellformed(phi):
    return not wellformed_problems(phi)


def block_interval_sets(phi):
    return [tuple(iv for _, _, iv in b.quants) for b in blocks(phi)]


def check_nonadjacent_gqmso(phi):
    if not is_af(phi):
        raise ValueError("non-adjacency is defined for alternation-free formulas only")
    wit = []
    for ivs in block_interval_sets(phi):
        wit.extend(check_nonadjacent_intervals(ivs).witnesses)
    return NonAdjacencyReport(wit)


# ------------------------------------------------ universal elimination

_fresh = itertools.count()


def _new(tag):
    return "_%s%d" % (tag, next(_fresh))


def _left_piece(iv):
    if iv.lo == -INF:
        return None
    return Interval(-INF, iv.lo, True, not iv.lo_open)


def _right_piece(iv):
    if iv.hi == INF:
        return None
    return Interval(iv.hi, INF, not iv.hi_open, True)


def _bracket_cases(anchor, iv):
    """Ways to pin the first and last positions f, l of the window anchor+iv.

    Each case is (existential quantifiers, side condition on f and l, label).
    The label records which of the three cases of the proof applies: the
    successor of l lies beyond the window ("inside-and-beyond") or l is the
    last position ("inside-only").
    """
    f, l = _new("f"), _new("l")
    lp, rp = _left_piece(iv), _right_piece(iv)
    lefts = [([], is_first(f, _new("z")))]
    if lp is not None:
        pf = _new("pf")
        lefts.append(([("E", pf, lp)], succ(pf, f, _new("z"))))
    rights = [([], is_last(l, _new("z")), "inside-only")]
    if rp is not None:
        sl = _new("sl")
        rights.append(([("E", sl, rp)], succ(l, sl, _new("z")), "inside-and-beyond"))
    out = []
    for lq, lc in lefts:
        for rq, rc, label in rights:
            quants = [("E", f, iv), ("E", l, iv)] + lq + rq
            out.append((f, l, quants, mand([le(f, l), lc, rc]), label))
    return out


def eliminate_universal_metric(psi):
    """Rewrite one block into an equivalent formula whose blocks only use
    existential metric quantifiers (nested blocks are rewritten too).

    From the outermost universal quantifier onwards every metric quantifier
    is replaced by an ordinary quantifier ranging between the first and the
    last position of its window; those positions are pinned by hoisted
    existential metric quantifiers together with their outside neighbours.
    The empty-window case is split off with a negated existential block.
    """
    if not isinstance(psi, MetricBlock):
        raise ValueError("expected a metric block")
    body = eliminate_all(psi.body)
    quants = list(psi.quants)
    x = next((k for k, (kind, _, _) in enumerate(quants) if kind == "A"), None)
    if x is None:
        return MetricBlock(psi.anchor, psi.quants, body)
    head, tail = quants[:x], quants[x:]
    t0 = psi.anchor
    per_q = []
    for kind, var, iv in tail:
        empty = mnot(exists_in(t0, _new("e"), iv, TT))
        opts = [("empty", empty, None)]
        for f, l, bq, cond, label in _bracket_cases(t0, iv):
            opts.append((label, (bq, cond), (f, l)))
        per_q.append(opts)
    disjuncts = []
    for choice in itertools.product(*per_q):
        outside = []
        hoisted = []
        conds = []
        inner = body
        for (kind, var, iv), (label, data, fl) in reversed(list(zip(tail, choice))):
            if label == "empty":
                inner = TT if kind == "A" else FF
                continue
            f, l = fl
            rng = mand([le(f, var), le(var, l)])
            if kind == "A":
                inner = forall(var, implies(rng, inner))
            else:
                inner = Ex(var, mand([rng, inner]))
        for (kind, var, iv), (label, data, fl) in zip(tail, choice):
            if label == "empty":
                outside.append(data)
            else:
                bq, cond = data
                hoisted.extend(bq)
                conds.append(cond)
        blk = MetricBlock(t0, tuple(head + hoisted), mand(conds + [inner]))
        disjuncts.append(mand(outside + [blk]))
    return mor(disjuncts)


def eliminate_all(phi):
    """Apply the universal elimination to every block of a formula."""
    if isinstance(phi, MetricBlock):
        return eliminate_universal_metric(phi)
    if isinstance(phi, MNot):
        return MNot(eliminate_all(phi.arg))
    if isinstance(phi, MAnd):
        return MAnd(tuple(eliminate_all(a) for a in phi.args))
    if isinstance(phi, MOr):
        return MOr(tuple(eliminate_all(a) for a in phi.args))
    if isinstance(phi, Ex):
        return Ex(phi.x, eliminate_all(phi.body))
    if isinstance(phi, ExSO):
        return ExSO(phi.X, eliminate_all(phi.body))
    return phi


def elimination_case(psi, word, i):
    """Which case of the outermost universal quantifier applies at (word, i):
    "empty", "inside-and-beyond" or "inside-only" (None without one)."""
    x = next((k for k, (kind, _, _) in enumerate(psi.quants) if kind == "A"), None)
    if x is None:
        return None
    iv = psi.quants[x][2]
    bounds = interval_shift(iv, word.ts(i))
    inside = [p for p in word.dom() if in_shifted(bounds, word.ts(p))]
    if not inside:
        return "empty"
    return "inside-only" if inside[-1] == len(word) else "inside-and-beyond"


# ----------------------------------------------------------- helpers

def pos_formula(k, t):
    """Pos_k(t): t is the k-th position."""
    if k == 1:
        return is_first(t, _new("p"))
    u = _new("p")
    return Ex(u, mand([succ(u, t, _new("s")), pos_formula(k - 1, u)]))


def successor(u, v):
    """v = u + 1."""
    return succ(u, v, _new("s"))
