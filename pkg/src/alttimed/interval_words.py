"""Anchored interval words: abstractions of pointed timed words.

A letter is a pair (props, marks) where marks is a set of Interval objects
plus possibly the ANCH token. A pointed timed word rho,i is consistent with
such a word when the props agree and every marked position j != i satisfies
ts(j) - ts(i) in each of its intervals.
"""
import itertools
import math
import random
from fractions import Fraction

from .timed_core import (INF, ParseError, PointedTimedWord, TimedWord,
                         interval_contains, interval_intersect, parse_interval)

ANCH = "anch"
MAX_TYPE_BASE = 3


class IntervalWord:
    def __init__(self, letters, base=None):
        out = []
        for props, marks in letters:
            out.append((frozenset(props), frozenset(marks)))
        self.letters = tuple(out)
        anchors = [k + 1 for k, (_, m) in enumerate(self.letters) if ANCH in m]
        if len(anchors) != 1:
            raise ValueError("interval word needs exactly one anchor, found %d" % len(anchors))
        self.anchor = anchors[0]
        used = set()
        for _, m in self.letters:
            used |= {x for x in m if x != ANCH}
        if base is None:
            base = used
        base = frozenset(base)
        if not used <= base:
            raise ValueError("marked interval outside the base set")
        self.base = base

    def __len__(self):
        return len(self.letters)

    def props(self, j):
        return self.letters[j - 1][0]

    def marks(self, j):
        """Interval marks at position j (anchor token excluded)."""
        return self.letters[j - 1][1] - {ANCH}

    def __eq__(self, other):
        return isinstance(other, IntervalWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __str__(self):
        return serialize_interval_word(self)

    def __repr__(self):
        return "IntervalWord(%r)" % str(self)

    def restricted_points(self):
        return [j for j in range(1, len(self) + 1) if self.marks(j)]

    def is_collapsed(self):
        return all(len(self.marks(j)) <= 1 for j in range(1, len(self) + 1))


def consistent(kappa, pw):
    """Is the pointed timed word ``pw`` consistent with ``kappa``?"""
    w, i = pw.word, pw.point
    if len(w) != len(kappa) or i != kappa.anchor:
        return False
    ti = w.ts(i)
    for j in range(1, len(w) + 1):
        if w.props(j) != kappa.props(j):
            return False
        if j == i:
            continue
        d = w.ts(j) - ti
        for iv in kappa.marks(j):
            if not interval_contains(iv, d):
                return False
    return True


class InconsistentAbstraction(ValueError):
    """A letter whose marks have an empty intersection."""


def collapse_letters(kappa):
    """Collapsed letters and a flag telling whether every letter was feasible."""
    out, ok = [], True
    for j, (props, marks) in enumerate(kappa.letters, 1):
        ivs = [m for m in marks if m != ANCH]
        if j == kappa.anchor:
            # marks on the anchor carry no constraint
            ivs = []
        anch = {ANCH} if ANCH in marks else set()
        if not ivs:
            out.append((props, frozenset(anch)))
            continue
        x = interval_intersect(ivs)
        if x is None:
            ok = False
            out.append((props, frozenset(anch | set(ivs))))
        else:
            out.append((props, frozenset(anch | {x})))
    return out, ok


def collapse(kappa, strict=False):
    """Replace every letter's marks by their intersection.

    An infeasible letter leaves the word flagged via ``inconsistent`` (and
    raises when ``strict``).
    """
    letters, ok = collapse_letters(kappa)
    if not ok and strict:
        raise InconsistentAbstraction("empty intersection in some letter")
    base = set()
    for _, m in letters:
        base |= {x for x in m if x != ANCH}
    res = IntervalWord(letters, base)
    res.inconsistent = not ok
    return res


def is_inconsistent(kappa):
    return getattr(kappa, "inconsistent", False) or not collapse_letters(kappa)[1]


def first(kappa, iv):
    for j in range(1, len(kappa) + 1):
        if iv in kappa.marks(j):
            return j
    return None


def last(kappa, iv):
    for j in range(len(kappa), 0, -1):
        if iv in kappa.marks(j):
            return j
    return None


def normalize(kappa):
    """Collapse, then keep each interval's mark only at its first and last use."""
    c = collapse(kappa)
    if c.inconsistent:
        # nothing consistent either way; keep the word as is
        return c
    keep = set()
    for iv in c.base:
        keep.add((first(c, iv), iv))
        keep.add((last(c, iv), iv))
    letters = []
    for j, (props, marks) in enumerate(c.letters, 1):
        m = {x for x in marks if x == ANCH or (j, x) in keep}
        letters.append((props, frozenset(m)))
    res = IntervalWord(letters, c.base)
    res.inconsistent = False
    return res


def boundary(kappa):
    pos = {kappa.anchor}
    ivs = set()
    for j in range(1, len(kappa) + 1):
        ivs |= kappa.marks(j)
    for iv in ivs:
        pos.add(first(kappa, iv))
        pos.add(last(kappa, iv))
    return sorted(pos)


def type_of(kappa):
    """Project the boundary onto its labels.

    At each boundary position the label is ANCH or the single interval; an
    interval whose first and last restricted points coincide is emitted once.
    """
    if not kappa.is_collapsed():
        raise ValueError("type_of needs a collapsed interval word")
    seq = []
    for j in boundary(kappa):
        if j == kappa.anchor:
            seq.append(ANCH)
        else:
            (iv,) = kappa.marks(j)
            seq.append(iv)
    return tuple(seq)


def enumerate_type_sequences(base, max_base=MAX_TYPE_BASE):
    base = sorted(set(base))
    if len(base) > max_base:
        raise ValueError("interval base too large for type enumeration (%d > %d)"
                         % (len(base), max_base))
    items = [ANCH] + [iv for iv in base for _ in range(2)]
    seen = set()
    out = []
    for perm in itertools.permutations(range(len(items))):
        s = tuple(items[k] for k in perm)
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def type_sequence_count(k):
    return math.factorial(2 * k + 1) // (2 ** k)


def sample_consistent(kappa, count, den=10, seed=0, span=4, tries=200):
    """Random pointed timed words consistent with ``kappa`` on a 1/den grid.

    Gives up after ``tries`` consecutive rejections, so unsatisfiable or
    grid-starved kappas return fewer than ``count`` words.

    Each position is constrained only against the anchor, so we sample the
    offset of every position independently inside the intersection of its
    marks and then reject samples that break monotonicity or the zero origin.
    """
    rng = random.Random(seed)
    letters, ok = collapse_letters(kappa)
    if not ok:
        return []
    a = kappa.anchor
    win = []
    for j, (_, m) in enumerate(letters, 1):
        ivs = [x for x in m if x != ANCH]
        win.append(ivs[0] if ivs and j != a else None)
    out, misses = [], 0
    while len(out) < count and misses < tries:
        w = _try_sample(rng, letters, win, a, den, span)
        if w is None:
            misses += 1
        else:
            misses = 0
            out.append(PointedTimedWord(w, a))
    return out


def _offset_range(iv, span):
    lo = -span if iv is None or iv.lo == -INF else iv.lo
    hi = span if iv is None or iv.hi == INF else iv.hi
    return Fraction(lo), Fraction(hi)


def _try_sample(rng, letters, win, a, den, span):
    n = len(letters)
    # offsets relative to the anchor, walking outwards to keep monotonicity
    offs = [None] * n
    offs[a - 1] = Fraction(0)
    for j in range(a - 2, -1, -1):
        lo, hi = _offset_range(win[j], span)
        hi = min(hi, offs[j + 1])
        v = _draw(rng, lo, hi, win[j], den)
        if v is None:
            return None
        offs[j] = v
    for j in range(a, n):
        lo, hi = _offset_range(win[j], span)
        lo = max(lo, offs[j - 1])
        v = _draw(rng, lo, hi, win[j], den)
        if v is None:
            return None
        offs[j] = v
    base = offs[0]
    try:
        return TimedWord([(letters[j][0], offs[j] - base) for j in range(n)])
    except ValueError:
        return None


def _draw(rng, lo, hi, iv, den):
    if lo > hi:
        return None
    a = math.ceil(lo * den)
    b = math.floor(hi * den)
    # a few random grid points plus the interval edges
    pts = set()
    if a <= b:
        for _ in range(4):
            pts.add(rng.randint(a, b))
        pts.add(a)
        pts.add(b)
    pts = sorted(pts)
    rng.shuffle(pts)
    for p in pts:
        v = Fraction(p, den)
        if iv is None or interval_contains(iv, v):
            return v
    return None


def parse_interval_word(text):
    letters = []
    for k, chunk in enumerate(text.split(";")):
        if "|" not in chunk:
            raise ParseError("letter %d: missing '|'" % (k + 1))
        ps, ms = chunk.split("|", 1)
        props = frozenset(p.strip() for p in ps.split(",") if p.strip())
        marks = set()
        for tok in _split_marks(ms):
            if tok == ANCH:
                marks.add(ANCH)
            else:
                marks.add(parse_interval(tok))
        letters.append((props, frozenset(marks)))
    try:
        return IntervalWord(letters)
    except ValueError as e:
        raise ParseError(str(e))


def _split_marks(s):
    toks, depth, cur = [], 0, ""
    for ch in s:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            toks.append(cur.strip())
            cur = ""
        else:
            cur += ch
    if cur.strip():
        toks.append(cur.strip())
    return [t for t in toks if t]


def serialize_interval_word(kappa):
    parts = []
    for props, marks in kappa.letters:
        ms = sorted((str(x) for x in marks if x != ANCH))
        if ANCH in marks:
            ms.append(ANCH)
        parts.append("%s|%s" % (",".join(sorted(props)), ",".join(ms)))
    return " ; ".join(parts)
