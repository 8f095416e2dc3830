"""Exact timestamps, integer-endpoint intervals and (pointed) timed words."""
import re
from fractions import Fraction

INF = float("inf")


class ParseError(ValueError):
    """Raised for malformed textual input."""


def to_rational(text):
    """Parse an integer, ``p/q`` or decimal literal as an exact Fraction."""
    s = str(text).strip()
    if not re.fullmatch(r"[+-]?(\d+(/\d+)?|\d*\.\d+|\d+\.\d*)", s):
        raise ParseError("malformed rational: %r" % s)
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ParseError("malformed rational: %r" % s)


class Interval:
    """Interval with integer (or infinite) endpoints.

    ``lo``/``hi`` are ints or -INF/INF. Infinite ends are always open.
    """

    __slots__ = ("lo", "hi", "lo_open", "hi_open")

    def __init__(self, lo, hi, lo_open=False, hi_open=False):
        if lo == -INF:
            lo_open = True
        elif lo == INF:
            raise ValueError("lower endpoint cannot be +inf")
        else:
            if Fraction(lo).denominator != 1:
                raise ValueError("interval endpoints must be integers")
            lo = int(lo)
        if hi == INF:
            hi_open = True
        elif hi == -INF:
            raise ValueError("upper endpoint cannot be -inf")
        else:
            if Fraction(hi).denominator != 1:
                raise ValueError("interval endpoints must be integers")
            hi = int(hi)
        if lo > hi:
            raise ValueError("empty interval: lo > hi")
        if lo == hi and (lo_open or hi_open):
            raise ValueError("empty interval: punctual with open end")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "lo_open", bool(lo_open))
        object.__setattr__(self, "hi_open", bool(hi_open))

    def __setattr__(self, k, v):
        raise AttributeError("Interval is immutable")

    @classmethod
    def parse(cls, text):
        return parse_interval(text)

    def key(self):
        return (self.lo, self.lo_open, self.hi, self.hi_open)

    def __eq__(self, other):
        return isinstance(other, Interval) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return self.key() < other.key()

    def __contains__(self, v):
        return interval_contains(self, v)

    @property
    def punctual(self):
        return self.lo == self.hi

    def is_nonneg(self):
        return self.lo >= 0

    def is_nonpos(self):
        return self.hi <= 0

    def neg(self):
        """Mirror image -I."""
        return Interval(-self.hi, -self.lo, self.hi_open, self.lo_open)

    def __str__(self):
        lo = "-inf" if self.lo == -INF else str(self.lo)
        hi = "inf" if self.hi == INF else str(self.hi)
        return "%s%s,%s%s" % ("(" if self.lo_open else "[", lo, hi,
                              ")" if self.hi_open else "]")

    def __repr__(self):
        return "Interval(%s)" % self


def interval_contains(iv, v):
    v = Fraction(v)
    if iv.lo != -INF:
        if v < iv.lo or (iv.lo_open and v == iv.lo):
            return False
    if iv.hi != INF:
        if v > iv.hi or (iv.hi_open and v == iv.hi):
            return False
    return True


def interval_shift(iv, t):
    """Bounds of t + iv as ((lo, lo_open), (hi, hi_open)) with rational ends."""
    t = Fraction(t)
    lo = iv.lo if iv.lo == -INF else t + iv.lo
    hi = iv.hi if iv.hi == INF else t + iv.hi
    return ((lo, iv.lo_open), (hi, iv.hi_open))


def in_shifted(bounds, v):
    (lo, lo_open), (hi, hi_open) = bounds
    if lo != -INF and (v < lo or (lo_open and v == lo)):
        return False
    if hi != INF and (v > hi or (hi_open and v == hi)):
        return False
    return True


def interval_intersect(ivs):
    """Intersection of a nonempty list of intervals, or None if empty."""
    ivs = list(ivs)
    if not ivs:
        raise ValueError("intersection of an empty list")
    lo, lo_open = -INF, True
    hi, hi_open = INF, True
    for iv in ivs:
        if iv.lo > lo or (iv.lo == lo and iv.lo_open):
            lo, lo_open = iv.lo, iv.lo_open
        if iv.hi < hi or (iv.hi == hi and iv.hi_open):
            hi, hi_open = iv.hi, iv.hi_open
    if lo > hi or (lo == hi and (lo_open or hi_open)):
        return None
    return Interval(lo, hi, lo_open, hi_open)


_IV_RE = re.compile(r"\s*([\(\[])\s*([+-]?\w+)\s*,\s*([+-]?\w+)\s*([\)\]])\s*")


def _endpoint(s):
    s = s.strip()
    if s in ("inf", "+inf"):
        return INF
    if s == "-inf":
        return -INF
    if not re.fullmatch(r"[+-]?\d+", s):
        raise ParseError("interval endpoint must be an integer or inf: %r" % s)
    return int(s)


def parse_interval(text):
    m = _IV_RE.fullmatch(text)
    if not m:
        raise ParseError("malformed interval: %r" % text)
    lo, hi = _endpoint(m.group(2)), _endpoint(m.group(3))
    lo_open, hi_open = m.group(1) == "(", m.group(4) == ")"
    if (lo == -INF and not lo_open) or (hi == INF and not hi_open):
        raise ParseError("infinite endpoint must be open: %r" % text)
    try:
        return Interval(lo, hi, lo_open, hi_open)
    except ValueError as e:
        raise ParseError("%s: %r" % (e, text))


class TimedWord:
    """Finite timed word; letters are (frozenset props, Fraction ts).

    Positions are 1-indexed. ``strict_origin=False`` allows a nonzero first
    timestamp (some automaton fixtures use that).
    """

    def __init__(self, letters, strict_origin=True):
        out = []
        prev = None
        for props, ts in letters:
            props = frozenset(props)
            ts = Fraction(ts)
            if not props:
                raise ValueError("empty proposition set")
            if prev is not None and ts < prev:
                raise ValueError("timestamps not monotone")
            prev = ts
            out.append((props, ts))
        if strict_origin and out and out[0][1] != 0:
            raise ValueError("first timestamp must be 0")
        self.letters = tuple(out)

    def __len__(self):
        return len(self.letters)

    def props(self, i):
        return self.letters[i - 1][0]

    def ts(self, i):
        return self.letters[i - 1][1]

    def dom(self):
        return range(1, len(self.letters) + 1)

    def untimed(self):
        return tuple(p for p, _ in self.letters)

    def __eq__(self, other):
        return isinstance(other, TimedWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __str__(self):
        return serialize_timed_word(self)

    def __repr__(self):
        return "TimedWord(%r)" % str(self)


class PointedTimedWord:
    def __init__(self, word, point):
        if point not in word.dom():
            raise ValueError("point %r outside the word domain" % (point,))
        self.word = word
        self.point = point

    def __eq__(self, other):
        return isinstance(other, PointedTimedWord) and (self.word, self.point) == (other.word, other.point)

    def __hash__(self):
        return hash((self.word, self.point))

    def __repr__(self):
        return "PointedTimedWord(%r, %d)" % (str(self.word), self.point)


def _fmt_ts(t):
    return str(t.numerator) if t.denominator == 1 else "%d/%d" % (t.numerator, t.denominator)


def serialize_timed_word(w):
    return " ; ".join("%s @ %s" % (",".join(sorted(p)), _fmt_ts(t)) for p, t in w.letters)


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def parse_timed_word(text, strict_origin=True):
    text = text.strip()
    if not text:
        return TimedWord([])
    letters = []
    prev = None
    for k, chunk in enumerate(text.split(";")):
        if "@" not in chunk:
            raise ParseError("letter %d: missing '@'" % (k + 1))
        ps, ts = chunk.split("@", 1)
        props = [p.strip() for p in ps.split(",") if p.strip()]
        if not props:
            raise ParseError("letter %d: empty proposition set" % (k + 1))
        for p in props:
            if not _IDENT.fullmatch(p):
                raise ParseError("letter %d: bad proposition %r" % (k + 1, p))
        t = to_rational(ts)
        if prev is not None and t < prev:
            raise ParseError("letter %d: non-monotone timestamp" % (k + 1))
        if k == 0 and strict_origin and t != 0:
            raise ParseError("first timestamp must be 0, got %s" % _fmt_ts(t))
        prev = t
        letters.append((frozenset(props), t))
    return TimedWord(letters, strict_origin=strict_origin)
