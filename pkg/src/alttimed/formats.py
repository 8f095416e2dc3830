"""Line-oriented automaton files (NFA, 2AFA, timed ATA).

Common sections::

    alphabet: a, b          # propositions (ATA) or symbols (NFA / 2AFA)
    states: p, q            # NFA
    dir: q = fwd            # 2AFA / ATA, one line per location
    initial: q
    final: q                # NFA
    trans: p --a--> q       # NFA
    trans: (q, a) -> p & r | TOP                  # 2AFA
    trans: (q, {a,b}, x in (0,1)) -> q & x.r      # ATA

In ATA files a bare proposition ``a`` names the letter {a}, ``{a,b}`` a
letter with several propositions and ``*`` every letter. Guards are
``x in I`` or ``x != c``; a missing guard means unguarded.
"""
import re

from .automata import LEFT, RIGHT, BOT, Dnf, Nfa, TwoWayAfa
from .timed_core import INF, Interval, ParseError, parse_interval

_NFA_TRANS = re.compile(r"\s*(\S+)\s*--(.*?)-->\s*(\S+)\s*$")
_TRANS = re.compile(r"\s*\((.*)\)\s*->\s*(.*)$")


def _lines(text):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            if ":" not in line:
                raise ParseError("line %d: expected 'section: value'" % no)
            key, val = line.split(":", 1)
            yield no, key.strip(), val.strip()


def _names(val):
    return [x.strip() for x in val.split(",") if x.strip()]


def split_top(s, sep=","):
    """Split at separators that are not nested in brackets."""
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            out.append(cur.strip())
            cur = ""
        else:
            cur += ch
    out.append(cur.strip())
    return out


def parse_dnf(text, allow_reset=True, no=0):
    text = text.strip()
    if text in ("BOT", "FALSE", "⊥"):
        return BOT
    out = []
    for part in split_top(text, "|"):
        part = part.strip()
        if part.startswith("(") and part.endswith(")"):
            part = part[1:-1]
        free, reset = set(), set()
        for lit in split_top(part, "&"):
            lit = lit.strip()
            if lit in ("TOP", "TRUE", "⊤"):
                continue
            if lit in ("BOT", "FALSE", "⊥"):
                free = None
                break
            if lit.startswith("x."):
                if not allow_reset:
                    raise ParseError("line %d: reset 'x.' only allowed in timed automata" % no)
                reset.add(lit[2:].strip())
            elif re.fullmatch(r"[A-Za-z_][\w'\-]*", lit):
                free.add(lit)
            else:
                raise ParseError("line %d: bad literal %r" % (no, lit))
        if free is not None:
            out.append((frozenset(free), frozenset(reset)))
    return Dnf(out)


def _sym(tok, no):
    tok = tok.strip()
    if tok in ("|-", "⊢"):
        return LEFT
    if tok in ("-|", "⊣"):
        return RIGHT
    return tok


def parse_nfa(text):
    alphabet = states = None
    init, final, trans = [], [], {}
    for no, key, val in _lines(text):
        if key == "alphabet":
            alphabet = _names(val)
        elif key == "states":
            states = _names(val)
        elif key == "initial":
            init += _names(val)
        elif key == "final":
            final += _names(val)
        elif key == "trans":
            m = _NFA_TRANS.match(val)
            if not m:
                raise ParseError("line %d: expected 'p --a--> q'" % no)
            p, a, q = m.group(1), m.group(2).strip(), m.group(3)
            trans.setdefault((p, a), set()).add(q)
        elif key != "kind":
            raise ParseError("line %d: unknown section %r" % (no, key))
    if alphabet is None or states is None:
        raise ParseError("NFA file needs 'alphabet:' and 'states:'")
    try:
        return Nfa(alphabet, states, init, final, trans)
    except ValueError as e:
        raise ParseError(str(e))


def parse_2afa(text):
    alphabet, dirs, init, delta = None, {}, None, {}
    for no, key, val in _lines(text):
        if key == "alphabet":
            alphabet = _names(val)
        elif key == "dir":
            q, d = [x.strip() for x in val.split("=")]
            dirs[q] = d
        elif key == "initial":
            init = val
        elif key == "trans":
            m = _TRANS.match(val)
            if not m:
                raise ParseError("line %d: expected '(q, a) -> DNF'" % no)
            q, a = split_top(m.group(1))
            f = parse_dnf(m.group(2), allow_reset=False, no=no)
            key2 = (q, _sym(a, no))
            delta[key2] = delta.get(key2, BOT) | f
        elif key != "kind":
            raise ParseError("line %d: unknown section %r" % (no, key))
    fwd = {q for q, d in dirs.items() if d == "fwd"}
    bwd = {q for q, d in dirs.items() if d == "bwd"}
    try:
        return TwoWayAfa(alphabet or [], fwd, bwd, init, delta)
    except ValueError as e:
        raise ParseError(str(e))


def parse_guard(text, no=0):
    """``x in I`` -> [I]; ``x != c`` -> two open-ended intervals."""
    t = text.strip()
    if not t:
        return [Interval(-INF, INF)]
    m = re.fullmatch(r"x\s*(in|∈)\s*(.+)", t)
    if m:
        return [parse_interval(m.group(2))]
    m = re.fullmatch(r"x\s*(!=|≠)\s*([+-]?\d+)", t)
    if m:
        c = int(m.group(2))
        return [Interval(-INF, c, True, True), Interval(c, INF, True, True)]
    m = re.fullmatch(r"x\s*==?\s*([+-]?\d+)", t)
    if m:
        c = int(m.group(1))
        return [Interval(c, c)]
    raise ParseError("line %d: bad guard %r" % (no, text))


def _letters(tok, props, no):
    from .ata2w import nonempty_letters
    tok = tok.strip()
    if tok in ("|-", "⊢"):
        return [LEFT]
    if tok in ("-|", "⊣"):
        return [RIGHT]
    if tok == "*":
        return nonempty_letters(props)
    if tok.startswith("{") and tok.endswith("}"):
        items = frozenset(x.strip() for x in tok[1:-1].split(",") if x.strip())
    else:
        items = frozenset([tok])
    if not items or not items <= set(props):
        raise ParseError("line %d: letter %r not over the alphabet" % (no, tok))
    return [items]


def parse_ata(text):
    from .ata2w import Ata
    props, dirs, init, delta = None, {}, None, {}
    pending = []
    for no, key, val in _lines(text):
        if key == "alphabet":
            props = _names(val)
        elif key == "dir":
            if "=" not in val:
                raise ParseError("line %d: expected 'dir: q = fwd|bwd'" % no)
            q, d = [x.strip() for x in val.split("=")]
            if d not in ("fwd", "bwd"):
                raise ParseError("line %d: direction must be fwd or bwd" % no)
            dirs[q] = d
        elif key == "initial":
            init = val
        elif key == "guard":
            pass  # informational; guards are read from transitions
        elif key == "trans":
            pending.append((no, val))
        elif key != "kind":
            raise ParseError("line %d: unknown section %r" % (no, key))
    if props is None:
        raise ParseError("ATA file needs 'alphabet:'")
    for no, val in pending:
        m = _TRANS.match(val)
        if not m:
            raise ParseError("line %d: expected '(q, a[, guard]) -> DNF'" % no)
        parts = split_top(m.group(1))
        if len(parts) not in (2, 3):
            raise ParseError("line %d: expected 2 or 3 fields" % no)
        q = parts[0]
        guards = parse_guard(parts[2] if len(parts) == 3 else "", no)
        f = parse_dnf(m.group(2), no=no)
        for c in _letters(parts[1], props, no):
            for g in guards:
                delta.setdefault((q, c), []).append((g, f))
    fwd = {q for q, d in dirs.items() if d == "fwd"}
    bwd = {q for q, d in dirs.items() if d == "bwd"}
    try:
        return Ata(props, fwd, bwd, init, delta)
    except ValueError as e:
        raise ParseError(str(e))


def _fmt_letter(c):
    if c in (LEFT, RIGHT):
        return c
    c = sorted(c)
    return c[0] if len(c) == 1 else "{%s}" % ",".join(c)


def _flat(q):
    if isinstance(q, tuple):
        return "_".join(_flat(x) for x in q)
    return str(q)


def _name(q):
    s = re.sub(r"[^\w'\-]+", "_", _flat(q)).strip("_")
    return s or "_"


def serialize_ata(A, header=None):
    names = {}
    for q in sorted(A.locations, key=repr):
        base = _name(q)
        n = base
        k = 1
        while n in names.values():
            k += 1
            n = "%s_%d" % (base, k)
        names[q] = n
    lines = []
    if header:
        lines += ["# " + h for h in header]
    lines.append("kind: ata")
    lines.append("alphabet: " + ", ".join(sorted(A.props)))
    for q in sorted(A.locations, key=repr):
        lines.append("dir: %s = %s" % (names[q], "fwd" if q in A.forward else "bwd"))
    lines.append("initial: " + (A.initial if A.initial in ("TOP", "BOT") else names[A.initial]))
    for (q, c), items in sorted(A.delta.items(), key=lambda kv: (repr(kv[0][0]), repr(kv[0][1]))):
        for g, f in items:
            gs = "" if g == Interval(-INF, INF) else ", x in %s" % g
            lines.append("trans: (%s, %s%s) -> %s" % (names[q], _fmt_letter(c), gs,
                                                        str(f.rename(lambda t: names[t]))))
    return "\n".join(lines) + "\n"


def serialize_nfa(a):
    names = {q: _name(q) for q in a.states}
    syms = {c: (c if isinstance(c, str) else "{%s}" % ",".join(map(str, sorted(c, key=repr))))
            for c in a.alphabet}
    lines = ["kind: nfa",
             "alphabet: " + ", ".join(sorted(syms.values())),
             "states: " + ", ".join(sorted(names.values())),
             "initial: " + ", ".join(sorted(names[q] for q in a.initial)),
             "final: " + ", ".join(sorted(names[q] for q in a.finals))]
    for (q, c), qs in sorted(a.trans.items(), key=repr):
        for r in sorted(qs, key=repr):
            lines.append("trans: %s --%s--> %s" % (names[q], syms[c], names[r]))
    return "\n".join(lines) + "\n"


def detect_kind(text):
    m = re.search(r"^\s*kind:\s*(\w+)", text, re.M)
    if m:
        return m.group(1)
    body = [l for l in text.splitlines() if l.strip() and not l.lstrip().startswith((";", "#"))]
    s = "\n".join(body).lstrip()
    if s.startswith("("):
        return "formula"
    if "dir:" in text:
        return "ata"
    return "nfa"
