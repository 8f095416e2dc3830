"""Tiny s-expression reader shared by the formula and automaton formats.

Intervals such as ``(1,2)`` or ``[-inf,0]`` are read as single atoms so they
can sit inside ordinary lists.
"""
import re

from .timed_core import ParseError

_IV = re.compile(r"[\(\[]\s*[+-]?\w+\s*,\s*[+-]?\w+\s*[\)\]]")
_SET = re.compile(r"\{[^{}]*\}")
_ATOM = re.compile(r"[^\s()\[\]{}]+")


class Sym(str):
    """Bare symbol."""


class IvTok(str):
    """Interval literal, parsed later."""


class SetTok(str):
    """Brace set literal ``{a,b}``."""

    def items(self):
        inner = self[1:-1]
        return [x.strip() for x in inner.split(",") if x.strip()]


def _pos(text, k):
    line = text.count("\n", 0, k) + 1
    col = k - (text.rfind("\n", 0, k) + 1) + 1
    return "line %d, column %d" % (line, col)


def tokenize(text):
    toks = []
    k = 0
    n = len(text)
    while k < n:
        ch = text[k]
        if ch.isspace():
            k += 1
            continue
        if ch == ";":
            # comment to end of line
            e = text.find("\n", k)
            k = n if e < 0 else e
            continue
        if ch in "([":
            m = _IV.match(text, k)
            if m:
                toks.append((IvTok(re.sub(r"\s+", "", m.group(0))), k))
                k = m.end()
                continue
            if ch == "[":
                raise ParseError("unexpected '[' at %s" % _pos(text, k))
            toks.append(("(", k))
            k += 1
            continue
        if ch == ")":
            toks.append((")", k))
            k += 1
            continue
        if ch == "{":
            m = _SET.match(text, k)
            if not m:
                raise ParseError("unterminated set at %s" % _pos(text, k))
            toks.append((SetTok(m.group(0)), k))
            k = m.end()
            continue
        m = _ATOM.match(text, k)
        if not m:
            raise ParseError("unexpected character %r at %s" % (ch, _pos(text, k)))
        toks.append((Sym(m.group(0)), k))
        k = m.end()
    return toks


def read_all(text):
    """Parse every top-level form in ``text``."""
    toks = tokenize(text)
    out = []
    k = 0
    while k < len(toks):
        form, k = _read(toks, k, text)
        out.append(form)
    return out


def read(text):
    forms = read_all(text)
    if len(forms) != 1:
        raise ParseError("expected exactly one form, found %d" % len(forms))
    return forms[0]


def _read(toks, k, text):
    tok, at = toks[k]
    if tok == "(":
        items = []
        k += 1
        while True:
            if k >= len(toks):
                raise ParseError("unbalanced '(' opened at %s" % _pos(text, at))
            if toks[k][0] == ")":
                return items, k + 1
            item, k = _read(toks, k, text)
            items.append(item)
    if tok == ")":
        raise ParseError("unexpected ')' at %s" % _pos(text, at))
    return tok, k + 1


def head(form):
    if isinstance(form, list) and form and isinstance(form[0], Sym):
        return str(form[0])
    return None
