"""S-expression readers and writers for PnEMTL/MTL and GQMSO formulas.

PnEMTL::

    (nfa A1 (init q0) (final q1) (q0 {0} q0) (q0 {1} q1))   ; optional, named
    (F (I (1,2) (2,3)) (auts A1 A2 A3) (args a (not b)))
    (and ...) (or ...) (not ...) (-> p q) (U (0,1) p q) (S (0,1) p q) true false

Automaton letters are sets of argument indices. An ``nfa`` form may also be
written inline in place of a name.

GQMSO::

    (exists t p) (forall t p) (existsSO X p) (forallSO X p)
    (Q a t) (X t) (< t u) (<= t u) (= t u) (succ t u) (first t) (last t)
    (mblock t ((E t1 (0,1)) (A t2 [-1,0])) p)
"""
import itertools

from .automata import Nfa
from .gqmso import MetricBlock
from .mso import (FF, TT, Eq, Ex, ExSO, In, Lt, MAnd, MNot, MOr, MTrue, Q, Sym, is_first,
                  is_last, le, succ)
from .pnemtl import (FALSE, TRUE, And, Atom, Mod, Not, Or, Since, Top, Until)
from .sexpr import IvTok, SetTok, Sym as SSym, head, read_all
from .timed_core import ParseError, parse_interval


# ================================================================ PnEMTL

def _letter(tok):
    if not isinstance(tok, SetTok):
        raise ParseError("automaton letter must be a set like {0,1}, got %r" % (tok,))
    try:
        return frozenset(int(x) for x in tok.items())
    except ValueError:
        raise ParseError("automaton letters are sets of argument indices: %s" % tok)


def _nfa_form(form):
    """(nfa [name] (init ...) (final ...) (p {..} q) ...) -> (name, Nfa)."""
    items = form[1:]
    name = None
    if items and isinstance(items[0], SSym):
        name = str(items[0])
        items = items[1:]
    init, final, edges = None, None, []
    for it in items:
        h = head(it)
        if h == "init":
            init = [str(x) for x in it[1:]]
        elif h == "final":
            final = [str(x) for x in it[1:]]
        elif isinstance(it, list) and len(it) == 3:
            edges.append((str(it[0]), _letter(it[1]), str(it[2])))
        else:
            raise ParseError("bad nfa item %r" % (it,))
    if init is None or final is None:
        raise ParseError("nfa needs (init ...) and (final ...)")
    states = set(init) | set(final) | {p for p, _, _ in edges} | {q for _, _, q in edges}
    letters = {c for _, c, _ in edges}
    trans = {}
    for p, c, q in edges:
        trans.setdefault((p, c), set()).add(q)
    return name, (states, init, final, letters, trans)


def _build_nfa(spec, nargs):
    states, init, final, letters, trans = spec
    from .pnemtl import all_letters
    alphabet = all_letters(nargs)
    if not letters <= alphabet:
        raise ParseError("automaton letter mentions an argument index >= %d" % nargs)
    return Nfa(alphabet, states, init, final, trans)


class _PnReader:
    def __init__(self, named):
        self.named = named

    def formula(self, f):
        if isinstance(f, SSym):
            s = str(f)
            if s == "true":
                return TRUE
            if s == "false":
                return FALSE
            return Atom(s)
        if isinstance(f, (IvTok, SetTok)) or not isinstance(f, list) or not f:
            raise ParseError("expected a formula, got %r" % (f,))
        h = head(f)
        if h == "not":
            self._arity(f, 1)
            return Not(self.formula(f[1]))
        if h in ("and", "or"):
            args = tuple(self.formula(x) for x in f[1:])
            if not args:
                return TRUE if h == "and" else FALSE
            if len(args) == 1:
                return args[0]
            return (And if h == "and" else Or)(args)
        if h == "->":
            self._arity(f, 2)
            return Or((Not(self.formula(f[1])), self.formula(f[2])))
        if h in ("U", "S"):
            self._arity(f, 3)
            iv = self.interval(f[1])
            return (Until if h == "U" else Since)(iv, self.formula(f[2]), self.formula(f[3]))
        if h in ("F", "P"):
            return self.modality(h, f)
        raise ParseError("unknown operator %r" % (h,))

    def _arity(self, f, n):
        if len(f) != n + 1:
            raise ParseError("%s takes %d argument(s)" % (head(f), n))

    def interval(self, tok):
        if not isinstance(tok, IvTok):
            raise ParseError("expected an interval, got %r" % (tok,))
        return parse_interval(str(tok))

    def modality(self, h, f):
        parts = {head(x): x for x in f[1:] if head(x)}
        if set(parts) != {"I", "auts", "args"} or len(f) != 4:
            raise ParseError("%s needs (I ...) (auts ...) (args ...)" % h)
        ivs = [self.interval(t) for t in parts["I"][1:]]
        args = [self.formula(x) for x in parts["args"][1:]]
        auts = []
        for a in parts["auts"][1:]:
            if head(a) == "nfa":
                _, spec = _nfa_form(a)
            elif isinstance(a, SSym) and str(a) in self.named:
                spec = self.named[str(a)]
            else:
                raise ParseError("unknown automaton %r" % (a,))
            auts.append(_build_nfa(spec, len(args)))
        try:
            return Mod(h, tuple(ivs), tuple(auts), tuple(args))
        except ValueError as e:
            raise ParseError(str(e))


def parse_pnemtl(text):
    forms = read_all(text)
    named = {}
    body = []
    for f in forms:
        if head(f) == "nfa":
            name, spec = _nfa_form(f)
            if name is None:
                raise ParseError("top-level nfa needs a name")
            named[name] = spec
        else:
            body.append(f)
    if len(body) != 1:
        raise ParseError("expected exactly one formula, found %d" % len(body))
    return _PnReader(named).formula(body[0])


def _fmt_letter(c):
    return "{%s}" % ",".join(str(x) for x in sorted(c))


def serialize_nfa_sexpr(a, name=None):
    order = sorted(a.states, key=repr)
    nm = {q: "q%d" % k for k, q in enumerate(order)}
    parts = ["nfa"] + ([name] if name else [])
    parts.append("(init %s)" % " ".join(nm[q] for q in order if q in a.initial))
    parts.append("(final %s)" % " ".join(nm[q] for q in order if q in a.finals))
    for (q, c), rs in sorted(a.trans.items(), key=lambda kv: (nm[kv[0][0]], sorted(kv[0][1]))):
        for r in sorted(rs, key=lambda x: nm[x]):
            parts.append("(%s %s %s)" % (nm[q], _fmt_letter(c), nm[r]))
    return "(%s)" % " ".join(parts)


def serialize_pnemtl(phi, header=None):
    names = {}
    defs = []

    def aut(a):
        if id(a) not in names:
            names[id(a)] = "A%d" % len(names)
            defs.append(serialize_nfa_sexpr(a, names[id(a)]))
        return names[id(a)]

    def go(x):
        if isinstance(x, Atom):
            return x.name
        if isinstance(x, Top):
            return "true"
        if isinstance(x, Not):
            if isinstance(x.arg, Top):
                return "false"
            return "(not %s)" % go(x.arg)
        if isinstance(x, And):
            return "(and %s)" % " ".join(go(a) for a in x.args)
        if isinstance(x, Or):
            return "(or %s)" % " ".join(go(a) for a in x.args)
        if isinstance(x, Until):
            return "(U %s %s %s)" % (x.interval, go(x.left), go(x.right))
        if isinstance(x, Since):
            return "(S %s %s %s)" % (x.interval, go(x.left), go(x.right))
        if isinstance(x, Mod):
            args = " ".join(go(a) for a in x.args)
            auts = " ".join(aut(a) for a in x.automata)
            ivs = " ".join(str(i) for i in x.intervals)
            return "(%s (I %s) (auts %s) (args %s))" % (x.kind, ivs, auts, args)
        raise TypeError(x)

    body = go(phi)
    lines = ["; " + h for h in (header or [])] + defs + [body]
    return "\n".join(lines) + "\n"


# ================================================================ GQMSO

_MSO_HEADS = {"exists", "forall", "existsSO", "forallSO", "Q", "<", "<=", "=", "succ",
              "first", "last", "and", "or", "not", "->", "mblock", "sym"}


class _GqReader:
    def __init__(self):
        self.count = itertools.count()

    def fresh(self):
        return "_r%d" % next(self.count)

    def var(self, tok):
        if not isinstance(tok, SSym):
            raise ParseError("expected a variable, got %r" % (tok,))
        return str(tok)

    def formula(self, f):
        if isinstance(f, SSym):
            if str(f) == "true":
                return TT
            if str(f) == "false":
                return FF
            raise ParseError("bare symbol %r is not a formula" % str(f))
        if not isinstance(f, list) or not f:
            raise ParseError("expected a formula, got %r" % (f,))
        h = head(f)
        n = len(f) - 1

        def need(k):
            if n != k:
                raise ParseError("%s takes %d argument(s)" % (h, k))

        if h in ("exists", "forall", "existsSO", "forallSO"):
            need(2)
            v, body = self.var(f[1]), self.formula(f[2])
            if h == "exists":
                return Ex(v, body)
            if h == "existsSO":
                return ExSO(v, body)
            return MNot((Ex if h == "forall" else ExSO)(v, MNot(body)))
        if h == "Q":
            need(2)
            return Q(str(f[1]), self.var(f[2]))
        if h == "sym":
            need(2)
            if not isinstance(f[1], SetTok):
                raise ParseError("sym takes a letter {a,b}")
            return Sym(frozenset(f[1].items()), self.var(f[2]))
        if h in ("<", "<=", "=", "succ"):
            need(2)
            x, y = self.var(f[1]), self.var(f[2])
            if h == "<":
                return Lt(x, y)
            if h == "<=":
                return le(x, y)
            if h == "=":
                return Eq(x, y)
            return succ(x, y, self.fresh())
        if h in ("first", "last"):
            need(1)
            return (is_first if h == "first" else is_last)(self.var(f[1]), self.fresh())
        if h in ("and", "or"):
            # raw nodes, so that reading back a written formula is exact
            args = tuple(self.formula(x) for x in f[1:])
            if len(args) < 2:
                return args[0] if args else (TT if h == "and" else FF)
            return (MAnd if h == "and" else MOr)(args)
        if h == "not":
            need(1)
            return MNot(self.formula(f[1]))
        if h == "->":
            need(2)
            return MOr((MNot(self.formula(f[1])), self.formula(f[2])))
        if h == "mblock":
            need(3)
            quants = []
            if not isinstance(f[2], list):
                raise ParseError("mblock quantifier list must be a list")
            for q in f[2]:
                if not (isinstance(q, list) and len(q) == 3 and str(q[0]) in ("E", "A")
                        and isinstance(q[2], IvTok)):
                    raise ParseError("bad metric quantifier %r; expected (E t (0,1))" % (q,))
                quants.append((str(q[0]), self.var(q[1]), parse_interval(str(q[2]))))
            return MetricBlock(self.var(f[1]), tuple(quants), self.formula(f[3]))
        if h is not None and n == 1 and h not in _MSO_HEADS:
            return In(h, self.var(f[1]))
        raise ParseError("unknown GQMSO construct %r" % (h,))


def parse_gqmso(text):
    forms = read_all(text)
    if len(forms) != 1:
        raise ParseError("expected exactly one formula, found %d" % len(forms))
    return _GqReader().formula(forms[0])


def serialize_gqmso(phi, header=None):
    def go(x):
        if isinstance(x, MTrue):
            return "true"
        if isinstance(x, MNot):
            if isinstance(x.arg, MTrue):
                return "false"
            return "(not %s)" % go(x.arg)
        if isinstance(x, (MAnd, MOr)):
            return "(%s %s)" % ("and" if isinstance(x, MAnd) else "or",
                                " ".join(go(a) for a in x.args))
        if isinstance(x, Ex):
            return "(exists %s %s)" % (x.x, go(x.body))
        if isinstance(x, ExSO):
            return "(existsSO %s %s)" % (x.X, go(x.body))
        if isinstance(x, Q):
            if not isinstance(x.a, str):
                raise ValueError("only proposition atoms can be written out")
            return "(Q %s %s)" % (x.a, x.x)
        if isinstance(x, Sym):
            return "(sym {%s} %s)" % (",".join(sorted(x.c)), x.x)
        if isinstance(x, Lt):
            return "(< %s %s)" % (x.x, x.y)
        if isinstance(x, Eq):
            return "(= %s %s)" % (x.x, x.y)
        if isinstance(x, In):
            return "(%s %s)" % (x.X, x.x)
        if isinstance(x, MetricBlock):
            qs = " ".join("(%s %s %s)" % (k, v, iv) for k, v, iv in x.quants)
            return "(mblock %s (%s) %s)" % (x.anchor, qs, go(x.body))
        raise TypeError(x)

    lines = ["; " + h for h in (header or [])] + [go(phi)]
    return "\n".join(lines) + "\n"


# ============================================================ dispatch

def formula_kind(text):
    """'gqmso' or 'pnemtl' (plain MTL is a PnEMTL file without modalities)."""
    forms = read_all(text)
    heads = set()
    stack = list(forms)
    while stack:
        f = stack.pop()
        if isinstance(f, list):
            h = head(f)
            if h:
                heads.add(h)
            stack.extend(f)
    gq = {"exists", "forall", "existsSO", "forallSO", "Q", "mblock", "<", "<=", "=",
          "succ", "first", "last"}
    return "gqmso" if heads & gq else "pnemtl"
