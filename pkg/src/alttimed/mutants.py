"""Seeded translation bugs for mutation testing.

A mutant is a one-snippet source edit of ``translate`` or ``gqmso``. The
edited module is compiled into a fresh namespace, so the real modules are
never touched. Public classes are rebound to the originals so that
formulas built by a mutant still work with the ordinary evaluators.
"""
import importlib
import inspect
import types
from dataclasses import dataclass


@dataclass(frozen=True)
class Mutant:
    name: str
    pair: str          # fuzz pair that exercises it
    module: str        # "translate" or "gqmso"
    old: str
    new: str
    note: str = ""


MUTANTS = [
    # pnemtl -> ata
    Mutant("ata-past-guard-sign", "pnemtl-ata", "translate",
           "g = phi.intervals[j] if fwd else phi.intervals[j].neg()",
           "g = phi.intervals[j]",
           "P hand-off guard not mirrored"),
    Mutant("ata-no-end-accept", "pnemtl-ata", "translate",
           "if j == k and q is not INIT and q in auts[k].finals and not fresh:",
           "if False:",
           "last segment never accepted at the endmarker"),
    Mutant("ata-drop-witness", "pnemtl-ata", "translate",
           "dnf_or([Dnf.atom(state(j, t)) for t in sorted(qs, key=repr)]) & wit)",
           "dnf_or([Dnf.atom(state(j, t)) for t in sorted(qs, key=repr)]))",
           "argument witnesses dropped inside a segment"),
    Mutant("ata-and-as-or", "pnemtl-ata", "translate",
           "if isinstance(phi, Or):\n                body = dnf_or(lits)",
           "if True:\n                body = dnf_or(lits)",
           "conjunction split as a disjunction"),
    # ata -> pnemtl
    Mutant("abs-anchor-guard", "ata-pnemtl", "translate",
           "formula(q, sigma, lambda g: interval_contains(g, 0))",
           "formula(q, sigma, lambda g: True)",
           "anchor letter ignores guards"),
    Mutant("abs-endmarker-guard", "ata-pnemtl", "translate",
           "out = out | (f if g == FULL else f & Dnf.atom(chk[g]))",
           "out = out | f",
           "endmarker guards not checked"),
    Mutant("past-marks-unmirrored", "ata-pnemtl", "translate",
           "K2 = None if K is None else K.neg()",
           "K2 = K",
           "past marks keep their sign"),
    # pnemtl -> gqmso
    Mutant("gq-past-interval-sign", "pnemtl-gqmso", "translate",
           "quants = tuple((\"E\", ts[w + 1], iv if fut else iv.neg())",
           "quants = tuple((\"E\", ts[w + 1], iv)",
           "P block intervals not mirrored"),
    Mutant("gq-past-order", "pnemtl-gqmso", "translate",
           "return Lt(u, v) if fut else Lt(v, u)",
           "return Lt(u, v)",
           "checkpoint order always forward"),
    Mutant("gq-negative-letters", "pnemtl-gqmso", "translate",
           "mand([self.at(s, y) if b in c else mnot(self.at(s, y))",
           "mand([self.at(s, y) if b in c else TT",
           "absent arguments not required false"),
    Mutant("gq-until-sign", "pnemtl-gqmso", "translate",
           "iv = phi.interval if fut else phi.interval.neg()",
           "iv = phi.interval",
           "Since interval not mirrored"),
    # gqmso -> pnemtl
    Mutant("pn-anchor-mark", "gqmso-pnemtl", "translate",
           "if interval_contains(iv, 0):",
           "if False:",
           "anchor position never satisfies a block interval"),
    Mutant("pn-drop-marks", "gqmso-pnemtl", "translate",
           "m = Q(iv, v)",
           "m = FF",
           "interval marks replaced by false"),
    Mutant("pn-witness-anchor", "gqmso-pnemtl", "translate",
           "return Q(name, psi.anchor)",
           "return TT",
           "nested blocks replaced by true"),
    # universal elimination
    Mutant("elim-empty-case", "eliminate", "gqmso",
           "inner = TT if kind == \"A\" else FF",
           "inner = FF if kind == \"A\" else TT",
           "empty-window case has the wrong truth value"),
    Mutant("elim-left-piece", "eliminate", "gqmso",
           "return Interval(-INF, iv.lo, True, not iv.lo_open)",
           "return Interval(-INF, iv.lo, True, iv.lo_open)",
           "left neighbour interval has the wrong openness"),
    Mutant("elim-range-strict", "eliminate", "gqmso",
           "rng = mand([le(f, var), le(var, l)])",
           "rng = mand([Lt(f, var), le(var, l)])",
           "first window position excluded"),
    Mutant("elim-no-empty", "eliminate", "gqmso",
           "opts = [(\"empty\", empty, None)]",
           "opts = []",
           "empty-window case dropped"),
]

BY_NAME = {m.name: m for m in MUTANTS}
_cache = {}


def load(name):
    """Module namespace of the mutated module named by ``name``."""
    if name in _cache:
        return _cache[name]
    m = BY_NAME[name]
    orig = importlib.import_module("alttimed." + m.module)
    src = inspect.getsource(orig)
    if src.count(m.old) != 1:
        raise RuntimeError("mutant %s: snippet found %d times" % (name, src.count(m.old)))
    mod = types.ModuleType("alttimed._mutant_" + m.module)
    mod.__package__ = "alttimed"
    mod.__file__ = orig.__file__
    exec(compile(src.replace(m.old, m.new), "<mutant %s>" % name, "exec"), mod.__dict__)
    for k, v in vars(orig).items():
        # public data classes stay shared; private builders keep the mutation
        if isinstance(v, type) and v.__module__ == orig.__name__ and not k.startswith("_"):
            setattr(mod, k, v)
    _cache[name] = mod
    return mod


def modules_for(name):
    """(translate, gqmso) namespaces with the mutant applied (or the originals)."""
    from . import gqmso, translate
    if name is None:
        return translate, gqmso
    mod = load(name)
    if BY_NAME[name].module == "translate":
        return mod, gqmso
    return translate, mod
