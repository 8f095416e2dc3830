"""Command-line front end: ``alttimed <command> ...``.

Exit codes: 0 pass, 1 property or equivalence failure, 2 parse or
validation error, 3 resource cap.
"""
import argparse
import itertools
import random
import re
import sys
from fractions import Fraction

from . import gen
from .ata2w import (accepting_tree, accepts, check_nonadjacent_ata, format_tree,
                    is_island_normal, is_rfl, reset_cycles, to_island_normal_form)
from .automata import DEFAULT_STATE_CAP, ResourceLimit
from .formats import detect_kind, parse_ata, serialize_ata
from .gqmso import (blocks, check_nonadjacent_gqmso, eliminate_all, eval_gqmso, is_af,
                    wellformed_problems)
from .interval_words import normalize, parse_interval_word, serialize_interval_word
from .mso import Ex, free_vars
from .pnemtl import (SCHEDULES, check_nonadjacent_pnemtl, eval_pnemtl, is_mtl, props_of,
                     subformulas)
from .syntax import formula_kind, parse_gqmso, parse_pnemtl, serialize_gqmso, serialize_pnemtl
from .timed_core import INF, ParseError, TimedWord, parse_timed_word, serialize_timed_word

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CAP = 0, 1, 2, 3
KINDS = ("pnemtl", "mtl", "gqmso", "ata")


class UsageError(Exception):
    pass


# ------------------------------------------------------------ loading

class Spec:
    """A parsed input file: kind, object, schedule (formulas) and path."""

    def __init__(self, kind, obj, schedule="verbatim", path=None):
        self.kind, self.obj, self.schedule, self.path = kind, obj, schedule, path

    def props(self):
        if self.kind == "ata":
            return set(self.obj.props)
        if self.kind == "gqmso":
            from .translate import _gq_props
            return _gq_props(self.obj)
        return set(props_of(self.obj))

    def free_var(self):
        if self.kind != "gqmso":
            return None
        fo, _ = free_vars(self.obj)
        if len(fo) > 1:
            raise UsageError("GQMSO input has several free variables: %s" % ", ".join(sorted(fo)))
        return next(iter(fo), None)

    def holds(self, w, i):
        """Semantics at (w, i). ATAs start at head i, formulas are read at i;
        a GQMSO sentence ignores the point."""
        if self.kind == "ata":
            return accepts(self.obj, w, i)
        if self.kind == "gqmso":
            v = self.free_var()
            return eval_gqmso(self.obj, w, {v: i} if v else {})
        return eval_pnemtl(self.obj, w, i, self.schedule)


_SCHED = re.compile(r"^\s*[;#]\s*schedule:\s*(\w+)", re.M)


def read_text(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as f:
        return f.read()


def load_spec(path, schedule=None):
    text = read_text(path)
    m = _SCHED.search(text)
    sched = schedule or (m.group(1) if m else "verbatim")
    if sched not in SCHEDULES:
        raise ParseError("unknown schedule %r" % sched)
    k = detect_kind(text)
    if k == "ata":
        return Spec("ata", parse_ata(text), sched, path)
    if k != "formula":
        raise ParseError("%s: expected an ATA file or a formula, found kind %r" % (path, k))
    if formula_kind(text) == "gqmso":
        return Spec("gqmso", parse_gqmso(text), sched, path)
    phi = parse_pnemtl(text)
    return Spec("mtl" if is_mtl(phi) else "pnemtl", phi, sched, path)


def load_word(path, strict=True):
    text = "\n".join(l.split("#", 1)[0] for l in read_text(path).splitlines())
    return parse_timed_word(text, strict_origin=strict)


def write_out(text, path):
    if path and path != "-":
        with open(path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def parse_caps(text):
    caps = {"states": DEFAULT_STATE_CAP, "qseq": 10 ** 6}
    if not text:
        return caps
    for part in text.split(","):
        if "=" not in part:
            raise UsageError("bad --caps item %r (expected name=value)" % part)
        k, v = part.split("=", 1)
        k = k.strip()
        if k not in caps:
            raise UsageError("unknown cap %r (known: states, qseq)" % k)
        caps[k] = int(v)
    return caps


# ------------------------------------------------------------ eval

def _pn_trace(phi, w, sched):
    seen, lines = set(), []
    for s in sorted(subformulas(phi), key=lambda x: len(repr(x))):
        txt = serialize_pnemtl(s).strip().splitlines()[-1]
        if txt in seen:
            continue
        seen.add(txt)
        row = "".join("1" if eval_pnemtl(s, w, i, sched) else "0" for i in w.dom())
        lines.append("%s  %s" % (row, txt if len(txt) < 70 else txt[:67] + "..."))
    return "\n".join(lines)


def _gq_trace(psi, w, var):
    if var:
        return "holds at positions: %s" % [i for i in w.dom() if eval_gqmso(psi, w, {var: i})]
    if isinstance(psi, Ex):
        wit = [i for i in w.dom() if eval_gqmso(psi.body, w, {psi.x: i})]
        return "witnesses for %s: %s" % (psi.x, wit)
    return "sentence; %d metric blocks" % len(blocks(psi))


def cmd_eval(args):
    spec = load_spec(args.spec, args.schedule)
    w = load_word(args.word, strict=spec.kind != "ata")
    if spec.kind == "ata":
        i = 0 if args.point is None else args.point
        if not 0 <= i <= len(w) + 1:
            raise UsageError("point %d outside 0..%d" % (i, len(w) + 1))
    else:
        i = 1 if args.point is None else args.point
        if i not in w.dom():
            raise UsageError("point %d outside 1..%d" % (i, len(w)))
    v = spec.holds(w, i)
    print("%s (%s at %d)" % ("true" if v else "false", spec.kind, i))
    if args.trace:
        if spec.kind == "ata":
            print(format_tree(accepting_tree(spec.obj, w, i)))
        elif spec.kind == "gqmso":
            print(_gq_trace(spec.obj, w, spec.free_var()))
        else:
            print(_pn_trace(spec.obj, w, spec.schedule))
    return EXIT_OK if v else EXIT_FAIL


def cmd_run_ata(args):
    spec = load_spec(args.spec)
    if spec.kind != "ata":
        raise UsageError("run-ata needs an automaton, got %s" % spec.kind)
    args.schedule = None
    return cmd_eval(args)


# ------------------------------------------------------------ translate

def translate_chain(spec, target, caps):
    """List of Specs from the source to the target (every stage kept so that
    verification can compare all of them)."""
    from . import translate as T
    src = "pnemtl" if spec.kind == "mtl" else spec.kind
    dst = "pnemtl" if target == "mtl" else target
    cap = caps["states"]
    stages = [spec]

    def step(cur, to):
        if cur.kind in ("pnemtl", "mtl") and to == "ata":
            return Spec("ata", T.pnemtl_to_ata(cur.obj, cur.schedule))
        if cur.kind in ("pnemtl", "mtl") and to == "gqmso":
            return Spec("gqmso", T.pnemtl_to_gqmso(cur.obj, cur.schedule), cur.schedule)
        if cur.kind == "ata" and to == "pnemtl":
            if not is_rfl(cur.obj):
                raise UsageError("automaton is not reset-loop free; reset cycles through "
                                 "islands: %s" % reset_cycles(cur.obj))
            return Spec("pnemtl", T.ata_to_pnemtl(cur.obj, cap), "inclusive")
        if cur.kind == "gqmso" and to == "pnemtl":
            v = cur.free_var() or "t"
            return Spec("pnemtl", T.gqmso_to_pnemtl(cur.obj, v, cap=cap), "inclusive")
        raise UsageError("no direct translation %s -> %s" % (cur.kind, to))

    if src == dst:
        raise UsageError("source and target are both %s" % src)
    route = [dst] if "pnemtl" in (src, dst) else ["pnemtl", dst]
    for to in route:
        stages.append(step(stages[-1], to))
    if target == "mtl" and not is_mtl(stages[-1].obj):
        raise UsageError("result uses automaton modalities; it is not an MTL formula")
    if target == "mtl":
        stages[-1].kind = "mtl"
    return stages


def serialize_spec(spec, header):
    if spec.kind == "ata":
        return serialize_ata(spec.obj, header)
    header = header + ["schedule: %s" % spec.schedule]
    if spec.kind == "gqmso":
        return serialize_gqmso(spec.obj, header)
    return serialize_pnemtl(spec.obj, header)


def verify_stages(stages, n, seed, max_len=5, grid=4):
    """Differential check of every stage against the source on n sampled
    pointed words; returns None or (word, point, verdicts)."""
    from .fuzz import minimize
    props = set()
    for s in stages:
        props |= s.props()
    props = sorted(props) or ["p"]
    rng = random.Random(seed)

    def verdicts(w, i):
        return [s.holds(w, i) for s in stages]

    def bad(w, i):
        return len(set(verdicts(w, i))) > 1

    for _ in range(n):
        w = gen.random_word(rng, props, max_len=max_len, den=grid, span=4)
        i = rng.choice(list(w.dom()))
        if bad(w, i):
            w, i = minimize(w, i, bad)
            return w, i, verdicts(w, i)
    return None


def cmd_translate(args):
    caps = parse_caps(args.caps)
    spec = load_spec(args.src, args.schedule)
    if args.from_ and args.from_ != spec.kind and not (args.from_ == "pnemtl" and spec.kind == "mtl"):
        raise UsageError("--from %s but the file holds %s" % (args.from_, spec.kind))
    stages = translate_chain(spec, args.to, caps)
    out = stages[-1]
    header = ["source: %s (%s)" % (args.src, spec.kind),
              "route: %s" % " -> ".join(s.kind for s in stages)]
    if spec.kind != "ata":
        header.append("source schedule: %s" % spec.schedule)
    write_out(serialize_spec(out, header), args.output)
    if args.verify:
        res = verify_stages(stages, args.verify, args.seed, args.max_len, args.grid)
        if res is not None:
            w, i, vs = res
            print("verify: counterexample %s at %d: %s" % (
                serialize_timed_word(w), i,
                ", ".join("%s=%s" % (s.kind, v) for s, v in zip(stages, vs))), file=sys.stderr)
            return EXIT_FAIL
        print("verify: %d samples agree across %s" % (
            args.verify, " -> ".join(s.kind for s in stages)), file=sys.stderr)
    return EXIT_OK


# ------------------------------------------------------------ check

def _iv_pairs(report):
    return "; ".join("%s vs %s" % w for w in report.witnesses) if report.witnesses else ""


def cmd_check(args):
    spec = load_spec(args.spec)
    prop, k = args.property, spec.kind
    ok, detail = None, ""
    if prop == "nonadjacent":
        if k == "ata":
            rep = check_nonadjacent_ata(spec.obj)
        elif k == "gqmso":
            rep = check_nonadjacent_gqmso(spec.obj)
        else:
            rep = check_nonadjacent_pnemtl(spec.obj)
        ok, detail = rep.verdict, _iv_pairs(rep)
    elif prop in ("rfl", "island-normal"):
        if k != "ata":
            raise UsageError("%s is a property of automata, got %s" % (prop, k))
        if prop == "rfl":
            ok = is_rfl(spec.obj)
            detail = "" if ok else "reset cycles: %s" % reset_cycles(spec.obj)
        else:
            ok = is_island_normal(spec.obj)
    elif prop == "wellformed":
        if k != "gqmso":
            raise UsageError("wellformed applies to GQMSO formulas, got %s" % k)
        probs = wellformed_problems(spec.obj)
        ok, detail = not probs, "; ".join(probs)
    elif prop == "af":
        if k != "gqmso":
            raise UsageError("af applies to GQMSO formulas, got %s" % k)
        ok = is_af(spec.obj)
        bad = [b.anchor for b in blocks(spec.obj) if any(q == "A" for q, _, _ in b.quants)]
        detail = "" if ok else "universal metric quantifiers in blocks at %s" % ", ".join(bad)
    print("%s: %s" % (prop, "pass" if ok else "fail"))
    if detail:
        print("  " + detail)
    return EXIT_OK if ok else EXIT_FAIL


# ------------------------------------------------------------ normalize

def cmd_normalize(args):
    text = read_text(args.spec)
    k = detect_kind(text)
    if k == "ata":
        A = to_island_normal_form(parse_ata(text))
        write_out(serialize_ata(A, ["island normal form of %s" % args.spec]), args.output)
    elif k == "formula":
        spec = load_spec(args.spec)
        if spec.kind != "gqmso":
            raise UsageError("normalize works on interval words, automata and GQMSO formulas")
        out = Spec("gqmso", eliminate_all(spec.obj), spec.schedule)
        write_out(serialize_spec(out, ["alternation-free form of %s" % args.spec]), args.output)
    else:
        body = "\n".join(l.split("#", 1)[0] for l in text.splitlines())
        kappa = parse_interval_word(" ".join(body.split()))
        write_out(serialize_interval_word(normalize(kappa)) + "\n", args.output)
    return EXIT_OK


# ------------------------------------------------------------ fuzz

def cmd_fuzz(args):
    from . import fuzz
    if args.replay:
        still = fuzz.replay(args.replay)
        print("replay %s: %s" % (args.replay, "still disagrees" if still else "agrees now"))
        return EXIT_FAIL if still else EXIT_OK
    cfg = fuzz.FuzzConfig(seed=args.seed, trials=args.trials, words=args.words,
                          max_len=args.max_len, den=args.grid, workers=args.workers)
    if args.mutants:
        report = fuzz.kill_report(cfg)
        for m, killed, how in report:
            print("%-24s %-13s %-7s %s" % (m.name, m.pair, "killed" if killed else "ALIVE", how))
        rate = fuzz.kill_rate(report)
        print("kill rate: %d/%d = %.0f%%" % (sum(k for _, k, _ in report), len(report), 100 * rate))
        return EXIT_OK if rate >= 0.9 else EXIT_FAIL
    pairs = args.pairs.split(",") if args.pairs else list(fuzz.PAIRS)
    failed = False
    for p in pairs:
        if p not in fuzz.PAIRS:
            raise UsageError("unknown pair %r (known: %s)" % (p, ", ".join(fuzz.PAIRS)))
        v = fuzz.fuzz_pair(p, cfg)
        line = "%-13s %d trials, %d samples: " % (p, v.trials, v.samples)
        if v.ok:
            print(line + "no counterexample")
        else:
            failed = True
            cex = v.counterexample
            print(line + "COUNTEREXAMPLE %s at point %d (expected %s, got %s)" % (
                cex.word, cex.point, cex.expected, cex.got))
            if args.out:
                print("  saved to %s" % fuzz.persist(cex, args.out))
        for note in v.notes:
            print("  note: " + note)
    return EXIT_FAIL if failed else EXIT_OK


# ------------------------------------------------------------ search

def _max_constant(spec):
    vals = []
    if spec.kind == "ata":
        ivs = spec.obj.guards()
    elif spec.kind == "gqmso":
        ivs = [iv for b in blocks(spec.obj) for _, _, iv in b.quants]
    else:
        from .pnemtl import modality_interval_sets
        ivs = [iv for s in modality_interval_sets(spec.obj) for iv in s]
        ivs += [x.interval for x in subformulas(spec.obj) if hasattr(x, "interval")]
    for iv in ivs:
        for e in (iv.lo, iv.hi):
            if abs(e) != INF:
                vals.append(abs(e))
    return int(max(vals, default=0))


def _monotone(grid_max, n, first_zero):
    starts = [0] if first_zero else range(grid_max + 1)
    for s in starts:
        for rest in itertools.combinations_with_replacement(range(s, grid_max + 1), n - 1):
            yield (s,) + rest


def search_witness(spec, max_len, grid, point=None, qseq_cap=10 ** 6, props=None):
    """First word (and point) satisfying spec among words of length <=
    max_len with timestamps on the 1/grid grid up to max constant + 1, or
    None. A None result says nothing about emptiness."""
    from .ata2w import nonempty_letters
    props = sorted(props or spec.props()) or ["p"]
    letters = nonempty_letters(props)
    top = (_max_constant(spec) + 1) * grid
    ata = spec.kind == "ata"
    visited = 0
    for n in range(1, max_len + 1):
        for ts in _monotone(top, n, first_zero=not ata):
            visited += 1
            if visited > qseq_cap:
                raise ResourceLimit("search visited more than %d timestamp sequences" % qseq_cap)
            times = [Fraction(t, grid) for t in ts]
            for ls in itertools.product(letters, repeat=n):
                w = TimedWord(list(zip(ls, times)), strict_origin=not ata)
                if point is not None:
                    pts = [point] if (ata and 0 <= point <= n + 1) or point in w.dom() else []
                else:
                    pts = [0] if ata else list(w.dom())
                for i in pts:
                    if spec.holds(w, i):
                        return w, i
    return None


def cmd_search(args):
    caps = parse_caps(args.caps)
    spec = load_spec(args.spec, args.schedule)
    props = [p.strip() for p in args.props.split(",")] if args.props else None
    res = search_witness(spec, args.max_len, args.grid, args.point, caps["qseq"], props)
    if res is None:
        print("none within bounds (length <= %d, grid 1/%d); this is not an emptiness proof"
              % (args.max_len, args.grid))
        return EXIT_FAIL
    w, i = res
    print("witness: %s  (point %d)" % (serialize_timed_word(w), i))
    return EXIT_OK


# ------------------------------------------------------------ main

def build_parser():
    p = argparse.ArgumentParser(prog="alttimed", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, schedule=True):
        if schedule:
            sp.add_argument("--schedule", choices=SCHEDULES,
                            help="PnEMTL reading schedule (default: file header, else verbatim)")
        sp.add_argument("--caps", help="resource caps, e.g. states=100000,qseq=1000000")

    e = sub.add_parser("eval", help="evaluate a formula or automaton on a timed word")
    e.add_argument("spec")
    e.add_argument("word")
    e.add_argument("--point", type=int)
    e.add_argument("--trace", action="store_true")
    common(e)
    e.set_defaults(fn=cmd_eval)

    r = sub.add_parser("run-ata", help="run an automaton on a timed word")
    r.add_argument("spec")
    r.add_argument("word")
    r.add_argument("--point", type=int)
    r.add_argument("--trace", action="store_true")
    common(r, schedule=False)
    r.set_defaults(fn=cmd_run_ata)

    t = sub.add_parser("translate", help="translate between formalisms")
    t.add_argument("src")
    t.add_argument("--from", dest="from_", choices=KINDS)
    t.add_argument("--to", required=True, choices=KINDS)
    t.add_argument("--verify", type=int, default=0, metavar="N")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--max-len", type=int, default=5)
    t.add_argument("--grid", type=int, default=4)
    t.add_argument("-o", "--output")
    common(t)
    t.set_defaults(fn=cmd_translate)

    c = sub.add_parser("check", help="structural checks")
    c.add_argument("spec")
    c.add_argument("property", choices=["nonadjacent", "rfl", "island-normal", "wellformed", "af"])
    common(c, schedule=False)
    c.set_defaults(fn=cmd_check)

    n = sub.add_parser("normalize", help="normal forms: interval word, island, alternation-free")
    n.add_argument("spec")
    n.add_argument("-o", "--output")
    common(n, schedule=False)
    n.set_defaults(fn=cmd_normalize)

    f = sub.add_parser("fuzz", help="differential fuzzing of the translations")
    f.add_argument("--pairs", help="comma list of: pnemtl-ata, ata-pnemtl, pnemtl-gqmso, "
                                   "gqmso-pnemtl, eliminate")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--trials", type=int, default=20)
    f.add_argument("--words", type=int, default=6)
    f.add_argument("--max-len", type=int, default=5)
    f.add_argument("--grid", type=int, default=4)
    f.add_argument("--workers", type=int, default=1)
    f.add_argument("--out", help="directory for counterexample files")
    f.add_argument("--mutants", action="store_true", help="run the seeded-mutant kill report")
    f.add_argument("--replay", help="re-check a saved counterexample")
    common(f, schedule=False)
    f.set_defaults(fn=cmd_fuzz)

    s = sub.add_parser("search", help="bounded witness search (semi-decision only)")
    s.add_argument("spec")
    s.add_argument("--max-len", type=int, default=4)
    s.add_argument("--grid", type=int, default=4)
    s.add_argument("--point", type=int)
    s.add_argument("--props", help="alphabet, e.g. a,b (default: propositions of the input)")
    common(s)
    s.set_defaults(fn=cmd_search)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ResourceLimit as e:
        print("resource cap: %s" % e, file=sys.stderr)
        return EXIT_CAP
    except (ParseError, UsageError, ValueError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
