"""Differential fuzzing of the translations, counterexample minimization
and the seeded-mutant kill report."""
import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import gen
from .ata2w import accepts
from .automata import ResourceLimit
from .formats import serialize_ata
from .gqmso import eval_gqmso, is_af
from .pnemtl import SCHEDULES, eval_pnemtl
from .syntax import serialize_gqmso, serialize_pnemtl
from .timed_core import TimedWord, parse_timed_word, serialize_timed_word

PAIRS = ("pnemtl-ata", "ata-pnemtl", "pnemtl-gqmso", "gqmso-pnemtl", "eliminate")
PROPS = ("a", "b")


@dataclass
class FuzzConfig:
    seed: int = 0
    trials: int = 20
    words: int = 6
    min_len: int = 1
    max_len: int = 5
    den: int = 4
    span: int = 4
    depth: int = 2
    max_k: int = 2
    workers: int = 1

    def __post_init__(self):
        for k in ("trials", "words", "min_len", "max_len", "den", "span", "depth", "max_k", "workers"):
            if getattr(self, k) < 1:
                raise ValueError("%s must be positive" % k)
        if self.min_len > self.max_len:
            raise ValueError("min_len exceeds max_len")


@dataclass
class Counterexample:
    pair: str
    trial: int
    kind: str
    spec: str
    schedule: str
    word: str
    point: int
    expected: bool
    got: bool
    mutant: str = None


@dataclass
class EquivalenceVerdict:
    pair: str
    samples: int = 0
    trials: int = 0
    counterexample: Counterexample = None
    crashed: str = None
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return self.counterexample is None and self.crashed is None


# ------------------------------------------------------------ one trial

def _trial_rng(seed, pair, idx):
    return random.Random("%s/%s/%d" % (seed, pair, idx))


def make_case(pair, rng, cfg, T, G):
    """(kind, spec, schedule, lhs, rhs): lhs is the reference evaluator and
    rhs the evaluator of the translated object, both taking (word, point)."""
    if pair in ("pnemtl-ata", "pnemtl-gqmso"):
        phi = gen.random_pnemtl(rng, PROPS, depth=cfg.depth, max_k=cfg.max_k)
        sched = rng.choice(SCHEDULES)
        lhs = lambda w, i: eval_pnemtl(phi, w, i, sched)
        if pair == "pnemtl-ata":
            A = T.pnemtl_to_ata(phi, sched, props=PROPS)
            rhs = lambda w, i: accepts(A, w, i)
        else:
            psi = T.pnemtl_to_gqmso(phi, sched)
            rhs = lambda w, i: eval_gqmso(psi, w, {"t": i})
        return "pnemtl", phi, sched, lhs, rhs
    if pair == "ata-pnemtl":
        A = gen.random_ata(rng, PROPS)
        phi = T.ata_to_pnemtl(A)
        return ("ata", A, "inclusive", lambda w, i: accepts(A, w, i),
                lambda w, i: eval_pnemtl(phi, w, i, "inclusive"))
    if pair == "gqmso-pnemtl":
        # universal blocks are eliminated first, which multiplies the marks;
        # keep those to a single quantifier
        universal = rng.random() < 0.25
        psi = gen.random_block(rng, PROPS, max_q=1 if universal else 2,
                               shapes=gen.interval_shapes(), universal=universal,
                               nest=0.0 if universal else 0.2)
        phi = T.gqmso_to_pnemtl(psi, props=PROPS)
        return ("gqmso", psi, "inclusive", lambda w, i: eval_gqmso(psi, w, {"t": i}),
                lambda w, i: eval_pnemtl(phi, w, i, "inclusive"))
    if pair == "eliminate":
        psi = gen.random_block(rng, PROPS, max_q=3, shapes=gen.interval_shapes())
        out = G.eliminate_universal_metric(psi)
        if not is_af(out):
            raise AssertionError("elimination left a universal metric quantifier")
        return ("gqmso", psi, "inclusive", lambda w, i: eval_gqmso(psi, w, {"t": i}),
                lambda w, i: eval_gqmso(out, w, {"t": i}))
    raise ValueError("unknown pair %r" % pair)


def serialize_spec(kind, spec, schedule):
    header = ["schedule: %s" % schedule]
    if kind == "pnemtl":
        return serialize_pnemtl(spec, header)
    if kind == "ata":
        return serialize_ata(spec, header)
    return serialize_gqmso(spec, header)


def _shift(letters):
    t0 = letters[0][1]
    return TimedWord([(p, t - t0) for p, t in letters])


def minimize(w, i, bad):
    """Greedy deletion of positions and of propositions from letters while
    ``bad(word, point)`` stays true."""
    changed = True
    while changed:
        changed = False
        for p in range(len(w), 0, -1):
            if p == i or len(w) == 1:
                continue
            letters = [x for k, x in enumerate(w.letters, 1) if k != p]
            w2, i2 = _shift(letters), i - (p < i)
            if bad(w2, i2):
                w, i, changed = w2, i2, True
        for p in w.dom():
            for prop in sorted(w.props(p)):
                if len(w.props(p)) == 1:
                    break
                letters = list(w.letters)
                letters[p - 1] = (w.props(p) - {prop}, w.ts(p))
                w2 = TimedWord(letters)
                if bad(w2, i):
                    w, changed = w2, True
    return w, i


def run_trial(pair, cfg, idx, mutant=None):
    """Counterexample (or None) and sample count for one trial."""
    from .mutants import modules_for
    T, G = modules_for(mutant)
    rng = _trial_rng(cfg.seed, pair, idx)
    try:
        kind, spec, sched, lhs, rhs = make_case(pair, rng, cfg, T, G)
    except ResourceLimit as e:
        return "skip: %s" % e, 0
    except Exception as e:
        if mutant is None:
            raise
        return "crash: %s: %s" % (type(e).__name__, e), 0
    n = 0
    for _ in range(cfg.words):
        w = gen.random_word(rng, PROPS, max_len=cfg.max_len, min_len=cfg.min_len,
                            den=cfg.den, span=cfg.span)
        for i in w.dom():
            n += 1
            try:
                a, b = lhs(w, i), rhs(w, i)
            except ResourceLimit:
                raise
            except Exception as e:
                if mutant is None:
                    raise
                return "crash: %s: %s" % (type(e).__name__, e), n

            if a != b:
                def bad(w2, i2):
                    try:
                        return lhs(w2, i2) != rhs(w2, i2)
                    except Exception:
                        return False
                w, i = minimize(w, i, bad)
                a, b = lhs(w, i), rhs(w, i)
                cex = Counterexample(pair, idx, kind, serialize_spec(kind, spec, sched), sched,
                                     serialize_timed_word(w), i, a, b, mutant)
                return cex, n
    return None, n


def _job(args):
    return run_trial(*args)


def fuzz_pair(pair, cfg, mutant=None, stop_early=True):
    """Run cfg.trials trials; work is split by trial index so the verdict
    depends only on (seed, config) and not on the worker count."""
    v = EquivalenceVerdict(pair)
    jobs = [(pair, cfg, idx, mutant) for idx in range(cfg.trials)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            results = list(ex.map(_job, jobs))
    else:
        results = []
        for j in jobs:
            results.append(_job(j))
            res = results[-1][0]
            if stop_early and res is not None and not (isinstance(res, str) and res.startswith("skip")):
                break
    for idx, (res, n) in enumerate(results):
        v.trials += 1
        v.samples += n
        if isinstance(res, str) and res.startswith("skip"):
            v.notes.append("trial %d %s" % (idx, res))
            continue
        if isinstance(res, str):
            v.crashed = res
            break
        if res is not None:
            v.counterexample = res
            break
    return v


def persist(cex, directory):
    os.makedirs(directory, exist_ok=True)
    name = "cex-%s-%s-%d.json" % (cex.pair, cex.mutant or "real", cex.trial)
    path = os.path.join(directory, name)
    with open(path, "w") as f:
        json.dump(asdict(cex), f, indent=1)
    return path


def replay(path):
    """Re-check a persisted counterexample; True if it still disagrees."""
    from .formats import parse_ata
    from .mutants import modules_for
    from .syntax import parse_gqmso, parse_pnemtl
    with open(path) as f:
        d = json.load(f)
    T, G = modules_for(d.get("mutant"))
    w = parse_timed_word(d["word"])
    i = d["point"]
    pair = d["pair"]
    if pair == "pnemtl-ata":
        phi = parse_pnemtl(d["spec"])
        return eval_pnemtl(phi, w, i, d["schedule"]) != accepts(T.pnemtl_to_ata(phi, d["schedule"], props=PROPS), w, i)
    if pair == "pnemtl-gqmso":
        phi = parse_pnemtl(d["spec"])
        return eval_pnemtl(phi, w, i, d["schedule"]) != \
            eval_gqmso(T.pnemtl_to_gqmso(phi, d["schedule"]), w, {"t": i})
    if pair == "ata-pnemtl":
        A = parse_ata(d["spec"])
        return accepts(A, w, i) != eval_pnemtl(T.ata_to_pnemtl(A), w, i, "inclusive")
    psi = parse_gqmso(d["spec"])
    if pair == "gqmso-pnemtl":
        return eval_gqmso(psi, w, {"t": i}) != eval_pnemtl(T.gqmso_to_pnemtl(psi, props=PROPS), w, i, "inclusive")
    return eval_gqmso(psi, w, {"t": i}) != eval_gqmso(G.eliminate_universal_metric(psi), w, {"t": i})


# ------------------------------------------------------------ mutants

def kill_report(cfg, names=None):
    """[(mutant, killed, how)] with each mutant fuzzed on its own pair."""
    from .mutants import MUTANTS
    out = []
    for m in MUTANTS:
        if names and m.name not in names:
            continue
        v = fuzz_pair(m.pair, cfg, mutant=m.name)
        if v.counterexample is not None:
            how = "counterexample at trial %d: %s (point %d)" % (
                v.counterexample.trial, v.counterexample.word, v.counterexample.point)
        elif v.crashed:
            how = v.crashed
        else:
            how = "survived %d samples" % v.samples
        out.append((m, not v.ok, how))
    return out


def kill_rate(report):
    return sum(1 for _, k, _ in report if k) / max(1, len(report))
