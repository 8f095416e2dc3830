import pathlib
import subprocess
import sys

from alttimed.cli import EXIT_CAP, EXIT_FAIL, EXIT_OK, EXIT_PARSE, main, parse_caps
from alttimed.formats import parse_ata
from alttimed.syntax import parse_pnemtl

C = pathlib.Path(__file__).resolve().parent.parent / "corpus"


def run(capsys, *argv):
    rc = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return rc, out, err


def test_eval_formulas(capsys):
    rc, out, _ = run(capsys, "eval", C / "ex4.pnemtl", C / "ex4.tw")
    assert rc == EXIT_OK and out.startswith("true")
    rc, out, _ = run(capsys, "eval", C / "ex3_insterr_na.gqmso", C / "insterr_01.tw")
    assert rc == EXIT_FAIL and out.startswith("false")
    rc, out, _ = run(capsys, "eval", C / "pairE.pnemtl", C / "ex4.tw", "--point", 2, "--trace")
    assert rc in (EXIT_OK, EXIT_FAIL) and len(out.splitlines()) > 1


def test_run_automaton(capsys):
    rc, out, _ = run(capsys, "run-ata", C / "insterr.ata", C / "insterr_00.tw")
    assert rc == EXIT_OK
    rc, out, _ = run(capsys, "run-ata", C / "anbn.ata", C / "anbn_00.tw", "--trace")
    assert rc == EXIT_OK and "(q0, 0, 0)" in out


def test_errors_give_exit_two(capsys, tmp_path):
    rc, _, err = run(capsys, "eval", tmp_path / "missing.pnemtl", C / "ex4.tw")
    assert rc == EXIT_PARSE and err.startswith("error:")
    rc, _, err = run(capsys, "eval", C / "ex4.pnemtl", C / "ex4.tw", "--point", 9)
    assert rc == EXIT_PARSE and "outside" in err
    bad = tmp_path / "bad.pnemtl"
    bad.write_text("(U (0,1) a")
    assert run(capsys, "eval", bad, C / "ex4.tw")[0] == EXIT_PARSE
    assert run(capsys, "fuzz", "--pairs", "bogus")[0] == EXIT_PARSE
    assert run(capsys, "translate", C / "ex4.pnemtl", "--to", "ata", "--caps", "nope=1")[0] == EXIT_PARSE


def test_caps(capsys):
    assert parse_caps("states=5")["states"] == 5
    rc, _, err = run(capsys, "translate", C / "pairE.gqmso", "--to", "pnemtl", "--caps", "states=5")
    assert rc == EXIT_CAP and "resource cap" in err


def test_translate_with_verification(capsys, tmp_path):
    out = tmp_path / "ex4.ata"
    rc, _, err = run(capsys, "translate", C / "ex4.pnemtl", "--to", "ata", "--verify", 10,
                     "-o", out)
    assert rc == EXIT_OK and "10 samples agree" in err
    A = parse_ata(out.read_text())
    assert set(A.props) == {"a", "b"}
    rc, text, err = run(capsys, "translate", C / "insterr.ata", "--to", "pnemtl", "--verify", 5)
    assert rc == EXIT_OK and "agree" in err
    parse_pnemtl(text)


def test_translate_rejects_reset_loop(capsys, tmp_path):
    src = tmp_path / "loop.ata"
    src.write_text("kind: ata\nalphabet: a\ndir: q = fwd\ninitial: q\n"
                   "trans: (q, a) -> x.q\ntrans: (q, -|) -> TOP\n")
    rc, _, err = run(capsys, "translate", src, "--to", "pnemtl")
    assert rc == EXIT_PARSE and "reset" in err
    rc, out, _ = run(capsys, "check", src, "rfl")
    assert rc == EXIT_FAIL


def test_checks(capsys):
    rc, out, _ = run(capsys, "check", C / "ex4.pnemtl", "nonadjacent")
    assert rc == EXIT_FAIL and "(2,3) vs (1,2)" in out
    assert run(capsys, "check", C / "insterr.ata", "rfl")[0] == EXIT_OK
    assert run(capsys, "check", C / "insterr.ata", "nonadjacent")[0] == EXIT_OK
    assert run(capsys, "check", C / "ex2_even_b.gqmso", "wellformed")[0] == EXIT_OK
    assert run(capsys, "check", C / "ex3_insterr.gqmso", "af")[0] == EXIT_OK


def test_normalize(capsys):
    rc, out, _ = run(capsys, "normalize", C / "ex1_kappa.iw")
    assert rc == EXIT_OK and out.strip() == "a,b|(-1,0) ; b|(-1,0) ; a|anch ; b|[2,3]"
    rc, out, _ = run(capsys, "normalize", C / "insterr.ata")
    assert rc == EXIT_OK and "kind: ata" in out
    rc, out, _ = run(capsys, "normalize", C / "ex3_insterr.gqmso")
    assert rc == EXIT_OK and "mblock" in out


def test_search(capsys, tmp_path):
    rc, out, _ = run(capsys, "search", C / "ex4.pnemtl", "--max-len", 2, "--grid", 2)
    assert rc == EXIT_FAIL and "none within bounds" in out and "not an emptiness proof" in out
    f = tmp_path / "u.mtl"
    f.write_text("(U (1,2) a b)")
    rc, out, _ = run(capsys, "search", f, "--max-len", 2, "--grid", 2)
    assert rc == EXIT_OK and out.startswith("witness:")


def test_fuzz_command(capsys, tmp_path):
    rc, out, _ = run(capsys, "fuzz", "--pairs", "pnemtl-ata,eliminate", "--trials", 2,
                     "--words", 3, "--out", tmp_path)
    assert rc == EXIT_OK and out.count("no counterexample") == 2


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "alttimed.cli", "check", str(C / "insterr.ata"), "rfl"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "rfl: pass" in r.stdout
