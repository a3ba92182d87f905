import json

import pytest

from conepda.cli import FAILED, OK, UNKNOWN, USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_examples(capsys, tmp_path):
    code, out, _ = run(capsys, "examples", "order-two", "--dot", str(tmp_path / "f1.dot"))
    assert code == OK and "A2" in out
    assert (tmp_path / "f1.dot").read_text().startswith("digraph")
    code, out, _ = run(capsys, "examples", "triangulation")
    assert code == OK and "diagonal 3 T3 5" in out
    assert run(capsys, "examples", "nothing")[0] == USAGE


def test_usage_errors(capsys):
    assert run(capsys)[0] == USAGE
    assert run(capsys, "cones")[0] == USAGE
    assert run(capsys, "cones", "--backend", "rule:line", "--graph", "x")[0] == USAGE
    assert run(capsys, "cones", "--backend", "rule:line", "--radius", "0")[0] == USAGE
    assert run(capsys, "cones", "--backend", "nope")[0] == USAGE


def test_cones(capsys, tmp_path):
    code, out, _ = run(capsys, "cones", "--backend", "rule:line", "--emit-table", str(tmp_path / "t.txt"))
    assert code == OK and "CERTIFIED" in out and "d matrix" in out
    code, out, _ = run(capsys, "cones", "--backend", "rule:z2", "--radius", "5")
    assert code == OK and "UNSTABLE" in out


def test_build_and_run_pda(capsys, tmp_path):
    pda = tmp_path / "line.pda"
    code, out, _ = run(capsys, "build-pda", "--backend", "rule:line", "--out", str(pda), "--verify", "8")
    assert code == OK and "PASS" in out
    assert run(capsys, "run-pda", "--pda", str(pda), "--word", "a a^ a^ a")[1].strip() == "accept"
    assert run(capsys, "run-pda", "--pda", str(pda), "--word", "a a")[1].strip() == "reject"
    code, out, _ = run(capsys, "run-pda", "--pda", str(pda), "--word", "a a a a^ a^ a^", "--max-stack", "1")
    assert (code, out.strip()) == (UNKNOWN, "unknown")


def test_build_pda_not_certified(capsys):
    code, out, _ = run(capsys, "build-pda", "--backend", "rule:x_w", "--radius", "6")
    assert code == UNKNOWN and "no automaton" in out


def test_translate_lift_and_grammar(capsys, tmp_path):
    pda = tmp_path / "line.pda"
    run(capsys, "build-pda", "--backend", "rule:line", "--out", str(pda))
    t = tmp_path / "t.pda"
    assert run(capsys, "translate-pda", "--pda", str(pda), "--subst", "b=a.a", "--subst", "c=a^", "--out", str(t))[0] == OK
    assert run(capsys, "run-pda", "--pda", str(t), "--word", "c b c")[1].strip() == "accept"
    table = tmp_path / "d.table"
    # the dihedral example prints its coset table in the file format
    table.write_text(run(capsys, "examples", "dihedral")[1])
    lifted = tmp_path / "lift.pda"
    assert run(capsys, "lift-pda", "--pda", str(pda), "--table", str(table), "--out", str(lifted))[0] == OK
    assert run(capsys, "run-pda", "--pda", str(lifted), "--word", "s t t s")[1].strip() == "accept"
    assert run(capsys, "run-pda", "--pda", str(lifted), "--word", "s t s")[1].strip() == "reject"
    cfg = tmp_path / "line.cfg"
    assert run(capsys, "pda-to-cfg", "--pda", str(pda), "--cnf", "--out", str(cfg))[0] == OK
    code, out, _ = run(capsys, "grammar", "member", "--grammar", str(cfg), "--word", "a a^ a^ a")
    assert (code, out.strip()) == (OK, "true")
    code, out, _ = run(capsys, "grammar", "check-diagonals", "--grammar", str(cfg), "--word", "a a a^ a^",
                       "--backend", "rule:line")
    assert code == OK and "FAIL" not in out
    code, _, _ = run(capsys, "grammar", "check-diagonals", "--grammar", str(cfg), "--word", "a a a^ a^",
                     "--backend", "rule:line", "--mutate")
    assert code == FAILED
    assert run(capsys, "grammar", "member", "--grammar", str(cfg))[0] == USAGE


def test_regular(capsys, tmp_path):
    assert run(capsys, "regular", "index", "--backend", "finite:z3")[1].strip() == "finite 3"
    assert run(capsys, "regular", "index", "--backend", "free:a", "--cap", "3")[0] == UNKNOWN
    dfa = tmp_path / "a2.dfa"
    dfa.write_text("alphabet a\nroot o\nedge o a u\nedge u a f\nedge f a l\nedge l a o\nfinal o\nfinal f\n")
    code, out, _ = run(capsys, "regular", "kappa", "--backend", "backend finite cyclic 2 psi a=1", "--dfa", str(dfa))
    assert code == OK and "surjective=True injective=False" in out
    dfa.write_text("alphabet a\nroot o\nedge o a u\nedge u a v\nedge v a o\nfinal o\n")
    assert run(capsys, "regular", "kappa", "--backend", "backend finite cyclic 2 psi a=1", "--dfa", str(dfa))[0] == FAILED


def test_verify_json(capsys, tmp_path):
    out_json = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--suite", "order-two", "--max-len", "6", "--json", str(out_json))
    assert code == OK and "PASS" in out
    doc = json.loads(out_json.read_text())
    assert doc["passed"] and doc["reports"]


def test_word_problem_and_export(capsys, tmp_path):
    assert run(capsys, "word-problem", "--backend", "rule:comb", "--word", "b a b^")[1].strip() == "true"
    assert run(capsys, "word-problem", "--backend", "rule:comb", "--word", "a b a^ b^")[1].strip() == "false"
    dot = tmp_path / "g.dot"
    assert run(capsys, "export-dot", "--backend", "rule:comb", "--radius", "3", "--fold-symmetric", "--out", str(dot))[0] == OK
    assert dot.read_text().startswith("digraph")
