from itertools import permutations

import pytest

from conepda import fixtures
from conepda.backends import FiniteGroupBackend, FreeGroupSubgroupBackend, RuleBackend, build_schreier
from conepda.errors import ParseError
from conepda.grammar import enumerate_language
from conepda.pda import pda_accepts, synthesize
from conepda.regular import Dfa
from conepda.textio import (
    coset_table_to_text,
    dfa_to_text,
    grammar_to_text,
    graph_to_dot,
    graph_to_text,
    parse_backend,
    parse_coset_table,
    parse_dfa,
    parse_grammar,
    parse_graph,
    parse_pda,
    pda_to_text,
    triangulation_to_dot,
)
from conepda.grammar import triangulate

from oracles import all_words


def test_graph_round_trip():
    g = fixtures.two_vertex_f2_graph()
    h, finals = parse_graph(graph_to_text(g))
    assert finals == []
    assert sorted(h.edges()) == sorted(g.edges())
    assert h.root == "o"


def test_dfa_round_trip():
    _, a2 = fixtures.order_two_automata()
    d = parse_dfa(dfa_to_text(a2))
    assert isinstance(d, Dfa) and d.finals == a2.finals
    for n in range(9):
        assert d.accepts(("a",) * n) == a2.accepts(("a",) * n)


def test_graph_parse_errors():
    with pytest.raises(ParseError):
        parse_graph("root o\nedge o a x\n")
    with pytest.raises(ParseError):
        parse_graph("alphabet a\nedge o c x\n")
    with pytest.raises(ParseError):
        parse_graph("alphabet a\nroot o\nfinal nowhere\n")
    with pytest.raises(ParseError):
        parse_graph("alphabet a\nbogus line\n")


def test_pda_round_trip_relabels_structured_states():
    m, _ = synthesize(fixtures.line())
    text = pda_to_text(m)
    assert "state q0 initial" in text
    r = parse_pda(text)
    for w in all_words(["a", "a^"], 6):
        assert pda_accepts(r, w) == pda_accepts(m, w)


def test_pda_parse_errors():
    with pytest.raises(ParseError):
        parse_pda("alphabet a\nstate p\nstack z start\n")
    with pytest.raises(ParseError):
        parse_pda("alphabet a\nstate p initial\nstack z start\ntrans p a z q\n")
    with pytest.raises(ParseError):
        parse_pda("alphabet a\nstate p initial\nstack z start\ntrans p a z -> r eps\n")


def test_grammar_round_trip():
    g = fixtures.zero_sum_grammar()
    text = grammar_to_text(g)
    assert "rule S -> eps" in text
    h = parse_grammar(text)
    assert enumerate_language(h, 6) == enumerate_language(g, 6)


def test_grammar_parse_errors():
    with pytest.raises(ParseError):
        parse_grammar("rule 'a' -> S\n")
    with pytest.raises(ParseError):
        parse_grammar("rule S -> a'b\n")
    with pytest.raises(ParseError):
        parse_grammar("rule S -> 'S'\n")


def test_coset_table_round_trip():
    t = fixtures.dihedral_coset_table()
    u = parse_coset_table(coset_table_to_text(t))
    assert u.reps == t.reps and u.bar == t.bar and u.u == t.u
    u.validate(check=fixtures.dihedral_check)


def test_backend_lines(tmp_path):
    b = parse_backend('backend free-subgroup alphabet a a^ b b^ gens "a a" "b"')
    assert isinstance(b, FreeGroupSubgroupBackend)
    assert b.contains(("b", "a", "a", "b^"))
    b = parse_backend("backend finite cyclic 3 psi a=1")
    assert isinstance(b, FiniteGroupBackend)
    perms = sorted(permutations(range(3)))
    rows = [[perms.index(tuple(q[p[i]] for i in range(3))) for q in perms] for p in perms]
    (tmp_path / "s3.txt").write_text("".join(" ".join(map(str, r)) + "\n" for r in rows))
    spec = tmp_path / "s3.backend"
    # elements 1 and 2 are the transpositions (1 2) and (0 1)
    spec.write_text("backend finite table s3.txt subgroup 0 psi a=1 b=2\n")
    s3 = parse_backend("@" + str(spec))
    assert len(build_schreier(s3, 6)) == 6
    with pytest.raises(ParseError):
        parse_backend("backend finite cyclic 3")
    assert isinstance(parse_backend("backend rule x_w W=0,2,6"), RuleBackend)


def test_backend_shorthands():
    assert isinstance(parse_backend("rule:comb"), RuleBackend)
    assert parse_backend("rule:x_w:W=1,2").describe()
    z = parse_backend("finite:z4")
    assert len(build_schreier(z, 5)) == 4
    f = parse_backend("free:a.a,a.b,a.b^")
    assert f.contains(("a", "b"))
    assert not f.contains(("a",))
    for bad in ("finite:q2", "rule:comb:V=3", "nope"):
        with pytest.raises(ParseError):
            parse_backend(bad)


def test_dot_folds_inverse_pairs():
    g = fixtures.z2_symmetric_graph()
    plain = graph_to_dot(g)
    folded = graph_to_dot(g, fold_symmetric=True)
    assert plain.count("->") == 4
    assert folded.count("->") == 2
    assert folded.startswith("digraph")


def test_triangulation_dot():
    g = fixtures.six_letter_grammar()
    tri = triangulate(g, fixtures.SIX_LETTER_WORD, fixtures.six_letter_derivation())
    dot = triangulation_to_dot(tri)
    assert dot.count("T1h") >= 1 and "a6" in dot
