import json

import pytest

from conepda import fixtures
from conepda.backends import schreier_graph
from conepda.pda import PdaAcceptor, synthesize
from conepda.registry import CONSTRUCTIONS
from conepda.regular import schreier_to_dfa
from conepda.verify import (
    SUITES,
    GraphOracle,
    covered_constructions,
    differential_test,
    grammar_acceptor,
    pda_report,
    reports_to_json,
    run_suite,
    transitivity_counterexample_suite,
)
from conepda.words import Alphabet

from oracles import comb_walk, exponent_sum


A1 = Alphabet(["a"])
AA = Alphabet.symmetric("a")
AB = Alphabet.symmetric("a", "b")


def test_identical_acceptors_agree_everywhere():
    r = differential_test(fixtures.z2_space(), schreier_to_dfa(fixtures.z2_space()), A1, 10)
    assert r.passed and r.agree == 11 and not r.sampled


def test_counterexample_is_shortlex_least():
    r = differential_test(lambda w: exponent_sum(w) == 0, lambda w: exponent_sum(w) % 3 == 0, AA, 6)
    assert not r.passed
    # words of length 3 with exponent sum 3 or -3 differ; shortlex puts "a a a" first
    assert r.counterexample == "a a a"
    assert r.disagree == 2 + 12


def test_pda_against_dfa_for_z2():
    m, _ = synthesize(fixtures.z2_space())
    r = pda_report(m, schreier_to_dfa(fixtures.z2_space()), A1, 10, "z2 pda", "dfa")
    assert r.passed
    assert r.unknown == 0
    assert [c.name for c in r.checks] == ["deterministic"]


def test_sampling_records_seed():
    m, _ = synthesize(fixtures.comb(), max_radius=6)
    r = differential_test(PdaAcceptor(m, max_stack=14), lambda w: comb_walk(w) == (0, 0), AB, 10,
                          sample_threshold=1000, sample_size=2000, seed=7)
    assert r.sampled and r.sample_size == 2000 and r.seed == 7
    assert r.agree + r.unknown == 2000 and r.passed


def test_graph_oracle_and_grammar_acceptor():
    g = schreier_graph(fixtures.line())
    r = differential_test(GraphOracle(g, 0, 1), lambda w: exponent_sum(w) == 1, AA, 8)
    assert r.passed
    r = differential_test(grammar_acceptor(fixtures.zero_sum_grammar()), GraphOracle(g), AA, 8)
    assert r.passed


def test_json_round_trip():
    r = differential_test(fixtures.z2_space(), fixtures.z2_space(), A1, 3, construction="x", oracle="y")
    doc = json.loads(reports_to_json([r]))
    assert doc["passed"] is True
    assert doc["reports"][0]["construction"] == "x"
    assert doc["reports"][0]["agree"] == 4


def test_every_construction_is_covered():
    # importing the suites registers every decorated construction
    assert CONSTRUCTIONS
    assert CONSTRUCTIONS <= covered_constructions()


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suites_pass(name):
    reports = run_suite(name, 6)
    assert reports
    for r in reports:
        assert r.passed, r.summary()


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope")


def test_transitivity_counterexamples():
    r = transitivity_counterexample_suite(radius=7, loop_len=8, samples=500)
    assert r.passed, r.summary()
    names = " ".join(c.name for c in r.checks)
    assert "Y certified" in names and "line certified" in names
