import pytest
from hypothesis import given, settings, strategies as st

from conepda import fixtures
from conepda.backends import schreier_graph
from conepda.errors import EmptyImage, InvalidTable, NotCertified
from conepda.grammar import enumerate_language
from conepda.pda import (
    Pda,
    Verdict,
    finite_index_lift,
    free_group_pda,
    pda_accepts,
    pda_is_deterministic,
    pda_to_cfg,
    synthesize,
    translate_pda,
)
from conepda.words import Alphabet

from oracles import all_words, comb_walk, dihedral_identity, exponent_sum, is_free_identity


def anbn_pda():
    """Push X per a, pop per b, accept on an empty stack."""
    delta = {
        ("p", None, "z"): (("p", ()),),
        ("p", "a", None): (("p", ("X",)),),
        ("p", "a", "X"): (("p", ("X", "X")),),
        ("p", "b", "X"): (("q", ()),),
        ("q", "b", "X"): (("q", ()),),
    }
    return Pda({"p", "q"}, ["a", "b"], {"z", "X"}, delta, "p", {"p", "q"}, "z")


def anbn(w):
    n = len(w) // 2
    return w == ("a",) * n + ("b",) * n


@pytest.fixture(scope="module")
def line_pda():
    return synthesize(fixtures.line())[0]


@pytest.fixture(scope="module")
def comb_pda():
    return synthesize(fixtures.comb(), max_radius=6)[0]


def test_validation():
    with pytest.raises(ValueError):
        Pda({"p"}, ["a"], {"z"}, {("r", "a", None): (("p", ()),)}, "p", {"p"}, "z")
    with pytest.raises(ValueError):
        Pda({"p"}, ["a"], {"z"}, {("p", "c", None): (("p", ()),)}, "p", {"p"}, "z")
    with pytest.raises(ValueError):
        Pda({"p"}, ["a"], {"z"}, {("p", "a", None): (("p", ("Y",)),)}, "p", {"p"}, "z")
    with pytest.raises(ValueError):
        Pda({"p"}, ["a"], {"z"}, {}, "p", {"p"}, "Y")


def test_simulator_matches_anbn():
    m = anbn_pda()
    assert pda_is_deterministic(m)
    for w in all_words(["a", "b"], 8):
        expected = Verdict.ACCEPT if anbn(w) else Verdict.REJECT
        assert pda_accepts(m, w) == expected, w


def test_stack_bound_gives_unknown():
    m = anbn_pda()
    assert pda_accepts(m, ("a",) * 5 + ("b",) * 5, max_stack=3) == Verdict.UNKNOWN
    # short words stay decided
    assert pda_accepts(m, ("a", "b"), max_stack=3) == Verdict.ACCEPT


def test_nondeterminism_detected():
    delta = {("p", "a", None): (("p", ()), ("q", ()))}
    m = Pda({"p", "q"}, ["a"], {"z"}, delta, "p", {"q"}, "z")
    assert not pda_is_deterministic(m)


def test_line_pda_is_word_problem_of_z(line_pda):
    assert pda_is_deterministic(line_pda)
    for w in all_words(["a", "a^"], 9):
        v = pda_accepts(line_pda, w)
        assert (v == Verdict.ACCEPT) == (exponent_sum(w) == 0), w


def test_comb_pda_matches_walk(comb_pda):
    assert pda_is_deterministic(comb_pda)
    for w in all_words(["a", "a^", "b", "b^"], 6):
        assert (pda_accepts(comb_pda, w) == Verdict.ACCEPT) == (comb_walk(w) == (0, 0)), w


def test_two_point_language_on_the_line():
    m, _ = synthesize(fixtures.line(), x0=0, y0=2)
    for w in all_words(["a", "a^"], 7):
        assert (pda_accepts(m, w) == Verdict.ACCEPT) == (exponent_sum(w) == 2), w


def test_lattice_is_not_certified():
    with pytest.raises(NotCertified):
        synthesize(fixtures.z2_lattice(), max_radius=5)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(["a", "a^", "b", "b^"]), max_size=12))
def test_free_group_pda(w):
    m = free_group_pda(Alphabet.symmetric("a", "b"))
    assert (pda_accepts(m, w) == Verdict.ACCEPT) == is_free_identity(w)


def test_free_group_pda_deterministic():
    assert pda_is_deterministic(free_group_pda(Alphabet.symmetric("a", "b", "c")))


def test_relabeled_preserves_language(line_pda):
    r = line_pda.relabeled()
    assert r.initial == "q0" and r.start_symbol == "z0"
    assert all(isinstance(s, str) for s in r.states)
    for w in all_words(["a", "a^"], 6):
        assert pda_accepts(r, w) == pda_accepts(line_pda, w)


def test_translate(line_pda):
    m = translate_pda(line_pda, {"b": ("a", "a"), "c": ("a^",)})
    for w in all_words(["b", "c"], 7):
        expected = 2 * w.count("b") == w.count("c")
        assert (pda_accepts(m, w) == Verdict.ACCEPT) == expected, w


def test_translate_rejects_empty_image(line_pda):
    with pytest.raises(EmptyImage):
        translate_pda(line_pda, {"b": ()})
    with pytest.raises(ValueError):
        translate_pda(line_pda, {"b": ("x",)})


def test_dihedral_table_and_lift(line_pda):
    table = fixtures.dihedral_coset_table()
    table.validate(line_pda.alphabet, fixtures.dihedral_check)
    m = finite_index_lift(line_pda, table, check=fixtures.dihedral_check)
    for w in all_words(["s", "t"], 9):
        assert (pda_accepts(m, w) == Verdict.ACCEPT) == dihedral_identity(w), w


def test_invalid_table_detected(line_pda):
    table = fixtures.dihedral_coset_table()
    table.u["s", "t"] = ("a^",)
    with pytest.raises(InvalidTable):
        table.validate(line_pda.alphabet, fixtures.dihedral_check)
    table = fixtures.dihedral_coset_table()
    table.bar["1", "s"] = "x"
    with pytest.raises(InvalidTable):
        table.validate()


def test_pda_to_cfg_line(line_pda):
    g = pda_to_cfg(line_pda)
    words = enumerate_language(g, 8)
    expected = {w for w in all_words(["a", "a^"], 8) if exponent_sum(w) == 0}
    assert words == expected


def test_pda_to_cfg_anbn():
    g = pda_to_cfg(anbn_pda())
    assert enumerate_language(g, 10) == {w for w in all_words(["a", "b"], 10) if anbn(w)}

