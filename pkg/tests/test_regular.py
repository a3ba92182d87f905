import pytest

from conepda import fixtures
from conepda.errors import EmptyLanguage, LanguageMismatch, NotDeterministic, NotWellDefined
from conepda.graph import LabelledGraph
from conepda.regular import (
    Dfa,
    InfiniteIndexWitness,
    finite_index_check,
    kappa_homomorphism,
    reduce_dfa,
    schreier_to_dfa,
)
from conepda.words import Alphabet

from oracles import all_words, exponent_sum


def test_z2_dfa():
    d = schreier_to_dfa(fixtures.z2_space())
    assert isinstance(d, Dfa) and len(d) == 2
    for n in range(10):
        assert d.accepts(("a",) * n) == (n % 2 == 0)


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_cyclic_quotients(k):
    space = fixtures.cyclic_subgroup(k)
    assert finite_index_check(space) == ("finite", k)
    d = schreier_to_dfa(space)
    for w in all_words(["a", "a^"], 8):
        assert d.accepts(w) == (exponent_sum(w) % k == 0)


def test_infinite_index_unknown():
    assert finite_index_check(fixtures.f2_cyclic_subgroup(), 4) == ("unknown", None)
    w = schreier_to_dfa(fixtures.f2_cyclic_subgroup(), 3)
    assert isinstance(w, InfiniteIndexWitness)
    assert w.frontier > 0


def test_index_two_subgroup():
    d = schreier_to_dfa(fixtures.f2_index2_subgroup())
    assert len(d) == 2
    for w in all_words(["a", "a^", "b", "b^"], 5):
        assert d.accepts(w) == (len(w) % 2 == 0)


def test_dfa_rejects_nondeterministic_graph():
    g = LabelledGraph(Alphabet(["a"]), 0)
    g.add_edge(0, "a", 1)
    g.add_edge(0, "a", 2)
    with pytest.raises(NotDeterministic):
        Dfa(g)


def test_reduce_removes_useless_states():
    g = LabelledGraph(Alphabet(["a", "b"]), 0)
    g.add_edge(0, "a", 1)
    g.add_edge(1, "a", 0)
    g.add_edge(0, "b", 2)  # dead end
    g.add_vertex(3)  # unreachable
    d = reduce_dfa(Dfa(g, 0, {0}))
    assert sorted(d.states) == [0, 1]
    with pytest.raises(EmptyLanguage):
        reduce_dfa(Dfa(g, 0, {3}))


def test_kappa_on_four_cycle():
    a1, a2 = fixtures.order_two_automata()
    r = kappa_homomorphism(a2, fixtures.z2_space())
    assert r.mapping == {"o": 0, "u": 1, "f": 0, "l": 1}
    assert r.surjective and not r.injective and r.label_preserving
    r1 = kappa_homomorphism(a1, fixtures.z2_space())
    assert r1.surjective and r1.injective


def test_kappa_detects_wrong_language():
    g = LabelledGraph(Alphabet(["a"]), "o")
    for x, y in (("o", "u"), ("u", "v"), ("v", "o")):
        g.add_edge(x, "a", y)
    with pytest.raises(LanguageMismatch):
        kappa_homomorphism(Dfa(g, "o", {"o"}), fixtures.z2_space())


def test_kappa_needs_reachable_states():
    g = fixtures.z2_graph()
    g.add_vertex("island")
    with pytest.raises(NotWellDefined):
        kappa_homomorphism(Dfa(g, "1", {"1"}), fixtures.z2_space())
