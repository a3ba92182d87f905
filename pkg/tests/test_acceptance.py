"""The ten acceptance criteria, each with its time bound.

Each test carries a ``criterion`` title; ``conftest.py`` prints one PASS or
FAIL line per criterion at the end of the run.
"""

import random
import time

from conepda import fixtures
from conepda.backends import FreeGroupSubgroupBackend, schreier_graph, spanning_tree_generators
from conepda.cones import classify_cone_types
from conepda.grammar import (
    cyk_member,
    diagonal_distance_check,
    enumerate_language,
    min_yield,
    rightmost_derivation,
    to_cnf,
    triangulate,
)
from conepda.graph import enumerate_loop_language
from conepda.pda import (
    PdaAcceptor,
    Verdict,
    finite_index_lift,
    pda_accepts,
    pda_is_deterministic,
    pda_to_cfg,
    synthesize,
    translate_pda,
)
from conepda.regular import finite_index_check, kappa_homomorphism, schreier_to_dfa
from conepda.verify import PDA_MAX_STACK, differential_test, transitivity_counterexample_suite
from conepda.words import Alphabet

from oracles import (
    all_words,
    comb_walk,
    dihedral_identity,
    exponent_sum,
    is_free_identity,
    reduce_free,
)

SEED = 20240601
F2 = Alphabet.symmetric("a", "b")


def criterion(title):
    def mark(f):
        f.criterion = title
        return f

    return mark


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


def exhaustive(a, b, alphabet, max_len):
    """Differential test over every word; sampling is switched off."""
    return differential_test(a, b, alphabet, max_len, sample_threshold=None)


@criterion("1. Order-two regression: 2 states, DFA and PDA accept exactly the even powers")
def test_criterion_1_order_two():
    with Timer() as t:
        space = fixtures.z2_space()
        d = schreier_to_dfa(space)
        assert len(d) == 2
        g = schreier_graph(space)
        g.expand_ball([space.root_key], 4)
        assert len(g) == 2 and not g.frontier
        m, _ = synthesize(space)
        # over {a}: exactly a^(2n), including every n <= 6
        for w in all_words(["a"], 12):
            expected = len(w) % 2 == 0
            assert d.accepts(w) == expected
            assert (pda_accepts(m, w) == Verdict.ACCEPT) == expected
        # the symmetric presentation {a, a^} has 127 words of length <= 6
        sym = fixtures.z2_symmetric_space()
        words = list(all_words(["a", "a^"], 6))
        assert len(words) == 127
        ds = schreier_to_dfa(sym)
        ms, _ = synthesize(sym)
        assert len(ds) == 2
        for w in words:
            expected = len(w) % 2 == 0
            assert ds.accepts(w) == expected
            assert (pda_accepts(ms, w) == Verdict.ACCEPT) == expected
    assert t.seconds < 1


@criterion("2. Regular iff finite index: (Z, kZ) finite, (F2, <a>) unknown and certified")
def test_criterion_2_finite_index():
    with Timer() as t:
        for k in (2, 3, 5):
            space = fixtures.cyclic_subgroup(k)
            assert finite_index_check(space) == ("finite", k)
            d = schreier_to_dfa(space)
            for w in all_words(["a", "a^"], 10):
                assert d.accepts(w) == (exponent_sum(w) % k == 0)
        f = fixtures.f2_cyclic_subgroup()
        assert finite_index_check(f, 8) == ("unknown", None)
        assert classify_cone_types(schreier_graph(f)).certified
    assert t.seconds < 5


@criterion("3. kappa on A2: surjective, non-injective, label-preserving")
def test_criterion_3_kappa():
    with Timer() as t:
        _, a2 = fixtures.order_two_automata()
        r = kappa_homomorphism(a2, fixtures.z2_space())
        assert r.surjective
        assert not r.injective
        assert r.label_preserving
        # label preservation checked again edge by edge against the 2-vertex graph
        z2 = fixtures.z2_graph()
        names = {0: "1", 1: "t"}
        for x, a, y in a2.graph.edges():
            assert z2.targets(names[r.mapping[x]], a) == [names[r.mapping[y]]]
    assert t.seconds < 1


def _free_is_power_of_a(w):
    r = reduce_free(w)
    return all(x == "a" for x in r) or all(x == "a^" for x in r)


@criterion("4. Cone-type synthesis: five graphs, deterministic, exact to length 10")
def test_criterion_4_synthesis():
    cases = [
        ("Z2 graph", fixtures.z2_graph(), Alphabet(["a"]), lambda w: len(w) % 2 == 0),
        ("F2 tree", schreier_graph(fixtures.free_group()), F2, is_free_identity),
        ("comb", schreier_graph(fixtures.comb()), F2, lambda w: comb_walk(w) == (0, 0)),
        ("(F2, <a>)", schreier_graph(fixtures.f2_cyclic_subgroup()), F2, _free_is_power_of_a),
        ("(F2, index 2)", schreier_graph(fixtures.f2_index2_subgroup()), F2, lambda w: len(w) % 2 == 0),
    ]
    with Timer() as t:
        for name, g, alphabet, oracle in cases:
            m, _ = synthesize(g)
            assert pda_is_deterministic(m), name
            r = exhaustive(PdaAcceptor(m, max_stack=PDA_MAX_STACK), oracle, alphabet, 10)
            assert not r.sampled
            assert r.agree == alphabet.count_words(10), name
            assert r.disagree == 0 and r.unknown == 0, r.summary()
    assert t.seconds < 60


@criterion("5. Translator: F2 identity PDA along c -> aa, d -> b, exact to length 8")
def test_criterion_5_translator():
    with Timer() as t:
        m, _ = synthesize(fixtures.free_group())
        u = {"c": ("a", "a"), "c^": ("a^", "a^"), "d": ("b",), "d^": ("b^",)}
        new = Alphabet.symmetric("c", "d")
        tm = translate_pda(m, u, new)
        assert pda_is_deterministic(m) and pda_is_deterministic(tm)
        # H = <a^2, b> is free on c, d and K is trivial, so K n H is folded from no generators
        oracle = FreeGroupSubgroupBackend(new, [])
        # each new letter feeds at most two letters, so the stack stays below 2 * 8
        r = exhaustive(PdaAcceptor(tm, max_stack=2 * 8), oracle, new, 8)
        assert r.disagree == 0 and r.unknown == 0, r.summary()
        for w in all_words(list(new), 5):
            image = tuple(x for b in w for x in u[b])
            assert oracle.contains(w) == is_free_identity(image)
    assert t.seconds < 30


@criterion("6. Finite-index lift: infinite dihedral over <st>, exact to length 8")
def test_criterion_6_lift():
    with Timer() as t:
        mh, _ = synthesize(fixtures.line())
        table = fixtures.dihedral_coset_table()
        table.validate(mh.alphabet, fixtures.dihedral_check)
        m = finite_index_lift(mh, table, check=fixtures.dihedral_check)
        r = exhaustive(PdaAcceptor(m, max_stack=PDA_MAX_STACK), dihedral_identity, Alphabet(["s", "t"]), 8)
        assert r.disagree == 0 and r.unknown == 0, r.summary()
    assert t.seconds < 30


def _sample_words(cnf, max_len, count, rng):
    pool = sorted((w for w in enumerate_language(cnf, max_len) if w), key=lambda w: (len(w), w))
    return [rng.choice(pool) for _ in range(count)]


@criterion("7. Polygon triangulation: worked example and 200 random words")
def test_criterion_7_triangulation():
    with Timer() as t:
        g = fixtures.six_letter_grammar()
        tri = triangulate(g, fixtures.SIX_LETTER_WORD, fixtures.six_letter_derivation())
        assert tri.diagonals == {(0, "T1", 2), (2, "T1h", 6), (3, "T2h", 6), (3, "T3", 5)}
        rng = random.Random(SEED)
        grammars = [
            to_cnf(fixtures.even_a_grammar()),
            to_cnf(fixtures.dyck_grammar(F2)),
            to_cnf(fixtures.zero_sum_grammar()),
            g,
        ]
        checked = 0
        for cnf, share in zip(grammars, (50, 50, 50, 50)):
            for w in _sample_words(cnf, 8 if cnf is not g else 6, share, rng):
                ok, tree = cyk_member(cnf, w)
                assert ok
                tri = triangulate(cnf, w, rightmost_derivation(tree))
                assert tri.is_noncrossing()
                assert len(tri.diagonals) == max(len(w) - 2, 0)
                for i, sym, j in tri.diagonals:
                    assert cyk_member(cnf, w[i:j], start=sym)[0]
                checked += 1
        assert checked == 200
    assert t.seconds < 30


@criterion("8. Diagonal distance bound: 50 loops each on Z2, F2 tree, comb; mutation fails")
def test_criterion_8_diagonals():
    with Timer() as t:
        rng = random.Random(SEED)
        comb_pda, _ = synthesize(fixtures.comb())
        cases = [
            (to_cnf(fixtures.even_a_grammar()), fixtures.z2_graph(), lambda w: len(w) % 2 == 0),
            (to_cnf(fixtures.dyck_grammar(F2)), schreier_graph(fixtures.free_group()), is_free_identity),
            (to_cnf(pda_to_cfg(comb_pda)), schreier_graph(fixtures.comb()), lambda w: comb_walk(w) == (0, 0)),
        ]
        mutation_failures = 0
        for cnf, g, is_loop in cases:
            loops = sorted(w for w in enumerate_loop_language(g, g.root, g.root, 10) if w)
            words = [rng.choice(loops) for _ in range(50)]
            m = min_yield(cnf)[0]
            lowered = {v: k - 1 for v, k in m.items()}
            for w in words:
                assert is_loop(w)
                assert diagonal_distance_check(cnf, g, g.root, w)
                if not diagonal_distance_check(cnf, g, g.root, w, m=lowered):
                    mutation_failures += 1
        assert mutation_failures >= 1
    assert t.seconds < 60


@criterion("9. Negative examples: Z2 lattice unstable, X_W not stabilised, Y certified")
def test_criterion_9_negative():
    with Timer() as t:
        r = transitivity_counterexample_suite(radius=8, loop_len=10)
        assert r.passed, r.summary()
        z2 = classify_cone_types(schreier_graph(fixtures.z2_lattice()), max_radius=8)
        counts = [c for n, c in z2.growth if 1 <= n <= 8]
        assert len(counts) == 8
        assert all(x < y for x, y in zip(counts, counts[1:]))
        xw = classify_cone_types(schreier_graph(fixtures.x_w()), max_radius=8)
        y = classify_cone_types(schreier_graph(fixtures.y_line()), max_radius=8)
        assert not xw.certified and y.certified
    assert t.seconds < 120


@criterion("10. Spanning-tree generators of the 2-vertex graph give the even words")
def test_criterion_10_spanning_tree():
    with Timer() as t:
        for g, letters in ((fixtures.two_vertex_f2_graph(), F2), (fixtures.z2_symmetric_graph(), Alphabet.symmetric("a"))):
            gens = spanning_tree_generators(g)
            sub = FreeGroupSubgroupBackend(letters, gens)
            # generated subgroup inside the even words
            assert all(sum(exponent_sum(w, x) for x in ("a", "b")) % 2 == 0 for w in gens)
            seen = 0
            for w in all_words(list(letters), 6):
                if reduce_free(w) != w:
                    continue
                seen += 1
                total = sum(exponent_sum(w, x) for x in ("a", "b"))
                # both inclusions: folding accepts w exactly when its exponent sum is even
                assert sub.contains(w) == (total % 2 == 0), w
            assert seen > 0
    assert t.seconds < 5
