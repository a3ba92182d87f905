"""
Translating, lifting and turning automata into grammars
========================================================

Three constructions carry a pushdown automaton to a related language: a
letter substitution, a lift through a subgroup of finite index, and the
passage to a context-free grammar whose derivations triangulate polygons.
"""

from conepda import fixtures
from conepda.grammar import cyk_member, diagonal_distance_check, rightmost_derivation, to_cnf, triangulate
from conepda.backends import schreier_graph
from conepda.pda import Verdict, finite_index_lift, pda_accepts, pda_to_cfg, synthesize, translate_pda
from conepda.words import Alphabet

# the integers: the automaton counts a against a^
line, _ = synthesize(fixtures.line())

# substitute c -> a a and d -> a^: accepted words have twice as many d as c
t = translate_pda(line, {"c": ("a", "a"), "d": ("a^",)}, Alphabet(["c", "d"]))
for w in ("c d d", "d c d", "c d"):
    print(f"{w:8s}", pda_accepts(t, w.split()) == Verdict.ACCEPT)

# the infinite dihedral group contains the integers with index two
table = fixtures.dihedral_coset_table()
table.validate(line.alphabet, fixtures.dihedral_check)
lifted = finite_index_lift(line, table, check=fixtures.dihedral_check)
for w in ("s t t s", "s t s", "s t s t t s t s"):
    print(f"{w:16s}", pda_accepts(lifted, w.split()) == Verdict.ACCEPT)

# a grammar for the loop language of the line and its normal form
cnf = to_cnf(pda_to_cfg(line))
print(cnf)
w = ("a", "a", "a^", "a", "a^", "a^")
ok, tree = cyk_member(cnf, w)
tri = triangulate(cnf, w, rightmost_derivation(tree))
print("diagonals:", sorted((i, j) for i, _, j in tri.diagonals))
print("short diagonals:", diagonal_distance_check(cnf, schreier_graph(fixtures.line()), 0, w))
