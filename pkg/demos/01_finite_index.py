"""
Word problems of finite index: automata and the map kappa
==========================================================

The group of order two, presented by one letter ``a``, has a two-vertex
Schreier graph.  Read as an automaton with the root as its only final
state it accepts the words of even length.
"""

from conepda import fixtures
from conepda.regular import finite_index_check, kappa_homomorphism, schreier_to_dfa
from conepda.textio import dfa_to_text

space = fixtures.z2_space()
d = schreier_to_dfa(space)
print(dfa_to_text(d))
for n in range(6):
    print("a" * n or "eps", d.accepts(("a",) * n))

# (Z, kZ) has index k, so the Schreier graph closes with k vertices
for k in (2, 3, 5):
    print(f"(Z, {k}Z):", finite_index_check(fixtures.cyclic_subgroup(k)))

# the cyclic subgroup <a> of the free group of rank two has infinite index
print("(F2, <a>):", finite_index_check(fixtures.f2_cyclic_subgroup(), 8))

# a larger automaton for the same language maps onto the Schreier graph
_, a2 = fixtures.order_two_automata()
r = kappa_homomorphism(a2, space)
print("kappa:", r.mapping)
print("surjective", r.surjective, "injective", r.injective, "label preserving", r.label_preserving)
