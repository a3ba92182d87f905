"""
Cone types and a pushdown automaton for the comb
=================================================

The comb lattice has a horizontal axis and a vertical line through every
integer point.  Removing a ball leaves finitely many kinds of cones, so
the graph is context-free and its loop language is accepted by a
deterministic pushdown automaton.
"""

from conepda import fixtures
from conepda.backends import schreier_graph
from conepda.cones import classify_cone_types
from conepda.pda import PdaAcceptor, Verdict, pda_accepts, pda_is_deterministic, synthesize
from conepda.textio import cone_table_to_text, growth_table
from conepda.verify import GraphOracle, differential_test
from conepda.words import Alphabet

g = schreier_graph(fixtures.comb())
table = classify_cone_types(g)
print(table.status_line())
print(growth_table(table))
print(cone_table_to_text(table))

# one state per (cone type, boundary vertex); the stack records where we are
m, _ = synthesize(fixtures.comb())
print(m, "deterministic:", pda_is_deterministic(m))
for w in ("b a b^", "a b a^ b^", "a a^ b b^"):
    print(f"{w:12s}", pda_accepts(m, w.split()) == Verdict.ACCEPT)

# compare with walking the graph itself on every word up to length 7
r = differential_test(PdaAcceptor(m), GraphOracle(g), Alphabet.symmetric("a", "b"), 7)
print(r.summary())
