"""
Graphs that are not context-free
================================

The square lattice is transitive but has more and more cone types as the
ball grows.  The graph X_W carries an extra twist at a sparse set of
points; it covers a line-like graph Y two-to-one, yet only Y is
context-free.
"""

from conepda import fixtures
from conepda.backends import schreier_graph
from conepda.cones import classify_cone_types
from conepda.textio import growth_table
from conepda.verify import transitivity_counterexample_suite

z2 = classify_cone_types(schreier_graph(fixtures.z2_lattice()), max_radius=8)
print(z2.status_line())
print(growth_table(z2))

for name, space in (("Y", fixtures.y_line()), ("X_W", fixtures.x_w())):
    t = classify_cone_types(schreier_graph(space), max_radius=8)
    print(name, t.status_line())

# the full set of mechanical checks behind these statements
print(transitivity_counterexample_suite().summary())
