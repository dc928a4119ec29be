"""
Codegrees of the Heisenberg group, two ways
===========================================

The Heisenberg group of order p^3 is extraspecial, so its codegrees follow
from a closed formula.  Here the same set is recovered from an exact
character table.
"""

from codegree.catalog import heisenberg
from codegree.chartab import character_table, codegrees_bruteforce, conjugacy_classes
from codegree.formulas import cod_formula

H = heisenberg(3)
print(H.order, "elements")

# conjugacy classes: 3 central singletons and 8 classes of size 3
classes = conjugacy_classes(H)
print(sorted(classes.class_sizes))

###############################################################################
# The character table is computed over GF(ell) and lifted to exact values.
# Each value is stored as a multiplicity vector over the cube roots of unity.

table = character_table(H)
print("ell =", table.ell, " theta =", table.theta)
for row in table.rows:
    print(row.degree, row.kernel_order, row.codegree)

###############################################################################
# cod(chi) = |G : ker chi| / chi(1).  The brute-force set and the formula agree.

print("brute force:", codegrees_bruteforce(H).cod)
rep = cod_formula(H)
print(f"{rep.method} ({rep.case}):", rep.cod)
