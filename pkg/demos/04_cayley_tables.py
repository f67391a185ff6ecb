"""Materializing quasigroups as Cayley tables and testing isomorphism.

Run:  python demos/04_cayley_tables.py
"""

from centralq import (
    AffineTriple,
    brute_force_isomorphic,
    build_quasigroup,
    classify_representatives,
    identity,
    is_isomorphic_affine,
    is_latin,
    is_medial,
    parse_group,
    scalar_endo,
)

c3 = parse_group("C3")

# x*y = x + 2y mod 3: rows are shifts, columns step by two.
t = AffineTriple(c3, identity(c3), scalar_endo(c3, 2), (0,))
table = build_quasigroup(t)
print("table of x + 2y mod 3:")
print(table.to_text())
print(f"latin: {is_latin(table)}, medial: {is_medial(table)}")

# The five isomorphism classes over C3, as explicit representatives.
print("\nall five classes over C3 (phi, psi, c):")
for rep in classify_representatives(c3):
    phi = rep.phi.blocks[0][0][0]
    psi = rep.psi.blocks[0][0][0]
    print(f"  x*y = {phi}x + {psi}y + {rep.c[0]}   medial={rep.medial}")

# Changing the constant alone often lands in the same class: with both
# maps the identity, every constant gives an isomorphic quasigroup.
t0 = AffineTriple(c3, identity(c3), identity(c3), (0,))
t1 = AffineTriple(c3, identity(c3), identity(c3), (1,))
print(f"\nx+y vs x+y+1 isomorphic (structural test):  {is_isomorphic_affine(t0, t1)}")
print(
    "x+y vs x+y+1 isomorphic (bijection search):  "
    f"{brute_force_isomorphic(build_quasigroup(t0), build_quasigroup(t1))}"
)

# Swapping the two maps is not an isomorphism here: the table search over
# all six bijections of three points agrees with the structural answer.
t12 = AffineTriple(c3, identity(c3), scalar_endo(c3, 2), (0,))
t21 = AffineTriple(c3, scalar_endo(c3, 2), identity(c3), (0,))
print(f"\nx+2y vs 2x+y isomorphic (structural test):  {is_isomorphic_affine(t12, t21)}")
print(
    "x+2y vs 2x+y isomorphic (bijection search):  "
    f"{brute_force_isomorphic(build_quasigroup(t12), build_quasigroup(t21))}"
)
