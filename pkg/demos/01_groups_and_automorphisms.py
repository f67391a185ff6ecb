"""Tour of the group layer: abelian groups, their maps, and conjugacy.

Run:  python demos/01_groups_and_automorphisms.py
"""

from centralq import (
    abelian_groups_of_order,
    aut_group,
    aut_group_order,
    centralizer,
    conjugacy_class_reps,
    parse_group,
    scalar_endo,
)

# Groups are written down by their cyclic factors; any spelling works and
# the canonical form is the primary decomposition.
g = parse_group("C12")
print(f"C12 canonically:   {g.descriptor}  (order {g.order})")
print(f"elements:          {g.elements()}")
print(f"(3,2) + (2,2):     {g.add((3, 2), (2, 2))}")

# All abelian groups of one order, one per isomorphism class.
print("\ngroups of order 16:")
for h in abelian_groups_of_order(16):
    print(f"  {h.descriptor:14s} |Aut| = {aut_group_order(h)}")

# The full automorphism group of the Klein four-group is symmetric on the
# three involutions: six members, three conjugacy classes.
v = parse_group("C2xC2")
A = aut_group(v)
classes = conjugacy_class_reps(A)
print(f"\nAut({v.descriptor}): {len(A)} members, {len(classes)} conjugacy classes")
for rep in classes.representatives:
    size = classes.orbit_sizes[rep]
    cent = centralizer(A, rep)
    print(f"  class of member {rep}: size {size}, centralizer size {len(cent)}")

# Doubling is invertible mod 5 but not mod 4.
print(f"\nx -> 2x on C5 invertible? {scalar_endo(parse_group('C5'), 2).is_automorphism()}")
print(f"x -> 2x on C4 invertible? {scalar_endo(parse_group('C4'), 2).is_automorphism()}")
