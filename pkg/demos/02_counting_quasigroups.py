"""Counting central and medial quasigroups, per group and per order.

Run:  python demos/02_counting_quasigroups.py
"""

from centralq import cq_mq_of_order, enumerate_group, parse_group

# One carrier group.  The report carries the size of the automorphism
# group, its conjugacy class count, the two pair-orbit lower bounds, and
# the exact isomorphism-class counts cq (central) and mq (medial).
r = enumerate_group(parse_group("C3xC3"))
print(f"{r.descriptor}: |Aut|={r.aut_order}, classes={r.conj_classes}")
print(f"  pair orbits {r.pair_orbits} <= cq = {r.cq}")
print(f"  commuting pair orbits {r.commuting_pair_orbits} <= mq = {r.mq}")

# Totals for one order sum over every abelian group of that order.
print("\norder  cq      mq      (groups)")
for n in range(1, 17):
    rep = cq_mq_of_order(n)
    names = ", ".join(g.descriptor for g in rep.per_group)
    print(f"{n:5d}  {rep.cq:<7d} {rep.mq:<7d} ({names})")

# Counts multiply over coprime factors, so composite orders come cheap:
# cq(12) = cq(4) * cq(3) summed over the groups of each order.
print(f"\ncq(12) = {cq_mq_of_order(12).cq} = 4*5 + 15*5 (two groups of order 4, one of order 3)")
