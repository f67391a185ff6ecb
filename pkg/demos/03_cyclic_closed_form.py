"""The closed formula for cyclic groups of prime power order.

Over a cyclic group every quasigroup of this kind is medial (the
automorphism group is commutative), and the count has an explicit form;
this demo checks it against the general algorithm.

Run:  python demos/03_cyclic_closed_form.py
"""

from centralq import cq_cyclic_prime_power, enumerate_group, parse_group

print("prime p: count for order p is p^2 - p - 1")
for p in (2, 3, 5, 7, 11, 13):
    print(f"  cq(C{p}) = {cq_cyclic_prime_power(p, 1)}")

print("\npowers of two: count for order 2^k is 4^(k-1)")
for k in range(1, 8):
    print(f"  cq(C{2**k}) = {cq_cyclic_prime_power(2, k)}")

print("\nformula vs direct algorithm:")
for p, k in [(2, 3), (3, 2), (5, 2), (3, 3), (7, 1), (2, 5)]:
    q = p**k
    formula = cq_cyclic_prime_power(p, k)
    direct = enumerate_group(parse_group(f"C{q}"))
    marker = "ok" if formula == direct.cq == direct.mq else "MISMATCH"
    print(f"  C{q}: formula {formula}, algorithm cq={direct.cq} mq={direct.mq}  [{marker}]")
