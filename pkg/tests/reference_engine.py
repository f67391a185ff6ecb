"""A deliberately plain re-implementation of the counting loop.

Follows the nested orbit-representative construction step by step with
object-level operations, so it is slow but easy to audit; the array
engine must agree with it wherever both run.  Both medial routes are
provided: filtering the commuting representatives out of the full pair
loop, and re-running the inner loop over the centralizer only.
"""

from centralq.action import (
    centralizer_indices,
    conjugacy_class_reps,
    orbit_reps_conjugation,
    orbit_reps_on_cosets,
)
from centralq.endo import aut_group, one_minus


def reference_counts(group, budget=None):
    """(conj_classes, pair_orbits, commuting_pair_orbits, cq, mq) by the plain route."""
    A = aut_group(group, budget=budget)
    classes = conjugacy_class_reps(A)
    pair_orbits = commuting_pair_orbits = cq = mq = 0
    for f_idx in classes.representatives:
        f = A.member(f_idx)
        c_indices = [int(i) for i in centralizer_indices(A, f_idx)]
        c_members = [A.member(i) for i in c_indices]
        pairs = orbit_reps_conjugation(A, c_indices, range(len(A)))
        pair_orbits += len(pairs.representatives)
        for y_idx in pairs.representatives:
            y = A.member(y_idx)
            commutes = f.compose(y) == y.compose(f)
            stab = [h for h in c_members if h.compose(y) == y.compose(h)]
            image = one_minus(f, y).image()
            cosets = orbit_reps_on_cosets(stab, group, image)
            cq += len(cosets.representatives)
            if commutes:
                commuting_pair_orbits += 1
                mq += len(cosets.representatives)
    return (len(classes.representatives), pair_orbits, commuting_pair_orbits, cq, mq)


def reference_mq_restricted(group, budget=None):
    """mq via representatives of the centralizer acting on itself only."""
    A = aut_group(group, budget=budget)
    classes = conjugacy_class_reps(A)
    mq = 0
    for f_idx in classes.representatives:
        f = A.member(f_idx)
        c_indices = [int(i) for i in centralizer_indices(A, f_idx)]
        c_members = [A.member(i) for i in c_indices]
        pairs = orbit_reps_conjugation(A, c_indices, c_indices)
        for y_idx in pairs.representatives:
            y = A.member(y_idx)
            stab = [h for h in c_members if h.compose(y) == y.compose(h)]
            image = one_minus(f, y).image()
            cosets = orbit_reps_on_cosets(stab, group, image)
            mq += len(cosets.representatives)
    return mq


def pair_orbit_count_bruteforce(A):
    """Orbit count of simultaneous conjugation on A x A by plain sweeps."""
    size = len(A)
    conj = []
    for h in range(size):
        hinv = A.inverse_index(h)
        conj.append([A.compose_indices(A.compose_indices(h, m), hinv) for m in range(size)])
    seen = [[False] * size for _ in range(size)]
    orbits = 0
    for a in range(size):
        for b in range(size):
            if seen[a][b]:
                continue
            orbits += 1
            stack = [(a, b)]
            seen[a][b] = True
            while stack:
                x, y = stack.pop()
                for perm in conj:
                    nx, ny = perm[x], perm[y]
                    if not seen[nx][ny]:
                        seen[nx][ny] = True
                        stack.append((nx, ny))
    return orbits
