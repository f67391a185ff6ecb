"""Conjugacy classes, centralizers and orbit representatives.

Points are identified by their index in the ambient member list (or in a
coset representative list); the chosen representative of an orbit is
always its minimal point.  Large acting groups are first reduced to a
small generating set, small ones are applied with full sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ._engine import EngineContext, _inverse_perm, _orbit_min_labels
from .abelian import AbelianGroup, Subgroup
from .endo import AutGroup, Endomorphism

_FULL_SWEEP_LIMIT = 1024


@dataclass
class OrbitPartition:
    """An action's orbits: minimal-point representatives plus the quotient map."""

    representatives: list[int]
    orbit_of: Mapping[int, int] | np.ndarray
    orbit_sizes: dict[int, int]

    def __len__(self):
        return len(self.representatives)


def _as_index(A: AutGroup, f) -> int:
    if isinstance(f, (int, np.integer)):
        i = int(f)
        if not 0 <= i < len(A):
            raise KeyError(f"member index {i} out of range")
        return i
    return A.index_of(f)


def conjugacy_class_reps(A: AutGroup) -> OrbitPartition:
    """Partition of A into conjugacy classes (points are member indices)."""
    ctx = EngineContext(A.group, A)
    labels = ctx.conjugacy_class_labels()
    reps = np.flatnonzero(labels == np.arange(len(A), dtype=labels.dtype))
    sizes = {}
    counts = np.bincount(labels, minlength=len(A))
    for r in reps:
        sizes[int(r)] = int(counts[r])
    return OrbitPartition([int(r) for r in reps], labels, sizes)


def centralizer(A: AutGroup, f) -> list[Endomorphism]:
    """All members commuting with f; f must belong to A."""
    idx = _as_index(A, f)
    ctx = EngineContext(A.group, A)
    mask = ctx.centralizer_mask(idx)
    return [A.member(int(i)) for i in np.flatnonzero(mask)]


def centralizer_indices(A: AutGroup, f) -> np.ndarray:
    idx = _as_index(A, f)
    ctx = EngineContext(A.group, A)
    return np.flatnonzero(ctx.centralizer_mask(idx))


def _closure_indices(A: AutGroup, gens: list[int]) -> set[int]:
    seen = {A.identity_index}
    frontier = [A.identity_index]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = A.compose_indices(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _greedy_generators(A: AutGroup, members: list[int]) -> list[int]:
    """Generators for a subgroup given as an element list, added greedily."""
    gens: list[int] = []
    closure = {A.identity_index}
    for h in members:
        if h not in closure:
            gens.append(h)
            closure = _closure_indices(A, gens)
    if len(closure) != len(members):
        raise ValueError("member list is not closed under composition")
    return gens


def orbit_reps_conjugation(A: AutGroup, H, S) -> OrbitPartition:
    """Orbits of S under s -> h s h^-1 for h in the subgroup H.

    H and S are given as members (or member indices) of the ambient group
    A; points of the partition are ambient indices.  Leaving S during an
    orbit closure means S was not closed under the action and is an error.
    """
    h_idx = [_as_index(A, h) for h in H]
    s_idx = sorted({_as_index(A, s) for s in S})
    s_set = set(s_idx)

    tab = A.tables

    def conj_all(s: int, hs: list[int], hinvs: list[np.ndarray]) -> list[int]:
        row = tab[s]
        return [
            int(A.index_of_table(tab[h][row[hinv]]))
            for h, hinv in zip(hs, hinvs)
        ]

    if len(h_idx) > _FULL_SWEEP_LIMIT:
        gens = _greedy_generators(A, h_idx)
    else:
        gens = h_idx
    ginvs = [_inverse_perm(tab[g].astype(np.int64)) for g in gens]

    orbit_of: dict[int, int] = {}
    representatives: list[int] = []
    orbit_sizes: dict[int, int] = {}
    for s in s_idx:
        if s in orbit_of:
            continue
        representatives.append(s)
        frontier = [s]
        orbit_of[s] = s
        size = 1
        while frontier:
            nxt = []
            for x in frontier:
                for y in conj_all(x, gens, ginvs):
                    if y not in orbit_of:
                        if y not in s_set:
                            raise ValueError(
                                "S is not closed under conjugation by H "
                                f"(member {y} escaped)"
                            )
                        orbit_of[y] = s
                        size += 1
                        nxt.append(y)
            frontier = nxt
        orbit_sizes[s] = size
    return OrbitPartition(representatives, orbit_of, orbit_sizes)


def orbit_reps_on_cosets(H, group: AbelianGroup, U: Subgroup) -> OrbitPartition:
    """Orbits of the induced action of H on the cosets of U.

    H is a list of automorphisms of the group, each of which must map U
    into U (that makes the action on cosets well defined); points are the
    index-minimal coset representatives.
    """
    if U.group != group:
        raise ValueError("subgroup belongs to a different group")
    n = group.order
    u_idx = np.asarray(sorted(U.indices), dtype=np.int64)
    add = np.asarray(group.add_table, dtype=np.int64)

    canon = np.full(n, -1, dtype=np.int64)
    reps = []
    for x in range(n):
        if canon[x] < 0:
            reps.append(x)
            canon[add[x, u_idx]] = x

    h_list = list(H)
    for h in h_list:
        if not isinstance(h, Endomorphism) or h.group != group:
            raise ValueError("H must consist of automorphisms of the group")
        htab = h.table.astype(np.int64)
        if not set(int(v) for v in htab[u_idx]) <= U.indices:
            raise ValueError("an acting automorphism does not preserve the subgroup")
        if not np.array_equal(canon[htab], canon[htab[canon]]):
            raise RuntimeError(
                "internal invariant violated: coset action is not well defined"
            )

    if len(h_list) > _FULL_SWEEP_LIMIT:
        acting = _reduce_endo_generators(h_list)
    else:
        acting = h_list
    act_tabs = [h.table.astype(np.int64) for h in acting]

    orbit_of: dict[int, int] = {}
    representatives: list[int] = []
    orbit_sizes: dict[int, int] = {}
    for r in reps:
        if r in orbit_of:
            continue
        representatives.append(r)
        orbit_of[r] = r
        frontier = [r]
        size = 1
        while frontier:
            nxt = []
            for x in frontier:
                for tabh in act_tabs:
                    y = int(canon[tabh[x]])
                    if y not in orbit_of:
                        orbit_of[y] = r
                        size += 1
                        nxt.append(y)
            frontier = nxt
        orbit_sizes[r] = size
    return OrbitPartition(representatives, orbit_of, orbit_sizes)


def _reduce_endo_generators(h_list: list[Endomorphism]) -> list[Endomorphism]:
    gens: list[Endomorphism] = []
    closure = None
    for h in h_list:
        if closure is None or h not in closure:
            gens.append(h)
            closure = set(gens)
            frontier = list(gens)
            while frontier:
                nxt = []
                for x in frontier:
                    for g in gens:
                        y = g.compose(x)
                        if y not in closure:
                            closure.add(y)
                            nxt.append(y)
                frontier = nxt
    return gens


def direct_pair_orbit_count(A: AutGroup, cap: int = 4096) -> int:
    """Orbit count of simultaneous conjugation on A x A, computed directly.

    Materializes the full pair space, so only sensible for small groups;
    the per-representative route must agree with this number.
    """
    size = len(A)
    if size > cap:
        raise ValueError(f"group of order {size} is over the pair-space cap {cap}")
    ctx = EngineContext(A.group, A)
    perms = []
    for g in ctx.agens:
        p = ctx.conj_perm(g)
        pair = (p[:, None] * size + p[None, :]).reshape(-1)
        perms.append(pair)
        perms.append(_inverse_perm(pair))
    labels = _orbit_min_labels(perms, size * size)
    return int(np.count_nonzero(labels == np.arange(size * size, dtype=labels.dtype)))
