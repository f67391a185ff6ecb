"""Endomorphisms and automorphism groups of finite abelian groups.

An endomorphism is stored as one integer matrix per prime component
(column j describes the image of the j-th generator of that component;
maps between components of different primes are always zero).  The full
automorphism group is materialized as an array of action tables, one row
per automorphism, which keeps group-sized orbit computations cheap.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from functools import cached_property
from math import prod

import numpy as np

from .abelian import AbelianGroup, GroupElement, Subgroup

DEFAULT_AUT_BUDGET = 20_000_000

# candidate matrices are enumerated and filtered below this count,
# otherwise the group is grown by closure from a generating set
_CANDIDATE_LIMIT = 1 << 18


class ResourceLimitError(RuntimeError):
    """Raised when a requested automorphism group exceeds the size budget."""

    def __init__(self, group: AbelianGroup, estimated: int, budget: int):
        self.group = group
        self.estimated = estimated
        self.budget = budget
        super().__init__(
            f"automorphism group of {group.descriptor} has {estimated} elements, "
            f"over the budget of {budget}"
        )


class Endomorphism:
    """A homomorphism of a group into itself, as one matrix per prime.

    Entry m[i][j] of the block for prime p is the coefficient of generator
    i in the image of generator j, reduced modulo the order p^{e_i} of the
    target factor; validity requires p^{max(0, e_i - e_j)} to divide
    m[i][j] so that generator images have legal orders.
    """

    __slots__ = ("group", "blocks", "_table", "_hash")

    def __init__(self, group: AbelianGroup, blocks):
        self.group = group
        spans = group.prime_spans
        if len(blocks) != len(spans):
            raise ValueError(f"expected {len(spans)} prime blocks, got {len(blocks)}")
        norm = []
        for (p, i0, i1), mat in zip(spans, blocks):
            k = i1 - i0
            exps = [e for _, e in group.factors[i0:i1]]
            if len(mat) != k or any(len(row) != k for row in mat):
                raise ValueError(f"block for prime {p} must be {k}x{k}")
            rows = []
            for i in range(k):
                row = []
                for j in range(k):
                    v = int(mat[i][j]) % p ** exps[i]
                    need = p ** max(0, exps[i] - exps[j])
                    if v % need:
                        raise ValueError(
                            f"entry [{i}][{j}]={v} for prime {p} must be divisible "
                            f"by {need} to give generator images of legal order"
                        )
                    row.append(v)
                rows.append(tuple(row))
            norm.append(tuple(rows))
        self.blocks = tuple(norm)
        self._table = None
        self._hash = hash((group, self.blocks))

    def __eq__(self, other):
        return (
            isinstance(other, Endomorphism)
            and self.group == other.group
            and self.blocks == other.blocks
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Endomorphism({self.group.descriptor}, {self.block_lists()!r})"

    def block_lists(self) -> list[list[list[int]]]:
        """Blocks as nested lists (the JSON debug form)."""
        return [[list(row) for row in b] for b in self.blocks]

    def apply(self, x: GroupElement) -> GroupElement:
        g = self.group
        g._check(x)
        out = [0] * len(g.factors)
        for (p, i0, i1), mat in zip(g.prime_spans, self.blocks):
            for i in range(i1 - i0):
                s = sum(mat[i][j] * x[i0 + j] for j in range(i1 - i0))
                out[i0 + i] = s % g.moduli[i0 + i]
        return tuple(out)

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        """self after other: apply(compose(f, g), x) == f(g(x))."""
        if self.group != other.group:
            raise ValueError("endomorphisms live on different groups")
        g = self.group
        blocks = []
        for (p, i0, i1), a, b in zip(g.prime_spans, self.blocks, other.blocks):
            k = i1 - i0
            mods = g.moduli[i0:i1]
            blocks.append(
                [
                    [sum(a[i][l] * b[l][j] for l in range(k)) % mods[i] for j in range(k)]
                    for i in range(k)
                ]
            )
        return Endomorphism(g, blocks)

    def __mul__(self, other):
        return self.compose(other)

    @property
    def table(self) -> np.ndarray:
        """Action on element indices: table[i] = index_of(f(element_at(i)))."""
        if self._table is None:
            g = self.group
            coords = g.coords_array
            out = np.zeros_like(coords)
            for (p, i0, i1), mat in zip(g.prime_spans, self.blocks):
                m = np.asarray(mat, dtype=np.int64)
                out[:, i0:i1] = coords[:, i0:i1] @ m.T
            self._table = g.pack_coords(out).astype(g.index_dtype)
            self._table.setflags(write=False)
        return self._table

    def image(self) -> Subgroup:
        g = self.group
        gens = []
        for j in range(len(g.factors)):
            unit = tuple(1 if i == j else 0 for i in range(len(g.factors)))
            gens.append(self.apply(unit))
        return g.subgroup_generated(gens)

    def is_automorphism(self) -> bool:
        return len(self.image()) == self.group.order


def identity(group: AbelianGroup) -> Endomorphism:
    blocks = []
    for p, i0, i1 in group.prime_spans:
        k = i1 - i0
        blocks.append([[1 if i == j else 0 for j in range(k)] for i in range(k)])
    return Endomorphism(group, blocks)


def scalar_endo(group: AbelianGroup, c: int) -> Endomorphism:
    """Multiplication by the integer c."""
    blocks = []
    for p, i0, i1 in group.prime_spans:
        k = i1 - i0
        blocks.append([[c if i == j else 0 for j in range(k)] for i in range(k)])
    return Endomorphism(group, blocks)


def one_minus(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    """The endomorphism x -> x - f(x) - g(x), computed blockwise."""
    if f.group != g.group:
        raise ValueError("endomorphisms live on different groups")
    grp = f.group
    blocks = []
    for (p, i0, i1), a, b in zip(grp.prime_spans, f.blocks, g.blocks):
        k = i1 - i0
        blocks.append(
            [
                [(1 if i == j else 0) - a[i][j] - b[i][j] for j in range(k)]
                for i in range(k)
            ]
        )
    return Endomorphism(grp, blocks)


def endo_from_gen_images(group: AbelianGroup, images: Sequence[GroupElement]) -> Endomorphism:
    """Build an endomorphism from the images of the canonical generators."""
    k = len(group.factors)
    if len(images) != k:
        raise ValueError(f"expected {k} generator images")
    blocks = []
    for p, i0, i1 in group.prime_spans:
        mat = []
        for i in range(i0, i1):
            row = []
            for j in range(i0, i1):
                row.append(images[j][i])
            mat.append(row)
        blocks.append(mat)
        # a p-component generator must map into the p-component
        for j in range(i0, i1):
            for i in range(k):
                if not i0 <= i < i1 and images[j][i]:
                    raise ValueError(
                        f"generator {j} maps across prime components (image {images[j]!r})"
                    )
    return Endomorphism(group, blocks)


# ---------------------------------------------------------------------------
# order of the automorphism group (exact, per prime component)


def _aut_order_prime(p: int, exps_desc: Sequence[int]) -> int:
    e = sorted(exps_desc)
    n = len(e)
    dk = [max(l for l in range(n) if e[l] == e[k]) + 1 for k in range(n)]
    ck = [min(l for l in range(n) if e[l] == e[k]) + 1 for k in range(n)]
    out = 1
    for k in range(n):
        out *= p ** dk[k] - p**k
    for j in range(n):
        out *= p ** (e[j] * (n - dk[j]))
    for i in range(n):
        out *= p ** ((e[i] - 1) * (n - ck[i] + 1))
    return out


def aut_group_order(group: AbelianGroup) -> int:
    """Exact |Aut(G)|, multiplicative over the prime components."""
    out = 1
    for p, i0, i1 in group.prime_spans:
        out *= _aut_order_prime(p, [e for _, e in group.factors[i0:i1]])
    return out


# ---------------------------------------------------------------------------
# generating sets per prime component


def _primitive_root(p: int, e: int) -> int:
    m = p**e
    phi = m // p * (p - 1)
    factors = set()
    x = phi
    d = 2
    while d * d <= x:
        if x % d == 0:
            factors.add(d)
            while x % d == 0:
                x //= d
        d += 1
    if x > 1:
        factors.add(x)
    for g in range(2, m):
        if g % p == 0:
            continue
        if all(pow(g, phi // q, m) != 1 for q in factors):
            return g
    raise AssertionError(f"no primitive root mod {m}")


def _unit_generators(p: int, e: int) -> list[int]:
    if p == 2:
        if e == 1:
            return []
        if e == 2:
            return [3]
        return [2**e - 1, 5]
    return [_primitive_root(p, e)]


def _elementary_matrices(p: int, exps: Sequence[int]) -> list[list[list[int]]]:
    """Unit scalings and minimal transvections; together they generate."""
    k = len(exps)
    mats = []

    def eye():
        return [[1 if i == j else 0 for j in range(k)] for i in range(k)]

    for i in range(k):
        for u in _unit_generators(p, exps[i]):
            m = eye()
            m[i][i] = u
            mats.append(m)
    for i in range(k):
        for j in range(k):
            if i != j:
                m = eye()
                m[i][j] = p ** max(0, exps[i] - exps[j])
                mats.append(m)
    return mats


# ---------------------------------------------------------------------------
# automorphism group construction


def _pack_keys(group: AbelianGroup, tables: np.ndarray) -> np.ndarray:
    """Key a table row by the images of the canonical generators."""
    n = group.order
    if not group.factors:
        return np.zeros(len(tables), dtype=np.int64)
    gen_pos = np.asarray(group._strides, dtype=np.int64)
    cols = tables[:, gen_pos].astype(np.int64)
    weights = n ** np.arange(len(gen_pos), dtype=np.int64)
    return cols @ weights


def _tables_by_candidates(gp: AbelianGroup, p: int, exps: Sequence[int]) -> np.ndarray:
    """Enumerate all legal matrices and keep the invertible ones."""
    k = len(exps)
    if k == 0:
        return np.zeros((1, 1), dtype=gp.index_dtype)
    steps = np.zeros((k, k), dtype=np.int64)
    counts = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            steps[i, j] = p ** max(0, exps[i] - exps[j])
            counts[i, j] = p ** min(exps[i], exps[j])
    flat_counts = counts.reshape(-1)
    flat_steps = steps.reshape(-1)
    total = int(flat_counts.prod())
    ids = np.arange(total, dtype=np.int64)
    entries = np.zeros((total, k * k), dtype=np.int64)
    stride = 1
    for e in range(k * k - 1, -1, -1):
        entries[:, e] = (ids // stride) % flat_counts[e] * flat_steps[e]
        stride *= flat_counts[e]
    mats = entries.reshape(total, k, k)

    # invertible iff the induced map on G/pG is invertible: det != 0 mod p
    det = np.zeros(total, dtype=np.int64)
    for perm in itertools.permutations(range(k)):
        sign = 1
        seen = list(perm)
        for a in range(k):
            for b in range(a + 1, k):
                if seen[a] > seen[b]:
                    sign = -sign
        term = np.ones(total, dtype=np.int64)
        for i in range(k):
            term = term * mats[:, i, perm[i]] % p
        det = (det + sign * term) % p
    mats = mats[det != 0]

    coords = gp.coords_array
    mods = np.asarray(gp.moduli, dtype=np.int64)
    out = np.empty((len(mats), gp.order), dtype=gp.index_dtype)
    chunk = max(1, (1 << 22) // max(1, gp.order * k))
    for lo in range(0, len(mats), chunk):
        m = mats[lo : lo + chunk]
        imgs = np.einsum("cij,nj->cni", m, coords) % mods
        out[lo : lo + chunk] = gp.pack_coords(imgs).astype(gp.index_dtype)
    return out


def _not_in_sorted(sorted_keys: np.ndarray, keys: np.ndarray) -> np.ndarray:
    pos = np.searchsorted(sorted_keys, keys)
    pos = np.minimum(pos, len(sorted_keys) - 1)
    return sorted_keys[pos] != keys


def _tables_by_closure(gp: AbelianGroup, p: int, exps: Sequence[int], expected: int) -> np.ndarray:
    """Grow the group from elementary generators by breadth-first closure."""
    gen_tables = [
        Endomorphism(gp, [m]).table for m in _elementary_matrices(p, exps)
    ]
    chunks = [identity(gp).table[None, :]]
    known = _pack_keys(gp, chunks[0])
    frontier = chunks[0]
    while len(frontier):
        # one generator at a time keeps the transient arrays bounded
        round_tables, round_keys = [], []
        for g in gen_tables:
            cand = g[frontier]
            keys = _pack_keys(gp, cand)
            fresh = _not_in_sorted(known, keys)
            round_tables.append(cand[fresh])
            round_keys.append(keys[fresh])
        keys = np.concatenate(round_keys)
        if not len(keys):
            break
        keys, first = np.unique(keys, return_index=True)
        cand = np.concatenate(round_tables, axis=0)[first]
        chunks.append(cand)
        known = np.union1d(known, keys)
        frontier = cand
        if sum(len(c) for c in chunks) > expected:
            raise AssertionError("closure overshot the predicted group order")
    tables = np.concatenate(chunks, axis=0)
    if len(tables) != expected:
        raise AssertionError(
            f"generating set incomplete for {gp.descriptor}: "
            f"closure size {len(tables)} != {expected}"
        )
    return tables


def _component_tables(gp: AbelianGroup) -> np.ndarray:
    (p, i0, i1) = gp.prime_spans[0]
    exps = [e for _, e in gp.factors]
    candidates = prod(
        p ** min(ei, ej) for ei in exps for ej in exps
    )
    if candidates <= _CANDIDATE_LIMIT:
        return _tables_by_candidates(gp, p, exps)
    return _tables_by_closure(gp, p, exps, _aut_order_prime(p, exps))


class AutGroup:
    """The full automorphism group of a finite abelian group.

    Members are stored as an array of action tables (row m is the
    permutation of element indices induced by member m).  Member objects
    are materialized lazily; indices are the primary handle elsewhere.
    """

    def __init__(self, group: AbelianGroup, tables: np.ndarray, gens: list[int]):
        self.group = group
        self.tables = tables
        self.tables.setflags(write=False)
        self.keys = _pack_keys(group, tables)
        self._order = np.argsort(self.keys, kind="stable")
        self._sorted_keys = self.keys[self._order]
        if len(tables) > 1 and not np.all(np.diff(self._sorted_keys) > 0):
            raise AssertionError("duplicate members in automorphism group")
        self.gens = gens
        self.identity_index = self.index_of_table(identity(group).table)

    def __len__(self):
        return len(self.tables)

    def __repr__(self):
        return f"<AutGroup of {self.group.descriptor}, order {len(self)}>"

    def index_of_table(self, table: np.ndarray) -> int:
        key = _pack_keys(self.group, table[None, :])[0]
        pos = int(np.searchsorted(self._sorted_keys, key))
        if pos == len(self._sorted_keys) or self._sorted_keys[pos] != key:
            raise KeyError("not a member of this automorphism group")
        return int(self._order[pos])

    def lookup_tables(self, tables: np.ndarray) -> np.ndarray:
        """Indices of many members at once; raises if any row is foreign."""
        keys = _pack_keys(self.group, tables)
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.clip(pos, 0, len(self._sorted_keys) - 1)
        if not np.array_equal(self._sorted_keys[pos], keys):
            raise KeyError("some rows are not members of this automorphism group")
        return self._order[pos].astype(np.int64)

    def index_of(self, f: Endomorphism) -> int:
        if f.group != self.group:
            raise KeyError("endomorphism of a different group")
        return self.index_of_table(f.table)

    def __contains__(self, f):
        try:
            self.index_of(f)
            return True
        except KeyError:
            return False

    def member(self, i: int) -> Endomorphism:
        g = self.group
        row = self.tables[int(i)]
        images = [g.element_at(int(row[s])) for s in g._strides] if g.factors else []
        return endo_from_gen_images(g, images)

    @cached_property
    def members(self) -> "_MemberSeq":
        return _MemberSeq(self)

    def compose_indices(self, i: int, j: int) -> int:
        """Index of member i after member j."""
        return self.index_of_table(self.tables[i][self.tables[j]])

    def inverse_index(self, i: int) -> int:
        row = self.tables[i]
        inv = np.empty_like(row)
        inv[row] = np.arange(len(row), dtype=row.dtype)
        return self.index_of_table(inv)


class _MemberSeq(Sequence):
    def __init__(self, aut: AutGroup):
        self._aut = aut

    def __len__(self):
        return len(self._aut)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self._aut.member(j) for j in range(*i.indices(len(self)))]
        return self._aut.member(i)


def aut_group(group: AbelianGroup, budget: int | None = DEFAULT_AUT_BUDGET) -> AutGroup:
    """Construct Aut(G) completely, refusing when it would exceed the budget.

    The group is built per prime component (candidate filtering for small
    components, generator closure for large ones) and the components are
    glued as a direct product.  The member count is checked against the
    exact order formula.
    """
    expected = aut_group_order(group)
    if budget is not None and expected > budget:
        raise ResourceLimitError(group, expected, budget)

    spans = group.prime_spans
    if not spans:
        tables = identity(group).table[None, :]
        return AutGroup(group, tables, [0])

    comp_groups = [
        AbelianGroup(group.factors[i0:i1]) for (_, i0, i1) in spans
    ]
    comp_tables = [_component_tables(cg) for cg in comp_groups]

    # direct product: member (a_1..a_r) acts independently on each component
    dt = group.index_dtype
    full = comp_tables[0].astype(dt, copy=False)
    n_acc = comp_groups[0].order
    for ct, cg in zip(comp_tables[1:], comp_groups[1:]):
        np_ = cg.order
        prev_count, new_count = len(full), len(ct)
        out = np.empty((prev_count * new_count, n_acc * np_), dtype=dt)
        ct = ct.astype(dt, copy=False)
        chunk = max(1, (1 << 24) // max(1, new_count * n_acc * np_))
        for lo in range(0, prev_count, chunk):
            hi = min(lo + chunk, prev_count)
            # values stay below the final group order, which fits the dtype
            block = full[lo:hi, None, :, None] * np.array(np_, dtype=dt)
            block = block + ct[None, :, None, :]
            out[lo * new_count : hi * new_count] = block.reshape(
                (hi - lo) * new_count, n_acc * np_
            )
        full = out
        n_acc *= np_
    tables = full
    if len(tables) != expected:
        raise AssertionError(
            f"automorphism count mismatch for {group.descriptor}: "
            f"{len(tables)} != {expected}"
        )

    aut = AutGroup(group, tables, [])
    gens = []
    for (p, i0, i1), cg in zip(spans, comp_groups):
        for m in _elementary_matrices(p, [e for _, e in cg.factors]):
            blocks = []
            for q, j0, j1 in spans:
                k = j1 - j0
                if q == p:
                    blocks.append(m)
                else:
                    blocks.append([[1 if a == b else 0 for b in range(k)] for a in range(k)])
            gens.append(aut.index_of(Endomorphism(group, blocks)))
    if not gens:
        gens = [aut.identity_index]
    aut.gens = sorted(set(gens))
    return aut
