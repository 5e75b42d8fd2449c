"""Finite right M-sets, hom-sets, and the classifier of sub-M-sets.

The classifier carrier is the canonical ideal list of M, acted on by ideal
quotients; the point t picks out the full ideal M.  Sub-M-sets of a carrier
are bitmasks.  Hom enumeration backtracks over images of one representative
per orbit under the action closure, so it stays cheap at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache
from itertools import product as iproduct

from .bitsets import canon_key, elements_of, has, mask_of, members
from .ideals import (
    Ideal,
    full_mask,
    ideal_index,
    ideal_masks,
    quotient_table,
)
from .monoids import FiniteCommMonoid, MonoidHom, generating_set, submonoid_generated


class MSetLawError(ValueError):
    def __init__(self, msg: str, witness: tuple):
        self.witness = witness
        super().__init__(msg)


class NotSubMSet(ValueError):
    def __init__(self, a: int, m: int):
        self.witness = (a, m)
        super().__init__(f"subset not closed under the action: {a}*{m} escapes")


@dataclass(frozen=True)
class MSet:
    """A finite set with a right action of a finite commutative monoid."""

    monoid: FiniteCommMonoid
    k: int
    act: tuple[tuple[int, ...], ...]  # act[a][m] = a * m
    name: str = field(default="", compare=False)

    def __post_init__(self):
        M = self.monoid
        if len(self.act) != self.k:
            raise MSetLawError("action table has wrong height", (self.k,))
        for a in range(self.k):
            row = self.act[a]
            if len(row) != M.n or any(not 0 <= v < self.k for v in row):
                raise MSetLawError(f"bad action row at {a}", (a,))
            if row[M.identity] != a:
                raise MSetLawError(f"identity does not fix {a}", (a,))
        for a in range(self.k):
            for m in range(M.n):
                am = self.act[a][m]
                for m2 in range(M.n):
                    if self.act[am][m2] != self.act[a][M.mul[m][m2]]:
                        raise MSetLawError(
                            f"action not compatible at ({a},{m},{m2})", (a, m, m2)
                        )

    def __len__(self) -> int:
        return self.k

    def __repr__(self) -> str:
        label = self.name or f"{self.k}pt"
        return f"MSet({label} over {self.monoid.name})"


@dataclass(frozen=True)
class MSetHom:
    source: MSet
    target: MSet
    map: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.map[a]

    def compose(self, first: "MSetHom") -> "MSetHom":
        if first.target != self.source:
            raise ValueError("composition mismatch")
        return MSetHom(first.source, self.target, tuple(self.map[v] for v in first.map))

    def is_bijective(self) -> bool:
        return len(set(self.map)) == self.source.k == self.target.k


def check_mset_hom(h: MSetHom) -> bool:
    A, B, f = h.source, h.target, h.map
    if A.monoid != B.monoid or len(f) != A.k:
        return False
    return all(
        f[A.act[a][m]] == B.act[f[a]][m]
        for a in range(A.k)
        for m in range(A.monoid.n)
    )


def regular_mset(M: FiniteCommMonoid) -> MSet:
    return MSet(M, M.n, M.mul, name=M.name)


def trivial_mset(M: FiniteCommMonoid, k: int, name: str = "") -> MSet:
    return MSet(M, k, tuple(tuple([a] * M.n) for a in range(k)), name=name)


def terminal_mset(M: FiniteCommMonoid) -> MSet:
    return trivial_mset(M, 1, name="1")


def ideal_as_mset(M: FiniteCommMonoid, mask: int) -> MSet:
    """An ideal of M as an M-set (carrier reindexed to 0..|a|-1)."""
    mem = members(mask)
    pos = {x: i for i, x in enumerate(mem)}
    act = tuple(tuple(pos[M.mul[x][m]] for m in range(M.n)) for x in mem)
    return MSet(M, len(mem), act, name=f"ideal{mask}")


def is_sub_mset(A: MSet, mask: int) -> bool:
    return all(
        has(mask, A.act[a][m]) for a in elements_of(mask) for m in range(A.monoid.n)
    )


def sub_msets(A: MSet) -> tuple[int, ...]:
    """All action-closed carrier subsets, as masks in canonical order."""
    if A.k > 12:
        raise ValueError("sub-M-set scan limited to carriers <= 12")
    out = [mask for mask in range(1 << A.k) if is_sub_mset(A, mask)]
    out.sort(key=lambda m: canon_key(m, A.k))
    return tuple(out)


def mset_from_subset(A: MSet, mask: int) -> tuple[MSet, tuple[int, ...]]:
    """The sub-M-set on `mask` plus the inclusion into A's carrier."""
    if not is_sub_mset(A, mask):
        for a in elements_of(mask):
            for m in range(A.monoid.n):
                if not has(mask, A.act[a][m]):
                    raise NotSubMSet(a, m)
    mem = members(mask)
    pos = {x: i for i, x in enumerate(mem)}
    act = tuple(tuple(pos[A.act[x][m]] for m in range(A.monoid.n)) for x in mem)
    return MSet(A.monoid, len(mem), act), mem


@dataclass(frozen=True)
class Omega:
    """The classifier M-set: all ideals, acted on by ideal quotient."""

    monoid: FiniteCommMonoid
    mset: MSet
    masks: tuple[int, ...]
    top: int  # carrier index of the full ideal M

    def index_of(self, mask: int) -> int:
        return ideal_index(self.monoid)[mask]


@cache
def omega(M: FiniteCommMonoid) -> Omega:
    masks = ideal_masks(M)
    act = quotient_table(M)
    om = MSet(M, len(masks), act, name=f"Omega^{M.name}")
    top = ideal_index(M)[full_mask(M)]
    assert all(act[top][m] == top for m in range(M.n))  # t is a fixed point
    return Omega(M, om, masks, top)


def characteristic_map(A: MSet, b_mask: int) -> MSetHom:
    """chi_B: a -> {m | a*m in B}, an M-map into the classifier."""
    if not is_sub_mset(A, b_mask):
        for a in elements_of(b_mask):
            for m in range(A.monoid.n):
                if not has(b_mask, A.act[a][m]):
                    raise NotSubMSet(a, m)
    M = A.monoid
    om = omega(M)
    index = ideal_index(M)
    vals = []
    for a in range(A.k):
        m_mask = mask_of(m for m in range(M.n) if has(b_mask, A.act[a][m]))
        vals.append(index[m_mask])
    chi = MSetHom(A, om.mset, tuple(vals))
    assert check_mset_hom(chi)
    return chi


def action_generators(
    A: MSet,
) -> tuple[tuple[int, ...], tuple[tuple[int, int], ...], tuple[int, ...]]:
    """Greedy orbit representatives, parent links x = parent*m, and a fill
    order in which every parent precedes its children."""
    reps: list[int] = []
    parent: list[tuple[int, int]] = [(-1, -1)] * A.k
    order: list[int] = []
    reached = [False] * A.k
    for a in range(A.k):
        if reached[a]:
            continue
        reps.append(a)
        queue = [a]
        reached[a] = True
        while queue:
            x = queue.pop(0)
            for m in range(A.monoid.n):
                y = A.act[x][m]
                if not reached[y]:
                    reached[y] = True
                    parent[y] = (x, m)
                    order.append(y)
                    queue.append(y)
    return tuple(reps), tuple(parent), tuple(order)


@cache
def hom_set(A: MSet, B: MSet) -> tuple[MSetHom, ...]:
    """All equivariant maps A -> B, in deterministic order."""
    if A.monoid != B.monoid:
        raise ValueError("hom_set needs M-sets over the same monoid")
    if A.k == 0:
        return (MSetHom(A, B, ()),)
    reps, parent, fill_order = action_generators(A)
    n = A.monoid.n
    out: list[MSetHom] = []
    img = [-1] * A.k

    def complete_and_check() -> bool:
        for x in fill_order:
            p, m = parent[x]
            img[x] = B.act[img[p]][m]
        return all(
            img[A.act[a][m]] == B.act[img[a]][m] for a in range(A.k) for m in range(n)
        )

    def dfs(d: int):
        if d == len(reps):
            if complete_and_check():
                out.append(MSetHom(A, B, tuple(img)))
            return
        for v in range(B.k):
            img[reps[d]] = v
            dfs(d + 1)
        img[reps[d]] = -1

    dfs(0)
    return tuple(out)


def mset_iso(A: MSet, B: MSet) -> tuple[int, ...] | None:
    """An equivariant bijection A -> B, or None."""
    if A.monoid != B.monoid or A.k != B.k:
        return None
    for h in hom_set(A, B):
        if h.is_bijective():
            return h.map
    return None


def verify_classifier(M: FiniteCommMonoid, A: MSet, b_mask: int) -> bool:
    """Pullback and uniqueness of the characteristic map of B inside A.

    True iff chi_B pulls t back to exactly B, and it is the only map A -> Omega
    doing so (all homs A -> Omega are enumerated).
    """
    om = omega(M)
    chi = characteristic_map(A, b_mask)
    pullback = mask_of(a for a in range(A.k) if chi.map[a] == om.top)
    if pullback != b_mask:
        return False
    classifying = [
        h for h in hom_set(A, om.mset)
        if mask_of(a for a in range(A.k) if h.map[a] == om.top) == b_mask
    ]
    return classifying == [chi]


def product_mset(A: MSet, B: MSet, name: str = "") -> MSet:
    """Product with carrier index a*|B| + b."""
    if A.monoid != B.monoid:
        raise ValueError("product needs M-sets over the same monoid")
    n = A.monoid.n
    act = tuple(
        tuple(A.act[a][m] * B.k + B.act[b][m] for m in range(n))
        for a in range(A.k)
        for b in range(B.k)
    )
    return MSet(A.monoid, A.k * B.k, act, name=name or "x".join(filter(None, (A.name, B.name))))


def equalizer_mset(u: MSetHom, v: MSetHom) -> tuple[MSet, tuple[int, ...]]:
    """The equalizer of a parallel pair, plus its inclusion index list."""
    if u.source != v.source or u.target != v.target:
        raise ValueError("not a parallel pair")
    A = u.source
    mask = mask_of(a for a in range(A.k) if u.map[a] == v.map[a])
    if not is_sub_mset(A, mask):
        raise AssertionError("equalizer carrier must be action closed")
    return mset_from_subset(A, mask)


def restrict_mset(f: MonoidHom, B: MSet) -> MSet:
    """View an f.target-set as an f.source-set through f."""
    if B.monoid != f.target:
        raise ValueError("restriction target mismatch")
    act = tuple(tuple(B.act[b][f.map[m]] for m in range(f.source.n)) for b in range(B.k))
    return MSet(f.source, B.k, act, name=B.name)


def _canonical_act(act: tuple[tuple[int, ...], ...], k: int) -> tuple:
    from itertools import permutations

    best = None
    for perm in permutations(range(k)):
        inv = [0] * k
        for i, p in enumerate(perm):
            inv[p] = i
        cand = tuple(tuple(perm[v] for v in act[inv[a]]) for a in range(k))
        if best is None or cand < best:
            best = cand
    return best if best is not None else ()


@cache
def all_msets(M: FiniteCommMonoid, k: int, up_to_iso: bool = True) -> tuple[MSet, ...]:
    """Every right M-set structure on a k-element carrier.

    Enumerated by choosing transformation images for a generating set of M and
    checking consistency against the multiplication table; with up_to_iso one
    representative per relabeling class is kept.
    """
    if k == 0:
        return (MSet(M, 0, ()),)
    if k > 4:
        raise ValueError("M-set enumeration limited to carriers <= 4")
    gens = generating_set(M)
    # elements of the submonoid generated by each generator prefix, with a
    # factorization x = y*g used to extend partial assignments
    stages = []
    for d in range(len(gens) + 1):
        sub = submonoid_generated(M, gens[:d]).members
        stages.append(sub)
    transformations = list(iproduct(range(k), repeat=k))
    identity_map = tuple(range(k))
    results: list[tuple[tuple[int, ...], ...]] = []

    def extend(rho: dict[int, tuple[int, ...]], d: int):
        if d == len(gens):
            act = tuple(tuple(rho[m][a] for m in range(M.n)) for a in range(k))
            results.append(act)
            return
        g = gens[d]
        known = stages[d]
        new_elems = [x for x in stages[d + 1] if x not in rho]
        for sigma in transformations:
            trial = dict(rho)
            trial[g] = sigma
            ok = True
            # close the new submonoid: reach every new element as y*g^j with
            # y already assigned, in index order for determinism
            pending = [x for x in new_elems if x != g]
            while pending and ok:
                progress = False
                rest = []
                for x in pending:
                    src = next(
                        (
                            (y, h)
                            for y in trial
                            for h in trial
                            if M.mul[y][h] == x
                        ),
                        None,
                    )
                    if src is None:
                        rest.append(x)
                        continue
                    y, h = src
                    trial[x] = tuple(trial[h][trial[y][a]] for a in range(k))
                    progress = True
                pending = rest
                if not progress and pending:
                    ok = False
            if ok:
                for x in stages[d + 1]:
                    for y in stages[d + 1]:
                        xy = M.mul[x][y]
                        comp = tuple(trial[y][trial[x][a]] for a in range(k))
                        if comp != trial[xy]:
                            ok = False
                            break
                    if not ok:
                        break
            if ok:
                extend(trial, d + 1)

    extend({M.identity: identity_map}, 0)
    if up_to_iso:
        seen = {}
        for act in results:
            key = _canonical_act(act, k)
            if key not in seen:
                seen[key] = act
        results = sorted(seen.values())
    else:
        results = sorted(set(results))
    return tuple(MSet(M, k, act) for act in results)


def all_msets_upto(M: FiniteCommMonoid, kmax: int, up_to_iso: bool = True) -> tuple[MSet, ...]:
    out: list[MSet] = []
    for k in range(1, kmax + 1):
        out.extend(all_msets(M, k, up_to_iso))
    return tuple(out)
