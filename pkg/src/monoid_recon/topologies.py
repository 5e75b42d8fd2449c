"""Grothendieck topologies on a monoid, the Galois connection with spectrum
subsets, Lawvere-Tierney operators on the classifier, sheaves and
sheafification.

A topology is a set of ideals containing M, closed under ideal quotients
(T2), and closed under the covering descent rule (T3).  Families of ideals
are bitmasks over the canonical ideal list.  Enumeration prunes to up-closed
families first, which is sound because every topology is up-closed; the raw
2^#ideals scan is kept as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache
from itertools import product as iproduct

from .bitsets import canon_key, elements_of, has, mask_of, members
from .ideals import (
    Ideal,
    SpecPoset,
    full_mask,
    ideal_index,
    ideal_masks,
    ideal_product_mask,
    ideal_quotient_mask,
    order_topology,
    quotient_table,
    spec,
    vanishing,
    zariski_topology,
)
from .monoids import FiniteCommMonoid
from .msets import (
    MSet,
    MSetHom,
    characteristic_map,
    check_mset_hom,
    hom_set,
    ideal_as_mset,
    mset_iso,
    omega,
    product_mset,
    regular_mset,
    sub_msets,
)


class CriterionMismatch(AssertionError):
    """Two stability criteria that must agree did not."""


@dataclass(frozen=True)
class GTopology:
    """A Grothendieck topology, as a mask over the canonical ideal list."""

    monoid: FiniteCommMonoid
    mask: int

    @property
    def member_indices(self) -> tuple[int, ...]:
        return members(self.mask)

    @property
    def ideals(self) -> tuple[Ideal, ...]:
        masks = ideal_masks(self.monoid)
        return tuple(Ideal(self.monoid, masks[i]) for i in self.member_indices)

    def __contains__(self, a: Ideal) -> bool:
        return has(self.mask, ideal_index(self.monoid)[a.mask])

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __repr__(self) -> str:
        M = self.monoid
        masks = ideal_masks(M)
        body = ", ".join(M.subset_str(masks[i]) for i in self.member_indices)
        return f"GTopology({M.name}, [{body}])"


def is_gtopology(M: FiniteCommMonoid, family_mask: int) -> bool:
    """Exhaustive check of the three covering axioms on an ideal family."""
    masks = ideal_masks(M)
    if family_mask >> len(masks):
        return False
    Q = quotient_table(M)
    top = ideal_index(M)[full_mask(M)]
    if not has(family_mask, top):  # T1
        return False
    for i in elements_of(family_mask):  # T2
        if any(not has(family_mask, Q[i][m]) for m in range(M.n)):
            return False
    for a in range(len(masks)):  # T3
        if has(family_mask, a):
            continue
        for b in elements_of(family_mask):
            if all(has(family_mask, Q[a][m]) for m in elements_of(masks[b])):
                return False
    return True


def gtopology(M: FiniteCommMonoid, ideals) -> GTopology:
    index = ideal_index(M)
    mask = mask_of(index[a.mask] if isinstance(a, Ideal) else index[a] for a in ideals)
    if not is_gtopology(M, mask):
        raise ValueError("ideal family violates the covering axioms")
    return GTopology(M, mask)


def enumerate_gtopologies_exhaustive(M: FiniteCommMonoid) -> tuple[GTopology, ...]:
    """Oracle path: scan all 2^#ideals families (#ideals <= 16)."""
    count = len(ideal_masks(M))
    if count > 16:
        raise ValueError("exhaustive topology scan limited to 16 ideals")
    out = [m for m in range(1 << count) if is_gtopology(M, m)]
    out.sort(key=lambda m: canon_key(m, count))
    return tuple(GTopology(M, m) for m in out)


@cache
def enumerate_gtopologies(M: FiniteCommMonoid) -> tuple[GTopology, ...]:
    """All topologies: enumerate up-closed families containing M, then filter
    by T2 and T3.  Up-closure is necessary, so the pruning loses nothing."""
    masks = ideal_masks(M)
    count = len(masks)
    top = ideal_index(M)[full_mask(M)]
    supersets = [
        [j for j in range(count) if j != i and (masks[i] & masks[j]) == masks[i]]
        for i in range(count)
    ]
    order = sorted(range(count), key=lambda i: -masks[i].bit_count())
    found: list[int] = []

    def dfs(d: int, fam: int):
        if d == count:
            if is_gtopology(M, fam):
                found.append(fam)
            return
        i = order[d]
        if all(has(fam, j) for j in supersets[i]):
            dfs(d + 1, fam | (1 << i))
        if i != top:
            dfs(d + 1, fam)

    dfs(0, 0)
    found.sort(key=lambda m: canon_key(m, count))
    return tuple(GTopology(M, m) for m in found)


def point_topology(M: FiniteCommMonoid, p: Ideal) -> GTopology:
    """The ideals meeting the complement of a prime; a topology."""
    from .ideals import _is_prime_mask

    if not _is_prime_mask(M, p.mask):
        raise ValueError("point topology needs a prime ideal")
    comp = full_mask(M) & ~p.mask
    fam = mask_of(
        i for i, a in enumerate(ideal_masks(M)) if a & comp
    )
    if not is_gtopology(M, fam):
        raise AssertionError("point family failed the covering axioms")
    return GTopology(M, fam)


def upsilon(M: FiniteCommMonoid, prime_set: int) -> GTopology:
    """Intersection of the point topologies over a set of primes; agrees with
    the vanishing-locus characterization, which is asserted."""
    P = spec(M)
    masks = ideal_masks(M)
    fam = (1 << len(masks)) - 1
    for i in elements_of(prime_set):
        fam &= point_topology(M, P.primes[i]).mask
    by_vanishing = mask_of(
        i
        for i, a in enumerate(masks)
        if vanishing(M, Ideal(M, a)) & prime_set == 0
    )
    assert fam == by_vanishing, "point-topology and vanishing forms disagree"
    return GTopology(M, fam)


def xi(M: FiniteCommMonoid, F: GTopology) -> int:
    """The primes not belonging to a topology, as a spec mask."""
    P = spec(M)
    index = ideal_index(M)
    return mask_of(
        i for i, p in enumerate(P.primes) if not has(F.mask, index[p.mask])
    )


def stable_closure(M: FiniteCommMonoid, F: GTopology) -> GTopology:
    return upsilon(M, xi(M, F))


def is_stable(M: FiniteCommMonoid, F: GTopology) -> bool:
    """F equals its Galois closure; checked against the prime-escape
    criterion (every ideal outside F lies under a prime outside F)."""
    galois = stable_closure(M, F).mask == F.mask
    masks = ideal_masks(M)
    P = spec(M)
    index = ideal_index(M)
    escape = True
    for i in range(len(masks)):
        if has(F.mask, i):
            continue
        above = vanishing(M, Ideal(M, masks[i]))
        if not any(
            not has(F.mask, index[P.primes[j].mask]) for j in elements_of(above)
        ):
            escape = False
            break
    if galois != escape:
        raise CriterionMismatch(f"stability criteria disagree on {F}")
    return galois


@dataclass(frozen=True)
class BijectionReport:
    monoid: FiniteCommMonoid
    topologies: tuple[GTopology, ...]
    order_opens: tuple[int, ...]
    zariski_opens: tuple[int, ...]
    pairing: tuple[tuple[int, int], ...]  # (topology position, open position)
    ok: bool
    witness: str = ""


def verify_bijection(M: FiniteCommMonoid) -> BijectionReport:
    """Topologies of M biject with spectrum opens, order-reversingly.

    Counts must agree between Top(M), the order opens and the Zariski opens;
    upsilon and xi must be mutually inverse between opens and topologies and
    reverse inclusion both ways.
    """
    tops = enumerate_gtopologies(M)
    o_top = order_topology(spec(M))
    z_top = zariski_topology(M)
    problems: list[str] = []
    if not (len(tops) == len(o_top.opens) == len(z_top.opens)):
        problems.append(
            f"counts {len(tops)}/{len(o_top.opens)}/{len(z_top.opens)} differ"
        )
    if set(o_top.opens) != set(z_top.opens):
        problems.append("order and Zariski opens differ")
    pairing = []
    top_pos = {F.mask: i for i, F in enumerate(tops)}
    open_pos = {o: i for i, o in enumerate(o_top.opens)}
    for o in o_top.opens:
        F = upsilon(M, o)
        if F.mask not in top_pos:
            problems.append(f"upsilon({o:b}) is not an enumerated topology")
            continue
        if xi(M, F) != o:
            problems.append(f"xi(upsilon({o:b})) != {o:b}")
        pairing.append((top_pos[F.mask], open_pos[o]))
    for F in tops:
        o = xi(M, F)
        if o not in open_pos:
            problems.append(f"xi({F}) is not an order open")
        elif upsilon(M, o).mask != F.mask:
            problems.append(f"upsilon(xi(F)) != F for {F}")
    for o1 in o_top.opens:  # both directions reverse inclusion
        for o2 in o_top.opens:
            rev = (upsilon(M, o2).mask & upsilon(M, o1).mask) == upsilon(M, o2).mask
            if ((o1 & o2) == o1) != rev:
                problems.append(f"pairing not order reversing at {o1:b},{o2:b}")
    return BijectionReport(
        M,
        tops,
        o_top.opens,
        z_top.opens,
        tuple(sorted(pairing)),
        not problems,
        problems[0] if problems else "",
    )


@dataclass(frozen=True)
class LTOperator:
    """A Lawvere-Tierney operator: an idempotent, top-fixing, meet-preserving
    endomorphism of the classifier."""

    monoid: FiniteCommMonoid
    j: tuple[int, ...]  # self-map of the canonical ideal list

    def __post_init__(self):
        if not satisfies_lt_axioms(self.monoid, self.j):
            raise ValueError("map violates the Lawvere-Tierney axioms")


@cache
def meet_table(M: FiniteCommMonoid) -> tuple[tuple[int, ...], ...]:
    """Meet on the classifier carrier, realized as ideal intersection and
    cross-validated as the characteristic map of (t,t)."""
    masks = ideal_masks(M)
    index = ideal_index(M)
    table = tuple(
        tuple(index[a & b] for b in masks) for a in masks
    )
    om = omega(M)
    sq = product_mset(om.mset, om.mset)
    pair_top = om.top * om.mset.k + om.top
    chi = characteristic_map(sq, 1 << pair_top)
    for i in range(om.mset.k):
        for j in range(om.mset.k):
            assert chi.map[i * om.mset.k + j] == table[i][j], "meet mismatch"
    return table


def satisfies_lt_axioms(M: FiniteCommMonoid, j: tuple[int, ...]) -> bool:
    om = omega(M)
    Q = quotient_table(M)
    k = om.mset.k
    if len(j) != k or any(not 0 <= v < k for v in j):
        return False
    if any(j[Q[i][m]] != Q[j[i]][m] for i in range(k) for m in range(M.n)):
        return False  # not an M-set endomorphism
    if j[om.top] != om.top:
        return False
    if any(j[j[i]] != j[i] for i in range(k)):
        return False
    meet = meet_table(M)
    return all(
        j[meet[a][b]] == meet[j[a]][j[b]] for a in range(k) for b in range(k)
    )


def lt_operator(F: GTopology) -> LTOperator:
    """The operator classifying a topology: j(a) = {m | (a : m) in F}.

    The round trip F = {a | j(a) = M} is asserted.
    """
    M = F.monoid
    masks = ideal_masks(M)
    index = ideal_index(M)
    Q = quotient_table(M)
    vals = []
    for i in range(len(masks)):
        m_mask = mask_of(m for m in range(M.n) if has(F.mask, Q[i][m]))
        vals.append(index[m_mask])
    op = LTOperator(M, tuple(vals))
    top = index[full_mask(M)]
    assert F.mask == mask_of(i for i in range(len(masks)) if vals[i] == top)
    return op


def lt_operators_exhaustive(M: FiniteCommMonoid) -> tuple[tuple[int, ...], ...]:
    """Scan every self-map of the classifier carrier for the LT axioms."""
    k = omega(M).mset.k
    if k > 6:
        raise ValueError("exhaustive operator scan limited to 6 ideals")
    out = [
        j for j in iproduct(range(k), repeat=k) if satisfies_lt_axioms(M, j)
    ]
    return tuple(sorted(out))


def is_dense(j: LTOperator, A: MSet, b_mask: int) -> bool:
    """B is j-dense in A when j collapses its characteristic map onto the
    one classifying all of A."""
    om = omega(j.monoid)
    chi = characteristic_map(A, b_mask)
    return all(j.j[chi.map[a]] == om.top for a in range(A.k))


def is_sheaf(A: MSet, F: GTopology) -> bool:
    """Restriction onto every covering ideal is bijective on points.

    Points of A correspond to maps out of the regular M-set; A is a sheaf
    when restriction to each ideal in F hits every equivariant map exactly
    once.
    """
    M = F.monoid
    if A.monoid != M:
        raise ValueError("sheaf test needs an M-set over the topology's monoid")
    masks = ideal_masks(M)
    for i in F.member_indices:
        mem = members(masks[i])
        sub = ideal_as_mset(M, masks[i])
        restrictions = [tuple(A.act[a][x] for x in mem) for a in range(A.k)]
        if len(set(restrictions)) != A.k:
            return False
        all_homs = {h.map for h in hom_set(sub, A)}
        if set(restrictions) != all_homs:
            return False
    return True


def is_jsheaf_bounded(A: MSet, j: LTOperator, probes) -> bool:
    """The operator-side sheaf condition, sampled over probe M-sets: for every
    j-dense subobject of a probe, restriction of maps into A is bijective."""
    for P in probes:
        for b_mask in sub_msets(P):
            if not is_dense(j, P, b_mask):
                continue
            from .msets import mset_from_subset

            sub, incl = mset_from_subset(P, b_mask)
            full_homs = hom_set(P, A)
            restricted = [tuple(h.map[x] for x in incl) for h in full_homs]
            if len(set(restricted)) != len(full_homs):
                return False
            if set(restricted) != {h.map for h in hom_set(sub, A)}:
                return False
    return True


def _plus_construction(A: MSet, F: GTopology) -> tuple[MSet, tuple[int, ...]]:
    """One plus step: the colimit over covering ideals of maps into A.

    The disjoint union of the hom sets is divided by the span-generated
    equivalence; because a topology is finite and intersection closed, two
    maps are equivalent exactly when they agree on the least covering ideal,
    which is used as the class signature.  Representatives are the least
    (ideal index, map) pair.
    """
    M = F.monoid
    masks = ideal_masks(M)
    Q = quotient_table(M)
    bottom = full_mask(M)
    for i in F.member_indices:
        bottom &= masks[i]
    assert has(F.mask, ideal_index(M)[bottom])  # intersection closure
    bottom_members = members(bottom)

    def signature(i: int, hom: tuple[int, ...]) -> tuple[int, ...]:
        mem = members(masks[i])
        pos = {x: t for t, x in enumerate(mem)}
        return tuple(hom[pos[x]] for x in bottom_members)

    reps: dict[tuple[int, ...], tuple[int, tuple[int, ...]]] = {}
    for i in F.member_indices:
        sub = ideal_as_mset(M, masks[i])
        for h in hom_set(sub, A):
            sig = signature(i, h.map)
            if sig not in reps:
                reps[sig] = (i, h.map)
    order = sorted(reps)
    pos_of = {sig: t for t, sig in enumerate(order)}
    act = []
    for sig in order:
        i, hom = reps[sig]
        mem = members(masks[i])
        pos = {x: t for t, x in enumerate(mem)}
        row = []
        for m in range(M.n):
            tgt = Q[i][m]
            assert has(F.mask, tgt)  # covering ideals absorb quotients
            moved = tuple(
                hom[pos[M.mul[m][x]]] for x in members(masks[tgt])
            )
            row.append(pos_of[signature(tgt, moved)])
        act.append(tuple(row))
    plus = MSet(M, len(order), tuple(act), name=(A.name + "+") if A.name else "")
    top_idx = ideal_index(M)[full_mask(M)]
    unit = []
    for a in range(A.k):
        yoneda = tuple(A.act[a][x] for x in range(M.n))
        unit.append(pos_of[signature(top_idx, yoneda)])
    return plus, tuple(unit)


def sheafify(A: MSet, F: GTopology) -> tuple[MSet, MSetHom]:
    """Two plus steps; the result is checked to be a sheaf."""
    p1, u1 = _plus_construction(A, F)
    p2, u2 = _plus_construction(p1, F)
    unit = MSetHom(A, p2, tuple(u2[u1[a]] for a in range(A.k)))
    assert check_mset_hom(unit)
    assert is_sheaf(p2, F), "plus-plus failed to land in sheaves"
    return p2, unit
