"""Localization of monoids and M-sets, and transport of ideals along homs.

Fractions m/s over a submonoid S are pairs modulo (m1,s1) ~ (m2,s2) iff
m1*s*s2 = m2*s*s1 for some s in S.  The quotient is computed explicitly and
the universal property is then checked, not assumed.  Class representatives
are the least pair in index order, so every localization is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache

from .bitsets import elements_of, has, mask_of, members
from .ideals import (
    Ideal,
    enumerate_ideals,
    full_mask,
    ideal_index,
    ideal_masks,
    ideal_quotient_mask,
    is_ideal_mask,
)
from .monoids import (
    FiniteCommMonoid,
    MonoidHom,
    Submonoid,
    check_hom,
    inverse_of,
    units,
    validate_monoid,
)
from .msets import MSet, MSetHom, check_mset_hom, omega, restrict_mset


class EquivalenceFailure(AssertionError):
    """The two sides of an equivalence that must always agree did not."""


@dataclass(frozen=True)
class LocalizedMonoid:
    base: FiniteCommMonoid
    denominators: Submonoid
    result: FiniteCommMonoid
    loc_map: MonoidHom
    reps: tuple[tuple[int, int], ...]  # fraction (m, s) per result element
    pair_class: tuple[tuple[int, ...], ...] = field(repr=False)  # [m][s_pos]

    def class_of(self, m: int, s: int) -> int:
        return self.pair_class[m][self.denominators.members.index(s)]

    def fraction_name(self, i: int) -> str:
        m, s = self.reps[i]
        return f"{self.base.elem_name(m)}/{self.base.elem_name(s)}"


def _fractions_related(M: FiniteCommMonoid, S: tuple[int, ...], p1, p2) -> bool:
    m1, s1 = p1
    m2, s2 = p2
    return any(
        M.mul[M.mul[m1][s]][s2] == M.mul[M.mul[m2][s]][s1] for s in S
    )


@cache
def localize_monoid(M: FiniteCommMonoid, S: Submonoid) -> LocalizedMonoid:
    """The monoid of fractions m/s, s in S, with its localization map."""
    if S.parent != M:
        raise ValueError("submonoid belongs to a different monoid")
    sm = S.members
    pairs = [(m, s) for m in range(M.n) for s in sm]
    classes: list[list[tuple[int, int]]] = []
    cls: dict[tuple[int, int], int] = {}
    for p in pairs:
        for i, c in enumerate(classes):
            if _fractions_related(M, sm, p, c[0]):
                c.append(p)
                cls[p] = i
                break
        else:
            cls[p] = len(classes)
            classes.append([p])
    # the fraction law must match the computed quotient on every pair
    for p in pairs:
        for q in pairs:
            if (cls[p] == cls[q]) != _fractions_related(M, sm, p, q):
                raise EquivalenceFailure(f"fraction law mismatch at {p},{q}")
    k = len(classes)
    table = [[0] * k for _ in range(k)]
    for i, ci in enumerate(classes):
        m1, s1 = ci[0]
        for j, cj in enumerate(classes):
            m2, s2 = cj[0]
            table[i][j] = cls[(M.mul[m1][m2], M.mul[s1][s2])]
    # multiplication must not depend on the chosen representatives
    for p in pairs:
        for q in pairs:
            prod = cls[(M.mul[p[0]][q[0]], M.mul[p[1]][q[1]])]
            if prod != table[cls[p]][cls[q]]:
                raise EquivalenceFailure("fraction product not well defined")
    reps = tuple(c[0] for c in classes)
    names = tuple(f"{M.elem_name(m)}/{M.elem_name(s)}" for m, s in reps)
    result = validate_monoid(
        table, cls[(M.identity, M.identity)], name=f"{M.name}_loc", elem_names=names
    )
    loc = MonoidHom(M, result, tuple(cls[(m, M.identity)] for m in range(M.n)))
    assert check_hom(loc)
    for s in sm:  # every denominator becomes invertible
        inverse_of(result, loc.map[s])
    pos = {s: i for i, s in enumerate(sm)}
    pair_class = tuple(
        tuple(cls[(m, s)] for s in sm) for m in range(M.n)
    )
    return LocalizedMonoid(M, S, result, loc, reps, pair_class)


def hom_from_localization(L: LocalizedMonoid, g: MonoidHom) -> MonoidHom:
    """The unique hom out of the fraction monoid induced by g on the base.

    Requires g to send every denominator to a unit of its target.
    """
    if g.source != L.base:
        raise ValueError("hom does not start at the localized base")
    N = g.target
    u = units(N)
    for s in L.denominators.members:
        if g.map[s] not in u:
            raise ValueError("hom does not invert the denominators")
    vals = []
    for m, s in L.reps:
        vals.append(N.mul[g.map[m]][inverse_of(N, g.map[s])])
    h = MonoidHom(L.result, N, tuple(vals))
    assert check_hom(h)
    assert h.compose(L.loc_map).map == g.map
    return h


@dataclass(frozen=True)
class LocalizedMSet:
    base: MSet
    denominators: Submonoid
    loc: LocalizedMonoid
    result: MSet  # an M-set over loc.result
    beta: tuple[int, ...]  # canonical map base -> result carrier
    reps: tuple[tuple[int, int], ...]
    pair_class: tuple[tuple[int, ...], ...] = field(repr=False)

    def class_of(self, a: int, s: int) -> int:
        return self.pair_class[a][self.denominators.members.index(s)]


def _mset_fractions_related(A: MSet, S: tuple[int, ...], p1, p2) -> bool:
    M = A.monoid
    a1, s1 = p1
    a2, s2 = p2
    return any(
        A.act[a1][M.mul[s][s2]] == A.act[a2][M.mul[s][s1]] for s in S
    )


@cache
def localize_mset(A: MSet, S: Submonoid) -> LocalizedMSet:
    """Fractions a/s of an M-set, an M-set over the localized monoid."""
    M = A.monoid
    if S.parent != M:
        raise ValueError("submonoid belongs to a different monoid")
    L = localize_monoid(M, S)
    sm = S.members
    pairs = [(a, s) for a in range(A.k) for s in sm]
    classes: list[list[tuple[int, int]]] = []
    cls: dict[tuple[int, int], int] = {}
    for p in pairs:
        for i, c in enumerate(classes):
            if _mset_fractions_related(A, sm, p, c[0]):
                c.append(p)
                cls[p] = i
                break
        else:
            cls[p] = len(classes)
            classes.append([p])
    for p in pairs:
        for q in pairs:
            if (cls[p] == cls[q]) != _mset_fractions_related(A, sm, p, q):
                raise EquivalenceFailure(f"M-set fraction law mismatch at {p},{q}")
    k = len(classes)
    act = [[0] * L.result.n for _ in range(k)]
    for i, ci in enumerate(classes):
        a, s = ci[0]
        for j, (m, t) in enumerate(L.reps):
            act[i][j] = cls[(A.act[a][m], M.mul[s][t])]
    for p in pairs:  # action independent of all representative choices
        for j, (m, t) in enumerate(L.reps):
            for m2, t2 in _loc_class_pairs(L, j):
                if cls[(A.act[p[0]][m2], M.mul[p[1]][t2])] != act[cls[p]][j]:
                    raise EquivalenceFailure("localized action not well defined")
    result = MSet(L.result, k, tuple(map(tuple, act)), name=f"{A.name}_loc" if A.name else "")
    beta = tuple(cls[(a, M.identity)] for a in range(A.k))
    pair_class = tuple(tuple(cls[(a, s)] for s in sm) for a in range(A.k))
    lm = LocalizedMSet(A, S, L, result, beta, tuple(c[0] for c in classes), pair_class)
    # beta is equivariant over the localization map
    for a in range(A.k):
        for m in range(M.n):
            assert beta[A.act[a][m]] == result.act[beta[a]][L.loc_map.map[m]]
    return lm


def _loc_class_pairs(L: LocalizedMonoid, j: int):
    sm = L.denominators.members
    return [
        (m, s)
        for m in range(L.base.n)
        for s in sm
        if L.pair_class[m][sm.index(s)] == j
    ]


def induced_from_localized_mset(
    LA: LocalizedMSet, target: MSet, gmap: tuple[int, ...], hmap: tuple[int, ...]
) -> tuple[int, ...]:
    """The map S^-1 A -> target determined by a ~ gmap(a), where hmap carries
    base-monoid elements into target's acting monoid and sends denominators
    to units.  Checked to be well defined on every fraction pair."""
    A = LA.base
    M = A.monoid
    P = target.monoid
    u = units(P)
    inv = {}
    for s in LA.denominators.members:
        p = hmap[s]
        if p not in u:
            raise ValueError("denominator image is not a unit on the target")
        inv[s] = inverse_of(P, p)
    out = [0] * LA.result.k
    for i, (a, s) in enumerate(LA.reps):
        out[i] = target.act[gmap[a]][inv[s]]
    for a in range(A.k):  # independence of representatives
        for s in LA.denominators.members:
            if target.act[gmap[a]][inv[s]] != out[LA.class_of(a, s)]:
                raise EquivalenceFailure("induced localized map not well defined")
    return tuple(out)


def pushforward_ideal(f: MonoidHom, m: Ideal) -> Ideal:
    """f_*(a): the ideal of the target generated by the image of a."""
    if m.parent != f.source:
        raise ValueError("ideal lives over a different monoid")
    N = f.target
    out = 0
    for x in m.members:
        fx = f.map[x]
        out |= mask_of(N.mul[fx][y] for y in range(N.n))
    return Ideal(N, out)


def pullback_ideal(f: MonoidHom, n: Ideal) -> Ideal:
    """f^*(b) = preimage of b, an ideal of the source (checked)."""
    if n.parent != f.target:
        raise ValueError("ideal lives over a different monoid")
    mask = mask_of(x for x in range(f.source.n) if has(n.mask, f.map[x]))
    assert is_ideal_mask(f.source, mask)
    return Ideal(f.source, mask)


@dataclass(frozen=True)
class TransportCheck:
    check: str
    anchor: str
    ok: bool
    witness: str = ""


@dataclass(frozen=True)
class TransportReport:
    hom: MonoidHom
    checks: tuple[TransportCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def verify_ideal_transport(
    f: MonoidHom, denominators: Submonoid | None = None
) -> TransportReport:
    """Exhaustive transport laws for one hom; the localization laws are added
    when f is the localization map at `denominators`."""
    M, N = f.source, f.target
    checks: list[TransportCheck] = []

    def push(mask: int) -> int:
        return pushforward_ideal(f, Ideal(M, mask)).mask

    def pull(mask: int) -> int:
        return pullback_ideal(f, Ideal(N, mask)).mask

    def record(check: str, anchor: str, failures: list[str]):
        checks.append(
            TransportCheck(check, anchor, not failures, failures[0] if failures else "")
        )

    src_ideals = ideal_masks(M)
    dst_ideals = ideal_masks(N)

    bad = [f"m={m:b}" for m in src_ideals if (m & pull(push(m))) != m]
    record("unit-inflation", "020218.i", bad)
    bad = [f"n={n:b}" for n in dst_ideals if (push(pull(n)) | n) != n]
    record("counit-deflation", "020218.i", bad)
    bad = [f"m={m:b}" for m in src_ideals if push(pull(push(m))) != push(m)]
    bad += [f"n={n:b}" for n in dst_ideals if pull(push(pull(n))) != pull(n)]
    record("triple-collapse", "020218.ii", bad)
    bad = []
    for m in src_ideals:
        for a in range(M.n):
            lhs = push(ideal_quotient_mask(M, m, a))
            rhs = ideal_quotient_mask(N, push(m), f.map[a])
            if (lhs & rhs) != lhs:
                bad.append(f"m={m:b},a={a}")
    record("push-quotient-subset", "020218.iii", bad)
    bad = []
    for n in dst_ideals:
        for a in range(M.n):
            if ideal_quotient_mask(M, pull(n), a) != pull(
                ideal_quotient_mask(N, n, f.map[a])
            ):
                bad.append(f"n={n:b},a={a}")
    record("pull-quotient-equality", "020218.iv", bad)

    if denominators is not None:
        S = denominators.members
        bad = [f"n={n:b}" for n in dst_ideals if push(pull(n)) != n]
        record("loc-counit-identity", "080217.i", bad)
        bad = []
        for m in src_ideals:
            for a in range(M.n):
                if push(ideal_quotient_mask(M, m, a)) != ideal_quotient_mask(
                    N, push(m), f.map[a]
                ):
                    bad.append(f"m={m:b},a={a}")
        record("loc-push-quotient-equality", "080217.ii", bad)
        bad = []
        for m in src_ideals:
            union = 0
            for s in S:
                union |= ideal_quotient_mask(M, m, s)
            if pull(push(m)) != union:
                bad.append(f"m={m:b}")
        record("loc-saturation-union", "080217.iii", bad)
        bad = []
        for m in src_ideals:
            sat = pull(push(m))
            for t in S:
                if ideal_quotient_mask(M, sat, t) != sat:
                    bad.append(f"m={m:b},t={t}")
        record("loc-saturation-stable", "080217.iv", bad)
    return TransportReport(f, tuple(checks))


@dataclass(frozen=True)
class OmegaLocReport:
    monoid: FiniteCommMonoid
    denominators: Submonoid
    iso: MSetHom
    inverse: tuple[int, ...]
    witnesses: tuple[int, ...]  # s_m per source ideal index, canonical least
    ok: bool


def omega_localization_iso(
    M: FiniteCommMonoid, S: Submonoid
) -> tuple[MSetHom, OmegaLocReport]:
    """The classifier respects localization: S^-1 Omega^M ~ Omega^{S^-1 M}.

    Builds m/s -> (f_* m : 1/s), verifies it is a bijective map of localized
    M-sets, exhibits the inverse built from f^*, and produces for every ideal
    m the least s in S with f^* f_*(m) = (m : s).
    """
    L = localize_monoid(M, S)
    f = L.loc_map
    N = L.result
    lo = localize_mset(omega(M).mset, S)
    om_n = omega(N)
    idx_n = ideal_index(N)
    src_masks = ideal_masks(M)

    def push(mask: int) -> int:
        return pushforward_ideal(f, Ideal(M, mask)).mask

    vals = []
    for i, (ideal_i, s) in enumerate(lo.reps):
        target = push(src_masks[ideal_i])
        inv_s = inverse_of(N, f.map[s])
        vals.append(om_n.mset.act[idx_n[target]][inv_s])
    for ideal_i in range(len(src_masks)):  # well definedness on all fractions
        for s in S.members:
            target = idx_n[push(src_masks[ideal_i])]
            got = om_n.mset.act[target][inverse_of(N, f.map[s])]
            if got != vals[lo.class_of(ideal_i, s)]:
                raise EquivalenceFailure("classifier localization map ill defined")
    iso = MSetHom(lo.result, om_n.mset, tuple(vals))
    equivariant = check_mset_hom(iso)
    bijective = iso.is_bijective()
    # inverse: n -> class of (f^* n, 1)
    inverse = tuple(
        lo.class_of(ideal_index(M)[pullback_ideal(f, Ideal(N, n)).mask], M.identity)
        for n in ideal_masks(N)
    )
    inv_ok = all(inverse[vals[i]] == i for i in range(lo.result.k)) and all(
        vals[inverse[j]] == j for j in range(om_n.mset.k)
    )
    witnesses = []
    for mask in src_masks:
        sat = pullback_ideal(f, Ideal(N, push(mask))).mask
        s_m = next(
            (s for s in S.members if ideal_quotient_mask(M, mask, s) == sat), None
        )
        assert s_m is not None, "saturation witness must exist for finite monoids"
        witnesses.append(s_m)
    report = OmegaLocReport(
        M, S, iso, inverse, tuple(witnesses), equivariant and bijective and inv_ok
    )
    return iso, report


def mono_criterion(
    A: MSet, Bp: MSet, alpha: tuple[int, ...], L: LocalizedMonoid
) -> bool:
    """Whether the induced map S^-1 A -> B' is injective.

    B' is an M-set over the localized monoid, viewed over the base through
    the localization map; alpha must be equivariant for that view.  The
    answer is computed twice, from the induced map and from the divisibility
    condition (alpha(a1) = alpha(a2) implies a1 s = a2 s for some s), and the
    two must agree.
    """
    M = L.base
    if A.monoid != M or Bp.monoid != L.result:
        raise ValueError("mono_criterion inputs over the wrong monoids")
    for a in range(A.k):
        for m in range(M.n):
            if alpha[A.act[a][m]] != Bp.act[alpha[a]][L.loc_map.map[m]]:
                raise ValueError("alpha is not equivariant over the localization")
    LA = localize_mset(A, L.denominators)
    tau = induced_from_localized_mset(LA, Bp, alpha, L.loc_map.map)
    injective = len(set(tau)) == len(tau)
    sm = L.denominators.members
    divisible = all(
        alpha[a1] != alpha[a2]
        or any(A.act[a1][s] == A.act[a2][s] for s in sm)
        for a1 in range(A.k)
        for a2 in range(A.k)
    )
    if injective != divisible:
        raise EquivalenceFailure(
            f"mono criterion split: injective={injective} divisible={divisible}"
        )
    return injective


def restricted_along_loc(L: LocalizedMonoid, B: MSet) -> MSet:
    """A localized-monoid set viewed as a base-monoid set."""
    return restrict_mset(L.loc_map, B)
