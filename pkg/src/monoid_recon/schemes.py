"""Monoid schemes glued from finite affine charts, and their sheaves.

Charts overlap along principal opens D(f) with isomorphic localizations,
which is all the finite examples need; a missing glue entry means the two
charts are disjoint.  Points are chart primes identified across overlaps,
opens are the down-closed point sets (charts are open, so this matches
chart-wise openness), and quasi-coherent sheaves are chart M-sets with
compatible localization gluing.  Stalks and sections are computed from the
chart data, with chart independence asserted wherever a choice was made.
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
    order_topology,
    spec,
    zariski_topology,
)
from .localization import (
    LocalizedMonoid,
    LocalizedMSet,
    hom_from_localization,
    induced_from_localized_mset,
    localize_monoid,
    localize_mset,
    omega_localization_iso,
    pullback_ideal,
    pushforward_ideal,
)
from .monoids import (
    FiniteCommMonoid,
    MonoidHom,
    Submonoid,
    check_hom,
    submonoid_generated,
    validate_monoid,
)
from .msets import (
    MSet,
    MSetHom,
    check_mset_hom,
    hom_set,
    mset_from_subset,
    omega,
    regular_mset,
    restrict_mset,
    sub_msets,
    terminal_mset,
)
from .posets import FiniteLattice, FinitePoset, lattice_from_sets
from .topologies import GTopology, enumerate_gtopologies, is_sheaf, upsilon


class NonIso(ValueError):
    """A declared gluing map is not an isomorphism of the localizations."""


class CocycleFailure(ValueError):
    def __init__(self, i: int, j: int, k: int, witness: str):
        self.witness = (i, j, k, witness)
        super().__init__(f"cocycle fails on charts ({i},{j},{k}): {witness}")


class ChartDisagreement(AssertionError):
    """A chart-independent quantity came out different in two charts."""


@dataclass(frozen=True)
class Glue:
    i: int
    j: int
    f_src: int  # overlap element in chart i
    f_dst: int  # overlap element in chart j
    iso: tuple[int, ...]  # (M_i)_{f_src} -> (M_j)_{f_dst} on fraction indices


@dataclass(frozen=True)
class GluingData:
    charts: tuple[FiniteCommMonoid, ...]
    glues: tuple[Glue, ...]

    def glue_for(self, i: int, j: int) -> Glue | None:
        for g in self.glues:
            if g.i == i and g.j == j:
                return g
        return None


@dataclass(frozen=True)
class MonoidScheme:
    charts: tuple[FiniteCommMonoid, ...]
    glues: tuple[Glue, ...]
    points: tuple[tuple[tuple[int, int], ...], ...]  # sorted (chart, prime) reps
    leq: tuple[tuple[bool, ...], ...]  # specialization: leq[x][y] iff p_x <= p_y
    opens: tuple[int, ...]  # masks over points, canonical order
    name: str = field(default="X", compare=False)

    def glue_for(self, i: int, j: int) -> Glue | None:
        for g in self.glues:
            if g.i == i and g.j == j:
                return g
        return None

    @property
    def npoints(self) -> int:
        return len(self.points)

    def charts_of(self, x: int) -> tuple[int, ...]:
        return tuple(c for c, _ in self.points[x])

    def prime_in_chart(self, x: int, c: int) -> int:
        for cc, p in self.points[x]:
            if cc == c:
                return p
        raise KeyError(f"point {x} is not on chart {c}")

    def chart_point_mask(self, c: int) -> int:
        return mask_of(x for x in range(self.npoints) if c in self.charts_of(x))

    def full_open(self) -> int:
        return (1 << self.npoints) - 1

    def poset(self) -> FinitePoset:
        return FinitePoset(self.npoints, self.leq)

    def open_lattice(self) -> FiniteLattice:
        return lattice_from_sets(self.opens, self.npoints)

    def __repr__(self) -> str:
        return f"MonoidScheme({self.name}, charts={len(self.charts)}, points={self.npoints})"


@dataclass(frozen=True)
class SchemePoint:
    scheme: MonoidScheme = field(repr=False)
    index: int

    @property
    def representative(self) -> tuple[int, int]:
        return self.scheme.points[self.index][0]

    def __repr__(self) -> str:
        c, p = self.representative
        M = self.scheme.charts[c]
        prime = spec(M).primes[p]
        return f"SchemePoint({self.scheme.name}#{self.index}: chart {c}, {M.subset_str(prime.mask)})"


def scheme_points(X: MonoidScheme) -> tuple[SchemePoint, ...]:
    return tuple(SchemePoint(X, x) for x in range(X.npoints))


def _point_index(x) -> int:
    return x.index if isinstance(x, SchemePoint) else x


@cache
def chart_loc(X: MonoidScheme, i: int, j: int) -> LocalizedMonoid:
    g = X.glue_for(i, j)
    if g is None:
        raise KeyError(f"charts {i},{j} are not glued")
    return localize_monoid(X.charts[i], submonoid_generated(X.charts[i], (g.f_src,)))


@cache
def glue_hom(X: MonoidScheme, i: int, j: int) -> MonoidHom:
    g = X.glue_for(i, j)
    return MonoidHom(chart_loc(X, i, j).result, chart_loc(X, j, i).result, g.iso)


def _loc_prime_to_chart(L: LocalizedMonoid, prime: Ideal) -> int:
    """Pull a prime of the fraction monoid back to a prime mask of the base."""
    return pullback_ideal(L.loc_map, prime).mask


def _chart_prime_to_loc(L: LocalizedMonoid, prime_mask: int) -> int:
    """Push a prime avoiding the denominators into the fraction monoid."""
    return pushforward_ideal(L.loc_map, Ideal(L.base, prime_mask)).mask


def _induced_double_loc_hom(
    charts, glue_ij: Glue, glue_jk_f: int, L2_i: LocalizedMonoid, L2_j: LocalizedMonoid
) -> MonoidHom:
    """The map between double localizations induced by one gluing iso."""
    M_i, M_j = charts[glue_ij.i], charts[glue_ij.j]
    loc_ij = localize_monoid(M_i, submonoid_generated(M_i, (glue_ij.f_src,)))
    loc_ji = localize_monoid(M_j, submonoid_generated(M_j, (glue_ij.f_dst,)))
    phi = MonoidHom(loc_ij.result, loc_ji.result, glue_ij.iso)
    to_l2j = hom_from_localization(loc_ji, L2_j.loc_map)
    g = to_l2j.compose(phi).compose(loc_ij.loc_map)
    return hom_from_localization(L2_i, g)


def _check_cocycles(charts, data: GluingData) -> None:
    n = len(charts)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if len({i, j, k}) != 3:
                    continue
                gij, gjk, gik = (
                    data.glue_for(i, j),
                    data.glue_for(j, k),
                    data.glue_for(i, k),
                )
                if gij is None or gjk is None or gik is None:
                    continue
                L2 = {
                    (a, fs, ft): localize_monoid(
                        charts[a], submonoid_generated(charts[a], (fs, ft))
                    )
                    for a, fs, ft in (
                        (i, gij.f_src, gik.f_src),
                        (j, gij.f_dst, gjk.f_src),
                        (k, gjk.f_dst, gik.f_dst),
                    )
                }
                l2i = L2[(i, gij.f_src, gik.f_src)]
                l2j = L2[(j, gij.f_dst, gjk.f_src)]
                l2k = L2[(k, gjk.f_dst, gik.f_dst)]
                try:
                    kij = _induced_double_loc_hom(charts, gij, gjk.f_src, l2i, l2j)
                    kjk = _induced_double_loc_hom(charts, gjk, gij.f_dst, l2j, l2k)
                    kik = _induced_double_loc_hom(charts, gik, gij.f_src, l2i, l2k)
                except ValueError as exc:
                    raise CocycleFailure(i, j, k, str(exc)) from exc
                if kjk.compose(kij).map != kik.map:
                    raise CocycleFailure(i, j, k, "triple composite disagrees")


def build_scheme(data: GluingData, name: str = "X") -> MonoidScheme:
    """Validate gluing data and assemble the point space and its opens."""
    charts = data.charts
    n = len(charts)
    for g in data.glues:
        if not (0 <= g.i < n and 0 <= g.j < n) or g.i == g.j:
            raise ValueError(f"bad glue pair ({g.i},{g.j})")
        mirror = data.glue_for(g.j, g.i)
        if mirror is None or mirror.f_src != g.f_dst or mirror.f_dst != g.f_src:
            raise ValueError(f"glue ({g.i},{g.j}) has no matching mirror")
        L_src = localize_monoid(charts[g.i], submonoid_generated(charts[g.i], (g.f_src,)))
        L_dst = localize_monoid(charts[g.j], submonoid_generated(charts[g.j], (g.f_dst,)))
        h = MonoidHom(L_src.result, L_dst.result, g.iso)
        if not check_hom(h) or len(set(g.iso)) != L_dst.result.n:
            raise NonIso(f"glue map ({g.i},{g.j}) is not an isomorphism")
        back = MonoidHom(L_dst.result, L_src.result, mirror.iso)
        if back.compose(h).map != tuple(range(L_src.result.n)):
            raise NonIso(f"glue maps ({g.i},{g.j}) are not mutually inverse")
    _check_cocycles(charts, data)

    nodes = [(c, p) for c in range(n) for p in range(len(spec(charts[c]).primes))]
    parent = {nd: nd for nd in nodes}

    def find(nd):
        while parent[nd] != nd:
            parent[nd] = parent[parent[nd]]
            nd = parent[nd]
        return nd

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for g in data.glues:
        M_i, M_j = charts[g.i], charts[g.j]
        L_src = localize_monoid(M_i, submonoid_generated(M_i, (g.f_src,)))
        L_dst = localize_monoid(M_j, submonoid_generated(M_j, (g.f_dst,)))
        primes_j = {q.mask: t for t, q in enumerate(spec(M_j).primes)}
        for pi, p in enumerate(spec(M_i).primes):
            if has(p.mask, g.f_src):
                continue
            local = _chart_prime_to_loc(L_src, p.mask)
            moved = mask_of(g.iso[z] for z in elements_of(local))
            qmask = _loc_prime_to_chart(L_dst, Ideal(L_dst.result, moved))
            if qmask not in primes_j or has(qmask, g.f_dst):
                raise NonIso(f"glue ({g.i},{g.j}) does not match primes")
            union((g.i, pi), (g.j, primes_j[qmask]))

    classes: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for nd in nodes:
        classes.setdefault(find(nd), []).append(nd)
    point_list = sorted(tuple(sorted(v)) for v in classes.values())
    npoints = len(point_list)

    def shared_leq(x: int, y: int) -> bool:
        for cx, px in point_list[x]:
            for cy, py in point_list[y]:
                if cx == cy:
                    P = spec(charts[cx])
                    if P.leq[px][py]:
                        return True
        return False

    leq = tuple(
        tuple(x == y or shared_leq(x, y) for y in range(npoints))
        for x in range(npoints)
    )
    poset = FinitePoset(npoints, leq)  # validates the order axioms

    # each chart must be a down-closed set of points
    chart_masks = []
    for c in range(n):
        m = mask_of(
            x for x in range(npoints) if any(cc == c for cc, _ in point_list[x])
        )
        chart_masks.append(m)
        for y in elements_of(m):
            for x in range(npoints):
                if leq[x][y] and not has(m, x):
                    raise ValueError(f"chart {c} is not open in the glued space")

    opens = poset.down_set_masks()
    X = MonoidScheme(charts, data.glues, tuple(point_list), leq, opens, name=name)

    for c in range(n):  # restriction to a chart gives the chart's opens
        local = set()
        for U in opens:
            local.add(
                mask_of(
                    X.prime_in_chart(x, c)
                    for x in elements_of(U & chart_masks[c])
                )
            )
        expected = set(order_topology(spec(charts[c])).opens)
        assert local == expected, f"chart {c} opens are not the chart topology"
        assert expected == set(zariski_topology(charts[c]).opens)
    return X


def affine_scheme(M: FiniteCommMonoid, name: str | None = None) -> MonoidScheme:
    return build_scheme(GluingData((M,), ()), name=name or f"Spec{M.name}")


def disjoint_union_scheme(
    M: FiniteCommMonoid, N: FiniteCommMonoid, name: str | None = None
) -> MonoidScheme:
    return build_scheme(
        GluingData((M, N), ()), name=name or f"Spec{M.name}+Spec{N.name}"
    )


def x2_scheme() -> MonoidScheme:
    """Two copies of Spec(E) glued along D(e) via the identity of E_e."""
    from .corpus import monoid_E

    E = monoid_E()
    L = localize_monoid(E, submonoid_generated(E, (1,)))
    ident = tuple(range(L.result.n))
    glues = (Glue(0, 1, 1, 1, ident), Glue(1, 0, 1, 1, ident))
    return build_scheme(GluingData((E, E), glues), name="X2")


def x3_scheme() -> MonoidScheme:
    """Three copies of Spec(E), all glued pairwise along D(e); exercises the
    triple-overlap cocycle path."""
    from .corpus import monoid_E

    E = monoid_E()
    L = localize_monoid(E, submonoid_generated(E, (1,)))
    ident = tuple(range(L.result.n))
    glues = tuple(
        Glue(i, j, 1, 1, ident) for i in range(3) for j in range(3) if i != j
    )
    return build_scheme(GluingData((E, E, E), glues), name="X3")


# ---------------------------------------------------------------------------
# quasi-coherent sheaves


@dataclass(frozen=True)
class QcSheaf:
    scheme: MonoidScheme
    chart_msets: tuple[MSet, ...]
    glue_isos: tuple[tuple[int, int, tuple[int, ...]], ...]
    name: str = field(default="F", compare=False)

    def iso_for(self, i: int, j: int) -> tuple[int, ...]:
        for a, b, m in self.glue_isos:
            if a == i and b == j:
                return m
        raise KeyError(f"no sheaf gluing for charts ({i},{j})")

    def __repr__(self) -> str:
        sizes = ",".join(str(A.k) for A in self.chart_msets)
        return f"QcSheaf({self.name} on {self.scheme.name}; carriers {sizes})"


def _glue_submonoid(X: MonoidScheme, i: int, j: int) -> Submonoid:
    g = X.glue_for(i, j)
    return submonoid_generated(X.charts[i], (g.f_src,))


@cache
def _sheaf_loc(F: QcSheaf, i: int, j: int) -> LocalizedMSet:
    return localize_mset(F.chart_msets[i], _glue_submonoid(F.scheme, i, j))


def qcsheaf(
    X: MonoidScheme,
    chart_msets: tuple[MSet, ...],
    glue_isos: tuple[tuple[int, int, tuple[int, ...]], ...],
    name: str = "F",
) -> QcSheaf:
    """Validate chart M-sets with localization gluing over the scheme's maps."""
    if len(chart_msets) != len(X.charts):
        raise ValueError("one M-set per chart required")
    for c, A in enumerate(chart_msets):
        if A.monoid != X.charts[c]:
            raise ValueError(f"chart {c} M-set is over the wrong monoid")
    F = QcSheaf(X, tuple(chart_msets), tuple(glue_isos), name=name)
    seen = set()
    for i, j, m in glue_isos:
        if X.glue_for(i, j) is None:
            raise ValueError(f"sheaf gluing for unglued charts ({i},{j})")
        seen.add((i, j))
    for g in X.glues:
        if (g.i, g.j) not in seen:
            raise ValueError(f"missing sheaf gluing for charts ({g.i},{g.j})")
    for i, j, m in glue_isos:
        LA_i = _sheaf_loc(F, i, j)
        LA_j = _sheaf_loc(F, j, i)
        viewed = restrict_mset(glue_hom(X, i, j), LA_j.result)
        h = MSetHom(LA_i.result, viewed, m)
        if not check_mset_hom(h) or len(set(m)) != LA_j.result.k or LA_i.result.k != LA_j.result.k:
            raise NonIso(f"sheaf glue ({i},{j}) is not an equivariant bijection")
        back = F.iso_for(j, i)
        if tuple(back[v] for v in m) != tuple(range(LA_i.result.k)):
            raise NonIso(f"sheaf glues ({i},{j}) are not mutually inverse")
    _check_sheaf_cocycles(F)
    return F


def _double_loc_mset_map(
    F: QcSheaf, gij: Glue, extra_src: int, extra_dst: int
) -> tuple[int, ...]:
    """Map between double localizations of chart M-sets induced by one glue."""
    X = F.scheme
    i, j = gij.i, gij.j
    M_i, M_j = X.charts[i], X.charts[j]
    A_i, A_j = F.chart_msets[i], F.chart_msets[j]
    S2_i = submonoid_generated(M_i, (gij.f_src, extra_src))
    S2_j = submonoid_generated(M_j, (gij.f_dst, extra_dst))
    LA2_i = localize_mset(A_i, S2_i)
    LA2_j = localize_mset(A_j, S2_j)
    L2_j = localize_monoid(M_j, S2_j)
    LA_i = _sheaf_loc(F, i, j)
    LA_j = _sheaf_loc(F, j, i)
    psi = F.iso_for(i, j)
    loc_ji = chart_loc(X, j, i)
    gmap = []
    for a in range(A_i.k):
        cls = psi[LA_i.beta[a]]
        aj, sj = LA_j.reps[cls]
        gmap.append(LA2_j.class_of(aj, sj))
    hmap = []
    phi = glue_hom(X, i, j)
    loc_ij = chart_loc(X, i, j)
    for m in range(M_i.n):
        cm = phi.map[loc_ij.loc_map.map[m]]
        mj, sj = loc_ji.reps[cm]
        hmap.append(L2_j.class_of(mj, sj))
    out = induced_from_localized_mset(LA2_i, LA2_j.result, tuple(gmap), tuple(hmap))
    return out


def _check_sheaf_cocycles(F: QcSheaf) -> None:
    X = F.scheme
    n = len(X.charts)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if len({i, j, k}) != 3:
                    continue
                gij, gjk, gik = X.glue_for(i, j), X.glue_for(j, k), X.glue_for(i, k)
                if gij is None or gjk is None or gik is None:
                    continue
                try:
                    kij = _double_loc_mset_map(F, gij, gik.f_src, gjk.f_src)
                    kjk = _double_loc_mset_map(F, gjk, gij.f_dst, gik.f_dst)
                    kik = _double_loc_mset_map(F, gik, gij.f_src, gjk.f_dst)
                except ValueError as exc:
                    raise CocycleFailure(i, j, k, str(exc)) from exc
                if tuple(kjk[v] for v in kij) != kik:
                    raise CocycleFailure(i, j, k, "sheaf triple composite disagrees")


@cache
def structure_sheaf(X: MonoidScheme) -> QcSheaf:
    """The regular chart M-sets glued along the scheme's own isomorphisms."""
    isos = []
    for g in X.glues:
        LA = localize_mset(regular_mset(X.charts[g.i]), _glue_submonoid(X, g.i, g.j))
        L = chart_loc(X, g.i, g.j)
        assert LA.reps == L.reps  # fraction classes of the regular M-set
        isos.append((g.i, g.j, g.iso))
    return qcsheaf(
        X, tuple(regular_mset(M) for M in X.charts), tuple(isos), name="O"
    )


@cache
def terminal_sheaf(X: MonoidScheme) -> QcSheaf:
    isos = []
    for g in X.glues:
        LA = localize_mset(terminal_mset(X.charts[g.i]), _glue_submonoid(X, g.i, g.j))
        assert LA.result.k == 1
        isos.append((g.i, g.j, (0,)))
    return qcsheaf(
        X, tuple(terminal_mset(M) for M in X.charts), tuple(isos), name="1"
    )


@cache
def omega_sheaf(X: MonoidScheme) -> QcSheaf:
    """The chart classifiers, glued through the localization isomorphism."""
    isos = []
    for g in X.glues:
        i, j = g.i, g.j
        S_i = _glue_submonoid(X, i, j)
        S_j = _glue_submonoid(X, j, i)
        iso_i, rep_i = omega_localization_iso(X.charts[i], S_i)
        iso_j, rep_j = omega_localization_iso(X.charts[j], S_j)
        assert rep_i.ok and rep_j.ok
        loc_i = chart_loc(X, i, j)
        loc_j = chart_loc(X, j, i)
        phi = glue_hom(X, i, j)
        idx_j = ideal_index(loc_j.result)
        transport = []
        for mask in ideal_masks(loc_i.result):
            transport.append(idx_j[mask_of(phi.map[z] for z in elements_of(mask))])
        psi = tuple(
            rep_j.inverse[transport[iso_i.map[c]]]
            for c in range(iso_i.source.k)
        )
        isos.append((i, j, psi))
    return qcsheaf(
        X, tuple(omega(M).mset for M in X.charts), tuple(isos), name="Omega"
    )


def tilde_sheaf(X: MonoidScheme, A: MSet, name: str = "") -> QcSheaf:
    """The sheaf attached to an M-set over a one-chart scheme."""
    if len(X.charts) != 1:
        raise ValueError("tilde_sheaf needs an affine scheme")
    return qcsheaf(X, (A,), (), name=name or (A.name + "~"))


def sub_sheaves(F: QcSheaf) -> tuple[tuple[int, ...], ...]:
    """All chart-wise action-closed subsets compatible with the gluing."""
    X = F.scheme
    options = [sub_msets(A) for A in F.chart_msets]
    out = []
    for combo in iproduct(*options):
        ok = True
        for g in X.glues:
            i, j = g.i, g.j
            LA_i, LA_j = _sheaf_loc(F, i, j), _sheaf_loc(F, j, i)
            psi = F.iso_for(i, j)
            li = _localized_subset(LA_i, combo[i])
            lj = _localized_subset(LA_j, combo[j])
            if mask_of(psi[z] for z in elements_of(li)) != lj:
                ok = False
                break
        if ok:
            out.append(tuple(combo))
    return tuple(out)


def _localized_subset(LA: LocalizedMSet, sub_mask: int) -> int:
    return mask_of(
        LA.class_of(a, s)
        for a in elements_of(sub_mask)
        for s in LA.denominators.members
    )


def sub_qcsheaf(F: QcSheaf, combo: tuple[int, ...], name: str = "") -> QcSheaf:
    """The sub-sheaf on a compatible tuple of chart subsets."""
    X = F.scheme
    parts = []
    inclusions = []
    for c, m in enumerate(combo):
        sub, incl = mset_from_subset(F.chart_msets[c], m)
        parts.append(sub)
        inclusions.append(incl)
    isos = []
    for g in X.glues:
        i, j = g.i, g.j
        sub_i, incl_i = parts[i], inclusions[i]
        sub_j, incl_j = parts[j], inclusions[j]
        LS_i = localize_mset(sub_i, _glue_submonoid(X, i, j))
        LS_j = localize_mset(sub_j, _glue_submonoid(X, j, i))
        LA_i, LA_j = _sheaf_loc(F, i, j), _sheaf_loc(F, j, i)
        psi = F.iso_for(i, j)
        # embed localized subset classes, move them, pull them back
        back = {}
        for cj in range(LS_j.result.k):
            aj, sj = LS_j.reps[cj]
            back[LA_j.class_of(incl_j[aj], sj)] = cj
        m = []
        for ci in range(LS_i.result.k):
            ai, si = LS_i.reps[ci]
            m.append(back[psi[LA_i.class_of(incl_i[ai], si)]])
        isos.append((i, j, tuple(m)))
    return qcsheaf(X, tuple(parts), tuple(isos), name=name or (F.name + "_sub"))


@dataclass(frozen=True)
class SheafHom:
    source: QcSheaf
    target: QcSheaf
    maps: tuple[tuple[int, ...], ...]  # one carrier map per chart


def _localized_map(LA: LocalizedMSet, LB: LocalizedMSet, h: tuple[int, ...]) -> tuple[int, ...]:
    """An equivariant chart map induced on fraction classes."""
    out = [0] * LA.result.k
    for c, (a, s) in enumerate(LA.reps):
        out[c] = LB.class_of(h[a], s)
    for a in range(LA.base.k):
        for s in LA.denominators.members:
            assert out[LA.class_of(a, s)] == LB.class_of(h[a], s)
    return tuple(out)


def sheaf_homs(F: QcSheaf, G: QcSheaf) -> tuple[SheafHom, ...]:
    """All morphisms of sheaves: chart maps commuting with the gluing."""
    X = F.scheme
    options = [
        [h.map for h in hom_set(F.chart_msets[c], G.chart_msets[c])]
        for c in range(len(X.charts))
    ]
    out = []
    for combo in iproduct(*options):
        ok = True
        for g in X.glues:
            i, j = g.i, g.j
            LF_i, LF_j = _sheaf_loc(F, i, j), _sheaf_loc(F, j, i)
            LG_i, LG_j = _sheaf_loc(G, i, j), _sheaf_loc(G, j, i)
            li = _localized_map(LF_i, LG_i, combo[i])
            lj = _localized_map(LF_j, LG_j, combo[j])
            psi_f = F.iso_for(i, j)
            psi_g = G.iso_for(i, j)
            if tuple(psi_g[li[c]] for c in range(LF_i.result.k)) != tuple(
                lj[psi_f[c]] for c in range(LF_i.result.k)
            ):
                ok = False
                break
        if ok:
            out.append(SheafHom(F, G, tuple(combo)))
    return tuple(out)


def product_sheaf(F: QcSheaf, G: QcSheaf, name: str = "") -> QcSheaf:
    from .msets import product_mset

    X = F.scheme
    parts = tuple(
        product_mset(F.chart_msets[c], G.chart_msets[c])
        for c in range(len(X.charts))
    )
    isos = []
    for g in X.glues:
        i, j = g.i, g.j
        S_i, S_j = _glue_submonoid(X, i, j), _glue_submonoid(X, j, i)
        LP_i = localize_mset(parts[i], S_i)
        LP_j = localize_mset(parts[j], S_j)
        LF_i, LF_j = _sheaf_loc(F, i, j), _sheaf_loc(F, j, i)
        LG_i, LG_j = _sheaf_loc(G, i, j), _sheaf_loc(G, j, i)
        psi_f, psi_g = F.iso_for(i, j), G.iso_for(i, j)
        kb_i, kb_j = G.chart_msets[i].k, G.chart_msets[j].k
        M_j = X.charts[j]
        m = []
        for c in range(LP_i.result.k):
            ab, s = LP_i.reps[c]
            a, b = divmod(ab, kb_i)
            fa = psi_f[LF_i.class_of(a, s)]
            gb = psi_g[LG_i.class_of(b, s)]
            a1, s1 = LF_j.reps[fa]
            b2, s2 = LG_j.reps[gb]
            pair = F.chart_msets[j].act[a1][s2] * kb_j + G.chart_msets[j].act[b2][s1]
            m.append(LP_j.class_of(pair, M_j.mul[s1][s2]))
        isos.append((i, j, tuple(m)))
    return qcsheaf(X, parts, tuple(isos), name=name or f"{F.name}x{G.name}")


def equalizer_sheaf(u: SheafHom, v: SheafHom, name: str = "") -> QcSheaf:
    if u.source != v.source or u.target != v.target:
        raise ValueError("not a parallel pair of sheaf maps")
    F = u.source
    combo = tuple(
        mask_of(
            a
            for a in range(F.chart_msets[c].k)
            if u.maps[c][a] == v.maps[c][a]
        )
        for c in range(len(F.scheme.charts))
    )
    return sub_qcsheaf(F, combo, name=name or "eq")


# ---------------------------------------------------------------------------
# stalks and sections


def _prime_complement(M: FiniteCommMonoid, prime_mask: int) -> Submonoid:
    return Submonoid(M, full_mask(M) & ~prime_mask)


@cache
def chart_stalk(F: QcSheaf, x: int, c: int) -> LocalizedMSet:
    X = F.scheme
    p = X.prime_in_chart(x, c)
    prime = spec(X.charts[c]).primes[p]
    return localize_mset(F.chart_msets[c], _prime_complement(X.charts[c], prime.mask))


@cache
def _stalk_edge_map(F: QcSheaf, x: int, i: int, j: int) -> tuple[int, ...]:
    """The canonical map from the chart-i stalk to the chart-j stalk at a
    shared point, along a direct glue."""
    X = F.scheme
    st_i = chart_stalk(F, x, i)
    st_j = chart_stalk(F, x, j)
    LA_i = _sheaf_loc(F, i, j)
    LA_j = _sheaf_loc(F, j, i)
    psi = F.iso_for(i, j)
    p_j = X.prime_in_chart(x, j)
    prime_j = spec(X.charts[j]).primes[p_j]
    L_pj = localize_monoid(X.charts[j], _prime_complement(X.charts[j], prime_j.mask))
    gmap = []
    for a in range(F.chart_msets[i].k):
        cls = psi[LA_i.beta[a]]
        aj, sj = LA_j.reps[cls]
        gmap.append(st_j.class_of(aj, sj))
    phi = glue_hom(X, i, j)
    loc_ij = chart_loc(X, i, j)
    loc_ji = chart_loc(X, j, i)
    hmap = []
    for m in range(X.charts[i].n):
        cm = phi.map[loc_ij.loc_map.map[m]]
        mj, sj = loc_ji.reps[cm]
        hmap.append(L_pj.class_of(mj, sj))
    out = induced_from_localized_mset(st_i, st_j.result, tuple(gmap), tuple(hmap))
    assert len(set(out)) == st_j.result.k == st_i.result.k, "stalk transport not a bijection"
    return out


@cache
def cross_stalk_map(F: QcSheaf, x: int, i: int, j: int) -> tuple[int, ...]:
    """Transport between the stalks of two charts containing x, composing
    along a path of direct glues."""
    if i == j:
        return tuple(range(chart_stalk(F, x, i).result.k))
    X = F.scheme
    charts_here = X.charts_of(x)
    prev = {i: None}
    queue = [i]
    while queue:
        c = queue.pop(0)
        if c == j:
            break
        for d in charts_here:
            if d not in prev and X.glue_for(c, d) is not None:
                prev[d] = c
                queue.append(d)
    if j not in prev:
        raise ChartDisagreement(f"no glue path between charts {i} and {j} at point {x}")
    path = [j]
    while path[-1] != i:
        path.append(prev[path[-1]])
    path.reverse()
    out = tuple(range(chart_stalk(F, x, i).result.k))
    for a, b in zip(path, path[1:]):
        step = _stalk_edge_map(F, x, a, b)
        out = tuple(step[v] for v in out)
    return out


def verify_stalk_chart_independence(F: QcSheaf, x) -> bool:
    """Every chart computes the same stalk: all transports are bijections and
    every round trip is the identity."""
    xi = _point_index(x)
    charts_here = F.scheme.charts_of(xi)
    for i in charts_here:
        for j in charts_here:
            fwd = cross_stalk_map(F, xi, i, j)
            back = cross_stalk_map(F, xi, j, i)
            ident = tuple(range(chart_stalk(F, xi, i).result.k))
            if tuple(back[v] for v in fwd) != ident:
                raise ChartDisagreement(
                    f"stalk transport round trip fails at point {xi} ({i}<->{j})"
                )
    return True


def stalk(F: QcSheaf, x) -> LocalizedMSet:
    """The stalk at a point, computed in its canonical chart; the value is
    chart independent, which is verified."""
    xi = _point_index(x)
    verify_stalk_chart_independence(F, xi)
    c, _ = F.scheme.points[xi][0]
    return chart_stalk(F, xi, c)


def stalk_map(h: SheafHom, x, c: int | None = None) -> tuple[int, ...]:
    xi = _point_index(x)
    if c is None:
        c, _ = h.source.scheme.points[xi][0]
    LA = chart_stalk(h.source, xi, c)
    LB = chart_stalk(h.target, xi, c)
    return _localized_map(LA, LB, h.maps[c])


@dataclass(frozen=True)
class SectionSet:
    """Sections over an open: compatible chart families of stalk values."""

    sheaf: QcSheaf
    open_mask: int
    chart_points: tuple[tuple[int, ...], ...]  # per chart, point ids inside U
    elements: tuple[tuple[tuple[int, ...], ...], ...]

    def __len__(self) -> int:
        return len(self.elements)


@cache
def sections(X: MonoidScheme, U: int, F: QcSheaf) -> SectionSet:
    """Compatible families over the open's points: one stalk value per point
    and chart, matching under specialization inside a chart and under the
    gluing transports across charts."""
    if F.scheme != X:
        raise ValueError("sheaf lives on a different scheme")
    ncharts = len(X.charts)
    chart_points = tuple(
        tuple(
            x
            for x in elements_of(U)
            if any(cc == c for cc, _ in X.points[x])
        )
        for c in range(ncharts)
    )
    slots: list[tuple[int, int]] = []  # (chart, point)
    for c in range(ncharts):
        for x in chart_points[c]:
            slots.append((c, x))
    sizes = {slot: chart_stalk(F, slot[1], slot[0]).result.k for slot in slots}

    # specialization restrictions within one chart
    def chart_restriction(c: int, y: int, x: int) -> tuple[int, ...]:
        sy = chart_stalk(F, y, c)
        sx = chart_stalk(F, x, c)
        return tuple(
            sx.class_of(*sy.reps[v]) for v in range(sy.result.k)
        )

    constraints = []  # (slot_a, slot_b, map) meaning map[value_a] == value_b
    for c in range(ncharts):
        for y in chart_points[c]:
            for x in chart_points[c]:
                if x != y and X.leq[x][y]:
                    constraints.append(((c, y), (c, x), chart_restriction(c, y, x)))
    for x in elements_of(U):
        here = [c for c in range(ncharts) if (c, x) in sizes]
        for i in here:
            for j in here:
                if i < j:
                    constraints.append(((i, x), (j, x), cross_stalk_map(F, x, i, j)))

    slot_pos = {s: t for t, s in enumerate(slots)}
    by_slot: dict[int, list[tuple[int, tuple[int, ...], bool]]] = {}
    for a, b, m in constraints:
        pa, pb = slot_pos[a], slot_pos[b]
        later, earlier = max(pa, pb), min(pa, pb)
        by_slot.setdefault(later, []).append((earlier, m, pa < pb))

    found: list[tuple[int, ...]] = []
    vals = [0] * len(slots)

    def dfs(t: int):
        if t == len(slots):
            found.append(tuple(vals))
            return
        for v in range(sizes[slots[t]]):
            vals[t] = v
            ok = True
            for other, m, forward in by_slot.get(t, ()):  # other < t is assigned
                if forward:  # map goes assigned -> current
                    if m[vals[other]] != v:
                        ok = False
                else:
                    if m[v] != vals[other]:
                        ok = False
                if not ok:
                    break
            if ok:
                dfs(t + 1)

    dfs(0)
    elements = []
    for flat in sorted(found):
        per_chart = []
        idx = 0
        for c in range(ncharts):
            take = len(chart_points[c])
            per_chart.append(tuple(flat[idx : idx + take]))
            idx += take
        elements.append(tuple(per_chart))
    return SectionSet(F, U, chart_points, tuple(elements))


def centre(X: MonoidScheme) -> FiniteCommMonoid:
    """Global sections of the structure sheaf, as a monoid under slot-wise
    multiplication of stalk fractions."""
    O = structure_sheaf(X)
    secs = sections(X, X.full_open(), O)
    stalk_monoids: dict[tuple[int, int], FiniteCommMonoid] = {}
    for c in range(len(X.charts)):
        for x in secs.chart_points[c]:
            st = chart_stalk(O, x, c)
            L = localize_monoid(
                X.charts[c],
                _prime_complement(
                    X.charts[c], spec(X.charts[c]).primes[X.prime_in_chart(x, c)].mask
                ),
            )
            assert st.reps == L.reps  # regular fractions are monoid fractions
            stalk_monoids[(c, x)] = L.result
    index = {el: t for t, el in enumerate(secs.elements)}

    def mult(e1, e2):
        out = []
        for c in range(len(X.charts)):
            row = []
            for t, x in enumerate(secs.chart_points[c]):
                row.append(stalk_monoids[(c, x)].mul[e1[c][t]][e2[c][t]])
            out.append(tuple(row))
        return tuple(out)

    ident = tuple(
        tuple(
            stalk_monoids[(c, x)].identity for x in secs.chart_points[c]
        )
        for c in range(len(X.charts))
    )
    table = [
        [index[mult(e1, e2)] for e2 in secs.elements] for e1 in secs.elements
    ]
    return validate_monoid(table, index[ident], name=f"Gamma({X.name})")


def centre_pullback_monoid(X: MonoidScheme) -> FiniteCommMonoid:
    """For a two-chart scheme, the explicit pullback of the chart monoids
    over the overlap monoid (the full product when the charts are disjoint)."""
    if len(X.charts) != 2:
        raise ValueError("pullback formula stated for two charts")
    M1, M2 = X.charts
    g = X.glue_for(0, 1)
    pairs = []
    for a in range(M1.n):
        for b in range(M2.n):
            if g is None:
                pairs.append((a, b))
                continue
            phi = glue_hom(X, 0, 1)
            l1 = chart_loc(X, 0, 1).loc_map.map[a]
            l2 = chart_loc(X, 1, 0).loc_map.map[b]
            if phi.map[l1] == l2:
                pairs.append((a, b))
    index = {p: t for t, p in enumerate(pairs)}
    table = [
        [index[(M1.mul[a1][a2], M2.mul[b1][b2])] for (a2, b2) in pairs]
        for (a1, b1) in pairs
    ]
    names = tuple(f"({M1.elem_name(a)},{M2.elem_name(b)})" for a, b in pairs)
    return validate_monoid(
        table, index[(M1.identity, M2.identity)], name="pullback", elem_names=names
    )


# ---------------------------------------------------------------------------
# opens as localizing data, incidence, and point-hood evidence


def _chart_open_primes(X: MonoidScheme, U: int, c: int) -> int:
    """U restricted to one chart, as a mask over that chart's primes."""
    return mask_of(
        X.prime_in_chart(x, c)
        for x in elements_of(U & X.chart_point_mask(c))
    )


def restrict_topology_to_glue(
    X: MonoidScheme, F: GTopology, i: int, j: int
) -> GTopology:
    """A chart topology restricted to the overlap fraction monoid, through
    the stable open it corresponds to."""
    from .topologies import xi as xi_set

    loc = chart_loc(X, i, j)
    open_i = xi_set(X.charts[i], F)
    P_i = spec(X.charts[i])
    P_loc = spec(loc.result)
    loc_prime_pos = {q.mask: t for t, q in enumerate(P_loc.primes)}
    moved = 0
    g = X.glue_for(i, j)
    for t in elements_of(open_i):
        p = P_i.primes[t]
        if has(p.mask, g.f_src):
            continue
        moved |= 1 << loc_prime_pos[_chart_prime_to_loc(loc, p.mask)]
    return upsilon(loc.result, moved)


def _transport_topology(X: MonoidScheme, i: int, j: int, F: GTopology) -> GTopology:
    """Move a topology on the (i,j) fraction monoid across the gluing iso."""
    phi = glue_hom(X, i, j)
    src = chart_loc(X, i, j).result
    dst = chart_loc(X, j, i).result
    idx = ideal_index(dst)
    mask = mask_of(
        idx[mask_of(phi.map[z] for z in elements_of(ideal_masks(src)[t]))]
        for t in elements_of(F.mask)
    )
    return GTopology(dst, mask)


def phi(X: MonoidScheme, U: int) -> tuple[GTopology, ...]:
    """The localizing data of an open: per chart, the topology of the
    complement of U; compatibility across overlaps is asserted."""
    fams = tuple(
        upsilon(X.charts[c], _chart_open_primes(X, U, c))
        for c in range(len(X.charts))
    )
    for g in X.glues:
        lhs = _transport_topology(
            X, g.i, g.j, restrict_topology_to_glue(X, fams[g.i], g.i, g.j)
        )
        rhs = restrict_topology_to_glue(X, fams[g.j], g.j, g.i)
        assert lhs.mask == rhs.mask, f"open data incompatible on glue ({g.i},{g.j})"
    return fams


@dataclass(frozen=True)
class PhiIsoReport:
    scheme: MonoidScheme
    compatible_families: tuple[tuple[int, ...], ...]  # topology masks per chart
    image: tuple[tuple[int, ...], ...]
    ok: bool
    witness: str = ""


def verify_phi_iso(X: MonoidScheme) -> PhiIsoReport:
    """Opens embed order-reversingly onto the compatible chart-topology
    families (the pullback of the chart localizing data over the overlaps)."""
    ncharts = len(X.charts)
    chart_tops = [enumerate_gtopologies(M) for M in X.charts]
    compatible = []
    for combo in iproduct(*chart_tops):
        ok = True
        for g in X.glues:
            lhs = _transport_topology(
                X, g.i, g.j, restrict_topology_to_glue(X, combo[g.i], g.i, g.j)
            )
            rhs = restrict_topology_to_glue(X, combo[g.j], g.j, g.i)
            if lhs.mask != rhs.mask:
                ok = False
                break
        if ok:
            compatible.append(tuple(F.mask for F in combo))
    image = []
    problems = []
    for U in X.opens:
        fams = phi(X, U)
        image.append(tuple(F.mask for F in fams))
    if sorted(set(image)) != sorted(compatible):
        problems.append(
            f"image has {len(set(image))} families, pullback has {len(compatible)}"
        )
    if len(set(image)) != len(X.opens):
        problems.append("open-to-family map is not injective")
    for a, Ua in enumerate(X.opens):  # order reversing both ways
        for b, Ub in enumerate(X.opens):
            sub = (Ua & Ub) == Ua
            rev = all(
                (image[b][c] & image[a][c]) == image[b][c] for c in range(ncharts)
            )
            if sub != rev:
                problems.append(f"order reversal fails at opens {Ua:b},{Ub:b}")
    return PhiIsoReport(
        X,
        tuple(sorted(compatible)),
        tuple(image),
        not problems,
        problems[0] if problems else "",
    )


def point_direct_image(X: MonoidScheme, x, size: int, c: int | None = None) -> MSet:
    """The chart M-set of maps from the stalk fraction monoid to a finite
    set; right adjoint on points to taking the stalk."""
    xi_ = _point_index(x)
    if c is None:
        c, _ = X.points[xi_][0]
    M = X.charts[c]
    p = spec(M).primes[X.prime_in_chart(xi_, c)]
    L = localize_monoid(M, _prime_complement(M, p.mask))
    ell = L.result.n
    k = size**ell
    if k == 0:
        raise ValueError("direct image needs a nonempty set")

    def decode(idx: int) -> tuple[int, ...]:
        return tuple((idx // size**z) % size for z in range(ell))

    def encode(fn) -> int:
        return sum(fn[z] * size**z for z in range(ell))

    act = []
    for idx in range(k):
        fn = decode(idx)
        row = []
        for m in range(M.n):
            lm = L.loc_map.map[m]
            row.append(encode(tuple(fn[L.result.mul[lm][z]] for z in range(ell))))
        act.append(tuple(row))
    return MSet(M, k, tuple(act), name=f"p*({size})")


def pitchfork_detail(
    X: MonoidScheme, x, U: int, sizes: tuple[int, ...] = (1, 2, 3)
) -> tuple[bool, tuple[tuple[int, bool], ...]]:
    """Incidence via direct images: whether every probe direct image lands in
    the localizing data of U.  Evaluated in every chart containing the point;
    the verdict must not depend on the chart."""
    xi_ = _point_index(x)
    per_size: dict[int, bool] = {}
    verdicts = []
    for c in X.charts_of(xi_):
        F_c = upsilon(X.charts[c], _chart_open_primes(X, U, c))
        local = []
        for s in sizes:
            local.append(is_sheaf(point_direct_image(X, xi_, s, c), F_c))
        verdicts.append(all(local))
        for s, v in zip(sizes, local):
            if s in per_size and per_size[s] != v:
                raise ChartDisagreement(
                    f"direct image sheaf verdict differs between charts at point {xi_}"
                )
            per_size[s] = v
    if len(set(verdicts)) > 1:
        raise ChartDisagreement(f"incidence verdict differs between charts at {xi_}")
    return verdicts[0], tuple(sorted(per_size.items()))


def pitchfork(X: MonoidScheme, x, U: int, sizes: tuple[int, ...] = (1, 2, 3)) -> bool:
    return pitchfork_detail(X, x, U, sizes)[0]


def enumerate_qcsheaves(X: MonoidScheme, kmax: int) -> tuple[QcSheaf, ...]:
    """Every sheaf with chart carriers at most kmax: chart M-sets up to
    relabeling, with every way of gluing their localizations."""
    from .msets import all_msets

    chart_opts = []
    for M in X.charts:
        opts: list[MSet] = []
        for k in range(0, kmax + 1):
            opts.extend(all_msets(M, k))
        chart_opts.append(opts)
    pairs = sorted({(g.i, g.j) for g in X.glues if g.i < g.j})
    out = []
    for combo in iproduct(*chart_opts):
        iso_opts = []
        for i, j in pairs:
            LA_i = localize_mset(combo[i], _glue_submonoid(X, i, j))
            LA_j = localize_mset(combo[j], _glue_submonoid(X, j, i))
            viewed = restrict_mset(glue_hom(X, i, j), LA_j.result)
            cands = [h.map for h in hom_set(LA_i.result, viewed) if h.is_bijective()]
            if not cands:
                break
            iso_opts.append(cands)
        else:
            for choice in iproduct(*iso_opts):
                isos = []
                for (i, j), m in zip(pairs, choice):
                    isos.append((i, j, m))
                    inv = [0] * len(m)
                    for a, b in enumerate(m):
                        inv[b] = a
                    isos.append((j, i, tuple(inv)))
                try:
                    out.append(qcsheaf(X, tuple(combo), tuple(isos)))
                except (ValueError, NonIso, CocycleFailure):
                    continue
    return tuple(out)


@dataclass(frozen=True)
class OracleReport:
    scheme: MonoidScheme
    objects: int
    oracle: FiniteCommMonoid
    matches_centre: bool


def centre_oracle(X: MonoidScheme, kmax: int) -> OracleReport:
    """The centre computed the hard way: all families of endomorphisms,
    one per sheaf with chart carriers <= kmax, natural in every morphism.
    The structure sheaf is always part of the family; it is the generator,
    and without it a small carrier bound can leave undergluing freedom.
    The resulting monoid must be isomorphic to the global sections."""
    from .monoids import monoid_iso

    if kmax > 3:
        raise ValueError("oracle bound limited to 3")
    objs = enumerate_qcsheaves(X, kmax)
    O = structure_sheaf(X)
    if O not in objs:
        objs = objs + (O,)
    endos = [sheaf_homs(F, F) for F in objs]
    homs: dict[tuple[int, int], tuple[SheafHom, ...]] = {}
    for a, F in enumerate(objs):
        for b, G in enumerate(objs):
            homs[(a, b)] = sheaf_homs(F, G)

    families: list[tuple[int, ...]] = []
    choice = [0] * len(objs)

    def natural_so_far(t: int) -> bool:
        th_t = endos[t][choice[t]]
        for a in range(t + 1):
            th_a = endos[a][choice[a]]
            for u in homs[(a, t)]:
                for c in range(len(u.maps)):
                    lhs = tuple(th_t.maps[c][v] for v in u.maps[c])
                    rhs = tuple(u.maps[c][v] for v in th_a.maps[c])
                    if lhs != rhs:
                        return False
            if a != t:
                for u in homs[(t, a)]:
                    for c in range(len(u.maps)):
                        lhs = tuple(th_a.maps[c][v] for v in u.maps[c])
                        rhs = tuple(u.maps[c][v] for v in th_t.maps[c])
                        if lhs != rhs:
                            return False
        return True

    def dfs(t: int):
        if t == len(objs):
            families.append(tuple(choice))
            return
        for e in range(len(endos[t])):
            choice[t] = e
            if natural_so_far(t):
                dfs(t + 1)

    dfs(0)
    index = {fam: t for t, fam in enumerate(families)}

    def compose_family(f1, f2):
        out = []
        for t in range(len(objs)):
            h1 = endos[t][f1[t]].maps
            h2 = endos[t][f2[t]].maps
            composed = tuple(
                tuple(h1[c][v] for v in h2[c]) for c in range(len(h1))
            )
            out.append(
                next(
                    e
                    for e, h in enumerate(endos[t])
                    if h.maps == composed
                )
            )
        return tuple(out)

    table = [
        [index[compose_family(f1, f2)] for f2 in families] for f1 in families
    ]
    ident = tuple(
        next(
            e
            for e, h in enumerate(endos[t])
            if h.maps == tuple(tuple(range(A.k)) for A in objs[t].chart_msets)
        )
        for t in range(len(objs))
    )
    oracle = validate_monoid(table, index[ident], name="centre_oracle")
    match = monoid_iso(oracle, centre(X)) is not None
    return OracleReport(X, len(objs), oracle, match)


@dataclass(frozen=True)
class ExactnessReport:
    scheme: MonoidScheme
    point: int
    terminal_ok: bool
    product_pairs: int
    equalizer_pairs: int
    ok: bool
    witness: str = ""


def corpus_qcsheaves(X: MonoidScheme, kmax: int = 3) -> tuple[QcSheaf, ...]:
    """A small named family for exactness tests: the terminal sheaf plus all
    subsheaves of the structure sheaf within the carrier bound."""
    out = [terminal_sheaf(X)]
    O = structure_sheaf(X)
    if max(A.k for A in O.chart_msets) <= kmax:
        for combo in sub_sheaves(O):
            out.append(sub_qcsheaf(O, combo, name=f"O_sub{sum(combo)}"))
    if all(len(ideal_masks(M)) <= kmax for M in X.charts):
        out.append(omega_sheaf(X))
    return tuple(out)


def stalk_exactness_check(X: MonoidScheme, x, kmax: int = 3) -> ExactnessReport:
    """The stalk at a point preserves the terminal object, binary products
    and equalizers over the sheaf corpus."""
    xi_ = _point_index(x)
    c, _ = X.points[xi_][0]
    problems = []
    term = stalk(terminal_sheaf(X), xi_)
    terminal_ok = term.result.k == 1
    if not terminal_ok:
        problems.append("terminal stalk is not a point")
    fam = corpus_qcsheaves(X, kmax)
    pairs = 0
    for F in fam:
        for G in fam:
            P = product_sheaf(F, G)
            sp = chart_stalk(P, xi_, c)
            sf = chart_stalk(F, xi_, c)
            sg = chart_stalk(G, xi_, c)
            kb = G.chart_msets[c].k
            vals = set()
            for t in range(sp.result.k):
                ab, s = sp.reps[t]
                a, b = divmod(ab, kb)
                vals.add((sf.class_of(a, s), sg.class_of(b, s)))
            if len(vals) != sp.result.k or len(vals) != sf.result.k * sg.result.k:
                problems.append(f"product stalk mismatch for {F.name},{G.name}")
            pairs += 1
    eq_pairs = 0
    for F in fam:
        for G in fam:
            homs = sheaf_homs(F, G)
            for u in homs:
                for v in homs:
                    E = equalizer_sheaf(u, v)
                    se = chart_stalk(E, xi_, c)
                    sf = chart_stalk(F, xi_, c)
                    um = stalk_map(u, xi_, c)
                    vm = stalk_map(v, xi_, c)
                    want = {t for t in range(sf.result.k) if um[t] == vm[t]}
                    # embed the equalizer stalk into the source stalk
                    sub, incl = mset_from_subset(
                        F.chart_msets[c],
                        mask_of(
                            a
                            for a in range(F.chart_msets[c].k)
                            if u.maps[c][a] == v.maps[c][a]
                        ),
                    )
                    got = set()
                    for t in range(se.result.k):
                        a, s = se.reps[t]
                        got.add(sf.class_of(incl[a], s))
                    if got != want or len(got) != se.result.k:
                        problems.append(f"equalizer stalk mismatch {F.name}->{G.name}")
                    eq_pairs += 1
    return ExactnessReport(
        X,
        xi_,
        terminal_ok,
        pairs,
        eq_pairs,
        not problems,
        problems[0] if problems else "",
    )
