"""Named verification suites over monoids and schemes.

Each suite yields check records with an id, a cross-reference anchor, a
status and a witness string.  Anchors are the short tags used throughout
this project's contracts (for example 21247, e1, oOloc, z=or, bij_or,
maintheorem.v); ids are stable, so sorted record streams are reproducible.
"""

from __future__ import annotations

from itertools import product as iproduct

from .bitsets import elements_of, has, mask_of
from .ideals import (
    Ideal,
    enumerate_ideals,
    full_mask,
    ideal_index,
    ideal_masks,
    ideal_masks_by_scan,
    ideal_masks_by_union_closure,
    ideal_product_mask,
    ideal_quotient_mask,
    is_ideal_mask,
    order_topology,
    spec,
    verify_z_equals_order,
    zariski_topology,
)
from .localization import (
    hom_from_localization,
    localize_monoid,
    localize_mset,
    mono_criterion,
    omega_localization_iso,
    restricted_along_loc,
    verify_ideal_transport,
)
from .monoids import (
    FiniteCommMonoid,
    MonoidHom,
    all_monoid_homs,
    all_submonoids,
    check_hom,
    monoid_iso,
    submonoid_generated,
    units,
)
from .msets import (
    MSet,
    all_msets_upto,
    hom_set,
    mset_iso,
    omega,
    regular_mset,
    sub_msets,
    verify_classifier,
)
from .posets import birkhoff_points, poset_iso, space_lattice
from .report import PASS, SKIP, CheckRecord, timer
from .schemes import (
    MonoidScheme,
    centre,
    centre_oracle,
    centre_pullback_monoid,
    chart_stalk,
    omega_sheaf,
    pitchfork_detail,
    sections,
    stalk,
    stalk_exactness_check,
    structure_sheaf,
    sub_qcsheaf,
    sub_sheaves,
    sheaf_homs,
    verify_phi_iso,
    verify_stalk_chart_independence,
)
from .topologies import (
    GTopology,
    enumerate_gtopologies,
    enumerate_gtopologies_exhaustive,
    is_gtopology,
    is_jsheaf_bounded,
    is_sheaf,
    is_stable,
    lt_operator,
    lt_operators_exhaustive,
    meet_table,
    point_topology,
    sheafify,
    stable_closure,
    upsilon,
    verify_bijection,
    xi,
)

SUITE_NAMES = (
    "ideals",
    "classifier",
    "localization",
    "topologies",
    "galois",
    "schemes",
    "reconstruction",
)


def _record(check_id: str, anchor: str, ok: bool, witness: str, millis: float) -> CheckRecord:
    return CheckRecord(check_id, anchor, "pass" if ok else "fail", witness, millis)


# ---------------------------------------------------------------------------
# ideals


def suite_ideals(monoids) -> list[CheckRecord]:
    out = []
    for M in monoids:
        out.extend(_ideals_for(M))
    return out


def _ideals_for(M: FiniteCommMonoid) -> list[CheckRecord]:
    out = []
    masks = ideal_masks(M)
    full = full_mask(M)

    with timer() as t:
        ok = True
        why = "-"
        for a in masks:
            if ideal_quotient_mask(M, a, M.identity) != a:
                ok, why = False, f"(a:1)!=a at {a:b}"
            for x in range(M.n):
                q = ideal_quotient_mask(M, a, x)
                if not is_ideal_mask(M, q):
                    ok, why = False, f"(a:x) not ideal at {a:b},{x}"
                for y in range(M.n):
                    if ideal_quotient_mask(M, q, y) != ideal_quotient_mask(
                        M, a, M.mul[x][y]
                    ):
                        ok, why = False, f"((a:x):y) != (a:xy) at {a:b},{x},{y}"
        for x in range(M.n):
            if ideal_quotient_mask(M, full, x) != full:
                ok, why = False, f"(M:{x})!=M"
    out.append(_record(f"ideals/{M.name}/quotient-laws", "21247", ok, why, t.millis))

    with timer() as t:
        ok = ideal_masks_by_scan(M) == ideal_masks_by_union_closure(M)
    out.append(
        _record(
            f"ideals/{M.name}/enumeration-oracle",
            "invented",
            ok,
            f"ideals={len(masks)}",
            t.millis,
        )
    )

    with timer() as t:
        ok = True
        union_all = 0
        for a in masks:
            union_all |= a
            for b in masks:
                if not is_ideal_mask(M, a | b) or not is_ideal_mask(M, a & b):
                    ok = False
        ok = ok and is_ideal_mask(M, union_all)
    out.append(
        _record(f"ideals/{M.name}/union-intersection", "135", ok, "-", t.millis)
    )

    with timer() as t:
        rep = verify_z_equals_order(M)
    out.append(
        _record(
            f"ideals/{M.name}/zariski-equals-order",
            "z=or",
            rep.ok,
            f"opens={len(rep.order.opens)}" if rep.ok else f"mismatch={rep.witness:b}",
            t.millis,
        )
    )

    with timer() as t:
        lat = space_lattice(order_topology(spec(M)))
        pts, _ = birkhoff_points(lat)
        ok = poset_iso(pts, spec(M).poset) is not None
    out.append(
        _record(
            f"ideals/{M.name}/birkhoff-roundtrip",
            "birkhoff",
            ok,
            f"primes={len(spec(M))}",
            t.millis,
        )
    )
    return out


# ---------------------------------------------------------------------------
# classifier


def suite_classifier(monoids, kmax: int = 4) -> list[CheckRecord]:
    out = []
    for M in monoids:
        out.extend(_classifier_for(M, kmax))
    return out


def _classifier_for(M: FiniteCommMonoid, kmax: int) -> list[CheckRecord]:
    out = []
    om = omega(M)
    with timer() as t:
        ok = all(om.mset.act[om.top][m] == om.top for m in range(M.n))
    out.append(
        _record(
            f"classifier/{M.name}/omega-action", "21247", ok,
            f"ideals={om.mset.k}", t.millis,
        )
    )

    with timer() as t:
        checked = 0
        bad = "-"
        ok = True
        for A in all_msets_upto(M, kmax):
            for b_mask in sub_msets(A):
                checked += 1
                if not verify_classifier(M, A, b_mask):
                    ok = False
                    bad = f"A={A.act},B={b_mask:b}"
    out.append(
        _record(
            f"classifier/{M.name}/pullback-uniqueness",
            "chi_B",
            ok,
            f"subobjects={checked}" if ok else bad,
            t.millis,
        )
    )

    with timer() as t:
        reg = regular_mset(M)
        ok = all(len(hom_set(reg, A)) == A.k for A in all_msets_upto(M, min(kmax, 3)))
    out.append(_record(f"classifier/{M.name}/yoneda-count", "msz", ok, "-", t.millis))
    return out


# ---------------------------------------------------------------------------
# localization


def suite_localization(monoids) -> list[CheckRecord]:
    out = []
    mono_list = tuple(monoids)
    for M in mono_list:
        out.extend(_localization_for(M, mono_list))
    return out


def _localization_for(M: FiniteCommMonoid, corpus) -> list[CheckRecord]:
    out = []

    with timer() as t:
        ok = True
        why = "-"
        homs = 0
        for N in corpus:
            for f in all_monoid_homs(M, N):
                homs += 1
                rep = verify_ideal_transport(f)
                if not rep.ok:
                    ok = False
                    why = next(c.check for c in rep.checks if not c.ok)
    out.append(
        _record(
            f"localization/{M.name}/transport-all-homs",
            "020218",
            ok,
            f"homs={homs}" if ok else why,
            t.millis,
        )
    )

    with timer() as t:
        ok = True
        why = "-"
        for S in all_submonoids(M):
            L = localize_monoid(M, S)
            rep = verify_ideal_transport(L.loc_map, S)
            if not rep.ok:
                ok = False
                why = next(c.check for c in rep.checks if not c.ok)
    out.append(
        _record(
            f"localization/{M.name}/transport-localizations",
            "080217",
            ok,
            f"submonoids={len(all_submonoids(M))}" if ok else why,
            t.millis,
        )
    )

    with timer() as t:
        ok = True
        why = "-"
        for S in all_submonoids(M):
            iso, rep = omega_localization_iso(M, S)
            if not rep.ok:
                ok = False
                why = f"S={S.mask:b}"
            sat_ok = all(
                ideal_quotient_mask(M, mask, s) == _saturation(M, S, mask)
                for mask, s in zip(ideal_masks(M), rep.witnesses)
            )
            if not sat_ok:
                ok = False
                why = f"witness S={S.mask:b}"
    out.append(
        _record(f"localization/{M.name}/omega-iso", "oOloc", ok, why, t.millis)
    )

    with timer() as t:
        ok = True
        for S in all_submonoids(M):
            iso, rep = omega_localization_iso(M, S)
            surj = len(set(iso.map)) == iso.target.k
            if not surj:
                ok = False
    out.append(
        _record(
            f"localization/{M.name}/omega-iso-surjective", "342003", ok, "-", t.millis
        )
    )

    with timer() as t:
        ok = True
        why = "-"
        for S in all_submonoids(M):
            L = localize_monoid(M, S)
            for N in corpus:
                for g in all_monoid_homs(M, N):
                    if any(g.map[s] not in units(N) for s in S.members):
                        continue
                    h = hom_from_localization(L, g)
                    others = [
                        e
                        for e in all_monoid_homs(L.result, N)
                        if e.compose(L.loc_map).map == g.map
                    ]
                    if others != [h]:
                        ok = False
                        why = f"S={S.mask:b},N={N.name}"
    out.append(
        _record(
            f"localization/{M.name}/universal-property",
            "universal",
            ok,
            why,
            t.millis,
        )
    )

    with timer() as t:
        ok = True
        for S in all_submonoids(M):
            # pushing ideals forward into the localized classifier is the
            # map whose induced fraction map the iso says is injective
            L = localize_monoid(M, S)
            lo = localize_mset(omega(M).mset, S)
            iso, rep = omega_localization_iso(M, S)
            alpha = tuple(iso.map[lo.beta[a]] for a in range(omega(M).mset.k))
            if not mono_criterion(omega(M).mset, iso.target, alpha, L):
                ok = False
    out.append(
        _record(f"localization/{M.name}/mono-criterion", "mono", ok, "-", t.millis)
    )
    return out


def _saturation(M: FiniteCommMonoid, S, mask: int) -> int:
    out = 0
    for s in S.members:
        out |= ideal_quotient_mask(M, mask, s)
    return out


# ---------------------------------------------------------------------------
# topologies


def suite_topologies(monoids, kmax: int = 4) -> list[CheckRecord]:
    out = []
    for M in monoids:
        out.extend(_topologies_for(M, kmax))
    return out


def _topologies_for(M: FiniteCommMonoid, kmax: int) -> list[CheckRecord]:
    out = []
    tops = enumerate_gtopologies(M)
    masks = ideal_masks(M)
    index = ideal_index(M)

    with timer() as t:
        ok = [F.mask for F in tops] == [
            F.mask for F in enumerate_gtopologies_exhaustive(M)
        ]
    out.append(
        _record(
            f"topologies/{M.name}/enumeration-oracle",
            "invented",
            ok,
            f"count={len(tops)}",
            t.millis,
        )
    )

    with timer() as t:
        ok = True
        why = "-"
        for F in tops:
            up = all(
                has(F.mask, j)
                for i in elements_of(F.mask)
                for j in range(len(masks))
                if (masks[i] & masks[j]) == masks[i]
            )
            inter = all(
                has(F.mask, index[masks[i] & masks[j]])
                for i in elements_of(F.mask)
                for j in elements_of(F.mask)
            )
            prod = all(
                has(F.mask, index[ideal_product_mask(M, masks[i], masks[j])])
                for i in elements_of(F.mask)
                for j in elements_of(F.mask)
            )
            if not (up and inter and prod):
                ok = False
                why = f"F={F.mask:b}"
    out.append(_record(f"topologies/{M.name}/e1-closures", "e1", ok, why, t.millis))

    with timer() as t:
        ok = True
        why = "-"
        for F in tops:
            for c in range(len(masks)):
                if has(F.mask, c):
                    continue
                over = [
                    a
                    for a in range(len(masks))
                    if not has(F.mask, a) and (masks[c] & masks[a]) == masks[c]
                ]
                maximal = [
                    a
                    for a in over
                    if not any(
                        b != a and (masks[a] & masks[b]) == masks[a] for b in over
                    )
                ]
                from .ideals import _is_prime_mask

                for a in maximal:
                    if not _is_prime_mask(M, masks[a]):
                        ok = False
                        why = f"F={F.mask:b},c={masks[c]:b},max={masks[a]:b}"
    out.append(
        _record(f"topologies/{M.name}/maximal-outside-prime", "135", ok, why, t.millis)
    )

    with timer() as t:
        ok = True
        for F in tops:
            op = lt_operator(F)  # asserts the axioms and the round trip
        meet_table(M)  # asserts meet = characteristic map of (t,t)
    out.append(
        _record(f"topologies/{M.name}/lt-operator", "lt_operator", ok, "-", t.millis)
    )

    with timer() as t:
        scans = lt_operators_exhaustive(M)
        from_tops = sorted(lt_operator(F).j for F in tops)
        ok = list(scans) == from_tops
    out.append(
        _record(
            f"topologies/{M.name}/lt-correspondence",
            "2510718",
            ok,
            f"operators={len(scans)}",
            t.millis,
        )
    )

    with timer() as t:
        ok = True
        why = "-"
        cases = 0
        for f in range(M.n):
            F = upsilon(M, _basic_open_mask(M, f))
            Sf = submonoid_generated(M, (f,))
            L = localize_monoid(M, Sf)
            for A in all_msets_upto(M, kmax):
                cases += 1
                sheaf = is_sheaf(A, F)
                bij = len({A.act[a][f] for a in range(A.k)}) == A.k
                if sheaf != bij:
                    ok = False
                    why = f"f={f},A={A.act}"
                    continue
                res, unit = sheafify(A, F)
                viewed = restricted_along_loc(L, localize_mset(A, Sf).result)
                if mset_iso(res, viewed) is None:
                    ok = False
                    why = f"sheafify f={f},A={A.act}"
    out.append(
        _record(
            f"topologies/{M.name}/sheaf-equals-invertible-action",
            "a290120",
            ok,
            f"cases={cases}" if ok else why,
            t.millis,
        )
    )

    with timer() as t:
        ok = True
        probes = all_msets_upto(M, 3)
        for F in tops:
            op = lt_operator(F)
            for A in all_msets_upto(M, 2):
                if is_sheaf(A, F) != is_jsheaf_bounded(A, op, probes):
                    ok = False
    out.append(
        _record(
            f"topologies/{M.name}/jsheaf-crosscheck", "is_sheaf", ok, "-", t.millis
        )
    )
    return out


def _basic_open_mask(M: FiniteCommMonoid, f: int) -> int:
    from .ideals import basic_open

    return basic_open(M, f)


# ---------------------------------------------------------------------------
# galois


def suite_galois(monoids) -> list[CheckRecord]:
    out = []
    for M in monoids:
        out.extend(_galois_for(M))
    return out


def _galois_for(M: FiniteCommMonoid) -> list[CheckRecord]:
    out = []
    P = spec(M)
    npr = len(P.primes)
    full_p = (1 << npr) - 1
    masks = ideal_masks(M)
    index = ideal_index(M)
    tops = enumerate_gtopologies(M)

    with timer() as t:
        ok = True
        why = "-"
        for pi, p in enumerate(P.primes):
            F = point_topology(M, p)  # validates the axioms
            from .ideals import vanishing

            for i, a in enumerate(masks):
                member = has(F.mask, i)
                avoid = not has(vanishing(M, Ideal(M, a)), pi)
                if member != avoid:
                    ok = False
                    why = f"p={p.mask:b},a={a:b}"
        for pi, p in enumerate(P.primes):
            for qi, q in enumerate(P.primes):
                sub = (p.mask & q.mask) == p.mask
                rev = (
                    point_topology(M, q).mask & point_topology(M, p).mask
                ) == point_topology(M, q).mask
                if sub != rev:
                    ok = False
                    why = f"order p={p.mask:b},q={q.mask:b}"
    out.append(_record(f"galois/{M.name}/point-topology", "mt", ok, why, t.millis))

    with timer() as t:
        ok = True
        why = "-"
        from .ideals import vanishing

        for pset in range(1 << npr):
            F = upsilon(M, pset)
            got = xi(M, F)
            down = mask_of(
                q
                for q in range(npr)
                if any(P.leq[q][p] for p in elements_of(pset))
            )
            if got != down:
                ok = False
                why = f"xi.upsilon at {pset:b}"
        for F in tops:
            closure = stable_closure(M, F)
            by_v = mask_of(
                i
                for i, a in enumerate(masks)
                if all(
                    has(F.mask, index[P.primes[p].mask])
                    for p in elements_of(vanishing(M, Ideal(M, a)))
                )
            )
            if closure.mask != by_v:
                ok = False
                why = f"upsilon.xi at F={F.mask:b}"
        for F in tops:
            for pset in range(1 << npr):
                adj1 = (F.mask & upsilon(M, pset).mask) == F.mask
                adj2 = (pset & xi(M, F)) == pset
                if adj1 != adj2:
                    ok = False
                    why = f"adjunction F={F.mask:b},P={pset:b}"
    out.append(
        _record(f"galois/{M.name}/galois-connection", "06012020", ok, why, t.millis)
    )

    with timer() as t:
        ok = all(is_stable(M, F) for F in tops)
        stable_sets = {
            pset
            for pset in range(1 << npr)
            if xi(M, upsilon(M, pset)) == pset
        }
        opens = set(order_topology(P).opens)
        ok = ok and stable_sets == opens
    out.append(
        _record(
            f"galois/{M.name}/stability",
            "134",
            ok,
            f"topologies={len(tops)}",
            t.millis,
        )
    )

    with timer() as t:
        rep = verify_bijection(M)
    out.append(
        _record(
            f"galois/{M.name}/open-topology-bijection",
            "bij_or",
            rep.ok,
            f"count={len(rep.topologies)}" if rep.ok else rep.witness,
            t.millis,
        )
    )
    out.append(
        _record(
            f"galois/{M.name}/localizing-count",
            "26",
            rep.ok,
            f"opens={len(rep.order_opens)}",
            t.millis,
        )
    )

    with timer() as t:
        ok = upsilon(M, 0).mask == (1 << len(masks)) - 1
        gen = mask_of(i for i, p in enumerate(P.primes) if p.mask == 0)
        nonempty = mask_of(i for i, a in enumerate(masks) if a != 0)
        ok = ok and upsilon(M, gen).mask == nonempty
        ok = ok and upsilon(M, full_p).mask == mask_of([index[full_mask(M)]])
        nonunits = full_mask(M) & ~units(M).mask
        if nonunits != full_mask(M) or M.n == 1:
            pos = [i for i, p in enumerate(P.primes) if p.mask == nonunits]
            if pos:
                ok = ok and upsilon(M, 1 << pos[0]).mask == mask_of(
                    [index[full_mask(M)]]
                )
        from .ideals import basic_open

        for f in range(M.n):
            # membership of a power of f, not of f itself: a covering family
            # reaches powers through ideal quotients, so a nilpotent witness
            # (t in F3, with t^3 = 0 in {0}) lands in the family without
            # being a member of the ideal
            powers = set()
            x = f
            while x not in powers:
                powers.add(x)
                x = M.mul[x][f]
            want = mask_of(
                i for i, a in enumerate(masks) if any(has(a, p) for p in powers)
            )
            if upsilon(M, basic_open(M, f)).mask != want:
                ok = False
    out.append(
        _record(f"galois/{M.name}/named-values", "a290120", ok, "-", t.millis)
    )
    return out


# ---------------------------------------------------------------------------
# schemes


def suite_schemes(schemes, oracle_k: int = 2) -> list[CheckRecord]:
    out = []
    for X in schemes:
        out.extend(_schemes_for(X, oracle_k))
    return out


def _schemes_for(X: MonoidScheme, oracle_k: int) -> list[CheckRecord]:
    out = []
    name = X.name
    O = structure_sheaf(X)

    with timer() as t:
        ok = True
        if len(X.charts) == 1:
            M = X.charts[0]
            chart_opens = {_points_to_chart_open(X, U, 0) for U in X.opens}
            ok = X.npoints == len(spec(M)) and chart_opens == set(
                zariski_topology(M).opens
            )
    out.append(
        _record(
            f"schemes/{name}/build",
            "invented",
            ok,
            f"points={X.npoints},opens={len(X.opens)}",
            t.millis,
        )
    )

    with timer() as t:
        ok = True
        why = "-"
        from .ideals import basic_open

        for c, M in enumerate(X.charts):
            for f in range(M.n):
                U = mask_of(
                    x
                    for x in range(X.npoints)
                    if c in X.charts_of(x)
                    and has(basic_open(M, f), _prime_pos(X, x, c))
                )
                secs = sections(X, U, O)
                Sf = submonoid_generated(M, (f,))
                Lf = localize_monoid(M, Sf)
                if len(X.charts) == 1:
                    if len(secs) != Lf.result.n:
                        ok = False
                        why = f"chart{c},f={f}: {len(secs)}!={Lf.result.n}"
    out.append(
        _record(f"schemes/{name}/sections-principal", "sections", ok, why, t.millis)
    )

    with timer() as t:
        ok = True
        for x in range(X.npoints):
            verify_stalk_chart_independence(O, x)
            verify_stalk_chart_independence(omega_sheaf(X), x)
    out.append(
        _record(f"schemes/{name}/stalk-chart-independence", "stalk", ok, "-", t.millis)
    )

    with timer() as t:
        Om = omega_sheaf(X)
        ok = True
        why = "-"
        checked = 0
        for combo in sub_sheaves(O):
            G = sub_qcsheaf(O, combo)
            chis = []
            for c in range(len(X.charts)):
                from .msets import characteristic_map

                chis.append(characteristic_map(O.chart_msets[c], combo[c]).map)
            cands = [
                h
                for h in sheaf_homs(O, Om)
                if all(
                    mask_of(
                        a
                        for a in range(O.chart_msets[c].k)
                        if h.maps[c][a] == omega(X.charts[c]).top
                    )
                    == combo[c]
                    for c in range(len(X.charts))
                )
            ]
            checked += 1
            if len(cands) != 1 or cands[0].maps != tuple(chis):
                ok = False
                why = f"subsheaf={combo}"
    out.append(
        _record(
            f"schemes/{name}/classifier-gluing",
            "osch",
            ok,
            f"subsheaves={checked}" if ok else why,
            t.millis,
        )
    )

    with timer() as t:
        C = centre(X)
        ok = True
        if len(X.charts) == 1:
            ok = monoid_iso(C, X.charts[0]) is not None
    out.append(
        _record(
            f"schemes/{name}/centre-sections", "msz", ok, f"size={C.n}", t.millis
        )
    )

    with timer() as t:
        if len(X.charts) == 2:
            P = centre_pullback_monoid(X)
            pullback_ok = monoid_iso(centre(X), P) is not None
            pullback_note = f"size={P.n}"
        else:
            pullback_ok = None
            pullback_note = "needs-2-charts"
    if pullback_ok is None:
        out.append(
            CheckRecord(
                f"schemes/{name}/centre-pullback", "lnt", SKIP, pullback_note, t.millis
            )
        )
    else:
        out.append(
            _record(
                f"schemes/{name}/centre-pullback", "lnt", pullback_ok, pullback_note, t.millis
            )
        )

    with timer() as t:
        orep = centre_oracle(X, oracle_k)
    out.append(
        _record(
            f"schemes/{name}/centre-oracle",
            "msz",
            orep.matches_centre,
            f"objects={orep.objects},size={orep.oracle.n}",
            t.millis,
        )
    )

    with timer() as t:
        prep = verify_phi_iso(X)
    out.append(
        _record(
            f"schemes/{name}/opens-localizing-iso",
            "maintheorem.ii",
            prep.ok,
            f"families={len(prep.compatible_families)}" if prep.ok else prep.witness,
            t.millis,
        )
    )
    return out


def _prime_pos(X: MonoidScheme, x: int, c: int) -> int:
    return X.prime_in_chart(x, c)


def _points_to_chart_open(X: MonoidScheme, U: int, c: int) -> int:
    return mask_of(
        X.prime_in_chart(x, c)
        for x in elements_of(U & X.chart_point_mask(c))
    )


# ---------------------------------------------------------------------------
# reconstruction


def suite_reconstruction(schemes, sizes=(1, 2, 3)) -> list[CheckRecord]:
    out = []
    for X in schemes:
        out.extend(_reconstruction_for(X, sizes))
    return out


def _reconstruction_for(X: MonoidScheme, sizes) -> list[CheckRecord]:
    out = []
    name = X.name

    with timer() as t:
        pts, _ = birkhoff_points(X.open_lattice())
        ok = poset_iso(pts, X.poset()) is not None
    out.append(
        _record(
            f"reconstruction/{name}/birkhoff-points",
            "birkhoff",
            ok,
            f"points={X.npoints}",
            t.millis,
        )
    )

    with timer() as t:
        ok = True
        why = "-"
        cases = 0
        for x in range(X.npoints):
            for U in X.opens:
                cases += 1
                want = has(U, x)
                got, _ = pitchfork_detail(X, x, U, tuple(sizes))
                if got != want:
                    ok = False
                    why = f"x={x},U={U:b}"
    out.append(
        _record(
            f"reconstruction/{name}/incidence",
            "maintheorem.v",
            ok,
            f"cases={cases}" if ok else why,
            t.millis,
        )
    )

    with timer() as t:
        ok = True
        why = "-"
        for x in range(X.npoints):
            rep = stalk_exactness_check(X, x)
            if not rep.ok:
                ok = False
                why = rep.witness
    out.append(
        _record(
            f"reconstruction/{name}/stalk-exactness",
            "maintheorem.iv",
            ok,
            why,
            t.millis,
        )
    )
    return out


# ---------------------------------------------------------------------------
# dispatch


def run_suites(
    suites,
    monoids,
    schemes,
    kmax: int = 3,
    oracle_k: int = 2,
    jobs: int = 1,
) -> list[CheckRecord]:
    tasks = []
    for s in suites:
        if s == "ideals":
            tasks.append(lambda: suite_ideals(monoids))
        elif s == "classifier":
            tasks.append(lambda: suite_classifier(monoids, kmax))
        elif s == "localization":
            tasks.append(lambda: suite_localization(monoids))
        elif s == "topologies":
            tasks.append(lambda: suite_topologies(monoids, kmax))
        elif s == "galois":
            tasks.append(lambda: suite_galois(monoids))
        elif s == "schemes":
            tasks.append(lambda: suite_schemes(schemes, oracle_k))
        elif s == "reconstruction":
            tasks.append(lambda: suite_reconstruction(schemes))
        else:
            raise ValueError(f"unknown suite {s!r}")
    records: list[CheckRecord] = []
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for chunk in pool.map(lambda fn: fn(), tasks):
                records.extend(chunk)
    else:
        for fn in tasks:
            records.extend(fn())
    return sorted(records, key=lambda r: r.check_id)
