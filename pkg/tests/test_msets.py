"""M-sets, hom enumeration, the classifier and its pullback property."""

import pytest
from hypothesis import given, settings, strategies as st

from monoid_recon.bitsets import mask_of
from monoid_recon.corpus import corpus_monoids, monoid_BxB
from monoid_recon.ideals import Ideal, full_mask, ideal, ideal_index, ideal_masks
from monoid_recon.monoids import MonoidHom
from monoid_recon.msets import (
    MSet,
    MSetHom,
    MSetLawError,
    NotSubMSet,
    all_msets,
    all_msets_upto,
    characteristic_map,
    check_mset_hom,
    equalizer_mset,
    hom_set,
    ideal_as_mset,
    mset_from_subset,
    mset_iso,
    omega,
    product_mset,
    regular_mset,
    restrict_mset,
    sub_msets,
    terminal_mset,
    trivial_mset,
    verify_classifier,
)


def test_mset_law_validation(B):
    with pytest.raises(MSetLawError):
        MSet(B, 2, ((1, 0), (1, 1)))  # identity must fix each point
    with pytest.raises(MSetLawError):
        MSet(B, 2, ((0, 1), (1, 0)))  # 0 acts non-idempotently


def test_regular_and_trivial(M):
    regular_mset(M)
    trivial_mset(M, 3)
    assert terminal_mset(M).k == 1


def test_omega_examples(T, B, F3):
    assert omega(T).mset.k == 2
    om = omega(B)
    assert om.mset.k == 3
    # {0} . 0 = ({0} : 0) = B
    i0 = om.index_of(0b10)
    assert om.mset.act[i0][1] == om.top
    om3 = omega(F3)
    i = om3.index_of(ideal(F3, [3, 2]).mask)
    assert om3.masks[om3.mset.act[i][1]] == ideal(F3, [1, 2, 3]).mask


def test_omega_top_is_fixed_point(M):
    om = omega(M)
    assert all(om.mset.act[om.top][m] == om.top for m in range(M.n))


def test_sub_msets_examples(B):
    A = regular_mset(B)
    assert sub_msets(A) == (0, 0b10, 0b11)
    Tr = trivial_mset(B, 2)
    assert len(sub_msets(Tr)) == 4


def test_characteristic_map_examples(B):
    A = regular_mset(B)
    om = omega(B)
    chi = characteristic_map(A, 0b10)
    assert om.masks[chi.map[0]] == 0b10  # chi(1) = {0}
    assert chi.map[1] == om.top  # chi(0) = B
    top_chi = characteristic_map(A, 0b11)
    assert all(v == om.top for v in top_chi.map)
    bot_chi = characteristic_map(A, 0)
    assert all(om.masks[v] == 0 for v in bot_chi.map)


def test_characteristic_rejects_non_closed(B):
    with pytest.raises(NotSubMSet):
        characteristic_map(regular_mset(B), 0b01)


def test_hom_set_yoneda(M):
    reg = regular_mset(M)
    for A in all_msets_upto(M, 3):
        homs = hom_set(reg, A)
        assert len(homs) == A.k
        assert sorted(h.map[M.identity] for h in homs) == list(range(A.k))


def test_hom_set_ideal_example(B):
    sub = ideal_as_mset(B, 0b10)
    homs = hom_set(sub, regular_mset(B))
    assert len(homs) == 1 and homs[0].map == (1,)


def test_hom_set_brute_force_cross_check(B, E):
    from itertools import product

    for M in (B, E):
        for A in all_msets_upto(M, 2):
            for C in all_msets_upto(M, 2):
                brute = sorted(
                    m
                    for m in product(range(C.k), repeat=A.k)
                    if check_mset_hom(MSetHom(A, C, m))
                )
                assert sorted(h.map for h in hom_set(A, C)) == brute


def test_classifier_on_omega_itself(M):
    om = omega(M)
    assert verify_classifier(M, om.mset, 1 << om.top)


def test_classifier_all_small(B, E):
    for M in (B, E):
        for A in all_msets_upto(M, 3):
            for b in sub_msets(A):
                assert verify_classifier(M, A, b)


def test_classifier_counterexample_is_rejected(B):
    om = omega(B)
    A = regular_mset(B)
    # a non-characteristic hom A -> Omega classifies nothing it shouldn't:
    # the constant-at-top map only classifies the full subobject
    const = MSetHom(A, om.mset, (om.top, om.top))
    assert check_mset_hom(const)
    assert mask_of(a for a in range(A.k) if const.map[a] == om.top) == 0b11


def test_all_msets_counts_and_dedup(B, C2):
    raw = all_msets(B, 2, up_to_iso=False)
    deduped = all_msets(B, 2, up_to_iso=True)
    assert len(raw) >= len(deduped)
    # classifier verdicts do not depend on the labeling
    for M, k in ((B, 2), (C2, 2), (B, 3)):
        for A in all_msets(M, k, up_to_iso=False):
            for b in sub_msets(A):
                assert verify_classifier(M, A, b)


def test_all_msets_are_valid_and_complete(M):
    # completeness at carrier 1: only the terminal structure exists
    assert len(all_msets(M, 1)) == 1
    for A in all_msets_upto(M, 3):
        assert A.monoid == M  # validation ran in the constructor


def test_product_and_equalizer(B):
    A = regular_mset(B)
    P = product_mset(A, A)
    assert P.k == 4
    pr1 = MSetHom(P, A, tuple(i // A.k for i in range(P.k)))
    pr2 = MSetHom(P, A, tuple(i % A.k for i in range(P.k)))
    assert check_mset_hom(pr1) and check_mset_hom(pr2)
    diag, incl = equalizer_mset(pr1, pr2)
    assert diag.k == 2 and incl == (0, 3)


def test_restrict_mset(B, E):
    proj = MonoidHom(E, B, (0, 0, 1))
    A = restrict_mset(proj, regular_mset(B))
    assert A.monoid == E and A.k == 2
    assert A.act[0] == (0, 0, 1)


def test_mset_iso_respects_action(B):
    A = trivial_mset(B, 2)
    C = regular_mset(B)
    assert mset_iso(A, C) is None
    assert mset_iso(C, C) == (0, 1)


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_characteristic_pullback_property(data):
    M = data.draw(st.sampled_from(corpus_monoids()))
    A = data.draw(st.sampled_from(all_msets_upto(M, 3)))
    b = data.draw(st.sampled_from(sub_msets(A)))
    om = omega(M)
    chi = characteristic_map(A, b)
    assert mask_of(a for a in range(A.k) if chi.map[a] == om.top) == b
