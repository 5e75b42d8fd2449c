"""Ideals, quotients, spectra, the two topologies, and point recovery."""

import pytest
from hypothesis import given, strategies as st

from monoid_recon.bitsets import has, mask_of
from monoid_recon.corpus import corpus_monoids
from monoid_recon.ideals import (
    Ideal,
    basic_open,
    enumerate_ideals,
    full_mask,
    ideal,
    ideal_masks,
    ideal_masks_by_scan,
    ideal_masks_by_union_closure,
    ideal_quotient,
    ideal_quotient_mask,
    is_ideal_mask,
    is_prime,
    order_topology,
    principal_ideal,
    spec,
    vanishing,
    verify_z_equals_order,
    zariski_topology,
)
from monoid_recon.posets import (
    FinitePoset,
    NotDistributive,
    birkhoff_points,
    lattice_from_sets,
    poset_iso,
    space_lattice,
)


def test_ideal_rejects_non_ideal(B):
    with pytest.raises(ValueError):
        Ideal(B, 0b01)  # {1} is not an ideal


def test_quotient_examples(F3, B):
    assert ideal_quotient(F3, ideal(F3, [3]), 2).members == (1, 2, 3)
    assert ideal_quotient(B, ideal(B, [1]), 1).mask == full_mask(B)
    for M in corpus_monoids():
        for a in enumerate_ideals(M):
            assert ideal_quotient(M, a, M.identity).mask == a.mask


@given(st.data())
def test_quotient_composition_law(data):
    M = data.draw(st.sampled_from(corpus_monoids()))
    a = data.draw(st.sampled_from(ideal_masks(M)))
    x = data.draw(st.integers(0, M.n - 1))
    y = data.draw(st.integers(0, M.n - 1))
    lhs = ideal_quotient_mask(M, ideal_quotient_mask(M, a, x), y)
    assert lhs == ideal_quotient_mask(M, a, M.mul[x][y])


def test_full_ideal_fixed(M):
    for x in range(M.n):
        assert ideal_quotient_mask(M, full_mask(M), x) == full_mask(M)


def test_enumeration_counts(T, B, E, F3):
    assert len(enumerate_ideals(T)) == 2
    assert len(enumerate_ideals(B)) == 3
    assert len(enumerate_ideals(E)) == 4
    assert [i.members for i in enumerate_ideals(F3)] == [
        (),
        (3,),
        (2, 3),
        (1, 2, 3),
        (0, 1, 2, 3),
    ]


def test_enumeration_oracle_agreement(M):
    assert ideal_masks_by_scan(M) == ideal_masks_by_union_closure(M)


def test_union_intersection_are_ideals(M):
    masks = ideal_masks(M)
    for a in masks:
        for b in masks:
            assert is_ideal_mask(M, a | b)
            assert is_ideal_mask(M, a & b)


def test_principal_examples(B, E, F3):
    assert principal_ideal(B, 1).members == (1,)
    assert principal_ideal(F3, 1).members == (1, 2, 3)
    for M in corpus_monoids():
        assert principal_ideal(M, M.identity).mask == full_mask(M)


def test_prime_examples(B, E, F3):
    assert is_prime(B, ideal(B, []))
    assert is_prime(B, ideal(B, [1]))
    assert not is_prime(F3, ideal(F3, [3, 2]))
    assert not is_prime(F3, ideal(F3, [3]))
    assert is_prime(E, ideal(E, [2]))


def test_empty_ideal_is_prime(M):
    assert is_prime(M, ideal(M, []))


def test_spec_shapes(T, B, C2, E, F3):
    assert len(spec(T)) == 1
    assert [p.members for p in spec(B).primes] == [(), (1,)]
    assert [p.members for p in spec(C2).primes] == [()]
    assert [p.members for p in spec(E).primes] == [(), (2,), (1, 2)]
    assert len(spec(F3)) == 2


def test_spec_diamond_on_product():
    from monoid_recon.corpus import monoid_BxB

    P = spec(monoid_BxB())
    assert len(P.primes) == 4
    covers = P.poset.covers()
    assert len(covers) == 4  # a diamond: bottom under two, two under top


def test_vanishing_and_basic_open(B, E, F3):
    assert vanishing(B, ideal(B, [])) == 0b11
    assert vanishing(B, ideal(B, [0, 1])) == 0
    assert vanishing(F3, ideal(F3, [2, 3])) == 0b10
    assert basic_open(B, 0) == 0b11
    assert basic_open(B, 1) == 0b01
    assert basic_open(E, 1) == 0b011


def test_open_counts(T, B, C2, E, F3):
    assert len(zariski_topology(T)) == 2
    assert len(zariski_topology(B)) == 3
    assert len(zariski_topology(C2)) == 2
    assert len(zariski_topology(E)) == 4
    assert len(zariski_topology(F3)) == 3


def test_order_topology_on_antichain():
    leq = tuple(tuple(i == j for j in range(3)) for i in range(3))
    P = FinitePoset(3, leq)
    assert len(P.down_set_masks()) == 8


def test_zariski_equals_order(M):
    rep = verify_z_equals_order(M)
    assert rep.ok, rep.witness


def test_basic_opens_are_order_opens(M):
    opens = set(order_topology(spec(M)).opens)
    for f in range(M.n):
        assert basic_open(M, f) in opens


def test_order_opens_are_unions_of_basic(M):
    basics = [basic_open(M, f) for f in range(M.n)]
    for U in order_topology(spec(M)).opens:
        cover = 0
        for b in basics:
            if (b & U) == b:
                cover |= b
        assert cover == U


def test_birkhoff_roundtrip(M):
    lat = space_lattice(order_topology(spec(M)))
    pts, irr = birkhoff_points(lat)
    assert poset_iso(pts, spec(M).poset) is not None


def test_birkhoff_small_lattices():
    two = lattice_from_sets([0b0, 0b1], 1)
    pts, _ = birkhoff_points(two)
    assert pts.n == 1
    power2 = lattice_from_sets([0b00, 0b01, 0b10, 0b11], 2)
    pts, _ = birkhoff_points(power2)
    assert pts.n == 2
    assert not any(pts.leq[i][j] for i in range(2) for j in range(2) if i != j)


def test_nondistributive_detected():
    # the diamond M3: bottom, three middles, top is not distributive, but a
    # subset family cannot represent it; check the witness path directly on
    # a hand-made lattice of sets that is not closed and raises early
    with pytest.raises(ValueError):
        lattice_from_sets([0b00, 0b01, 0b10], 2)


def test_canonical_order_is_linear_extension(M):
    masks = ideal_masks(M)
    for i, a in enumerate(masks):
        for j, b in enumerate(masks):
            if a != b and (a & b) == a:
                assert i < j
