"""Monoid validation, units, generated submonoids, unit quotients, homs."""

import pytest
from hypothesis import given, strategies as st

from monoid_recon.bitsets import mask_of
from monoid_recon.corpus import corpus_monoids, monoid_B, monoid_C2, monoid_C2xB
from monoid_recon.monoids import (
    IdentityLaw,
    MonoidHom,
    NotAssociative,
    NotCommutative,
    all_monoid_homs,
    all_submonoids,
    check_hom,
    generating_set,
    is_isomorphic,
    monoid_iso,
    product_monoid,
    reduced,
    submonoid_generated,
    units,
    validate_monoid,
)


def all_small_monoid_tables(n):
    """Every valid commutative monoid table with identity 0, brute force."""
    from itertools import product

    free = [(x, y) for x in range(1, n) for y in range(x, n)]
    out = []
    for combo in product(range(n), repeat=len(free)):
        table = [[0] * n for _ in range(n)]
        for x in range(n):
            table[0][x] = table[x][0] = x
        for (x, y), v in zip(free, combo):
            table[x][y] = table[y][x] = v
        ok = all(
            table[table[x][y]][z] == table[x][table[y][z]]
            for x in range(n)
            for y in range(n)
            for z in range(n)
        )
        if ok:
            out.append(tuple(map(tuple, table)))
    return out


SMALL_TABLES = all_small_monoid_tables(2) + all_small_monoid_tables(3)


def test_validate_trivial():
    M = validate_monoid([[0]], 0)
    assert M.n == 1 and M.identity == 0


def test_validate_b_passes(B):
    assert B.mul[1][1] == 1  # absorbing element


def test_not_commutative_witness():
    # a*a = 1 while a*1 = a but 1*a = 1: fails commutativity first
    with pytest.raises(NotCommutative) as exc:
        validate_monoid([[0, 0], [1, 0]], 0)
    assert exc.value.witness == (0, 1)


def test_identity_law_witness():
    with pytest.raises(IdentityLaw):
        validate_monoid([[0, 0], [0, 0]], 0)


def test_not_associative_witness():
    table = [
        [0, 1, 2],
        [1, 0, 0],
        [2, 0, 1],
    ]
    with pytest.raises(NotAssociative) as exc:
        validate_monoid(table, 0)
    assert len(exc.value.witness) == 3


def test_out_of_range_rejected():
    with pytest.raises(ValueError):
        validate_monoid([[0, 2], [2, 0]], 0)


def test_units_examples(T, C2, F3):
    assert units(T).members == (0,)
    assert units(C2).members == (0, 1)
    assert units(F3).members == (0,)


def test_units_is_group(M):
    U = units(M)
    e = M.identity
    for x in U.members:
        assert any(M.mul[x][y] == e for y in U.members)


def test_submonoid_generated_examples(F3, E):
    assert submonoid_generated(F3, (1,)).members == (0, 1, 2, 3)
    assert submonoid_generated(E, (1,)).members == (0, 1)
    assert submonoid_generated(E, ()).members == (0,)


@given(st.data())
def test_submonoid_generated_idempotent_monotone(data):
    M = data.draw(st.sampled_from(corpus_monoids()))
    seed = data.draw(st.frozensets(st.integers(0, M.n - 1)))
    extra = data.draw(st.frozensets(st.integers(0, M.n - 1)))
    S = submonoid_generated(M, tuple(sorted(seed)))
    again = submonoid_generated(M, S.members)
    assert again.mask == S.mask
    bigger = submonoid_generated(M, tuple(sorted(seed | extra)))
    assert S.mask & bigger.mask == S.mask


def test_reduced_examples(C2, F3):
    Q, proj = reduced(C2)
    assert Q.n == 1
    Q3, _ = reduced(F3)
    assert is_isomorphic(Q3, F3)
    QB, _ = reduced(monoid_C2xB())
    assert is_isomorphic(QB, monoid_B())


def test_reduced_is_idempotent(M):
    Q, proj = reduced(M)
    assert check_hom(proj)
    QQ, _ = reduced(Q)
    assert is_isomorphic(Q, QQ)


def test_check_hom_examples(B, E):
    assert check_hom(MonoidHom(B, B, (0, 1)))
    assert check_hom(MonoidHom(E, B, (0, 0, 1)))
    # constant-to-identity is a homomorphism: 0*0 = 0 maps to 1*1 = 1
    assert check_hom(MonoidHom(B, B, (0, 0)))
    # but identity must go to identity
    assert not check_hom(MonoidHom(B, B, (1, 1)))


def test_all_homs_against_raw_scan(B, E):
    from itertools import product

    for M, N in ((B, B), (E, B), (B, E)):
        raw = [
            m
            for m in product(range(N.n), repeat=M.n)
            if check_hom(MonoidHom(M, N, m))
        ]
        assert sorted(h.map for h in all_monoid_homs(M, N)) == sorted(raw)


def test_monoid_iso_detects_relabeling(E):
    # relabel E by swapping indices 0 and 2
    perm = (2, 1, 0)
    inv = (2, 1, 0)
    table = [
        [perm[E.mul[inv[x]][inv[y]]] for y in range(3)] for x in range(3)
    ]
    other = validate_monoid(table, 2, name="E_relabeled")
    assert is_isomorphic(E, other)
    C3 = validate_monoid([[0, 1, 2], [1, 2, 0], [2, 0, 1]], 0)
    assert monoid_iso(E, C3) is None


def test_small_monoid_census():
    # 2 commutative monoids on 2 elements with identity 0, 9 on 3 elements
    assert len(all_small_monoid_tables(2)) == 2
    assert all(
        validate_monoid(tbl, 0) for tbl in SMALL_TABLES
    )


@given(st.sampled_from(SMALL_TABLES))
def test_units_group_on_census(tbl):
    M = validate_monoid(tbl, 0)
    U = units(M)
    for x in U.members:
        for y in U.members:
            assert M.mul[x][y] in U


def test_all_submonoids_counts(B, E, F3):
    assert len(all_submonoids(B)) == 2
    assert len(all_submonoids(E)) == 4
    assert len(all_submonoids(F3)) == 4


def test_generating_set_regenerates(M):
    gens = generating_set(M)
    assert submonoid_generated(M, gens).mask == (1 << M.n) - 1


def test_product_monoid_projections(B, C2):
    P = product_monoid(C2, B)
    proj = MonoidHom(P, C2, tuple(i // B.n for i in range(P.n)))
    assert check_hom(proj)
    assert is_isomorphic(P, monoid_C2xB())
