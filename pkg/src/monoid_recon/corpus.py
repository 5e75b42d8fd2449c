"""The built-in corpus: small named monoids and schemes used by every suite.

T is trivial; B is {1,0} with absorbing 0; C2 the two-element group; E adds
an idempotent e between 1 and 0; F3 is 1,t,t^2 with t^3 = 0.  Products give
non-chain spectra (BxB has a diamond).  Scheme corpus: affine pieces, the
two-chart gluing X2 of two copies of Spec(E) along D(e), and a disjoint
union.
"""

from __future__ import annotations

from functools import cache

from .monoids import FiniteCommMonoid, product_monoid, validate_monoid


@cache
def monoid_T() -> FiniteCommMonoid:
    return validate_monoid([[0]], 0, name="T", elem_names=("1",))


@cache
def monoid_B() -> FiniteCommMonoid:
    return validate_monoid([[0, 1], [1, 1]], 0, name="B", elem_names=("1", "0"))


@cache
def monoid_C2() -> FiniteCommMonoid:
    return validate_monoid([[0, 1], [1, 0]], 0, name="C2", elem_names=("1", "g"))


@cache
def monoid_E() -> FiniteCommMonoid:
    table = [
        [0, 1, 2],
        [1, 1, 2],
        [2, 2, 2],
    ]
    return validate_monoid(table, 0, name="E", elem_names=("1", "e", "0"))


@cache
def monoid_F3() -> FiniteCommMonoid:
    table = [
        [0, 1, 2, 3],
        [1, 2, 3, 3],
        [2, 3, 3, 3],
        [3, 3, 3, 3],
    ]
    return validate_monoid(table, 0, name="F3", elem_names=("1", "t", "t2", "0"))


@cache
def monoid_C2xB() -> FiniteCommMonoid:
    return product_monoid(monoid_C2(), monoid_B(), name="C2xB")


@cache
def monoid_BxB() -> FiniteCommMonoid:
    return product_monoid(monoid_B(), monoid_B(), name="BxB")


@cache
def corpus_monoids() -> tuple[FiniteCommMonoid, ...]:
    return (
        monoid_T(),
        monoid_B(),
        monoid_C2(),
        monoid_E(),
        monoid_F3(),
        monoid_C2xB(),
        monoid_BxB(),
    )


def corpus_monoid(name: str) -> FiniteCommMonoid:
    for M in corpus_monoids():
        if M.name == name:
            return M
    raise KeyError(f"no corpus monoid named {name!r}")


@cache
def corpus_schemes():
    """Corpus schemes: affine pieces, the X2 gluing, and a disjoint union."""
    from .schemes import affine_scheme, disjoint_union_scheme, x2_scheme

    return (
        affine_scheme(monoid_T(), name="SpecT"),
        affine_scheme(monoid_B(), name="SpecB"),
        affine_scheme(monoid_E(), name="SpecE"),
        x2_scheme(),
        disjoint_union_scheme(monoid_B(), monoid_E(), name="SpecB+SpecE"),
    )


def corpus_scheme(name: str):
    for X in corpus_schemes():
        if X.name == name:
            return X
    raise KeyError(f"no corpus scheme named {name!r}")
