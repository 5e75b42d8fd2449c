"""Ideals, ideal quotients, prime spectra and their two topologies.

An ideal is a subset a of M with aM inside a; the empty subset counts, and it
is prime (its complement, all of M, is a submonoid).  So every spectrum has a
generic point.  Ideal subsets are bitmasks over element indices; the canonical
order on ideals (cardinality, then membership vector) fixes every downstream
indexing, in particular the carrier of the classifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache

from .bitsets import canon_key, elements_of, has, mask_of, members
from .monoids import FiniteCommMonoid, Submonoid
from .posets import FinitePoset, TopologySpace, make_space


@dataclass(frozen=True)
class Ideal:
    parent: FiniteCommMonoid
    mask: int

    def __post_init__(self):
        if not is_ideal_mask(self.parent, self.mask):
            raise ValueError(f"subset {self.mask:b} is not an ideal")

    @property
    def members(self) -> tuple[int, ...]:
        return members(self.mask)

    def __contains__(self, x: int) -> bool:
        return has(self.mask, x)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __repr__(self) -> str:
        return f"Ideal({self.parent.name}, {self.parent.subset_str(self.mask)})"


def is_ideal_mask(M: FiniteCommMonoid, mask: int) -> bool:
    if mask >> M.n:
        return False
    return all(
        has(mask, M.mul[a][m]) for a in elements_of(mask) for m in range(M.n)
    )


def ideal(M: FiniteCommMonoid, items) -> Ideal:
    return Ideal(M, mask_of(items))


def ideal_masks_by_scan(M: FiniteCommMonoid) -> tuple[int, ...]:
    """All ideal masks by exhaustive subset scan (oracle path, n <= 16)."""
    if M.n > 16:
        raise ValueError("exhaustive ideal scan limited to n <= 16")
    out = [mask for mask in range(1 << M.n) if is_ideal_mask(M, mask)]
    out.sort(key=lambda m: canon_key(m, M.n))
    return tuple(out)


def ideal_masks_by_union_closure(M: FiniteCommMonoid) -> tuple[int, ...]:
    """All ideal masks as unions of principal ideals (fast path).

    Every ideal is the union of the principal ideals of its members, so
    closing the principal ideals under pairwise union reaches all of them.
    """
    principal = sorted({principal_ideal_mask(M, m) for m in range(M.n)})
    fam = {0}
    frontier = [0]
    while frontier:
        base = frontier.pop()
        for p in principal:
            u = base | p
            if u not in fam:
                fam.add(u)
                frontier.append(u)
    return tuple(sorted(fam, key=lambda m: canon_key(m, M.n)))


@cache
def ideal_masks(M: FiniteCommMonoid) -> tuple[int, ...]:
    if M.n <= 16:
        return ideal_masks_by_scan(M)
    return ideal_masks_by_union_closure(M)


@cache
def ideal_index(M: FiniteCommMonoid) -> dict[int, int]:
    return {m: i for i, m in enumerate(ideal_masks(M))}


def enumerate_ideals(M: FiniteCommMonoid) -> tuple[Ideal, ...]:
    """All ideals of M including the empty one and M itself, canonical order."""
    return tuple(Ideal(M, m) for m in ideal_masks(M))


def full_mask(M: FiniteCommMonoid) -> int:
    return (1 << M.n) - 1


def ideal_quotient_mask(M: FiniteCommMonoid, a_mask: int, m: int) -> int:
    out = 0
    for x in range(M.n):
        if has(a_mask, M.mul[m][x]):
            out |= 1 << x
    return out


def ideal_quotient(M: FiniteCommMonoid, a: Ideal, m: int) -> Ideal:
    """(a : m) = {x | mx in a}, the action making the ideal set an M-set."""
    return Ideal(M, ideal_quotient_mask(M, a.mask, m))


def principal_ideal_mask(M: FiniteCommMonoid, m: int) -> int:
    return mask_of(M.mul[m][x] for x in range(M.n))


def principal_ideal(M: FiniteCommMonoid, m: int) -> Ideal:
    return Ideal(M, principal_ideal_mask(M, m))


def ideal_product_mask(M: FiniteCommMonoid, a_mask: int, b_mask: int) -> int:
    return mask_of(
        M.mul[a][b] for a in elements_of(a_mask) for b in elements_of(b_mask)
    )


@cache
def quotient_table(M: FiniteCommMonoid) -> tuple[tuple[int, ...], ...]:
    """Q[i][m] = canonical index of (ideal_i : m)."""
    masks = ideal_masks(M)
    index = ideal_index(M)
    return tuple(
        tuple(index[ideal_quotient_mask(M, a, m)] for m in range(M.n))
        for a in masks
    )


def _is_prime_mask(M: FiniteCommMonoid, mask: int) -> bool:
    if mask == full_mask(M):
        return False
    by_def = all(
        not has(mask, M.mul[x][y]) or has(mask, x) or has(mask, y)
        for x in range(M.n)
        for y in range(M.n)
    )
    comp = full_mask(M) & ~mask
    by_complement = has(comp, M.identity) and all(
        has(comp, M.mul[x][y]) for x in elements_of(comp) for y in elements_of(comp)
    )
    assert by_def == by_complement, "prime criteria disagree"
    return by_def


def is_prime(M: FiniteCommMonoid, a: Ideal) -> bool:
    """Proper, and xy in a forces x or y in a; equivalently the complement is
    a submonoid.  Both criteria are evaluated and must agree."""
    return _is_prime_mask(M, a.mask)


@dataclass(frozen=True)
class SpecPoset:
    """All prime ideals of M ordered by inclusion."""

    monoid: FiniteCommMonoid
    primes: tuple[Ideal, ...]
    leq: tuple[tuple[bool, ...], ...]

    def __len__(self) -> int:
        return len(self.primes)

    @property
    def poset(self) -> FinitePoset:
        return FinitePoset(len(self.primes), self.leq)

    def prime_set_str(self, mask: int) -> str:
        M = self.monoid
        return "{" + ", ".join(M.subset_str(self.primes[i].mask) for i in elements_of(mask)) + "}"


@cache
def spec(M: FiniteCommMonoid) -> SpecPoset:
    primes = tuple(Ideal(M, m) for m in ideal_masks(M) if _is_prime_mask(M, m))
    leq = tuple(
        tuple((p.mask & q.mask) == p.mask for q in primes) for p in primes
    )
    P = SpecPoset(M, primes, leq)
    P.poset  # validates the order axioms
    return P


def vanishing(M: FiniteCommMonoid, a: Ideal) -> int:
    """V(a): mask over spec(M).primes of the primes containing a."""
    P = spec(M)
    return mask_of(
        i for i, p in enumerate(P.primes) if (a.mask & p.mask) == a.mask
    )


def basic_open(M: FiniteCommMonoid, f: int) -> int:
    """D(f): mask over spec(M).primes of the primes not containing f."""
    P = spec(M)
    return mask_of(i for i, p in enumerate(P.primes) if not has(p.mask, f))


@cache
def zariski_topology(M: FiniteCommMonoid) -> TopologySpace:
    """Opens are complements of the V(a); closure laws are re-checked."""
    P = spec(M)
    full = (1 << len(P.primes)) - 1
    opens = {full & ~vanishing(M, a) for a in enumerate_ideals(M)}
    return make_space(len(P.primes), opens)


@cache
def order_topology(P: SpecPoset) -> TopologySpace:
    """Opens are the down-closed subsets of (primes, inclusion)."""
    return make_space(len(P.primes), P.poset.down_set_masks())


@dataclass(frozen=True)
class ZOrderReport:
    monoid: FiniteCommMonoid
    zariski: TopologySpace
    order: TopologySpace
    ok: bool
    witness: int | None  # an open of one family missing from the other


def verify_z_equals_order(M: FiniteCommMonoid) -> ZOrderReport:
    """Set-equality of the Zariski and order open families on spec(M)."""
    z = zariski_topology(M)
    o = order_topology(spec(M))
    zs, os_ = set(z.opens), set(o.opens)
    if zs == os_:
        return ZOrderReport(M, z, o, True, None)
    diff = sorted(zs.symmetric_difference(os_))
    return ZOrderReport(M, z, o, False, diff[0])
