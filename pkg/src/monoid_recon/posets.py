"""Finite posets, lattices of subset families, and point recovery.

A finite distributive lattice is the lattice of down-sets of a unique poset,
recovered as the poset of its join-irreducible elements.  Down-closed means:
x in S whenever x <= y for some y in S.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bitsets import canon_key, elements_of, has


class NotDistributive(ValueError):
    def __init__(self, a: int, b: int, c: int):
        self.witness = (a, b, c)
        super().__init__(f"distributivity fails at ({a},{b},{c})")


@dataclass(frozen=True)
class FinitePoset:
    n: int
    leq: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        n, leq = self.n, self.leq
        for i in range(n):
            if not leq[i][i]:
                raise ValueError(f"not reflexive at {i}")
            for j in range(n):
                if i != j and leq[i][j] and leq[j][i]:
                    raise ValueError(f"not antisymmetric at ({i},{j})")
                for k in range(n):
                    if leq[i][j] and leq[j][k] and not leq[i][k]:
                        raise ValueError(f"not transitive at ({i},{j},{k})")

    def down_set_masks(self) -> tuple[int, ...]:
        """All down-closed subsets, in canonical order."""
        out = []
        for mask in range(1 << self.n):
            if self._down_closed(mask):
                out.append(mask)
        out.sort(key=lambda m: canon_key(m, self.n))
        return tuple(out)

    def _down_closed(self, mask: int) -> bool:
        for j in elements_of(mask):
            for i in range(self.n):
                if self.leq[i][j] and not has(mask, i):
                    return False
        return True

    def covers(self) -> tuple[tuple[int, int], ...]:
        """Pairs (i, j) with i < j and nothing strictly between."""
        out = []
        for i in range(self.n):
            for j in range(self.n):
                if i == j or not self.leq[i][j]:
                    continue
                if any(
                    k not in (i, j) and self.leq[i][k] and self.leq[k][j]
                    for k in range(self.n)
                ):
                    continue
                out.append((i, j))
        return tuple(out)


def poset_iso(P: FinitePoset, Q: FinitePoset) -> tuple[int, ...] | None:
    """An order isomorphism P -> Q as an index tuple, or None."""
    if P.n != Q.n:
        return None

    def degrees(R: FinitePoset, x: int) -> tuple[int, int]:
        below = sum(R.leq[y][x] for y in range(R.n))
        above = sum(R.leq[x][y] for y in range(R.n))
        return (below, above)

    dp = [degrees(P, x) for x in range(P.n)]
    dq = [degrees(Q, x) for x in range(Q.n)]
    if sorted(dp) != sorted(dq):
        return None
    img = [-1] * P.n
    used = [False] * Q.n

    def ok(x: int) -> bool:
        for a in range(P.n):
            if img[a] < 0 or a == x:
                continue
            if P.leq[a][x] != Q.leq[img[a]][img[x]]:
                return False
            if P.leq[x][a] != Q.leq[img[x]][img[a]]:
                return False
        return True

    def dfs(d: int) -> bool:
        if d == P.n:
            return True
        for v in range(Q.n):
            if used[v] or dq[v] != dp[d]:
                continue
            img[d] = v
            used[v] = True
            if ok(d) and dfs(d + 1):
                return True
            img[d] = -1
            used[v] = False
        return False

    if P.n and not dfs(0):
        return None
    return tuple(img)


@dataclass(frozen=True)
class TopologySpace:
    """A finite topological space: points 0..npoints-1 and open sets as masks.

    The empty and full sets must be open and opens must be closed under
    pairwise union and intersection (which, finitely, is all of them).
    """

    npoints: int
    opens: tuple[int, ...]

    def __post_init__(self):
        full = (1 << self.npoints) - 1
        opens = set(self.opens)
        if len(opens) != len(self.opens):
            raise ValueError("duplicate open sets")
        if 0 not in opens or full not in opens:
            raise ValueError("empty or full set missing from the opens")
        for a in opens:
            for b in opens:
                if (a | b) not in opens or (a & b) not in opens:
                    raise ValueError(f"opens not closed under union/intersection: {a},{b}")

    def __len__(self) -> int:
        return len(self.opens)


def make_space(npoints: int, opens) -> TopologySpace:
    masks = sorted(set(opens), key=lambda m: canon_key(m, npoints))
    return TopologySpace(npoints, tuple(masks))


@dataclass(frozen=True)
class FiniteLattice:
    """A lattice presented on a family of subset masks, ordered by inclusion."""

    n: int
    masks: tuple[int, ...]
    leq: tuple[tuple[bool, ...], ...]
    join: tuple[tuple[int, ...], ...]
    meet: tuple[tuple[int, ...], ...]


def lattice_from_sets(masks, width: int) -> FiniteLattice:
    """Build the lattice of a union/intersection closed family of masks."""
    fam = sorted(set(masks), key=lambda m: canon_key(m, width))
    index = {m: i for i, m in enumerate(fam)}
    n = len(fam)
    leq = tuple(tuple((a & b) == a for b in fam) for a in fam)
    join = [[0] * n for _ in range(n)]
    meet = [[0] * n for _ in range(n)]
    for i, a in enumerate(fam):
        for j, b in enumerate(fam):
            if (a | b) not in index or (a & b) not in index:
                raise ValueError("family not closed under union/intersection")
            join[i][j] = index[a | b]
            meet[i][j] = index[a & b]
    return FiniteLattice(
        n, tuple(fam), leq, tuple(map(tuple, join)), tuple(map(tuple, meet))
    )


def space_lattice(space: TopologySpace) -> FiniteLattice:
    return lattice_from_sets(space.opens, space.npoints)


def check_distributive(L: FiniteLattice) -> None:
    for a in range(L.n):
        for b in range(L.n):
            for c in range(L.n):
                lhs = L.meet[a][L.join[b][c]]
                rhs = L.join[L.meet[a][b]][L.meet[a][c]]
                if lhs != rhs:
                    raise NotDistributive(a, b, c)


def birkhoff_points(L: FiniteLattice) -> tuple[FinitePoset, tuple[int, ...]]:
    """Poset of join-irreducible elements of a finite distributive lattice.

    Returns the poset together with the lattice indices of the irreducibles.
    For the lattice of down-sets of a poset P this recovers P up to order
    isomorphism.  Raises NotDistributive when L is not distributive.
    """
    check_distributive(L)
    bottom = 0
    for i in range(L.n):
        bottom = L.meet[bottom][i]
    irr = []
    for x in range(L.n):
        if x == bottom:
            continue
        reducible = any(
            L.join[y][z] == x
            for y in range(L.n)
            for z in range(L.n)
            if y != x and z != x
        )
        if not reducible:
            irr.append(x)
    leq = tuple(tuple(L.leq[a][b] for b in irr) for a in irr)
    return FinitePoset(len(irr), leq), tuple(irr)
