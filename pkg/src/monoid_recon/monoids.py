"""Finite commutative monoids over dense element indices.

Elements are 0..n-1; the identity index is explicit (not required to be 0) so
externally produced tables can be ingested as-is.  All types are immutable
after validation and every operation is a pure function.

By commutativity the left/right distinction collapses: "right ideal" below
always means "ideal".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache
from itertools import product

from .bitsets import canon_key, elements_of, has, mask_of, members


class MonoidLawError(ValueError):
    """A raw multiplication table violates one of the monoid laws."""


class NotCommutative(MonoidLawError):
    def __init__(self, x: int, y: int):
        self.witness = (x, y)
        super().__init__(f"not commutative: {x}*{y} != {y}*{x}")


class IdentityLaw(MonoidLawError):
    def __init__(self, x: int):
        self.witness = (x,)
        super().__init__(f"identity law fails at element {x}")


class NotAssociative(MonoidLawError):
    def __init__(self, x: int, y: int, z: int):
        self.witness = (x, y, z)
        super().__init__(f"not associative at ({x},{y},{z})")


@dataclass(frozen=True)
class FiniteCommMonoid:
    """A finite commutative monoid given by its full multiplication table."""

    n: int
    identity: int
    mul: tuple[tuple[int, ...], ...]
    name: str = field(default="M", compare=False)
    elem_names: tuple[str, ...] = field(default=(), compare=False)

    def op(self, x: int, y: int) -> int:
        return self.mul[x][y]

    @property
    def elements(self) -> range:
        return range(self.n)

    def power(self, x: int, k: int) -> int:
        acc = self.identity
        for _ in range(k):
            acc = self.mul[acc][x]
        return acc

    def elem_name(self, i: int) -> str:
        return self.elem_names[i] if self.elem_names else str(i)

    def subset_str(self, mask: int) -> str:
        names = self.elem_names or tuple(str(i) for i in range(self.n))
        return "{" + ",".join(names[i] for i in elements_of(mask)) + "}"

    def __repr__(self) -> str:
        return f"FiniteCommMonoid({self.name}, n={self.n})"


def validate_monoid(
    table,
    identity: int,
    name: str = "M",
    elem_names: tuple[str, ...] | None = None,
) -> FiniteCommMonoid:
    """Validate a raw n x n index table and wrap it.

    Checks commutativity, the identity law and associativity exhaustively, in
    that order; the raised error carries a witness.
    """
    rows = tuple(tuple(row) for row in table)
    n = len(rows)
    if not 0 <= identity < n:
        raise ValueError(f"identity index {identity} out of range for n={n}")
    for x, row in enumerate(rows):
        if len(row) != n:
            raise ValueError(f"row {x} has length {len(row)}, expected {n}")
        for y, v in enumerate(row):
            if not 0 <= v < n:
                raise ValueError(f"entry mul[{x}][{y}]={v} out of range")
    for x in range(n):
        for y in range(x + 1, n):
            if rows[x][y] != rows[y][x]:
                raise NotCommutative(x, y)
    for x in range(n):
        if rows[identity][x] != x:
            raise IdentityLaw(x)
    for x in range(n):
        for y in range(n):
            xy = rows[x][y]
            for z in range(n):
                if rows[xy][z] != rows[x][rows[y][z]]:
                    raise NotAssociative(x, y, z)
    if elem_names is not None:
        if len(elem_names) != n:
            raise ValueError("element name count does not match n")
        names = tuple(elem_names)
    else:
        names = tuple(f"x{i}" for i in range(n))
    return FiniteCommMonoid(n, identity, rows, name=name, elem_names=names)


@dataclass(frozen=True)
class Submonoid:
    """A subset of a monoid containing the identity and closed under mul."""

    parent: FiniteCommMonoid
    mask: int

    def __post_init__(self):
        M = self.parent
        if not has(self.mask, M.identity):
            raise ValueError("submonoid must contain the identity")
        for x in elements_of(self.mask):
            for y in elements_of(self.mask):
                if not has(self.mask, M.mul[x][y]):
                    raise ValueError(f"subset not closed: {x}*{y} escapes")

    @property
    def members(self) -> tuple[int, ...]:
        return members(self.mask)

    def __contains__(self, x: int) -> bool:
        return has(self.mask, x)

    def __len__(self) -> int:
        return self.mask.bit_count()


@dataclass(frozen=True)
class MonoidHom:
    source: FiniteCommMonoid
    target: FiniteCommMonoid
    map: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.map[x]

    def compose(self, first: "MonoidHom") -> "MonoidHom":
        """self o first (apply `first`, then `self`)."""
        if first.target != self.source:
            raise ValueError("composition mismatch")
        return MonoidHom(first.source, self.target, tuple(self.map[v] for v in first.map))


def identity_hom(M: FiniteCommMonoid) -> MonoidHom:
    return MonoidHom(M, M, tuple(range(M.n)))


def check_hom(f: MonoidHom) -> bool:
    """Exhaustive check of the two homomorphism laws."""
    M, N, h = f.source, f.target, f.map
    if len(h) != M.n or any(not 0 <= v < N.n for v in h):
        return False
    if h[M.identity] != N.identity:
        return False
    return all(
        h[M.mul[x][y]] == N.mul[h[x]][h[y]] for x in range(M.n) for y in range(M.n)
    )


@cache
def units(M: FiniteCommMonoid) -> Submonoid:
    """The group of invertible elements of M."""
    e = M.identity
    mask = 0
    for x in range(M.n):
        if any(M.mul[x][y] == e for y in range(M.n)):
            mask |= 1 << x
    sub = Submonoid(M, mask)
    for x in sub.members:  # each member must be invertible inside the subset
        assert any(M.mul[x][y] == e and has(mask, y) for y in sub.members)
    return sub


def submonoid_generated(M: FiniteCommMonoid, seed=()) -> Submonoid:
    """Smallest submonoid containing the seed, by closure to a fixpoint."""
    mask = 1 << M.identity
    for s in seed:
        mask |= 1 << s
    while True:
        new = mask
        for x in elements_of(mask):
            for y in elements_of(mask):
                new |= 1 << M.mul[x][y]
        if new == mask:
            return Submonoid(M, mask)
        mask = new


@cache
def all_submonoids(M: FiniteCommMonoid) -> tuple[Submonoid, ...]:
    if M.n > 16:
        raise ValueError("submonoid scan limited to n <= 16")
    out = []
    e = 1 << M.identity
    for mask in range(1 << M.n):
        if not mask & e:
            continue
        ok = True
        for x in elements_of(mask):
            for y in elements_of(mask):
                if not has(mask, M.mul[x][y]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(mask)
    out.sort(key=lambda m: canon_key(m, M.n))
    return tuple(Submonoid(M, m) for m in out)


@cache
def reduced(M: FiniteCommMonoid) -> tuple[FiniteCommMonoid, MonoidHom]:
    """Quotient of M by x ~ y iff x = uy for a unit u, with the projection."""
    U = units(M).members
    cls_of = [-1] * M.n
    reps = []
    for x in range(M.n):
        if cls_of[x] >= 0:
            continue
        idx = len(reps)
        reps.append(x)
        for u in U:
            cls_of[M.mul[u][x]] = idx
    k = len(reps)
    table = [[0] * k for _ in range(k)]
    for i, x in enumerate(reps):
        for j, y in enumerate(reps):
            table[i][j] = cls_of[M.mul[x][y]]
    names = tuple("[" + M.elem_name(r) + "]" for r in reps)
    Q = validate_monoid(table, cls_of[M.identity], name=M.name + "_red", elem_names=names)
    proj = MonoidHom(M, Q, tuple(cls_of))
    assert check_hom(proj)
    assert set(proj.map) == set(range(k))
    return Q, proj


def product_monoid(
    M: FiniteCommMonoid, N: FiniteCommMonoid, name: str | None = None
) -> FiniteCommMonoid:
    n = M.n * N.n
    table = [[0] * n for _ in range(n)]
    for a, b in product(range(M.n), range(N.n)):
        for c, d in product(range(M.n), range(N.n)):
            table[a * N.n + b][c * N.n + d] = M.mul[a][c] * N.n + N.mul[b][d]
    names = tuple(
        f"({M.elem_name(a)},{N.elem_name(b)})"
        for a in range(M.n)
        for b in range(N.n)
    )
    return validate_monoid(
        table,
        M.identity * N.n + N.identity,
        name=name or f"{M.name}x{N.name}",
        elem_names=names,
    )


def all_monoid_homs(M: FiniteCommMonoid, N: FiniteCommMonoid) -> tuple[MonoidHom, ...]:
    """All homomorphisms M -> N by backtracking, in lexicographic image order."""
    img = [-1] * M.n
    img[M.identity] = N.identity
    order = [x for x in range(M.n) if x != M.identity]
    found: list[MonoidHom] = []

    def consistent(x: int) -> bool:
        for a in range(M.n):
            if img[a] < 0:
                continue
            for u, v in ((a, x), (x, a)):
                w = M.mul[u][v]
                if img[w] >= 0 and img[w] != N.mul[img[u]][img[v]]:
                    return False
        return True

    def dfs(d: int):
        if d == len(order):
            found.append(MonoidHom(M, N, tuple(img)))
            return
        x = order[d]
        for v in range(N.n):
            img[x] = v
            if consistent(x):
                dfs(d + 1)
            img[x] = -1

    dfs(0)
    return tuple(f for f in found if check_hom(f))


def monoid_iso(M: FiniteCommMonoid, N: FiniteCommMonoid) -> MonoidHom | None:
    """An isomorphism M -> N, or None.  Backtracking over bijections, n <= 8."""
    if M.n != N.n:
        return None

    def profile(K: FiniteCommMonoid, x: int) -> tuple:
        orbit = [x]
        seen = {x}
        cur = x
        while True:
            cur = K.mul[cur][x]
            if cur in seen:
                break
            seen.add(cur)
            orbit.append(cur)
        return (len(orbit), K.mul[x][x] == x, x in units(K))

    pm = {x: profile(M, x) for x in range(M.n)}
    pn = {x: profile(N, x) for x in range(N.n)}
    if sorted(pm.values()) != sorted(pn.values()):
        return None
    img = [-1] * M.n
    used = [False] * N.n
    img[M.identity] = N.identity
    used[N.identity] = True
    order = [x for x in range(M.n) if x != M.identity]

    def ok(x: int) -> bool:
        for a in range(M.n):
            if img[a] < 0:
                continue
            w = M.mul[a][x]
            if img[w] >= 0 and img[w] != N.mul[img[a]][img[x]]:
                return False
        return True

    def dfs(d: int):
        if d == len(order):
            return True
        x = order[d]
        for v in range(N.n):
            if used[v] or pn[v] != pm[x]:
                continue
            img[x] = v
            used[v] = True
            if ok(x) and dfs(d + 1):
                return True
            img[x] = -1
            used[v] = False
        return False

    if M.n > 0 and not dfs(0):
        return None
    h = MonoidHom(M, N, tuple(img))
    return h if check_hom(h) else None


def is_isomorphic(M: FiniteCommMonoid, N: FiniteCommMonoid) -> bool:
    return monoid_iso(M, N) is not None


def generating_set(M: FiniteCommMonoid) -> tuple[int, ...]:
    """A small generating set, greedy by element index."""
    gens: list[int] = []
    closed = submonoid_generated(M, ()).mask
    for x in range(M.n):
        if not has(closed, x):
            gens.append(x)
            closed = submonoid_generated(M, tuple(gens)).mask
    return tuple(gens)


def inverse_of(M: FiniteCommMonoid, x: int) -> int:
    for y in range(M.n):
        if M.mul[x][y] == M.identity:
            return y
    raise ValueError(f"{M.elem_name(x)} is not invertible in {M.name}")
