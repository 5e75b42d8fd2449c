"""Bounded witness search on the multiplicative naturals.

J is the set of naturals whose prime factorization has every exponent either
zero or at least the prime itself.  For each s the search exhibits a prime p
not dividing s; then v_p(s*p) = 1 < p, so p is outside (J : s) and (J : s)
is a proper subset of the naturals.  This is a bounded falsifier on machine
integers, not a proof, and it deliberately bypasses the finite-monoid types.
"""

from __future__ import annotations

from dataclasses import dataclass


class NoWitnessFound(RuntimeError):
    """The prime bound is too small for some s; a bound failure, not theory."""

    def __init__(self, s: int):
        self.s = s
        super().__init__(f"no witness prime below the bound for s={s}")


def sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, int(limit**0.5) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return [p for p in range(limit + 1) if flags[p]]


def valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class CounterexampleReport:
    max_s: int
    max_p: int
    checked: int
    prime_histogram: tuple[tuple[int, int], ...]  # (witness prime, count)
    samples: tuple[tuple[int, int, int], ...]  # (s, p, v_p(s*p))
    hardest: tuple[int, int]  # the s needing the largest witness prime

    @property
    def ok(self) -> bool:
        return self.checked == self.max_s


def nat_counterexample(max_s: int, max_p: int) -> CounterexampleReport:
    """For every s <= max_s find a prime witness that (J : s) is proper."""
    if max_s < 2 or max_p < 2:
        raise ValueError("bounds must be at least 2")
    primes = sieve(max_p)
    histogram: dict[int, int] = {}
    samples: list[tuple[int, int, int]] = []
    hardest = (1, 2)
    sample_keys = {1, 2, 6, 30, max_s}
    for s in range(1, max_s + 1):
        for p in primes:
            if s % p:
                witness = p
                break
        else:
            raise NoWitnessFound(s)
        v = valuation(s * witness, witness)
        assert v == 1 < witness  # s*witness violates membership in J
        histogram[witness] = histogram.get(witness, 0) + 1
        if witness > hardest[1]:
            hardest = (s, witness)
        if s in sample_keys:
            samples.append((s, witness, v))
    return CounterexampleReport(
        max_s,
        max_p,
        max_s,
        tuple(sorted(histogram.items())),
        tuple(samples),
        hardest,
    )
