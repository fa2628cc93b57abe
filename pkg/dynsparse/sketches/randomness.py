"""
Seeded hash families for edge sampling

Every sampling decision in the bank comes from here. A family is identified by
its tag (H, G or GSTAR plus a copy index). For a fixed first vertex u the map
v -> value is a polynomial of degree t-1 over the prime field of MODULUS, so
values are t-wise independent along v; the coefficients of different u are
derived through a keyed mixing function and are therefore independent.

Unit-interval values are kept as field elements x standing for x / MODULUS,
which keeps every comparison exact and reproducible.
"""

from __future__ import annotations

import struct
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction

import mmh3
from cachetools import LRUCache

# Largest prime below 2^64
MODULUS = (1 << 64) - 59

_MASK64 = (1 << 64) - 1


class FamilyKind(IntEnum):
    H = 1  # connectivity samples
    G = 2  # recovery / degree samples
    GSTAR = 3  # sparsifier samples


@dataclass(frozen=True)
class FamilyTag:
    kind: FamilyKind
    copy: int = 0

    def __str__(self) -> str:
        return f"{self.kind.name}[{self.copy}]"


def mix64(*parts: int) -> int:
    """Keyed 64-bit mixing of a tuple of non-negative integers."""
    key = b"".join(struct.pack("<Q", part & _MASK64) for part in parts)
    return mmh3.hash128(key, seed=0, x64arch=True, signed=False) & _MASK64


def mix_field(*parts: int) -> int:
    """Like mix64 but uniform over the prime field."""
    key = b"".join(struct.pack("<Q", part & _MASK64) for part in parts)
    return mmh3.hash128(key, seed=0, x64arch=True, signed=False) % MODULUS


class HashSource:
    """
    One hash family h(u, v) with per-vertex t-wise independence.

    The coefficient vector of each u is derived on demand and kept in a
    bounded LRU cache, so no table beyond the seed is required.
    """

    def __init__(
        self,
        master_seed: int,
        independence_degree: int,
        family: FamilyTag,
        cache_size: int = 4096,
    ) -> None:
        if independence_degree < 1:
            raise ValueError(f"independence degree must be >= 1, got {independence_degree}")
        self.master_seed = master_seed & _MASK64
        self.independence_degree = independence_degree
        self.family = family
        self.modulus = MODULUS
        self._coefficients: LRUCache[int, tuple[int, ...]] = LRUCache(maxsize=cache_size)
        self._memo: LRUCache[tuple[int, int], int] | None = None

    def coefficients(self, u: int) -> tuple[int, ...]:
        cached = self._coefficients.get(u)
        if cached is None:
            cached = tuple(
                mix_field(self.master_seed, int(self.family.kind), self.family.copy, u, i)
                for i in range(self.independence_degree)
            )
            self._coefficients[u] = cached
        return cached

    def field_hash(self, u: int, v: int) -> int:
        """Field element standing for h(u, v); Horner evaluation at v."""
        if self._memo is not None:
            hit = self._memo.get((u, v))
            if hit is not None:
                return hit
        acc = 0
        for coefficient in self.coefficients(u):
            acc = (acc * v + coefficient) % MODULUS
        if self._memo is not None:
            self._memo[(u, v)] = acc
        return acc

    @contextmanager
    def memoized(self, maxsize: int = 1 << 16) -> Iterator[HashSource]:
        """Memoize h(u, v) for the duration of one pass; dropped afterwards."""
        previous = self._memo
        self._memo = LRUCache(maxsize=maxsize)
        try:
            yield self
        finally:
            self._memo = previous

    def __repr__(self) -> str:
        return (
            f"HashSource(seed={self.master_seed}, t={self.independence_degree}, "
            f"family={self.family})"
        )


def unit_hash(src: HashSource, u: int, v: int) -> int:
    """h(u, v) as the numerator of a fixed-point value in [0, 1)."""
    return src.field_hash(u, v)


def to_unit(value: int) -> float:
    return value / MODULUS


def below_rate(value: int, exponent: int) -> bool:
    """True iff value / MODULUS < 2^-exponent."""
    return (value << exponent) < MODULUS


def below_fraction(value: int, rate: Fraction) -> bool:
    """True iff value / MODULUS < rate, compared exactly."""
    if rate >= 1:
        return True
    return value * rate.denominator < rate.numerator * MODULUS


def edge_key(src: HashSource, u: int, v: int) -> int:
    """min(h(u, v), h(v, u)); symmetric in the endpoints."""
    return min(src.field_hash(u, v), src.field_hash(v, u))


def threshold_sample(src: HashSource, u: int, v: int, a: int) -> bool:
    """Is the edge kept by the sample at rate exponent a."""
    if a < 0:
        raise ValueError(f"rate exponent must be >= 0, got {a}")
    return below_rate(edge_key(src, u, v), a)


def sample_depth(src: HashSource, u: int, v: int, cap: int) -> int:
    """
    Largest a <= cap with threshold_sample(src, u, v, a).

    Samples are nested in a, so the edge belongs to exactly the exponents
    0..depth. Exponent 0 always accepts.
    """
    key = edge_key(src, u, v)
    depth = 0
    while depth < cap and below_rate(key, depth + 1):
        depth += 1
    return depth
