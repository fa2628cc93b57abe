"""
L0 sampling and the spanning-forest sketch

An L0Sampler keeps, for each of a few independent repetitions, a ladder of
geometric subsamples of the coordinate space. Level l retains a coordinate
with probability 2^-l and summarizes the survivors with one 1-sparse tester
(value_sum, index_sum, fingerprint_sum). Some level of some ladder holds
exactly one survivor with good probability, and the fingerprint tells us
which one.

ForestSketch holds one sampler per vertex per Boruvka round, all sketching
the vertex's signed incidence row; spanning_forest() runs Boruvka on the sums.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import numpy.typing as npt

from ..errors import ConfigurationError, RoundExhaustion
from .randomness import MODULUS, mix64, mix_field
from .sparse_recovery import Coordinate, decode_index, encode_pair, pair_count
from .union_find import UnionFind

logger = logging.getLogger(__name__)

_DEPTH_TAG = 0xD0
_FINGERPRINT_TAG = 0xF2
_ROUND_TAG = 0xB7

# (tester keys, fingerprint) of one coordinate
SamplerPlan = tuple[list[int], int]


class Sample(NamedTuple):
    index: int
    value: int


@dataclass(frozen=True)
class NoSample:
    """No coordinate could be identified; `empty` is True for the zero vector."""

    empty: bool


class L0Sampler:
    """Linear sketch returning some non-zero coordinate of a dynamic vector."""

    def __init__(self, dimension: int, seed: int, repetitions: int = 4) -> None:
        if dimension < 1 or repetitions < 1:
            raise ConfigurationError(
                f"invalid L0 sampler shape N={dimension}, repetitions={repetitions}"
            )
        self.dimension = dimension
        self.seed = seed
        self.repetitions = repetitions
        self.levels = max(1, math.ceil(math.log2(dimension))) + 1
        # rep * levels + level -> [value_sum, index_sum, fingerprint_sum]
        self._testers: dict[int, list[int]] = {}

    def _depth(self, rep: int, index: int) -> int:
        """Deepest level retaining index in ladder rep (trailing zeros of a hash)."""
        word = mix64(self.seed, _DEPTH_TAG, rep, index)
        if word == 0:
            return self.levels - 1
        return min(self.levels - 1, (word & -word).bit_length() - 1)

    def _fingerprint(self, index: int) -> int:
        return mix_field(self.seed, _FINGERPRINT_TAG, index) or 1

    def plan(self, index: int) -> SamplerPlan:
        keys = [
            rep * self.levels + level
            for rep in range(self.repetitions)
            for level in range(self._depth(rep, index) + 1)
        ]
        return keys, self._fingerprint(index)

    def update(self, index: int, delta: int, plan: SamplerPlan | None = None) -> int:
        """Apply delta at index to every level retaining it; returns testers touched."""
        if not 0 <= index < self.dimension:
            raise ValueError(f"coordinate {index} outside [0, {self.dimension})")
        if delta == 0:
            return 0
        keys, fingerprint = plan if plan is not None else self.plan(index)
        for key in keys:
            self._apply(key, delta, delta * index, delta * fingerprint)
        return len(keys)

    def _apply(self, key: int, value: int, index_sum: int, fp_sum: int) -> None:
        tester = self._testers.get(key)
        if tester is None:
            tester = self._testers[key] = [0, 0, 0]
        tester[0] += value
        tester[1] += index_sum
        tester[2] = (tester[2] + fp_sum) % MODULUS
        if tester[0] == 0 and tester[1] == 0 and tester[2] == 0:
            del self._testers[key]

    def merge(self, other: L0Sampler, sign: int = 1) -> L0Sampler:
        """In-place self += sign * other."""
        if (self.dimension, self.seed, self.repetitions) != (
            other.dimension,
            other.seed,
            other.repetitions,
        ):
            raise ConfigurationError("cannot combine L0 samplers with different parameters")
        for key, (value, index_sum, fp_sum) in other._testers.items():
            self._apply(key, sign * value, sign * index_sum, sign * fp_sum)
        return self

    def __iadd__(self, other: L0Sampler) -> L0Sampler:
        return self.merge(other)

    def empty_like(self) -> L0Sampler:
        return L0Sampler(self.dimension, self.seed, self.repetitions)

    def copy(self) -> L0Sampler:
        clone = self.empty_like()
        clone._testers = {key: list(tester) for key, tester in self._testers.items()}
        return clone

    def is_zero(self) -> bool:
        return not self._testers

    def sample(self) -> Sample | NoSample:
        """
        Some non-zero coordinate with its value.

        Ladders are scanned in order, each from its sparsest level down; the
        first fingerprint-verified 1-sparse tester wins.
        """
        if not self._testers:
            return NoSample(empty=True)
        for rep in range(self.repetitions):
            for level in range(self.levels - 1, -1, -1):
                tester = self._testers.get(rep * self.levels + level)
                if tester is None:
                    continue
                found = self._verify(rep, level, tester)
                if found is not None:
                    return found
        return NoSample(empty=False)

    def _verify(self, rep: int, level: int, tester: list[int]) -> Sample | None:
        value, index_sum, fp_sum = tester
        if value == 0 or index_sum % value != 0:
            return None
        index = index_sum // value
        if not 0 <= index < self.dimension:
            return None
        if fp_sum != (value * self._fingerprint(index)) % MODULUS:
            return None
        if self._depth(rep, index) < level:
            return None
        return Sample(index, value)

    def memory_words(self) -> int:
        return 3 * len(self._testers)

    def state(self) -> list[tuple[int, int, int, int]]:
        out = []
        for key in sorted(self._testers):
            value, index_sum, fp_sum = self._testers[key]
            out.append((key, value, index_sum, fp_sum))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, L0Sampler):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and self.seed == other.seed
            and self.repetitions == other.repetitions
            and self._testers == other._testers
        )

    def __hash__(self) -> int:
        raise TypeError("L0Sampler is mutable and unhashable")


class ForestSketch:
    """
    Connectivity sketch of one sampled graph: per Boruvka round, one
    L0Sampler per vertex over that vertex's signed incidence row.

    Every round draws from a fresh seed. Samplers are created on first touch.
    """

    def __init__(self, n: int, seed: int, rounds: int, repetitions: int = 4) -> None:
        if n < 1 or rounds < 1:
            raise ConfigurationError(f"invalid forest sketch shape n={n}, rounds={rounds}")
        self.n = n
        self.dimension = max(1, pair_count(n))
        self.seed = seed
        self.rounds = rounds
        self.repetitions = repetitions
        self.round_seeds = [mix64(seed, _ROUND_TAG, r) for r in range(rounds)]
        self._samplers: list[dict[int, L0Sampler]] = [{} for _ in range(rounds)]

    def _template(self, round_index: int) -> L0Sampler:
        return L0Sampler(self.dimension, self.round_seeds[round_index], self.repetitions)

    def _row(self, round_index: int, vertex: int) -> L0Sampler:
        sampler = self._samplers[round_index].get(vertex)
        if sampler is None:
            sampler = self._samplers[round_index][vertex] = self._template(round_index)
        return sampler

    def update(self, u: int, v: int, delta: int) -> int:
        """Apply delta to edge (u, v) in rows u and v of every round; returns testers touched."""
        index = encode_pair(self.n, u, v)
        low, high = (u, v) if u < v else (v, u)
        touched = 0
        for r in range(self.rounds):
            low_row = self._row(r, low)
            plan = low_row.plan(index)
            touched += low_row.update(index, delta, plan)
            touched += self._row(r, high).update(index, -delta, plan)
        for r in range(self.rounds):
            self._drop_if_zero(r, low)
            self._drop_if_zero(r, high)
        return touched

    def _drop_if_zero(self, round_index: int, vertex: int) -> None:
        sampler = self._samplers[round_index].get(vertex)
        if sampler is not None and sampler.is_zero():
            del self._samplers[round_index][vertex]

    def component_sampler(self, round_index: int, members: Iterable[int]) -> L0Sampler:
        """Sum of a round's samplers over a vertex set; internal edges cancel."""
        total = self._template(round_index)
        rows = self._samplers[round_index]
        for vertex in members:
            row = rows.get(vertex)
            if row is not None:
                total.merge(row)
        return total

    def merge(self, other: ForestSketch, sign: int = 1) -> ForestSketch:
        if (self.n, self.seed, self.rounds, self.repetitions) != (
            other.n,
            other.seed,
            other.rounds,
            other.repetitions,
        ):
            raise ConfigurationError("cannot combine forest sketches with different parameters")
        for r in range(self.rounds):
            for vertex, row in other._samplers[r].items():
                self._row(r, vertex).merge(row, sign)
                self._drop_if_zero(r, vertex)
        return self

    def is_zero(self) -> bool:
        return not any(self._samplers)

    def memory_words(self) -> int:
        return sum(row.memory_words() for rows in self._samplers for row in rows.values())

    def state(self) -> Iterator[tuple[int, int, list[tuple[int, int, int, int]]]]:
        """Canonical (round, vertex, tester state) listing of non-zero rows."""
        for r, rows in enumerate(self._samplers):
            for vertex in sorted(rows):
                yield r, vertex, rows[vertex].state()


@dataclass
class ForestResult:
    """Forest edges and the component label (smallest member) of every vertex."""

    edges: list[Coordinate]
    labels: npt.NDArray[np.int64]
    components: dict[int, list[int]] = field(default_factory=dict)

    @property
    def component_count(self) -> int:
        return len(self.components)


def spanning_forest(forest: ForestSketch, vertices: Iterable[int] | None = None) -> ForestResult:
    """
    Boruvka over the sketch: each round, every open component draws one
    boundary edge from the sum of its members' samplers and components are
    merged along the draws. A component whose sum is zero has no boundary
    and is closed for good.

    If `vertices` is given, the returned components are restricted to it.

    Raises:
        RoundExhaustion: if some component still has boundary edges after
            the last round.
    """
    n = forest.n
    uf = UnionFind(n)
    edges: list[Coordinate] = []
    closed: set[int] = set()

    for r in range(forest.rounds):
        draws: list[Coordinate] = []
        groups = uf.groups()
        open_roots = [root for root in groups if root not in closed]
        if not open_roots:
            break
        for root in open_roots:
            members = groups[root]
            total = forest.component_sampler(r, members)
            if total.is_zero():
                closed.add(root)
                continue
            drawn = total.sample()
            if isinstance(drawn, NoSample):
                # Failed draw; the component waits for the next round
                continue
            coordinate = decode_index(n, drawn.index)
            inside_v = uf.find(coordinate.v) == root
            inside_w = uf.find(coordinate.w) == root
            if inside_v == inside_w:
                logger.debug(f"round {r}: discarded non-boundary draw {coordinate}")
                continue
            draws.append(coordinate)
        merged = 0
        for coordinate in draws:
            if uf.union(coordinate.v, coordinate.w):
                edges.append(coordinate)
                merged += 1
        logger.debug(f"round {r}: {len(open_roots)} open component(s), {merged} merge(s)")
        # roots of closed components never change: nothing can merge into them
        closed = {root for root in closed if uf.find(root) == root}

    still_open = 0
    last = forest.rounds - 1
    for root, members in uf.groups().items():
        if root in closed:
            continue
        if not forest.component_sampler(last, members).is_zero():
            still_open += 1
    if still_open:
        raise RoundExhaustion(still_open, forest.rounds)

    labels = uf.labels()
    keep = None if vertices is None else set(vertices)
    components: dict[int, list[int]] = {}
    for vertex in range(n):
        if keep is None or vertex in keep:
            components.setdefault(int(labels[vertex]), []).append(vertex)
    return ForestResult(edges=edges, labels=labels, components=components)
