"""
Sketch Bank

This module holds the full streaming state: connectivity sketches per
(rate exponent a, copy b), recovery and degree sketches per (exponent e,
copy r), and the sparsifier recovery sketches per exponent e. Exponent 0 is
the unsampled graph. Each update is hashed once per family; the nested
threshold samples mean an edge belongs to exactly the exponents 0..depth.
"""

from __future__ import annotations

import copy
import hashlib
import logging
from collections import Counter
from dataclasses import dataclass, field

from ..errors import StreamViolation
from ..sketches.l0_forest import ForestSketch
from ..sketches.l1_degree import DegreeSketch
from ..sketches.randomness import FamilyKind, FamilyTag, HashSource, mix64, sample_depth
from ..sketches.sparse_recovery import RecoverySketch, encode_pair, pair_count
from ..utils.config import RunConfig, SketchParameters

logger = logging.getLogger(__name__)

_FOREST_TAG = 0xC0
_RECOVERY_TAG = 0x5E
_DEGREE_TAG = 0xDE
_STAR_TAG = 0x57


@dataclass(frozen=True)
class EdgeUpdate:
    """One stream element: +1 inserts (u, v), -1 deletes it."""

    u: int
    v: int
    sign: int
    weight: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise StreamViolation(f"update sign must be +1 or -1, got {self.sign}")
        if self.u == self.v:
            raise StreamViolation(f"self-loop ({self.u}, {self.v}) is not an edge")
        if self.weight < 1:
            raise StreamViolation(f"edge weight must be positive, got {self.weight}")

    @classmethod
    def insert(cls, u: int, v: int, weight: int = 1) -> EdgeUpdate:
        return cls(u, v, 1, weight)

    @classmethod
    def delete(cls, u: int, v: int, weight: int = 1) -> EdgeUpdate:
        return cls(u, v, -1, weight)

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v) if self.u < self.v else (self.v, self.u)


@dataclass
class BankStats:
    n: int
    m: int
    updates: int
    memory_words: int
    touched_histogram: dict[int, int] = field(default_factory=dict)

    @property
    def mean_touched(self) -> float:
        total = sum(self.touched_histogram.values())
        if total == 0:
            return 0.0
        return sum(cells * count for cells, count in self.touched_histogram.items()) / total


class SketchBank:
    """
    All linear sketches of one dynamic graph on vertices 0..n-1.

    forests[a][b]      connectivity sketch of the H^b sample at exponent a
    recovery[e][r][v]  k-sparse recovery sketch of row v of the G^r sample at e
    degrees[e][r][v]   l1 sketch of the same row
    star[e][v]         k-sparse recovery sketch of row v of the G* sample at e

    With checked=True a shadow edge set enforces stream validity.
    """

    def __init__(self, n: int, config: RunConfig | None = None) -> None:
        self.config = config if config is not None else RunConfig.build()
        self.params = SketchParameters.derive(n, self.config)
        self.n = n
        self.dimension = max(1, pair_count(n))
        p = self.params
        seed = p.seed

        self.h_sources = [
            HashSource(seed, p.independence_degree, FamilyTag(FamilyKind.H, b))
            for b in range(p.b_max)
        ]
        self.g_sources = [
            HashSource(seed, p.independence_degree, FamilyTag(FamilyKind.G, r))
            for r in range(p.r_max)
        ]
        self.star_source = HashSource(seed, p.independence_degree, FamilyTag(FamilyKind.GSTAR))

        self.forests: list[list[ForestSketch]] = [
            [
                ForestSketch(
                    n, mix64(seed, _FOREST_TAG, a, b), p.forest_rounds, p.l0_repetitions
                )
                for b in range(p.b_max)
            ]
            for a in range(p.a_max + 1)
        ]
        exponents = p.exponent_max + 1
        self.recovery: list[list[dict[int, RecoverySketch]]] = [
            [{} for _ in range(p.r_max)] for _ in range(exponents)
        ]
        self.degrees: list[list[dict[int, DegreeSketch]]] = [
            [{} for _ in range(p.r_max)] for _ in range(exponents)
        ]
        self.star: list[dict[int, RecoverySketch]] = [{} for _ in range(exponents)]

        self.m = 0
        self.updates = 0
        self.touched_histogram: Counter[int] = Counter()
        self._present: dict[tuple[int, int], int] | None = {} if self.config.checked else None

        logger.debug(
            f"Sketch bank ready: n={n}, a_max={p.a_max}, copies={p.b_max}, "
            f"delta={p.delta}, k={p.sparsity}, t={p.independence_degree}"
        )

    # sketch factories (equal params across vertices so rows can be summed)

    def empty_recovery(self, exponent: int, copy_index: int) -> RecoverySketch:
        return RecoverySketch(
            self.params.sparsity,
            self.params.recovery_rows,
            self.dimension,
            mix64(self.params.seed, _RECOVERY_TAG, exponent, copy_index),
        )

    def empty_degree(self, exponent: int, copy_index: int) -> DegreeSketch:
        return DegreeSketch(
            self.params.projections,
            mix64(self.params.seed, _DEGREE_TAG, exponent, copy_index),
        )

    def empty_star(self, exponent: int) -> RecoverySketch:
        return RecoverySketch(
            self.params.sparsity,
            self.params.recovery_rows,
            self.dimension,
            mix64(self.params.seed, _STAR_TAG, exponent),
        )

    # ingestion

    def _check_validity(self, upd: EdgeUpdate) -> None:
        if self._present is None:
            return
        pair = upd.pair
        if upd.sign > 0:
            if pair in self._present:
                raise StreamViolation(f"edge {pair} inserted while already present")
            self._present[pair] = upd.weight
        else:
            weight = self._present.get(pair)
            if weight is None:
                raise StreamViolation(f"edge {pair} deleted while absent")
            if weight != upd.weight:
                raise StreamViolation(
                    f"edge {pair} deleted with weight {upd.weight}, inserted with {weight}"
                )
            del self._present[pair]

    def ingest(self, upd: EdgeUpdate) -> int:
        """
        Apply one update to every sketch whose sample keeps the edge.

        Returns the number of sketch cells touched.

        Raises:
            StreamViolation: for out-of-range endpoints, weights other than 1,
                or (checked mode) invalid insert/delete sequences.
        """
        if not (0 <= upd.u < self.n and 0 <= upd.v < self.n):
            raise StreamViolation(f"edge ({upd.u}, {upd.v}) outside vertex range [0, {self.n})")
        if upd.weight != 1:
            raise StreamViolation(
                f"weight {upd.weight} on an unweighted bank; use WeightedSketchBank"
            )
        self._check_validity(upd)

        low, high = upd.pair
        index = encode_pair(self.n, low, high)
        sign = upd.sign
        p = self.params
        touched = 0

        for b, src in enumerate(self.h_sources):
            depth = sample_depth(src, low, high, p.a_max)
            for a in range(depth + 1):
                touched += self.forests[a][b].update(low, high, sign)

        for r, src in enumerate(self.g_sources):
            depth = sample_depth(src, low, high, p.exponent_max)
            for e in range(depth + 1):
                touched += self._update_recovery(self.recovery[e][r], e, r, index, low, high, sign)
                touched += self._update_degree(self.degrees[e][r], e, r, index, low, high, sign)

        depth = sample_depth(self.star_source, low, high, p.exponent_max)
        for e in range(depth + 1):
            touched += self._update_recovery(self.star[e], e, None, index, low, high, sign)

        self.m += sign
        self.updates += 1
        self.touched_histogram[touched] += 1
        return touched

    def _update_recovery(
        self,
        rows: dict[int, RecoverySketch],
        exponent: int,
        copy_index: int | None,
        index: int,
        low: int,
        high: int,
        sign: int,
    ) -> int:
        touched = 0
        plan = None
        for vertex, delta in ((low, sign), (high, -sign)):
            sketch = rows.get(vertex)
            if sketch is None:
                sketch = rows[vertex] = (
                    self.empty_star(exponent)
                    if copy_index is None
                    else self.empty_recovery(exponent, copy_index)
                )
            if plan is None:
                plan = sketch.plan(index)
            touched += sketch.update(index, delta, plan)
            if sketch.is_zero():
                del rows[vertex]
        return touched

    def _update_degree(
        self,
        rows: dict[int, DegreeSketch],
        exponent: int,
        copy_index: int,
        index: int,
        low: int,
        high: int,
        sign: int,
    ) -> int:
        touched = 0
        projection = None
        for vertex, delta in ((low, sign), (high, -sign)):
            sketch = rows.get(vertex)
            if sketch is None:
                sketch = rows[vertex] = self.empty_degree(exponent, copy_index)
            if projection is None:
                projection = sketch.projection(index)
            touched += sketch.update(index, delta, projection)
            if sketch.is_zero():
                del rows[vertex]
        return touched

    # supernode sums

    def sum_recovery(self, exponent: int, copy_index: int, members: list[int]) -> RecoverySketch:
        total = self.empty_recovery(exponent, copy_index)
        rows = self.recovery[exponent][copy_index]
        for vertex in members:
            row = rows.get(vertex)
            if row is not None:
                total.merge(row)
        return total

    def sum_degree(self, exponent: int, copy_index: int, members: list[int]) -> DegreeSketch:
        total = self.empty_degree(exponent, copy_index)
        rows = self.degrees[exponent][copy_index]
        for vertex in members:
            row = rows.get(vertex)
            if row is not None:
                total.merge(row)
        return total

    def sum_star(self, exponent: int, members: list[int]) -> RecoverySketch:
        total = self.empty_star(exponent)
        rows = self.star[exponent]
        for vertex in members:
            row = rows.get(vertex)
            if row is not None:
                total.merge(row)
        return total

    # inspection

    def snapshot(self) -> SketchBank:
        """Frozen copy for extraction; ingestion may continue on self."""
        return copy.deepcopy(self)

    def memory_words(self) -> int:
        words = sum(forest.memory_words() for row in self.forests for forest in row)
        for per_exponent in self.recovery:
            words += sum(s.memory_words() for rows in per_exponent for s in rows.values())
        for per_exponent_d in self.degrees:
            words += sum(d.memory_words() for rows in per_exponent_d for d in rows.values())
        words += sum(s.memory_words() for rows in self.star for s in rows.values())
        return words

    def stats(self) -> BankStats:
        return BankStats(
            n=self.n,
            m=self.m,
            updates=self.updates,
            memory_words=self.memory_words(),
            touched_histogram=dict(sorted(self.touched_histogram.items())),
        )

    def digest(self) -> str:
        """SHA-256 of the canonical sketch state; equal iff the banks are bit-identical."""
        h = hashlib.sha256()
        h.update(f"n={self.n};m={self.m};seed={self.params.seed}".encode())
        for a, row in enumerate(self.forests):
            for b, forest in enumerate(row):
                for r, vertex, testers in forest.state():
                    h.update(f"F{a},{b},{r},{vertex}:{testers}".encode())
        for e, per_copy in enumerate(self.recovery):
            for r, rows in enumerate(per_copy):
                for vertex in sorted(rows):
                    h.update(f"S{e},{r},{vertex}:".encode())
                    h.update(rows[vertex].to_bytes())
        for e, per_copy_d in enumerate(self.degrees):
            for r, rows_d in enumerate(per_copy_d):
                for vertex in sorted(rows_d):
                    h.update(f"D{e},{r},{vertex}:".encode())
                    h.update(rows_d[vertex].state())
        for e, rows in enumerate(self.star):
            for vertex in sorted(rows):
                h.update(f"X{e},{vertex}:".encode())
                h.update(rows[vertex].to_bytes())
        return h.hexdigest()

    def present_edges(self) -> dict[tuple[int, int], int] | None:
        """Shadow edge set of checked mode (None when unchecked)."""
        return None if self._present is None else dict(self._present)

    def __repr__(self) -> str:
        return f"SketchBank(n={self.n}, m={self.m}, updates={self.updates})"
