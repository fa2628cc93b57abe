"""
Low-degree peeling of the contracted graph H_a

Supernodes of H_a are the classes of V_(a+1). Round r estimates every
remaining supernode's boundary degree from the d^r sketches at exponent
max(a - Delta, 0) and peels those at or below 4 alpha log^3 n / eps^2.
The S^j sketches (j > r) of peeled supernodes are decoded, and the
recovered boundary edges are subtracted from the S^j and d^j sums of the
supernodes still waiting, so later estimates only see the graph that
remains.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from ..errors import PartitionStall, RecoveryError
from ..sketches.l1_degree import DegreeSketch
from ..sketches.sparse_recovery import DecodeFailure, RecoverySketch, decode_index
from .bank import SketchBank
from .levels import LevelStructure

logger = logging.getLogger(__name__)


@dataclass
class PartitionResult:
    """Supernodes of H_a grouped by the round that peeled them."""

    level: int
    exponent: int
    supernodes: dict[int, list[int]]
    rounds: list[list[int]] = field(default_factory=list)
    stuck: list[int] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def order(self) -> list[int]:
        """Canonical processing order: by round, then by supernode id."""
        return [label for peeled in self.rounds for label in peeled]

    def round_of(self) -> dict[int, int]:
        return {label: r for r, peeled in enumerate(self.rounds) for label in peeled}


class _SupernodeSums:
    """Lazily summed S^j / d^j sketches of the supernodes at one exponent."""

    def __init__(self, bank: SketchBank, exponent: int, supernodes: dict[int, list[int]]) -> None:
        self.bank = bank
        self.exponent = exponent
        self.supernodes = supernodes
        self._recovery: dict[tuple[int, int], RecoverySketch] = {}
        self._degree: dict[tuple[int, int], DegreeSketch] = {}

    def recovery(self, j: int, label: int) -> RecoverySketch:
        key = (j, label)
        sketch = self._recovery.get(key)
        if sketch is None:
            sketch = self.bank.sum_recovery(self.exponent, j, self.supernodes[label])
            self._recovery[key] = sketch
        return sketch

    def degree(self, j: int, label: int) -> DegreeSketch:
        key = (j, label)
        sketch = self._degree.get(key)
        if sketch is None:
            sketch = self.bank.sum_degree(self.exponent, j, self.supernodes[label])
            self._degree[key] = sketch
        return sketch


def partition(
    bank: SketchBank,
    levels: LevelStructure,
    a: int,
    best_effort: bool | None = None,
) -> PartitionResult:
    """
    Split the supernodes of H_a into rounds U^1_a, ..., U^R_a.

    Raises:
        PartitionStall: a round peeled nothing while supernodes remained.
        RecoveryError: a peeled supernode's S^j sketch did not decode.

    In best-effort mode both are logged; stuck supernodes are returned in
    PartitionResult.stuck instead.
    """
    if best_effort is None:
        best_effort = bank.config.best_effort
    params = bank.params
    exponent = params.sample_exponent(a)
    supernodes = levels.supernodes(a)
    owner = levels.labels[a + 1]
    sums = _SupernodeSums(bank, exponent, supernodes)
    result = PartitionResult(level=a, exponent=exponent, supernodes=supernodes)

    remaining = set(supernodes)
    stalled = False
    for r in range(params.r_max):
        if not remaining:
            break
        peeled = sorted(
            label
            for label in remaining
            if sums.degree(r, label).estimate() <= params.degree_threshold
        )
        if not peeled:
            stall = PartitionStall(a, r, remaining)
            if not best_effort:
                raise stall
            logger.warning(f"⚠️  {stall}")
            result.warnings.append(str(stall))
            stalled = True
            break
        remaining.difference_update(peeled)
        result.rounds.append(peeled)
        logger.debug(f"a={a} round {r}: peeled {len(peeled)}, {len(remaining)} left")
        if not remaining:
            continue

        for label in peeled:
            for j in range(r + 1, params.r_max):
                decoded = sums.recovery(j, label).decode(enforce_budget=False)
                if isinstance(decoded, DecodeFailure):
                    error = RecoveryError(a, r, label, decoded.reason)
                    if not best_effort:
                        raise error
                    logger.warning(f"⚠️  {error}")
                    result.warnings.append(str(error))
                    continue
                for index, value in decoded.items():
                    pair = decode_index(bank.n, index)
                    for endpoint in pair:
                        other = int(owner[endpoint])
                        if other != label and other in remaining:
                            sums.recovery(j, other).update(index, value)
                            sums.degree(j, other).update(index, value)

    if remaining:
        if not stalled:
            # rounds ran out rather than a round peeling nothing
            stall = PartitionStall(a, params.r_max, remaining)
            if not best_effort:
                raise stall
            logger.warning(f"⚠️  {stall}")
            result.warnings.append(str(stall))
        result.stuck = sorted(remaining)
    return result
