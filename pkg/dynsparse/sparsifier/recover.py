"""
Recovery of the level-a sparsifier edges

Supernodes are visited in PartitionResult order. Each decodes its summed S*
sketch at exponent max(a - Delta, 0); the endpoint inside the supernode
controls every recovered edge, and the edge is emitted iff that endpoint's
g* value is below p_a = min(1, gamma log^2 n / (eps^2 2^a)) and L(u, v) = a.
Since p_a <= 2^-(exponent), every edge that passes was kept by the sketch.
Recovered edges are subtracted from the S* sums of supernodes not yet
visited, so no edge is decided twice.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import DisconnectedPair, RecoveryError
from ..sketches.randomness import below_fraction, threshold_sample
from ..sketches.sparse_recovery import DecodeFailure, RecoverySketch, decode_index
from .bank import SketchBank
from .levels import LevelStructure
from .partition import PartitionResult

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RecoveredEdge:
    u: int
    v: int
    level: int
    weight: Fraction
    controller: int


@dataclass
class RecoverResult:
    level: int
    edges: list[RecoveredEdge] = field(default_factory=list)
    decided: int = 0
    warnings: list[str] = field(default_factory=list)


def recover(
    bank: SketchBank,
    levels: LevelStructure,
    a: int,
    part: PartitionResult,
    best_effort: bool | None = None,
) -> RecoverResult:
    """
    Emit the sampled level-a edges of H_a.

    Supernodes left stuck by partition() are decoded from the exponent-0
    sketches instead (best-effort mode only produces them).

    Raises:
        RecoveryError: an S* sum did not decode (not in best-effort mode).
    """
    if best_effort is None:
        best_effort = bank.config.best_effort
    exponent = part.exponent
    rate = bank.params.sample_rate(a)
    weight = 1 / rate
    owner = levels.labels[a + 1]
    star_source = bank.star_source
    round_of = part.round_of()
    result = RecoverResult(level=a)
    sums: dict[int, RecoverySketch] = {}
    processed: set[int] = set()

    def star_sum(label: int) -> RecoverySketch:
        sketch = sums.get(label)
        if sketch is None:
            sketch = sums[label] = bank.sum_star(exponent, part.supernodes[label])
        return sketch

    def split(index: int, label: int) -> tuple[int, int, int]:
        """(endpoint in label, other endpoint, its supernode); label twice if not a boundary pair."""
        pair = decode_index(bank.n, index)
        if int(owner[pair.v]) == label:
            return pair.v, pair.w, int(owner[pair.w])
        if int(owner[pair.w]) == label:
            return pair.w, pair.v, int(owner[pair.v])
        return pair.v, pair.w, label

    def on_level(x: int, y: int) -> bool:
        try:
            return levels.edge_level(x, y) == a
        except DisconnectedPair as e:
            logger.warning(f"⚠️  Recovered edge ({x}, {y}) has no level: {e}")
            return False

    def sampled(x: int, y: int) -> bool:
        return below_fraction(star_source.field_hash(x, y), rate)

    def emit(x: int, y: int) -> None:
        u, v = (x, y) if x < y else (y, x)
        result.edges.append(RecoveredEdge(u, v, a, weight, x))

    def exact_fallback(label: int) -> None:
        """Decide the level-a boundary edges of label from the unsampled sketches."""
        sketch = bank.sum_star(0, part.supernodes[label])
        decoded = sketch.decode(enforce_budget=False)
        if isinstance(decoded, DecodeFailure):
            message = f"a={a}: exact fallback failed for supernode {label}: {decoded.reason}"
            logger.warning(f"⚠️  {message}")
            result.warnings.append(message)
            return
        for index, value in decoded.items():
            x, y, other = split(index, label)
            if other == label or other in processed:
                continue
            result.decided += 1
            if sampled(x, y) and on_level(x, y):
                emit(x, y)
            if threshold_sample(star_source, x, y, exponent):
                star_sum(other).update(index, value)

    with star_source.memoized():
        for label in part.order():
            decoded = star_sum(label).decode(enforce_budget=False)
            if isinstance(decoded, DecodeFailure):
                error = RecoveryError(a, round_of.get(label, -1), label, decoded.reason)
                if not best_effort:
                    raise error
                logger.warning(f"⚠️  {error}; falling back to exact recovery")
                result.warnings.append(str(error))
                exact_fallback(label)
                processed.add(label)
                continue
            for index, value in decoded.items():
                x, y, other = split(index, label)
                if other == label:
                    continue
                result.decided += 1
                if sampled(x, y) and on_level(x, y):
                    emit(x, y)
                if other not in processed:
                    star_sum(other).update(index, value)
            processed.add(label)

        for label in part.stuck:
            exact_fallback(label)
            processed.add(label)

    logger.debug(f"a={a}: decided {result.decided} edge(s), emitted {len(result.edges)}")
    return result
