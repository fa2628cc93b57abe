"""
Weighted graphs via binary expansion

Sub-bank b sketches the unweighted graph G_b of edges whose weight has bit
b set. Sub-bank 0 keeps the run seed, so an all-ones stream behaves exactly
like the unweighted pipeline; the other sub-banks use derived seeds.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from fractions import Fraction

from ..errors import ConfigurationError, StreamViolation, WeightOverflow
from ..sketches.randomness import mix64
from ..utils.config import RunConfig
from .bank import EdgeUpdate, SketchBank
from .extract import Sparsifier, SparsifierEdge, sparsify

logger = logging.getLogger(__name__)

_WEIGHT_TAG = 0x77


class WeightedSketchBank:
    """One SketchBank per weight bit, plus optional checked-mode shadow weights."""

    def __init__(self, n: int, config: RunConfig | None = None, max_weight: int | None = None):
        self.config = config if config is not None else RunConfig.build()
        if max_weight is not None:
            if max_weight < 1:
                raise ConfigurationError(f"max weight must be positive, got {max_weight}")
            bits = max_weight.bit_length()
        elif self.config.weighted_bits is not None:
            bits = self.config.weighted_bits
            max_weight = (1 << bits) - 1
        else:
            raise ConfigurationError("weighted bank needs max_weight or weighted_bits")
        self.n = n
        self.bits = bits
        self.max_weight = max_weight
        self.banks = [SketchBank(n, self._sub_config(b)) for b in range(bits)]
        self._present: dict[tuple[int, int], int] | None = {} if self.config.checked else None
        self.m = 0
        logger.debug(f"Weighted bank ready: {bits} sub-bank(s), W={max_weight}")

    def _sub_config(self, bit: int) -> RunConfig:
        seed = self.config.seed if bit == 0 else mix64(self.config.seed, _WEIGHT_TAG, bit)
        return self.config.model_copy(update={"seed": seed, "checked": False, "weighted_bits": None})

    def ingest(self, upd: EdgeUpdate) -> int:
        """
        Route the update into every sub-bank whose bit is set in the weight.

        Raises:
            WeightOverflow: weight above the configured maximum.
            StreamViolation: out-of-range endpoints, or an invalid
                sequence (checked mode).
        """
        if not (0 <= upd.u < self.n and 0 <= upd.v < self.n):
            raise StreamViolation(f"edge ({upd.u}, {upd.v}) outside vertex range [0, {self.n})")
        if upd.weight > self.max_weight:
            raise WeightOverflow(
                f"edge {upd.pair} weight {upd.weight} exceeds maximum {self.max_weight}"
            )
        if self._present is not None:
            pair = upd.pair
            if upd.sign > 0:
                if pair in self._present:
                    raise StreamViolation(f"edge {pair} inserted while already present")
                self._present[pair] = upd.weight
            else:
                if self._present.get(pair) != upd.weight:
                    raise StreamViolation(
                        f"edge {pair} deleted with weight {upd.weight}, "
                        f"present weight {self._present.get(pair)}"
                    )
                del self._present[pair]
        touched = 0
        for bit in range(self.bits):
            if upd.weight >> bit & 1:
                touched += self.banks[bit].ingest(EdgeUpdate(upd.u, upd.v, upd.sign))
        self.m += upd.sign
        return touched

    def bits_of(self, u: int, v: int) -> list[int]:
        """Sub-banks holding (u, v), from the checked-mode shadow weights."""
        if self._present is None:
            raise ConfigurationError("bits_of needs a checked weighted bank")
        pair = (u, v) if u < v else (v, u)
        weight = self._present.get(pair, 0)
        return [bit for bit in range(self.bits) if weight >> bit & 1]

    def memory_words(self) -> int:
        return sum(bank.memory_words() for bank in self.banks)


def ingest_weighted(bank: WeightedSketchBank, upd: EdgeUpdate) -> int:
    return bank.ingest(upd)


def sparsify_weighted(bank: WeightedSketchBank, best_effort: bool | None = None) -> Sparsifier:
    """Union of the sub-bank sparsifiers with weights scaled by 2^b."""
    merged: dict[tuple[int, int], Fraction] = defaultdict(Fraction)
    result = Sparsifier(n=bank.n, epsilon=bank.config.epsilon, seed=bank.config.seed)
    for bit, sub in enumerate(bank.banks):
        part = sparsify(sub, best_effort=best_effort)
        for edge in part.edges:
            merged[(edge.u, edge.v)] += edge.weight * (1 << bit)
        for level, count in part.level_counts.items():
            result.level_counts[level] = result.level_counts.get(level, 0) + count
        result.controlled_counts.update(part.controlled_counts)
        result.duplicates += part.duplicates
        result.warnings.extend(f"bit {bit}: {message}" for message in part.warnings)
    result.edges = sorted(SparsifierEdge(u, v, weight) for (u, v), weight in merged.items())
    logger.info(f"✅ Weighted sparsifier: {result.edge_count} edge(s) over {bank.bits} bit(s)")
    return result
