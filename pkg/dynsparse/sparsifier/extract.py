"""
Sparsifier extraction

sparsify() rebuilds the levels from scratch and runs partition + recover
for every level. Each emitted edge carries the weight 1/p_a of its level
(a rational, printed as `p q`);
levels are disjoint through the L(u, v) = a filter, and the emitter still
deduplicates and counts repeats.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import SparsifierError
from .bank import SketchBank
from .levels import LevelStructure, build_levels
from .partition import partition
from .recover import recover

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class SparsifierEdge:
    u: int
    v: int
    weight: Fraction
    level: int = field(default=0, compare=False)
    controller: int = field(default=-1, compare=False)

    def line(self) -> str:
        """`u v p q` with weight = p / q."""
        return f"{self.u} {self.v} {self.weight.numerator} {self.weight.denominator}"


@dataclass
class Sparsifier:
    """Weighted edge list plus extraction metadata."""

    n: int
    epsilon: float
    seed: int
    edges: list[SparsifierEdge] = field(default_factory=list)
    level_counts: dict[int, int] = field(default_factory=dict)
    controlled_counts: Counter[tuple[int, int]] = field(default_factory=Counter)
    duplicates: int = 0
    warnings: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def weights(self) -> dict[tuple[int, int], Fraction]:
        return {(edge.u, edge.v): edge.weight for edge in self.edges}

    def lines(self) -> list[str]:
        return [edge.line() for edge in sorted(self.edges)]

    def max_controlled(self) -> int:
        return max(self.controlled_counts.values(), default=0)


def sparsify(bank: SketchBank, best_effort: bool | None = None) -> Sparsifier:
    """
    Extract a (1 +- eps) cut sparsifier from the bank.

    The bank is only read; ingestion may continue afterwards. Errors from
    level building, partition or recover propagate with their (a, r,
    supernode) context unless best-effort mode is on, in which case they are
    logged and collected in Sparsifier.warnings.
    """
    if best_effort is None:
        best_effort = bank.config.best_effort
    params = bank.params
    sparsifier = Sparsifier(n=bank.n, epsilon=params.epsilon, seed=params.seed)
    if bank.m == 0:
        logger.info("✅ Empty graph, empty sparsifier")
        return sparsifier

    levels: LevelStructure = build_levels(bank, best_effort=best_effort)
    sparsifier.warnings.extend(levels.warnings)
    seen: set[tuple[int, int]] = set()

    for a in range(params.a_max + 1):
        if not levels.has_level_edges(a):
            continue
        try:
            part = partition(bank, levels, a, best_effort=best_effort)
            recovered = recover(bank, levels, a, part, best_effort=best_effort)
        except SparsifierError:
            logger.error(f"❌ Extraction failed at level a={a}")
            raise
        sparsifier.warnings.extend(part.warnings)
        sparsifier.warnings.extend(recovered.warnings)
        emitted = 0
        for edge in recovered.edges:
            key = (edge.u, edge.v)
            if key in seen:
                sparsifier.duplicates += 1
                continue
            seen.add(key)
            sparsifier.edges.append(
                SparsifierEdge(edge.u, edge.v, edge.weight, a, edge.controller)
            )
            sparsifier.controlled_counts[(edge.controller, a)] += 1
            emitted += 1
        if emitted:
            sparsifier.level_counts[a] = emitted

    sparsifier.edges.sort()
    if sparsifier.duplicates:
        logger.warning(f"⚠️  Dropped {sparsifier.duplicates} duplicate edge(s)")
    logger.info(
        f"✅ Sparsifier extracted: {sparsifier.edge_count} edge(s) from m={bank.m}, "
        f"levels {sorted(sparsifier.level_counts)}"
    )
    return sparsifier
