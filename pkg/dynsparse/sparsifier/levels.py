"""
Levels

Builds the partitions V_a (a = 0..a_max) by intersecting the spanning-forest
components of every connectivity copy at exponent a, and answers L(u, v)
and L(v). Each V_a is additionally intersected with V_(a-1), so the chain
is laminar. V_(a_max+1) is the all-singleton partition.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from ..errors import DisconnectedPair, LevelBuildError, RoundExhaustion
from ..sketches.l0_forest import spanning_forest
from .bank import SketchBank

logger = logging.getLogger(__name__)


def intersect_partitions(
    partitions: Sequence[npt.NDArray[np.int64]], n: int
) -> npt.NDArray[np.int64]:
    """Common refinement of label arrays; each class labeled by its smallest vertex."""
    if not partitions:
        return np.arange(n, dtype=np.int64)
    stacked = np.stack(partitions, axis=1)
    _, inverse = np.unique(stacked, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    smallest = np.full(int(inverse.max()) + 1, n, dtype=np.int64)
    np.minimum.at(smallest, inverse, np.arange(n, dtype=np.int64))
    return smallest[inverse]


@dataclass
class LevelStructure:
    """
    labels[a][v] is the canonical class id of v in V_a for a = 0..a_max+1.
    """

    n: int
    a_max: int
    labels: npt.NDArray[np.int64]
    failed_copies: dict[int, int] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        self._class_sizes = np.stack(
            [np.bincount(row, minlength=self.n) for row in self.labels]
        )

    def partition(self, a: int) -> dict[int, list[int]]:
        """Classes of V_a keyed by canonical id, in id order."""
        classes: dict[int, list[int]] = {}
        for vertex, label in enumerate(self.labels[a].tolist()):
            classes.setdefault(label, []).append(vertex)
        return classes

    def supernodes(self, a: int) -> dict[int, list[int]]:
        """Supernodes of H_a: the classes of V_(a+1)."""
        return self.partition(a + 1)

    def has_level_edges(self, a: int) -> bool:
        """False when V_(a+1) equals V_a, so no pair can have level a."""
        return not np.array_equal(self.labels[a], self.labels[a + 1])

    def edge_level(self, u: int, v: int) -> int:
        """
        Largest a with u and v in the same class of V_a.

        Raises:
            DisconnectedPair: if u and v are apart already in V_0.
        """
        if u == v:
            raise ValueError(f"edge_level needs two distinct vertices, got {u}")
        same = self.labels[:, u] == self.labels[:, v]
        if not same[0]:
            raise DisconnectedPair(u, v)
        return int(np.count_nonzero(same)) - 1

    def vertex_level(self, v: int) -> int:
        """Largest a with v outside a singleton class of V_a; 0 if isolated."""
        sizes = self._class_sizes[np.arange(self.a_max + 2), self.labels[:, v]]
        shared = np.flatnonzero(sizes > 1)
        return int(shared[-1]) if shared.size else 0

    def class_counts(self) -> list[int]:
        return [len(np.unique(row)) for row in self.labels]


def build_levels(bank: SketchBank, best_effort: bool | None = None) -> LevelStructure:
    """
    Run spanning_forest for every (a, b) and intersect per a.

    A copy that exhausts its rounds is dropped with a warning. If every copy
    fails at some a, LevelBuildError is raised; in best-effort mode V_a falls
    back to singletons for a > 0.
    """
    if best_effort is None:
        best_effort = bank.config.best_effort
    n = bank.n
    a_max = bank.params.a_max
    labels = np.empty((a_max + 2, n), dtype=np.int64)
    failed: dict[int, int] = {}
    warnings: list[str] = []
    previous: npt.NDArray[np.int64] | None = None

    for a in range(a_max + 1):
        partitions: list[npt.NDArray[np.int64]] = []
        for b, forest in enumerate(bank.forests[a]):
            try:
                partitions.append(spanning_forest(forest).labels)
            except RoundExhaustion as e:
                failed[a] = failed.get(a, 0) + 1
                logger.warning(f"⚠️  Connectivity copy b={b} at a={a} dropped: {e}")
        if failed.get(a):
            message = f"a={a}: {failed[a]} of {len(bank.forests[a])} connectivity copies failed"
            warnings.append(message)
        if not partitions:
            if not best_effort or a == 0:
                raise LevelBuildError(a)
            logger.warning(f"⚠️  Using singletons for V_{a} (best effort)")
            partitions.append(np.arange(n, dtype=np.int64))
        if previous is not None:
            partitions.append(previous)
        labels[a] = intersect_partitions(partitions, n)
        previous = labels[a]

    labels[a_max + 1] = np.arange(n, dtype=np.int64)
    structure = LevelStructure(
        n=n, a_max=a_max, labels=labels, failed_copies=failed, warnings=warnings
    )
    logger.debug(f"Level classes per a: {structure.class_counts()}")
    return structure
