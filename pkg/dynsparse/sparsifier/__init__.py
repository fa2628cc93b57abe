"""Sketch bank and the level / partition / recover extraction pipeline."""

from .bank import BankStats, EdgeUpdate, SketchBank
from .extract import Sparsifier, SparsifierEdge, sparsify
from .levels import LevelStructure, build_levels, intersect_partitions
from .partition import PartitionResult, partition
from .recover import RecoveredEdge, RecoverResult, recover
from .weighted import WeightedSketchBank, ingest_weighted, sparsify_weighted

__all__ = [
    "BankStats",
    "EdgeUpdate",
    "LevelStructure",
    "PartitionResult",
    "RecoverResult",
    "RecoveredEdge",
    "SketchBank",
    "Sparsifier",
    "SparsifierEdge",
    "WeightedSketchBank",
    "build_levels",
    "ingest_weighted",
    "intersect_partitions",
    "partition",
    "recover",
    "sparsify",
    "sparsify_weighted",
]
