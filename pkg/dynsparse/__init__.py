"""Dynamic Cut Sparsifier Package"""

from .errors import (
    ConfigurationError,
    DisconnectedPair,
    LevelBuildError,
    PartitionStall,
    PeelFailure,
    RecoveryError,
    RoundExhaustion,
    SparsifierError,
    StreamFormatError,
    StreamViolation,
    VerificationFailure,
    WeightOverflow,
)
from .sparsifier import (
    EdgeUpdate,
    LevelStructure,
    SketchBank,
    Sparsifier,
    SparsifierEdge,
    WeightedSketchBank,
    build_levels,
    ingest_weighted,
    partition,
    recover,
    sparsify,
    sparsify_weighted,
)
from .utils.config import ProfileConfig, RunConfig, SketchParameters

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "DisconnectedPair",
    "EdgeUpdate",
    "LevelBuildError",
    "LevelStructure",
    "PartitionStall",
    "PeelFailure",
    "ProfileConfig",
    "RecoveryError",
    "RoundExhaustion",
    "RunConfig",
    "SketchBank",
    "SketchParameters",
    "Sparsifier",
    "SparsifierEdge",
    "SparsifierError",
    "StreamFormatError",
    "StreamViolation",
    "VerificationFailure",
    "WeightOverflow",
    "WeightedSketchBank",
    "__version__",
    "build_levels",
    "ingest_weighted",
    "partition",
    "recover",
    "sparsify",
    "sparsify_weighted",
]
