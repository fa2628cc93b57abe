"""Linear sketches of signed incidence rows."""

from .l0_forest import ForestResult, ForestSketch, L0Sampler, NoSample, Sample, spanning_forest
from .l1_degree import DegreeSketch, cauchy_projection
from .randomness import (
    MODULUS,
    FamilyKind,
    FamilyTag,
    HashSource,
    edge_key,
    sample_depth,
    threshold_sample,
    to_unit,
    unit_hash,
)
from .sparse_recovery import (
    Coordinate,
    DecodeFailure,
    RecoverySketch,
    decode_index,
    encode_pair,
    incidence_sign,
    pair_count,
)
from .union_find import UnionFind

__all__ = [
    "MODULUS",
    "Coordinate",
    "DecodeFailure",
    "DegreeSketch",
    "FamilyKind",
    "FamilyTag",
    "ForestResult",
    "ForestSketch",
    "HashSource",
    "L0Sampler",
    "NoSample",
    "RecoverySketch",
    "Sample",
    "UnionFind",
    "cauchy_projection",
    "decode_index",
    "edge_key",
    "encode_pair",
    "incidence_sign",
    "pair_count",
    "sample_depth",
    "spanning_forest",
    "threshold_sample",
    "to_unit",
    "unit_hash",
]
