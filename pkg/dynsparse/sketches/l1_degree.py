"""
Cauchy-projection l1 sketch of a signed incidence row

Accumulator i holds sum_c x_c * C_i(c) where C_i(c) is a standard Cauchy
draw tied to (seed, c). Sums of Cauchy variables scale by the l1 norm, and
the median of |Cauchy| is 1, so median(|acc|) estimates ||x||_1. For a summed
supernode row this is the boundary degree, since internal edges cancel.

Projection values sit on a 2^-30 fixed-point grid in int64 accumulators, so
an insert followed by a delete restores exact zero.
"""

from __future__ import annotations

import logging

import numpy as np
import numpy.typing as npt
from cachetools import LRUCache, cached

from ..errors import ConfigurationError

logger = logging.getLogger(__name__)

FIXED_POINT_BITS = 30
CAUCHY_CLAMP = 1e6

_SCALE = float(1 << FIXED_POINT_BITS)
_MASK64 = (1 << 64) - 1


@cached(cache=LRUCache(maxsize=1 << 14))
def cauchy_projection(seed: int, projections: int, index: int) -> npt.NDArray[np.int64]:
    """Quantized Cauchy values of coordinate index across all projections."""
    rng = np.random.default_rng([seed & _MASK64, index])
    uniform = rng.random(projections)
    values = np.tan(np.pi * (uniform - 0.5))
    np.clip(values, -CAUCHY_CLAMP, CAUCHY_CLAMP, out=values)
    quantized = np.rint(values * _SCALE).astype(np.int64)
    quantized.flags.writeable = False
    return quantized


class DegreeSketch:
    """l1-norm sketch with `projections` int64 accumulators, allocated on first touch."""

    def __init__(self, projections: int, seed: int) -> None:
        if projections < 1:
            raise ConfigurationError(f"projection count must be >= 1, got {projections}")
        self.projections = projections
        self.seed = seed
        self._acc: npt.NDArray[np.int64] | None = None

    def projection(self, index: int) -> npt.NDArray[np.int64]:
        return cauchy_projection(self.seed, self.projections, index)

    def update(
        self, index: int, delta: int, projection: npt.NDArray[np.int64] | None = None
    ) -> int:
        """Add delta * C(index) to every accumulator; returns the projection count."""
        if delta == 0:
            return 0
        column = projection if projection is not None else self.projection(index)
        if self._acc is None:
            self._acc = np.zeros(self.projections, dtype=np.int64)
        self._acc += np.int64(delta) * column
        if not self._acc.any():
            self._acc = None
        return self.projections

    def merge(self, other: DegreeSketch, sign: int = 1) -> DegreeSketch:
        """In-place self += sign * other."""
        if (self.projections, self.seed) != (other.projections, other.seed):
            raise ConfigurationError(
                f"cannot combine degree sketches ({self.projections}, {self.seed}) and "
                f"({other.projections}, {other.seed})"
            )
        if other._acc is None:
            return self
        if self._acc is None:
            self._acc = np.zeros(self.projections, dtype=np.int64)
        self._acc += np.int64(sign) * other._acc
        if not self._acc.any():
            self._acc = None
        return self

    def add(self, other: DegreeSketch) -> DegreeSketch:
        return self.copy().merge(other)

    __add__ = add

    def copy(self) -> DegreeSketch:
        clone = DegreeSketch(self.projections, self.seed)
        if self._acc is not None:
            clone._acc = self._acc.copy()
        return clone

    def empty_like(self) -> DegreeSketch:
        return DegreeSketch(self.projections, self.seed)

    def estimate(self) -> float:
        """median(|acc|), i.e. the l1 norm estimate; exactly 0 for the zero vector."""
        if self._acc is None:
            return 0.0
        return float(np.median(np.abs(self._acc))) / _SCALE

    def is_zero(self) -> bool:
        return self._acc is None

    def accumulators(self) -> npt.NDArray[np.int64]:
        if self._acc is None:
            return np.zeros(self.projections, dtype=np.int64)
        return self._acc.copy()

    def memory_words(self) -> int:
        return 0 if self._acc is None else self.projections

    def state(self) -> bytes:
        return b"" if self._acc is None else self._acc.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DegreeSketch):
            return NotImplemented
        return (
            self.projections == other.projections
            and self.seed == other.seed
            and self.state() == other.state()
        )

    def __hash__(self) -> int:
        raise TypeError("DegreeSketch is mutable and unhashable")
