"""
Exact k-sparse recovery sketch

Each of R rows hashes a coordinate into one of B buckets. A bucket keeps
(count, index_sum, fingerprint_sum); all three are linear in the updates, so
sketches of vertex rows can be summed into sketches of supernodes and edges
internal to the contracted set cancel. Decoding peels pure buckets until the
table is empty.

Buckets are materialized only once touched, so an all-zero sketch costs
nothing and nominal table size does not drive memory.
"""

from __future__ import annotations

import logging
import math
import struct
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from ..errors import ConfigurationError
from .randomness import MODULUS, mix64, mix_field

logger = logging.getLogger(__name__)

_FINGERPRINT_TAG = 0xF1
_BUCKET_TAG = 0xB0


class Coordinate(NamedTuple):
    """A potential edge (v, w) with v < w."""

    v: int
    w: int

    @classmethod
    def of(cls, u: int, v: int) -> Coordinate:
        if u == v:
            raise ValueError(f"self-loop ({u}, {v}) has no coordinate")
        return cls(u, v) if u < v else cls(v, u)


def pair_count(n: int) -> int:
    """Dimension N = n(n-1)/2 of a signed incidence row."""
    return n * (n - 1) // 2


def encode_pair(n: int, v: int, w: int) -> int:
    """Bijection from pairs v < w of [0, n) onto [0, N)."""
    if v > w:
        v, w = w, v
    if not 0 <= v < w < n:
        raise ValueError(f"pair ({v}, {w}) out of range for n={n}")
    return v * n - v * (v + 1) // 2 + (w - v - 1)


def _row_offset(n: int, v: int) -> int:
    return v * n - v * (v + 1) // 2


def decode_index(n: int, index: int) -> Coordinate:
    """Inverse of encode_pair."""
    if not 0 <= index < pair_count(n):
        raise ValueError(f"index {index} out of range for n={n}")
    b = 2 * n - 1
    v = (b - math.isqrt(b * b - 8 * index)) // 2
    # isqrt rounding can leave v one off in either direction
    while v > 0 and _row_offset(n, v) > index:
        v -= 1
    while _row_offset(n, v + 1) <= index:
        v += 1
    return Coordinate(v, index - _row_offset(n, v) + v + 1)


def incidence_sign(u: int, coordinate: Coordinate) -> int:
    """Entry of row u of the signed incidence matrix: +1 for the smaller endpoint."""
    if u == coordinate.v:
        return 1
    if u == coordinate.w:
        return -1
    raise ValueError(f"vertex {u} is not an endpoint of {coordinate}")


@dataclass(frozen=True)
class DecodeFailure:
    """Peeling could not empty the table (or exceeded the sparsity budget)."""

    reason: str
    remaining_cells: int
    recovered: int


class RecoverySketch:
    """
    Linear sketch of a vector over [0, dimension) that decodes exactly when
    the vector has at most `sparsity` non-zeros (whp).
    """

    MAGIC = b"RSK1"
    VERSION = 1
    _HEADER = struct.Struct("<4sHQQQQQQ")
    _CELL = struct.Struct("<Qq16sQ")

    def __init__(
        self,
        sparsity: int,
        rows: int,
        dimension: int,
        seed: int,
        buckets: int | None = None,
    ) -> None:
        if sparsity < 1 or rows < 1 or dimension < 1:
            raise ConfigurationError(
                f"invalid recovery sketch shape k={sparsity}, R={rows}, N={dimension}"
            )
        self.sparsity = sparsity
        self.rows = rows
        self.buckets = buckets if buckets is not None else 2 * sparsity
        self.dimension = dimension
        self.seed = seed
        # cell id (row * buckets + bucket) -> [count, index_sum, fingerprint_sum]
        self._cells: dict[int, list[int]] = {}
        self.last_decode_ops = 0

    # hashing

    def _locate(self, index: int) -> list[int]:
        return [
            row * self.buckets + mix64(self.seed, _BUCKET_TAG, row, index) % self.buckets
            for row in range(self.rows)
        ]

    def _fingerprint(self, index: int) -> int:
        return mix_field(self.seed, _FINGERPRINT_TAG, index) or 1

    def params(self) -> tuple[int, int, int, int, int]:
        return (self.sparsity, self.rows, self.buckets, self.dimension, self.seed)

    def _check_compatible(self, other: RecoverySketch) -> None:
        if self.params() != other.params():
            raise ConfigurationError(
                f"cannot combine recovery sketches {self.params()} and {other.params()}"
            )

    # linear updates

    def plan(self, index: int) -> tuple[list[int], int]:
        """Cells and fingerprint of a coordinate; shared by sketches with equal params."""
        return self._locate(index), self._fingerprint(index)

    def update(self, index: int, delta: int, plan: tuple[list[int], int] | None = None) -> int:
        """Add delta at coordinate index; returns the number of cells touched."""
        if not 0 <= index < self.dimension:
            raise ValueError(f"coordinate {index} outside [0, {self.dimension})")
        if delta == 0:
            return 0
        cell_ids, fingerprint = plan if plan is not None else self.plan(index)
        for cell_id in cell_ids:
            self._apply(self._cells, cell_id, delta, delta * index, delta * fingerprint)
        return self.rows

    @staticmethod
    def _apply(
        cells: dict[int, list[int]], cell_id: int, count: int, index_sum: int, fp_sum: int
    ) -> None:
        cell = cells.get(cell_id)
        if cell is None:
            cell = cells[cell_id] = [0, 0, 0]
        cell[0] += count
        cell[1] += index_sum
        cell[2] = (cell[2] + fp_sum) % MODULUS
        if cell[0] == 0 and cell[1] == 0 and cell[2] == 0:
            del cells[cell_id]

    def merge(self, other: RecoverySketch, sign: int = 1) -> RecoverySketch:
        """In-place self += sign * other."""
        self._check_compatible(other)
        for cell_id, (count, index_sum, fp_sum) in other._cells.items():
            self._apply(self._cells, cell_id, sign * count, sign * index_sum, sign * fp_sum)
        return self

    def add(self, other: RecoverySketch) -> RecoverySketch:
        return self.copy().merge(other)

    def subtract(self, other: RecoverySketch) -> RecoverySketch:
        return self.copy().merge(other, sign=-1)

    __add__ = add
    __sub__ = subtract

    def copy(self) -> RecoverySketch:
        clone = RecoverySketch(
            self.sparsity, self.rows, self.dimension, self.seed, buckets=self.buckets
        )
        clone._cells = {cell_id: list(cell) for cell_id, cell in self._cells.items()}
        return clone

    def empty_like(self) -> RecoverySketch:
        return RecoverySketch(
            self.sparsity, self.rows, self.dimension, self.seed, buckets=self.buckets
        )

    def is_zero(self) -> bool:
        return not self._cells

    # decoding

    def _pure(self, cell_id: int, cell: list[int]) -> tuple[int, int] | None:
        count, index_sum, fp_sum = cell
        if count == 0 or index_sum % count != 0:
            return None
        index = index_sum // count
        if not 0 <= index < self.dimension:
            return None
        if fp_sum != (count * self._fingerprint(index)) % MODULUS:
            return None
        if cell_id not in self._locate(index):
            return None
        return index, count

    def decode(self, enforce_budget: bool = True) -> dict[int, int] | DecodeFailure:
        """
        Recover the underlying vector as {index: value}.

        Returns DecodeFailure when peeling stalls with cells left, or, with
        enforce_budget, when more than `sparsity` coordinates were peeled.
        """
        cells = {cell_id: list(cell) for cell_id, cell in self._cells.items()}
        recovered: dict[int, int] = {}
        queue = deque(cells)
        ops = 0
        while queue:
            cell_id = queue.popleft()
            ops += 1
            cell = cells.get(cell_id)
            if cell is None:
                continue
            pure = self._pure(cell_id, cell)
            if pure is None:
                continue
            index, value = pure
            total = recovered.get(index, 0) + value
            if total:
                recovered[index] = total
            else:
                recovered.pop(index, None)
            fingerprint = self._fingerprint(index)
            for other in self._locate(index):
                self._apply(cells, other, -value, -value * index, -value * fingerprint)
                if other in cells:
                    queue.append(other)
            if enforce_budget and len(recovered) > self.sparsity:
                self.last_decode_ops = ops
                return DecodeFailure("sparsity budget exceeded", len(cells), len(recovered))
        self.last_decode_ops = ops
        if cells:
            logger.debug(f"peeling stalled with {len(cells)} cell(s) left")
            return DecodeFailure("peeling stalled", len(cells), len(recovered))
        return recovered

    # accounting / persistence

    def memory_words(self) -> int:
        """Words held by materialized cells."""
        return 3 * len(self._cells)

    def nominal_words(self) -> int:
        return 3 * self.rows * self.buckets

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RecoverySketch):
            return NotImplemented
        return self.params() == other.params() and self._cells == other._cells

    def __hash__(self) -> int:
        raise TypeError("RecoverySketch is mutable and unhashable")

    def to_bytes(self) -> bytes:
        """Versioned layout: header, then non-zero cells sorted by id."""
        chunks = [
            self._HEADER.pack(
                self.MAGIC,
                self.VERSION,
                self.sparsity,
                self.rows,
                self.buckets,
                self.dimension,
                self.seed,
                len(self._cells),
            )
        ]
        for cell_id in sorted(self._cells):
            count, index_sum, fp_sum = self._cells[cell_id]
            chunks.append(
                self._CELL.pack(
                    cell_id, count, index_sum.to_bytes(16, "little", signed=True), fp_sum
                )
            )
        return b"".join(chunks)

    @classmethod
    def from_bytes(cls, data: bytes) -> RecoverySketch:
        magic, version, k, rows, buckets, dimension, seed, cell_count = cls._HEADER.unpack_from(
            data, 0
        )
        if magic != cls.MAGIC or version != cls.VERSION:
            raise ConfigurationError(f"unsupported recovery sketch layout {magic!r} v{version}")
        sketch = cls(k, rows, dimension, seed, buckets=buckets)
        offset = cls._HEADER.size
        for _ in range(cell_count):
            cell_id, count, raw_index_sum, fp_sum = cls._CELL.unpack_from(data, offset)
            offset += cls._CELL.size
            sketch._cells[cell_id] = [
                count,
                int.from_bytes(raw_index_sum, "little", signed=True),
                fp_sum,
            ]
        return sketch

    def __repr__(self) -> str:
        return (
            f"RecoverySketch(k={self.sparsity}, R={self.rows}, B={self.buckets}, "
            f"cells={len(self._cells)})"
        )
