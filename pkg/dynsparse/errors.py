"""Exception hierarchy shared by the sketches, the pipeline and the CLI."""

from __future__ import annotations

from collections.abc import Iterable


class SparsifierError(Exception):
    """Base class for every error raised by dynsparse."""


class ConfigurationError(SparsifierError):
    """Invalid parameters, or sketches combined with mismatched parameters."""


class StreamViolation(SparsifierError):
    """The update stream broke the insert/delete validity contract."""


class StreamFormatError(StreamViolation):
    """A stream file line could not be parsed."""

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class WeightOverflow(StreamViolation):
    """An edge weight does not fit the configured number of weight bits."""


class RoundExhaustion(SparsifierError):
    """Borůvka rounds ran out while some component still had boundary edges."""

    def __init__(self, active_components: int, rounds: int) -> None:
        super().__init__(
            f"{active_components} component(s) still active after {rounds} rounds"
        )
        self.active_components = active_components
        self.rounds = rounds


class LevelBuildError(SparsifierError):
    """Every connectivity copy failed for one sampling exponent."""

    def __init__(self, exponent: int) -> None:
        super().__init__(f"no spanning-forest copy succeeded at exponent {exponent}")
        self.exponent = exponent


class DisconnectedPair(SparsifierError):
    """The two vertices lie in different components of the whole graph."""

    def __init__(self, u: int, v: int) -> None:
        super().__init__(f"vertices {u} and {v} are not connected")
        self.u = u
        self.v = v


class RecoveryError(SparsifierError):
    """Sparse recovery failed inside PARTITION or RECOVER."""

    def __init__(self, level: int, round_index: int, supernode: int, reason: str) -> None:
        super().__init__(
            f"sparse recovery failed at level a={level}, round r={round_index}, "
            f"supernode {supernode}: {reason}"
        )
        self.level = level
        self.round_index = round_index
        self.supernode = supernode
        self.reason = reason


class PartitionStall(SparsifierError):
    """A PARTITION round peeled nothing while supernodes remained."""

    def __init__(self, level: int, round_index: int, stuck: Iterable[int]) -> None:
        self.stuck = sorted(stuck)
        preview = ", ".join(str(s) for s in self.stuck[:8])
        if len(self.stuck) > 8:
            preview += ", ..."
        super().__init__(
            f"partition stalled at level a={level}, round r={round_index}: "
            f"{len(self.stuck)} supernode(s) left [{preview}]"
        )
        self.level = level
        self.round_index = round_index


class PeelFailure(SparsifierError):
    """No remaining vertex met the degree bound of the weak-edge peel."""


class VerificationFailure(SparsifierError):
    """The sparsifier missed the cut tolerance on the reference graph."""

    def __init__(self, max_error: float, epsilon: float) -> None:
        super().__init__(f"max relative cut error {max_error:.6f} exceeds epsilon {epsilon}")
        self.max_error = max_error
        self.epsilon = epsilon
