"""
Exact desk-scale reference computations

A ShadowGraph mirrors the net effect of a stream in a networkx graph. The
functions here compute exact cut values, edge connectivities (max-flow),
strong connectivities (recursive global min-cut) and cut errors of a
sparsifier, and are what the statistical tests compare the sketches against.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np
from networkx.algorithms.flow import edmonds_karp

from .errors import ConfigurationError, PeelFailure, StreamViolation
from .sparsifier.bank import EdgeUpdate
from .sparsifier.extract import Sparsifier
from .sparsifier.levels import LevelStructure
from .utils.config import SketchParameters

logger = logging.getLogger(__name__)

DEFAULT_MAX_VERTICES = 256
EXHAUSTIVE_LIMIT = 16
SAMPLED_CUTS = 10_000


class ShadowGraph:
    """Undirected weighted graph kept in lockstep with a stream."""

    def __init__(self, n: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> None:
        if not 1 <= n <= max_vertices:
            raise ConfigurationError(f"shadow graph supports 1..{max_vertices} vertices, got {n}")
        self.n = n
        self.graph = nx.Graph()
        self.graph.add_nodes_from(range(n))

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[tuple[int, int] | tuple[int, int, int]]
    ) -> ShadowGraph:
        shadow = cls(n)
        for edge in edges:
            u, v, *rest = edge
            shadow.apply(EdgeUpdate.insert(u, v, rest[0] if rest else 1))
        return shadow

    def apply(self, upd: EdgeUpdate) -> None:
        """
        Mirror one update.

        Raises:
            StreamViolation: invalid insert/delete or out-of-range endpoint.
        """
        u, v = upd.pair
        if v >= self.n:
            raise StreamViolation(f"edge ({u}, {v}) outside vertex range [0, {self.n})")
        if upd.sign > 0:
            if self.graph.has_edge(u, v):
                raise StreamViolation(f"edge {(u, v)} inserted while already present")
            self.graph.add_edge(u, v, weight=upd.weight)
        else:
            if not self.graph.has_edge(u, v):
                raise StreamViolation(f"edge {(u, v)} deleted while absent")
            if self.graph[u][v]["weight"] != upd.weight:
                raise StreamViolation(f"edge {(u, v)} deleted with mismatched weight")
            self.graph.remove_edge(u, v)

    @property
    def m(self) -> int:
        return int(self.graph.number_of_edges())

    def edges(self) -> list[tuple[int, int, int]]:
        """Sorted (u, v, weight) with u < v."""
        return sorted(
            (min(u, v), max(u, v), int(w)) for u, v, w in self.graph.edges(data="weight")
        )

    def weight(self, u: int, v: int) -> int:
        data = self.graph.get_edge_data(u, v)
        return 0 if data is None else int(data["weight"])

    def components(self) -> list[set[int]]:
        return [set(c) for c in nx.connected_components(self.graph)]


def cut_value(g: ShadowGraph, side: Iterable[int]) -> int:
    """Total weight crossing (S, V - S)."""
    members = set(side)
    if not members or len(members) >= g.n or not members <= set(range(g.n)):
        raise ValueError("cut side must be a non-empty proper subset of the vertices")
    return int(nx.cut_size(g.graph, members, weight="weight"))


def edge_connectivity(g: ShadowGraph, u: int, v: int) -> int:
    """Minimum weight of a cut separating u and v; 0 if they are disconnected."""
    if u == v:
        raise ValueError("edge connectivity needs two distinct vertices")
    if not nx.has_path(g.graph, u, v):
        return 0
    return int(nx.maximum_flow_value(g.graph, u, v, capacity="weight", flow_func=edmonds_karp))


def strengths(g: ShadowGraph) -> dict[tuple[int, int], int]:
    """
    Strong connectivity of every edge.

    Each connected induced piece H gives all of its edges strength at least
    its global min-cut; H is then split along that cut and both sides are
    processed the same way.
    """
    result: dict[tuple[int, int], int] = {}
    stack: list[tuple[set[int], int]] = [(set(range(g.n)), 0)]
    while stack:
        nodes, inherited = stack.pop()
        piece = g.graph.subgraph(nodes)
        if piece.number_of_edges() == 0:
            continue
        for component in nx.connected_components(piece):
            if len(component) < 2:
                continue
            sub = g.graph.subgraph(component)
            value, (side_a, side_b) = nx.stoer_wagner(sub, weight="weight")
            level = max(inherited, int(value))
            for x, y in sub.edges():
                key = (x, y) if x < y else (y, x)
                result[key] = max(result.get(key, 0), level)
            stack.append((set(side_a), level))
            stack.append((set(side_b), level))
    return result


def strong_connectivity(g: ShadowGraph, u: int, v: int) -> int:
    key = (u, v) if u < v else (v, u)
    if not g.graph.has_edge(*key):
        raise ValueError(f"{key} is not an edge")
    return strengths(g)[key]


def weak_edge_count(g: ShadowGraph, k: int) -> int:
    """Edges with strength below k; never more than k(n - 1)."""
    return sum(1 for s in strengths(g).values() if s < k)


def inverse_strength_sum(g: ShadowGraph) -> Fraction:
    """Sum of 1/s_e over the edges; at most n - 1."""
    return sum((Fraction(1, s) for s in strengths(g).values()), Fraction(0))


def expected_size(g: ShadowGraph, levels: LevelStructure, params: SketchParameters) -> Fraction:
    """Sum of p_e = min(1, gamma log^2 n / (eps^2 2^L(e))) over the edges of g."""
    return sum(
        (params.sample_rate(levels.edge_level(u, v)) for u, v, _ in g.edges()), Fraction(0)
    )


@dataclass(frozen=True)
class CutErrorReport:
    max_error: float
    mean_error: float
    cuts: int
    exhaustive: bool

    def passes(self, epsilon: float) -> bool:
        return self.max_error <= epsilon


def _edge_arrays(
    n: int, weights: Mapping[tuple[int, int], float | Fraction | int]
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if not weights:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, np.zeros(0, dtype=np.float64)
    pairs = np.array(list(weights), dtype=np.int64)
    if pairs.max() >= n:
        raise ValueError("sparsifier edge outside the vertex range")
    values = np.array([float(w) for w in weights.values()], dtype=np.float64)
    return pairs[:, 0], pairs[:, 1], values


def _cut_weights(
    sides: np.ndarray, arrays: tuple[np.ndarray, np.ndarray, np.ndarray]
) -> np.ndarray:
    us, vs, ws = arrays
    if ws.size == 0:
        return np.zeros(sides.shape[0], dtype=np.float64)
    crossing = sides[:, us] != sides[:, vs]
    return crossing.astype(np.float64) @ ws


def all_cuts_error(
    g: ShadowGraph,
    sp: Sparsifier | Mapping[tuple[int, int], float | Fraction | int],
    samples: int = SAMPLED_CUTS,
    seed: int = 0,
) -> CutErrorReport:
    """
    Max and mean of |w_sp(S) - w_g(S)| / w_g(S) over cuts with w_g(S) > 0.

    Every cut is enumerated for n <= 16; larger graphs use `samples` random
    cuts.
    """
    n = g.n
    weights = sp.weights() if isinstance(sp, Sparsifier) else sp
    if n < 2:
        return CutErrorReport(0.0, 0.0, 0, True)
    exhaustive = n <= EXHAUSTIVE_LIMIT
    if exhaustive:
        # vertex n-1 always outside S: each cut counted once
        masks = np.arange(1, 1 << (n - 1), dtype=np.int64)
        sides = ((masks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)
    else:
        rng = np.random.default_rng(seed)
        sides = rng.integers(0, 2, size=(samples, n)).astype(bool)
        proper = sides.any(axis=1) & ~sides.all(axis=1)
        sides = sides[proper]

    reference = _cut_weights(sides, _edge_arrays(n, {(u, v): w for u, v, w in g.edges()}))
    approx = _cut_weights(sides, _edge_arrays(n, weights))
    nonzero = reference > 0
    if not nonzero.any():
        return CutErrorReport(0.0, 0.0, 0, exhaustive)
    errors = np.abs(approx[nonzero] - reference[nonzero]) / reference[nonzero]
    return CutErrorReport(
        max_error=float(errors.max()),
        mean_error=float(errors.mean()),
        cuts=int(nonzero.sum()),
        exhaustive=exhaustive,
    )


def w_partition_check(g: ShadowGraph, k: int) -> list[list[int]]:
    """
    Greedy peel into W_1, ..., W_t: each round removes every vertex whose
    weighted degree into the remaining graph is at most 2k.

    Raises:
        PeelFailure: a round finds no qualifying vertex, or the peel needs more
            than ceil(log2 n) rounds.
    """
    remaining = set(range(g.n))
    rounds: list[list[int]] = []
    while remaining:
        view = g.graph.subgraph(remaining)
        peeled = sorted(v for v in remaining if view.degree(v, weight="weight") <= 2 * k)
        if not peeled:
            raise PeelFailure(
                f"no vertex of degree <= {2 * k} among {len(remaining)} remaining"
            )
        rounds.append(peeled)
        remaining.difference_update(peeled)
    bound = max(1, math.ceil(math.log2(g.n))) if g.n > 1 else 1
    if len(rounds) > bound:
        raise PeelFailure(f"peel took {len(rounds)} rounds, above ceil(log2 n) = {bound}")
    logger.debug(f"Weak-edge peel: {len(rounds)} round(s) for k={k}")
    return rounds
