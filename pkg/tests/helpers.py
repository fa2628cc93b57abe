"""Graph and stream builders shared by the test modules."""

from __future__ import annotations

import random
from collections.abc import Iterable

import networkx as nx

from dynsparse.sparsifier.bank import EdgeUpdate

Edge = tuple[int, int]


def complete_edges(n: int, offset: int = 0) -> list[Edge]:
    return [(offset + u, offset + v) for u in range(n) for v in range(u + 1, n)]


def gnp_edges(n: int, p: float, seed: int) -> list[Edge]:
    graph = nx.gnp_random_graph(n, p, seed=seed)
    return sorted((min(u, v), max(u, v)) for u, v in graph.edges())


def churned_stream(n: int, edges: Iterable[Edge], churn: float, seed: int) -> list[EdgeUpdate]:
    """
    Inserts of `edges` plus transient edges, shuffled; the transient edges are
    deleted afterwards, so the stream nets to exactly `edges`.
    """
    rng = random.Random(seed)
    kept = list(edges)
    present = set(kept)
    absent = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in present]
    transient = rng.sample(absent, min(len(absent), int(churn * len(kept))))
    inserts = [EdgeUpdate.insert(u, v) for u, v in kept + transient]
    rng.shuffle(inserts)
    deletes = [EdgeUpdate.delete(u, v) for u, v in transient]
    rng.shuffle(deletes)
    return inserts + deletes
