import random
from collections import Counter

import networkx as nx
import numpy as np
import pytest
from helpers import churned_stream, gnp_edges

from dynsparse.errors import ConfigurationError, RoundExhaustion
from dynsparse.sketches.l0_forest import (
    ForestSketch,
    L0Sampler,
    NoSample,
    Sample,
    spanning_forest,
)
from dynsparse.sketches.sparse_recovery import Coordinate, pair_count
from dynsparse.sketches.union_find import UnionFind

DIMENSION = pair_count(64)


def _rounds(n: int) -> int:
    return max(1, int(np.ceil(np.log2(n)))) + 2


def test_insert_then_delete_is_zero() -> None:
    sampler = L0Sampler(DIMENSION, seed=3)
    sampler.update(10, 1)
    sampler.update(10, -1)
    assert sampler.is_zero()
    assert sampler.sample() == NoSample(empty=True)


def test_single_coordinate_is_sampled() -> None:
    sampler = L0Sampler(DIMENSION, seed=3)
    sampler.update(1999, -1)
    assert sampler.sample() == Sample(1999, -1)


def test_sample_returns_a_nonzero_coordinate() -> None:
    rng = random.Random(8)
    valid = 0
    trials = 500
    for seed in range(trials):
        vector = {index: rng.choice([-1, 1]) for index in rng.sample(range(DIMENSION), 100)}
        sampler = L0Sampler(DIMENSION, seed=seed)
        for index, value in vector.items():
            sampler.update(index, value)
        drawn = sampler.sample()
        if isinstance(drawn, Sample):
            assert vector[drawn.index] == drawn.value
            valid += 1
    assert valid >= 0.95 * trials


def test_samples_spread_over_the_support() -> None:
    support = [3, 50, 77, 120, 400, 512, 900, 1500, 1800, 2000]
    counts: Counter[int] = Counter()
    trials = 2000
    for seed in range(trials):
        sampler = L0Sampler(DIMENSION, seed=seed)
        for index in support:
            sampler.update(index, 1)
        drawn = sampler.sample()
        if isinstance(drawn, Sample):
            counts[drawn.index] += 1
    assert set(counts) <= set(support)
    for index in support:
        assert 0.02 <= counts[index] / trials <= 0.35


def test_merge_is_linear() -> None:
    x = L0Sampler(DIMENSION, seed=5)
    y = L0Sampler(DIMENSION, seed=5)
    both = L0Sampler(DIMENSION, seed=5)
    for index in (4, 9, 300):
        x.update(index, 1)
        both.update(index, 1)
    for index in (9, 1000):
        y.update(index, -1)
        both.update(index, -1)
    x += y
    assert x == both
    with pytest.raises(ConfigurationError):
        x.merge(L0Sampler(DIMENSION, seed=6))


def test_union_find_groups_and_labels() -> None:
    uf = UnionFind(6)
    assert uf.union(4, 2)
    assert uf.union(2, 5)
    assert not uf.union(5, 4)
    assert uf.connected(4, 5)
    assert not uf.connected(0, 4)
    assert uf.components == 4
    assert uf.labels().tolist() == [0, 1, 2, 3, 2, 2]
    assert sorted(map(sorted, uf.groups().values())) == [[0], [1], [2, 4, 5], [3]]


def test_edgeless_graph_gives_singletons() -> None:
    result = spanning_forest(ForestSketch(10, seed=1, rounds=_rounds(10)))
    assert result.edges == []
    assert result.component_count == 10
    assert result.labels.tolist() == list(range(10))


def test_path_is_spanned() -> None:
    n = 50
    successes = 0
    for seed in range(5):
        forest = ForestSketch(n, seed=seed, rounds=_rounds(n))
        for v in range(n - 1):
            forest.update(v, v + 1, 1)
        try:
            result = spanning_forest(forest)
        except RoundExhaustion:
            continue
        assert set(result.edges) <= {Coordinate(v, v + 1) for v in range(n - 1)}
        if result.component_count == 1 and len(result.edges) == n - 1:
            successes += 1
    assert successes >= 4


@pytest.mark.slow
def test_components_match_after_churn() -> None:
    n = 100
    trials = 100
    matches = 0
    for trial in range(trials):
        edges = gnp_edges(n, 0.05, seed=trial)
        forest = ForestSketch(n, seed=1000 + trial, rounds=_rounds(n))
        for upd in churned_stream(n, edges, churn=0.3, seed=trial):
            forest.update(upd.u, upd.v, upd.sign)
        graph = nx.Graph(edges)
        graph.add_nodes_from(range(n))
        expected = sorted(sorted(c) for c in nx.connected_components(graph))
        try:
            result = spanning_forest(forest)
        except RoundExhaustion:
            continue
        present = set(edges)
        assert all((c.v, c.w) in present for c in result.edges)
        if sorted(result.components.values()) == expected:
            matches += 1
    assert matches >= 0.95 * trials


def test_restricting_to_vertices() -> None:
    forest = ForestSketch(6, seed=2, rounds=_rounds(6))
    for u, v in [(0, 1), (1, 2), (3, 4)]:
        forest.update(u, v, 1)
    result = spanning_forest(forest, vertices=[0, 1, 3])
    assert sorted(result.components.values()) == [[0, 1], [3]]


def test_too_few_rounds_raise() -> None:
    n = 32
    for seed in range(5):
        forest = ForestSketch(n, seed=seed, rounds=1)
        for v in range(n - 1):
            forest.update(v, v + 1, 1)
        with pytest.raises(RoundExhaustion):
            spanning_forest(forest)


def test_forest_state_ignores_update_order() -> None:
    edges = [(0, 1), (2, 3), (1, 3), (0, 4)]
    a = ForestSketch(5, seed=9, rounds=3)
    b = ForestSketch(5, seed=9, rounds=3)
    for u, v in edges:
        a.update(u, v, 1)
    for u, v in reversed(edges):
        b.update(v, u, 1)
    b.update(2, 4, 1)
    b.update(4, 2, -1)
    assert list(a.state()) == list(b.state())
