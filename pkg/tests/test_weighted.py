import random
from fractions import Fraction

import pytest
from helpers import gnp_edges

from dynsparse.errors import ConfigurationError, StreamViolation, WeightOverflow
from dynsparse.oracle import ShadowGraph, all_cuts_error
from dynsparse.sparsifier.bank import EdgeUpdate, SketchBank
from dynsparse.sparsifier.extract import sparsify
from dynsparse.sparsifier.weighted import WeightedSketchBank, ingest_weighted, sparsify_weighted
from dynsparse.utils.config import RunConfig


def _config(**overrides: object) -> RunConfig:
    return RunConfig.build("paper", independence_degree=16, **overrides)


def test_weight_routes_by_bit() -> None:
    bank = WeightedSketchBank(6, _config(checked=True), max_weight=7)
    assert bank.bits == 3
    ingest_weighted(bank, EdgeUpdate.insert(1, 4, weight=5))
    assert [sub.m for sub in bank.banks] == [1, 0, 1]
    assert bank.bits_of(4, 1) == [0, 2]
    assert bank.m == 1


def test_weight_above_maximum_rejected() -> None:
    bank = WeightedSketchBank(6, _config(), max_weight=15)
    with pytest.raises(WeightOverflow):
        bank.ingest(EdgeUpdate.insert(0, 1, weight=16))
    assert all(sub.updates == 0 for sub in bank.banks)


def test_bits_from_configuration() -> None:
    bank = WeightedSketchBank(4, _config(weighted_bits=2))
    assert (bank.bits, bank.max_weight) == (2, 3)
    with pytest.raises(ConfigurationError):
        WeightedSketchBank(4, _config())
    with pytest.raises(ConfigurationError):
        bank.bits_of(0, 1)


def test_checked_mode_matches_weights_on_delete() -> None:
    bank = WeightedSketchBank(5, _config(checked=True), max_weight=7)
    bank.ingest(EdgeUpdate.insert(0, 1, weight=3))
    with pytest.raises(StreamViolation):
        bank.ingest(EdgeUpdate.delete(0, 1, weight=2))
    with pytest.raises(StreamViolation):
        bank.ingest(EdgeUpdate.insert(1, 0, weight=3))
    bank.ingest(EdgeUpdate.delete(1, 0, weight=3))
    assert all(sub.m == 0 for sub in bank.banks)


def test_out_of_range_insert_leaves_no_shadow_weight() -> None:
    bank = WeightedSketchBank(6, _config(checked=True), max_weight=7)
    with pytest.raises(StreamViolation, match="outside vertex range"):
        bank.ingest(EdgeUpdate.insert(1, 9, weight=3))
    assert bank.bits_of(1, 9) == []
    assert bank.m == 0
    assert all(sub.updates == 0 for sub in bank.banks)


def test_all_ones_matches_the_unweighted_pipeline() -> None:
    edges = [(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)]
    weighted = WeightedSketchBank(6, _config(seed=42), max_weight=3)
    plain = SketchBank(6, _config(seed=42))
    for u, v in edges:
        weighted.ingest(EdgeUpdate.insert(u, v))
        plain.ingest(EdgeUpdate.insert(u, v))
    assert weighted.banks[0].digest() == plain.digest()
    assert sparsify_weighted(weighted).lines() == sparsify(plain).lines()


def test_weighted_cycle_cuts_are_exact() -> None:
    n = 8
    edges = [(v, (v + 1) % n, v + 1) for v in range(n)]
    bank = WeightedSketchBank(n, _config(), max_weight=8)
    for u, v, w in edges:
        bank.ingest(EdgeUpdate.insert(u, v, weight=w))
    sp = sparsify_weighted(bank)
    assert sp.weights() == {(min(u, v), max(u, v)): Fraction(w) for u, v, w in edges}
    report = all_cuts_error(ShadowGraph.from_edges(n, edges), sp)
    assert report.max_error == 0.0


@pytest.mark.slow
def test_weighted_cuts_preserved_in_the_sampling_regime() -> None:
    n = 12
    passed = 0
    trials = 40
    for seed in range(trials):
        rng = random.Random(seed)
        edges = [(u, v, rng.randint(1, 15)) for u, v in gnp_edges(n, 0.5, seed=200 + seed)]
        bank = WeightedSketchBank(n, RunConfig.build("desk", seed=seed), max_weight=15)
        assert bank.banks[0].params.sample_rate(2) < 1
        for u, v, w in edges:
            bank.ingest(EdgeUpdate.insert(u, v, weight=w))
        sp = sparsify_weighted(bank)
        assert set(sp.weights()) <= {(u, v) for u, v, _ in edges}
        report = all_cuts_error(ShadowGraph.from_edges(n, edges), sp)
        passed += report.passes(bank.config.epsilon)
    assert passed >= 0.95 * trials
