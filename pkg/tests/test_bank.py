import random
from collections.abc import Callable

import pytest
from helpers import churned_stream, gnp_edges

from dynsparse.errors import StreamViolation
from dynsparse.sparsifier.bank import EdgeUpdate, SketchBank
from dynsparse.utils.config import RunConfig

MakeBank = Callable[..., SketchBank]


def test_update_validation() -> None:
    with pytest.raises(StreamViolation):
        EdgeUpdate(1, 1, 1)
    with pytest.raises(StreamViolation):
        EdgeUpdate(1, 2, 0)
    with pytest.raises(StreamViolation):
        EdgeUpdate.insert(1, 2, weight=0)
    assert EdgeUpdate.delete(7, 3).pair == (3, 7)


def test_insert_then_delete_restores_fresh_state(make_bank: MakeBank) -> None:
    fresh = make_bank(12, profile="desk")
    bank = make_bank(12, [(2, 9)], profile="desk")
    assert bank.digest() != fresh.digest()
    bank.ingest(EdgeUpdate.delete(9, 2))
    assert bank.digest() == fresh.digest()
    assert bank.memory_words() == 0
    assert bank.m == 0
    assert bank.updates == 2


def test_state_depends_only_on_the_net_graph(make_bank: MakeBank) -> None:
    n = 14
    edges = gnp_edges(n, 0.3, seed=2)
    first = make_bank(n, churned_stream(n, edges, churn=0.5, seed=1), profile="desk")
    second = make_bank(n, churned_stream(n, edges, churn=0.8, seed=2), profile="desk")
    direct = make_bank(n, edges, profile="desk")
    assert first.digest() == second.digest() == direct.digest()
    assert first.m == len(edges)


def test_different_seeds_give_different_state(make_bank: MakeBank) -> None:
    edges = [(0, 1), (1, 2)]
    assert (
        make_bank(5, edges, profile="desk", seed=1).digest()
        != make_bank(5, edges, profile="desk", seed=2).digest()
    )


def test_checked_mode_rejects_invalid_sequences(make_bank: MakeBank) -> None:
    bank = make_bank(6, [(0, 1)], profile="desk", checked=True)
    with pytest.raises(StreamViolation):
        bank.ingest(EdgeUpdate.insert(1, 0))
    with pytest.raises(StreamViolation):
        bank.ingest(EdgeUpdate.delete(2, 3))
    assert bank.present_edges() == {(0, 1): 1}


def test_unchecked_mode_keeps_no_shadow(make_bank: MakeBank) -> None:
    assert make_bank(6, [(0, 1)], profile="desk").present_edges() is None


def test_out_of_range_and_weighted_updates_rejected(make_bank: MakeBank) -> None:
    bank = make_bank(6, profile="desk")
    with pytest.raises(StreamViolation):
        bank.ingest(EdgeUpdate.insert(0, 6))
    with pytest.raises(StreamViolation):
        bank.ingest(EdgeUpdate.insert(0, 1, weight=2))
    assert bank.updates == 0


def test_snapshot_is_independent(make_bank: MakeBank) -> None:
    bank = make_bank(8, [(0, 1), (2, 3)], profile="desk")
    frozen = bank.snapshot()
    before = frozen.digest()
    bank.ingest(EdgeUpdate.insert(4, 5))
    assert frozen.digest() == before
    assert bank.digest() != before


def test_stats_track_updates(make_bank: MakeBank) -> None:
    bank = make_bank(10, [(0, 1), (1, 2), (2, 3)], profile="desk")
    stats = bank.stats()
    assert stats.m == 3
    assert stats.updates == 3
    assert sum(stats.touched_histogram.values()) == 3
    assert stats.mean_touched > 0
    assert stats.memory_words == bank.memory_words() > 0


def test_every_update_touches_exponent_zero(make_bank: MakeBank) -> None:
    bank = make_bank(10, [(3, 4)], profile="desk")
    p = bank.params
    assert all(3 in bank.recovery[0][r] and 4 in bank.recovery[0][r] for r in range(p.r_max))
    assert 3 in bank.star[0] and 4 in bank.star[0]
    assert all(not bank.forests[0][b].is_zero() for b in range(p.b_max))


@pytest.mark.slow
def test_update_cost_grows_polylogarithmically() -> None:
    """
    Mean touched cells at n = 2^14 against n = 2^10 stay within the
    (14/10)^3 polylog ratio, with slack.
    """
    rng = random.Random(3)
    means = {}
    for log_n in (10, 14):
        n = 1 << log_n
        config = RunConfig.build("desk", independence_degree=8)
        bank = SketchBank(n, config)
        pairs = set()
        while len(pairs) < 50:
            u, v = rng.sample(range(n), 2)
            pairs.add((min(u, v), max(u, v)))
        for u, v in sorted(pairs):
            bank.ingest(EdgeUpdate.insert(u, v))
        means[log_n] = bank.stats().mean_touched
    assert means[14] / means[10] <= (14 / 10) ** 3 * 1.5
