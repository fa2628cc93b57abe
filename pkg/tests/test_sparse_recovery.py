import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynsparse.errors import ConfigurationError
from dynsparse.sketches.sparse_recovery import (
    Coordinate,
    DecodeFailure,
    RecoverySketch,
    decode_index,
    encode_pair,
    incidence_sign,
    pair_count,
)

DIMENSION = 1 << 20


def _sketch(seed: int = 1, k: int = 64, rows: int = 4, dimension: int = DIMENSION) -> RecoverySketch:
    return RecoverySketch(k, rows, dimension, seed)


def _encode(vector: dict[int, int], seed: int = 1, k: int = 64, rows: int = 4) -> RecoverySketch:
    sketch = _sketch(seed, k, rows)
    for index, value in vector.items():
        sketch.update(index, value)
    return sketch


sparse_vectors = st.dictionaries(
    st.integers(min_value=0, max_value=DIMENSION - 1),
    st.integers(min_value=-3, max_value=3).filter(bool),
    max_size=20,
)


@pytest.mark.parametrize("n", [2, 3, 7, 64, 1000])
def test_pair_encoding_is_a_bijection(n: int) -> None:
    indices = [encode_pair(n, v, w) for v in range(min(n, 40)) for w in range(v + 1, n)]
    assert len(set(indices)) == len(indices)
    assert all(0 <= i < pair_count(n) for i in indices)
    for v in range(min(n, 40)):
        for w in range(v + 1, n):
            assert decode_index(n, encode_pair(n, v, w)) == Coordinate(v, w)


def test_last_index_decodes() -> None:
    n = 1 << 17
    assert decode_index(n, pair_count(n) - 1) == Coordinate(n - 2, n - 1)


def test_encode_rejects_out_of_range() -> None:
    with pytest.raises(ValueError):
        encode_pair(5, 2, 5)
    with pytest.raises(ValueError):
        encode_pair(5, 3, 3)
    with pytest.raises(ValueError):
        decode_index(5, 10)


def test_incidence_sign() -> None:
    c = Coordinate.of(9, 4)
    assert c == Coordinate(4, 9)
    assert incidence_sign(4, c) == 1
    assert incidence_sign(9, c) == -1
    with pytest.raises(ValueError):
        incidence_sign(5, c)


def test_insert_then_delete_restores_zero() -> None:
    sketch = _sketch()
    sketch.update(123, 1)
    sketch.update(123, -1)
    assert sketch.is_zero()
    assert sketch == _sketch()


def test_one_sparse_decodes() -> None:
    sketch = _sketch()
    sketch.update(0, 1)
    assert sketch.decode() == {0: 1}


def test_zero_vector_decodes_to_empty() -> None:
    assert _sketch().decode() == {}


def test_heavy_churn_collapsing_to_sparse_vector() -> None:
    rng = random.Random(4)
    target = {rng.randrange(DIMENSION): rng.choice([-2, -1, 1, 2]) for _ in range(40)}
    updates: list[tuple[int, int]] = []
    for index, value in target.items():
        step = 1 if value > 0 else -1
        updates.extend((index, step) for _ in range(abs(value)))
    while len(updates) < 10_000:
        index = rng.randrange(DIMENSION)
        updates.extend([(index, 1), (index, -1)])
    rng.shuffle(updates)

    sketch = _sketch(seed=8)
    for index, delta in updates:
        sketch.update(index, delta)
    assert sketch.decode() == target


def test_budget_exceeded_is_reported() -> None:
    rng = random.Random(6)
    k = 16
    failures = 0
    for seed in range(20):
        vector = {index: 1 for index in rng.sample(range(DIMENSION), k + 10)}
        result = _encode(vector, seed=seed, k=k).decode()
        failures += isinstance(result, DecodeFailure)
    assert failures == 20


def test_within_budget_decodes_exactly() -> None:
    rng = random.Random(12)
    exact = 0
    for seed in range(1000):
        size = rng.randint(1, 64)
        vector = {index: rng.choice([-1, 1]) for index in rng.sample(range(DIMENSION), size)}
        exact += _encode(vector, seed=seed).decode() == vector
    assert exact >= 999


def test_decode_work_is_linear_in_rows_times_sparsity() -> None:
    rng = random.Random(2)
    vector = {index: 1 for index in rng.sample(range(DIMENSION), 50)}
    sketch = _encode(vector)
    assert sketch.decode() == vector
    assert sketch.last_decode_ops <= 2 * sketch.rows * 50


def test_failed_decode_does_not_mutate() -> None:
    vector = {index: 1 for index in range(100)}
    sketch = _encode(vector, k=8)
    before = sketch.to_bytes()
    assert isinstance(sketch.decode(), DecodeFailure)
    assert sketch.to_bytes() == before


@settings(max_examples=50, deadline=None)
@given(sparse_vectors, sparse_vectors)
def test_sketch_is_linear(x: dict[int, int], y: dict[int, int]) -> None:
    total = dict(x)
    for index, value in y.items():
        total[index] = total.get(index, 0) + value
    total = {index: value for index, value in total.items() if value}
    assert _encode(x) + _encode(y) == _encode(total)
    assert _encode(total) - _encode(y) == _encode(x)


@settings(max_examples=50, deadline=None)
@given(sparse_vectors)
def test_decoded_vector_re_encodes_to_the_same_sketch(x: dict[int, int]) -> None:
    sketch = _encode(x)
    decoded = sketch.decode()
    assert isinstance(decoded, dict)
    assert (sketch - _encode(decoded)).is_zero()


def test_opposite_rows_of_an_edge_cancel() -> None:
    n = 30
    index = encode_pair(n, 3, 11)
    low, high = _sketch(dimension=pair_count(n)), _sketch(dimension=pair_count(n))
    low.update(index, incidence_sign(3, Coordinate(3, 11)))
    high.update(index, incidence_sign(11, Coordinate(3, 11)))
    assert (low + high).is_zero()


def test_contracted_set_decodes_to_its_boundary() -> None:
    rng = random.Random(31)
    n = 12
    edges = [(v, w) for v in range(n) for w in range(v + 1, n) if rng.random() < 0.4]
    rows = {v: RecoverySketch(32, 4, pair_count(n), 77) for v in range(n)}
    for v, w in edges:
        index = encode_pair(n, v, w)
        rows[v].update(index, 1)
        rows[w].update(index, -1)

    members = {0, 2, 5, 7, 9}
    total = RecoverySketch(32, 4, pair_count(n), 77)
    for v in members:
        total.merge(rows[v])

    expected = {
        encode_pair(n, v, w): 1 if v in members else -1
        for v, w in edges
        if (v in members) != (w in members)
    }
    assert total.decode() == expected


def test_mismatched_parameters_rejected() -> None:
    with pytest.raises(ConfigurationError):
        _sketch(seed=1).merge(_sketch(seed=2))
    with pytest.raises(ConfigurationError):
        _sketch(k=8).merge(_sketch(k=16))
    with pytest.raises(ConfigurationError):
        RecoverySketch(0, 4, 10, 1)


def test_serialized_form_restores_the_sketch() -> None:
    sketch = _encode({5: 1, 700: -2, DIMENSION - 1: 3}, seed=99)
    restored = RecoverySketch.from_bytes(sketch.to_bytes())
    assert restored == sketch
    assert restored.decode() == sketch.decode()


def test_unknown_layout_rejected() -> None:
    data = bytearray(_sketch().to_bytes())
    data[:4] = b"XXXX"
    with pytest.raises(ConfigurationError):
        RecoverySketch.from_bytes(bytes(data))


def test_memory_grows_with_touched_cells_only() -> None:
    sketch = _sketch(k=1024)
    assert sketch.memory_words() == 0
    sketch.update(17, 1)
    assert sketch.memory_words() == 3 * sketch.rows
    assert sketch.nominal_words() == 3 * sketch.rows * sketch.buckets
