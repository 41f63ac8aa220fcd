from collections import Counter

import pytest

from supplykg.rng import SplitMix64


def test_known_stream():
    # Reference values for seed 1234567: computed once from the published
    # splitmix64 recurrence (finalizer constants 0xBF58476D1CE4E5B9,
    # 0x94D049BB133111EB) and frozen here.
    rng = SplitMix64(1234567)
    assert [rng.next_u64() for _ in range(4)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
        4593380528125082431,
    ]


def test_zero_seed_stream():
    rng = SplitMix64(0)
    assert rng.next_u64() == 16294208416658607535


def test_same_seed_same_stream():
    a, b = SplitMix64(42), SplitMix64(42)
    assert [a.randint(0, 100) for _ in range(50)] == [b.randint(0, 100) for _ in range(50)]


def test_randint_bounds_and_degenerate_range():
    rng = SplitMix64(7)
    values = [rng.randint(3, 9) for _ in range(500)]
    assert min(values) == 3 and max(values) == 9
    assert rng.randint(5, 5) == 5
    with pytest.raises(ValueError):
        rng.randint(5, 4)


def test_degenerate_range_still_advances_stream():
    # pinning a range must not change how many draws later samples see
    a, b = SplitMix64(99), SplitMix64(99)
    a.randint(10, 20)
    b.randint(15, 15)
    assert a.next_u64() == b.next_u64()


def test_choice():
    rng = SplitMix64(11)
    seq = ["x", "y", "z"]
    picks = Counter(rng.choice(seq) for _ in range(300))
    assert set(picks) == set(seq)
    with pytest.raises(ValueError):
        rng.choice([])


def test_rough_uniformity():
    rng = SplitMix64(2024)
    counts = Counter(rng.randint(0, 9) for _ in range(10000))
    assert all(800 < counts[d] < 1200 for d in range(10))
