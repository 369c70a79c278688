from stochorder.rng import GRID, SplitMix64, random_discrete


def test_reference_stream():
    # published SplitMix64 outputs for seed 1234567
    rng = SplitMix64(1234567)
    assert [rng.next_u64() for _ in range(3)] == [
        6457827717110365317, 3203168211198807973, 9817491932198370423]


def test_uniform_and_randint_ranges():
    rng = SplitMix64(0)
    us = [rng.uniform() for _ in range(1000)]
    assert all(0 < u < 1 for u in us)
    ks = [rng.randint(2, 5) for _ in range(1000)]
    assert set(ks) == {2, 3, 4, 5}


def test_random_discrete_on_grid():
    rng = SplitMix64(7)
    for _ in range(100):
        X = random_discrete(rng, 4)
        assert 1 <= len(X.atoms) <= 4
        assert all(x in GRID for x in X.xs)
