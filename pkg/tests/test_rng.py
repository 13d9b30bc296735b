"""splitmix64 stream: reference vectors, ranges, substream mixing."""

import statistics

from eden.rng import ALGORITHM_ID, MASK64, SplitMix64, mix


class TestStream:
    def test_reference_vector_seed_zero(self):
        # first outputs of the reference splitmix64 for seed 0
        r = SplitMix64(0)
        assert r.next_u64() == 0xE220A8397B1DCDAF
        assert r.next_u64() == 0x6E789E6AA1B965F4
        assert r.next_u64() == 0x06C45D188009454F

    def test_reference_vector_seed_1234567(self):
        r = SplitMix64(1234567)
        assert r.next_u64() == 0x599ED017FB08FC85
        assert r.next_u64() == 0x2C73F08458540FA5

    def test_same_seed_same_stream(self):
        a = SplitMix64(99)
        b = SplitMix64(99)
        assert [a.next_u64() for _ in range(64)] == [b.next_u64() for _ in range(64)]

    def test_seed_wraps_to_64_bits(self):
        assert SplitMix64((1 << 64) + 5).state == 5

    def test_state_is_resumable(self):
        a = SplitMix64(7)
        a.next_u64()
        b = SplitMix64(0)
        b.state = a.state
        assert a.next_u64() == b.next_u64()

    def test_copy_is_independent(self):
        a = SplitMix64(3)
        c = a.copy()
        a.next_u64()
        assert c.state != a.state


class TestDerived:
    def test_uniform_range(self):
        r = SplitMix64(11)
        for _ in range(2000):
            u = r.uniform()
            assert 0.0 <= u < 1.0

    def test_randrange_bounds(self):
        r = SplitMix64(12)
        for n in (1, 2, 7, 9, 1000):
            for _ in range(200):
                assert 0 <= r.randrange(n) < n

    def test_randrange_covers_small_range(self):
        r = SplitMix64(13)
        assert {r.randrange(3) for _ in range(200)} == {0, 1, 2}

    def test_normal_moments(self):
        r = SplitMix64(14)
        xs = [r.normal() for _ in range(4000)]
        assert abs(statistics.fmean(xs)) < 0.1
        assert abs(statistics.pstdev(xs) - 1.0) < 0.1


class TestMix:
    def test_stateless_and_deterministic(self):
        assert mix(42, 7) == mix(42, 7)
        assert 0 <= mix(42, 7) <= MASK64

    def test_salt_changes_output(self):
        outs = {mix(0, salt) for salt in range(100)}
        assert len(outs) == 100

    def test_seed_changes_output(self):
        outs = {mix(seed, 0) for seed in range(100)}
        assert len(outs) == 100

    def test_algorithm_tag(self):
        assert ALGORITHM_ID == "splitmix64"
