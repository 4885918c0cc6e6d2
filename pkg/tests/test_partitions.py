import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coset_ewens.errors import ResourceLimitError
from coset_ewens.partitions import (
    HARDY_RAMANUJAN_MAX_M,
    Partition,
    enumerate_partitions,
    hardy_ramanujan,
    partition_count,
)


def brute_partition_lists(m, maxpart=None):
    """Independent enumeration oracle (plain recursion, no shared code path)."""
    if maxpart is None:
        maxpart = m
    if m == 0:
        return [[]]
    out = []
    for first in range(min(m, maxpart), 0, -1):
        for rest in brute_partition_lists(m - first, first):
            out.append([first] + rest)
    return out


class TestEnumeration:
    def test_m1(self):
        assert [str(p) for p in enumerate_partitions(1)] == ["1^1"]

    def test_m4_count_and_order(self):
        parts = [p.parts_desc() for p in enumerate_partitions(4)]
        assert parts == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]

    def test_m10_against_brute_oracle(self):
        got = [list(p.parts_desc()) for p in enumerate_partitions(10)]
        assert len(got) == 42
        assert got == brute_partition_lists(10)

    def test_m0(self):
        assert enumerate_partitions(0) == [Partition((), 0)]

    def test_counts_match_enumeration(self):
        for m in range(41):
            assert partition_count(m) == len(enumerate_partitions(m))

    def test_enumeration_deterministic(self):
        a = "".join(str(p) + ";" for p in enumerate_partitions(17))
        b = "".join(str(p) + ";" for p in enumerate_partitions(17))
        assert a == b

    def test_cap(self):
        with pytest.raises(ResourceLimitError):
            enumerate_partitions(91)


class TestCounting:
    def test_small_values(self):
        assert partition_count(0) == 1
        assert partition_count(5) == 7

    def test_p100(self):
        assert partition_count(100) == 190569292

    def test_negative(self):
        with pytest.raises(ValueError):
            partition_count(-1)


class TestHardyRamanujan:
    def test_formula_at_1(self):
        expected = math.exp(math.pi * math.sqrt(2.0 / 3.0)) / (4 * math.sqrt(3))
        assert hardy_ramanujan(1) == pytest.approx(expected)
        assert 1.8 < hardy_ramanujan(1) < 1.95  # far from p(1)=1 at tiny m

    def test_ratio_near_one_at_1000(self):
        ratio = partition_count(1000) / hardy_ramanujan(1000)
        assert 0.95 < ratio < 1.05

    def test_ratio_improves_with_m(self):
        devs = [abs(partition_count(m) / hardy_ramanujan(m) - 1.0)
                for m in (500, 1000, 5000)]
        assert devs[0] > devs[1] > devs[2]

    def test_overflow_threshold_named(self):
        with pytest.raises(OverflowError, match=str(HARDY_RAMANUJAN_MAX_M)):
            hardy_ramanujan(HARDY_RAMANUJAN_MAX_M + 1)
        hardy_ramanujan(HARDY_RAMANUJAN_MAX_M)  # largest supported value works


@given(st.lists(st.integers(1, 30), min_size=0, max_size=20))
def test_weight_invariant(parts):
    p = Partition.from_parts(parts)
    assert p.m == sum(parts)
    assert sum(i * r for i, r in p.counts) == p.m
    assert all(r >= 1 for _, r in p.counts)


class TestTextForm:
    def test_roundtrip(self):
        for m in range(11):
            for p in enumerate_partitions(m):
                assert Partition.parse(str(p)) == p

    def test_format(self):
        assert str(Partition.from_parts([5, 1, 2, 1, 1, 5])) == "1^3 2^1 5^2"

    def test_parse_rejects_bad_tokens(self):
        for bad in ["1^0", "0^2", "x^1", "2^", "1^1 1^2"]:
            with pytest.raises(ValueError):
                Partition.parse(bad)

    def test_num_parts(self):
        assert Partition.parse("1^3 2^1 5^2").num_parts == 6
