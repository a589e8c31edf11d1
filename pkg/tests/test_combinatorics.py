import pytest
from hypothesis import given, strategies as st

from eqres.combinatorics import (
    Partition,
    PartitionPair,
    enumerate_pairs,
    enumerate_partitions,
    falling_product,
    multinomial_m,
)
from eqres.oracle import bell_numbers, brute_force_multinomial

# number of partitions of p, p = 1..30
PARTITION_COUNTS = [
    1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176,
    231, 297, 385, 490, 627, 792, 1002, 1255, 1575, 1958, 2436, 3010, 3718, 4565, 5604,
]


@pytest.mark.parametrize("p", range(1, 31))
def test_partition_counts(p):
    parts = enumerate_partitions(p)
    assert len(parts) == PARTITION_COUNTS[p - 1]
    assert len(set(parts)) == len(parts)
    assert all(lam.total == p for lam in parts)


def test_descending_lex_order():
    assert [lam.parts for lam in enumerate_partitions(4)] == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert [lam.parts for lam in enumerate_partitions(4, max_length=2)] == [(4,), (3, 1), (2, 2)]


@pytest.mark.parametrize("bad", [0, -2])
def test_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        enumerate_partitions(bad)


@pytest.mark.parametrize("parts", [(), (1, 2), (0,), (2, -1)])
def test_partition_validation(parts):
    with pytest.raises(ValueError):
        Partition(parts)


@pytest.mark.parametrize("parts,m", [((2, 1), 3), ((1, 1, 1), 1), ((3,), 1), ((2, 2, 1), 15), ((2, 2), 3)])
def test_multinomial_examples(parts, m):
    assert multinomial_m(Partition(parts)) == m


@pytest.mark.parametrize("p", range(1, 8))
def test_multinomial_matches_enumeration(p):
    for lam in enumerate_partitions(p):
        assert multinomial_m(lam) == brute_force_multinomial(lam)


def test_brute_force_bound():
    with pytest.raises(ValueError):
        brute_force_multinomial(Partition((10,)))


def test_bell_numbers():
    assert bell_numbers(8) == [1, 1, 2, 5, 15, 52, 203, 877, 4140]
    for p in range(1, 13):
        assert sum(multinomial_m(lam) for lam in enumerate_partitions(p)) == bell_numbers(p)[p]


def test_pair_order_and_weights():
    pairs = enumerate_pairs(3, 2, cap1=2, cap2=2)
    assert [str(x) for x in pairs] == ["((3),(2))", "((2,1),(2))", "((3),(1,1))", "((2,1),(1,1))"]
    assert [x.weight for x in pairs] == [1, 3, 1, 3]
    assert (pairs[3].r1, pairs[3].r2, pairs[3].p, pairs[3].q) == (2, 2, 3, 2)


@given(st.integers(1, 9), st.integers(1, 9))
def test_pair_weights_sum_to_product_of_bell_numbers(p, q):
    bells = bell_numbers(9)
    assert sum(x.weight for x in enumerate_pairs(p, q)) == bells[p] * bells[q]


def test_falling_product():
    assert falling_product(4, 2) == 12
    assert falling_product(3, 3) == 6
    assert falling_product(2, 3) == 0
    with pytest.raises(ValueError):
        falling_product(3, 0)


def test_str():
    assert str(PartitionPair(Partition((2, 1)), Partition((2,)))) == "((2,1),(2))"
