from itertools import permutations, product
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from dirichlet_cf.combinatorics import (
    Partition,
    Permutation,
    SetPartition,
    compositions,
    cycle_structure,
    cyclic_group,
    dihedral_group,
    enumerate_partitions,
    generated_group,
    is_closed,
    multinomial_weight,
    set_partition_shape,
    symmetric_group,
)

def _euler_p(nmax):
    # Euler's pentagonal-number recurrence, independent of the enumerator
    p = [1] + [0] * nmax
    for n in range(1, nmax + 1):
        k, total = 1, 0
        while True:
            g1, g2 = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p


def test_partition_counts_match_pentagonal_recurrence():
    p = _euler_p(15)
    assert [len(enumerate_partitions(n)) for n in range(16)] == p
    assert len(enumerate_partitions(4)) == 5
    assert len(enumerate_partitions(10)) == 42


def test_empty_partition():
    (lam,) = enumerate_partitions(0)
    assert lam.freq == () and lam.n == 0 and lam.length == 0


def test_enumeration_order_and_uniqueness():
    parts = enumerate_partitions(7)
    freqs = [lam.freq for lam in parts]
    assert freqs == sorted(freqs, reverse=True)
    assert len(set(freqs)) == len(freqs)
    assert parts[0].freq == (7, 0, 0, 0, 0, 0, 0)
    assert parts[-1].freq == (0, 0, 0, 0, 0, 0, 1)


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, 1))
    with pytest.raises(ValueError):
        Partition.from_parts([2, 0])
    assert Partition.from_parts([3, 1, 1]).freq == (2, 0, 1, 0, 0)
    assert Partition.from_parts([3, 1, 1]).parts() == (1, 1, 3)


@pytest.mark.parametrize("n", range(0, 9))
def test_multinomial_weights_count_cycle_types(n):
    counts = {}
    for g in symmetric_group(n) if n else []:
        lam = cycle_structure(g)
        counts[lam] = counts.get(lam, 0) + 1
    if n:
        assert counts == {lam: multinomial_weight(lam) for lam in enumerate_partitions(n)}
    assert sum(multinomial_weight(lam) for lam in enumerate_partitions(n)) == factorial(n)


def test_multinomial_weight_examples():
    assert multinomial_weight(Partition((5, 0, 0, 0, 0))) == 1
    assert multinomial_weight(Partition((0, 0, 1))) == 2
    assert sum(multinomial_weight(lam) for lam in enumerate_partitions(6)) == 720


def test_cycle_structure_examples():
    assert cycle_structure(Permutation.identity(3)).freq == (3, 0, 0)
    assert cycle_structure(Permutation.from_cycles(3, [(1, 2)])).freq == (1, 1, 0)
    assert cycle_structure(Permutation.from_cycles(4, [(1, 2, 3, 4)])).freq == (0, 0, 0, 1)


def test_permutation_algebra():
    a = Permutation((2, 3, 1, 4))
    b = Permutation((1, 2, 4, 3))
    ab = a.compose(b)
    assert all(ab(i) == a(b(i)) for i in range(1, 5))
    assert a.compose(a.inverse()) == Permutation.identity(4)
    assert a.cycles() == [(1, 2, 3), (4,)]
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))


@given(st.permutations(list(range(1, 8))))
def test_cycles_roundtrip(images):
    p = Permutation(tuple(images))
    assert Permutation.from_cycles(7, p.cycles()) == p
    assert cycle_structure(p).n == 7


def test_named_groups_are_groups():
    for n in range(1, 7):
        assert len(cyclic_group(n)) == n and is_closed(cyclic_group(n))
        assert is_closed(symmetric_group(n))
    for n in range(3, 8):
        d = dihedral_group(n)
        assert len(set(d)) == 2 * n and is_closed(d)


def test_is_closed_rejects_non_group():
    bad = [Permutation.identity(3), Permutation((2, 1, 3))] + [Permutation((2, 3, 1))]
    assert not is_closed(bad)
    assert not is_closed([])
    assert generated_group([Permutation((2, 3, 1))]) == set(cyclic_group(3))


def test_set_partition_canonical_and_shape():
    sp = SetPartition.canonical([[3], [1, 2]])
    assert sp.blocks == ((3,), (1, 2))
    assert set_partition_shape(SetPartition.canonical([[1], [2], [3]])).freq == (3, 0, 0)
    assert set_partition_shape(SetPartition.canonical([[1, 2], [3]])).freq == (1, 1, 0)
    assert set_partition_shape(SetPartition.canonical([[1, 2, 3], [4, 5]])).freq == (0, 1, 1, 0, 0)
    with pytest.raises(ValueError):
        SetPartition.canonical([[1], [3]])


@pytest.mark.parametrize("n,k", [(0, 0), (0, 3), (3, 1), (4, 3), (5, 4)])
def test_compositions_match_brute_force(n, k):
    got = list(compositions(n, k))
    want = sorted(m for m in product(range(n + 1), repeat=k) if sum(m) == n)
    assert got == want
    assert len(got) == (comb(n + k - 1, k - 1) if k else int(n == 0))


@given(st.integers(1, 9))
def test_partition_weights_are_class_sizes(n):
    for lam in enumerate_partitions(n):
        assert lam.n == n
        assert factorial(n) % multinomial_weight(lam) == 0


def test_brute_force_cycle_types_s4():
    seen = {cycle_structure(Permutation(p)).freq for p in permutations(range(1, 5))}
    assert seen == {lam.freq for lam in enumerate_partitions(4)}
