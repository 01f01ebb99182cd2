import pytest
from hypothesis import given, strategies as st

from nilmult import DomainError, chi_partial_sum, gcd_zero_aware, mobius, witt_chi
from nilmult.numtheory import divisors

from oracles import lyndon_count


@pytest.mark.parametrize("e, expected", [(1, 1), (4, 0), (6, 1), (2, -1), (30, -1), (12, 0)])
def test_mobius(e, expected):
    assert mobius(e) == expected


def test_mobius_rejects_zero():
    with pytest.raises(DomainError):
        mobius(0)


@pytest.mark.parametrize("d, q, expected", [(1, 5, 5), (3, 2, 2), (6, 2, 9), (3, 0, 0), (2, 1, 0), (1, 0, 0)])
def test_witt_examples(d, q, expected):
    assert witt_chi(d, q) == expected


@pytest.mark.parametrize("q", range(5))
@pytest.mark.parametrize("d", range(1, 11))
def test_witt_matches_lyndon_enumeration(d, q):
    assert witt_chi(d, q) == lyndon_count(d, q)


@pytest.mark.parametrize("q", range(5))
@pytest.mark.parametrize("d", range(1, 11))
def test_necklace_identity(d, q):
    assert q**d == sum(e * witt_chi(e, q) for e in divisors(d))


def test_witt_is_exact_for_large_weight():
    # 2^61 - 1 is prime, so only the divisors 1 and 61 contribute
    assert witt_chi(61, 2) == (2**61 - 2) // 61


@pytest.mark.parametrize("args, expected", [((2, 1, 2), 2), ((2, 2, 2), 5), ((3, 1, 1), 0)])
def test_chi_partial_sum(args, expected):
    assert chi_partial_sum(*args) == expected


@pytest.mark.parametrize("values, expected", [([0, 12], 12), ([0, 0], 0), ([25, 35], 5), ([7], 7)])
def test_gcd_zero_aware(values, expected):
    assert gcd_zero_aware(values) == expected


def test_gcd_empty():
    with pytest.raises(DomainError):
        gcd_zero_aware([])


@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=6), st.randoms())
def test_gcd_order_independent_and_idempotent(values, rnd):
    shuffled = list(values)
    rnd.shuffle(shuffled)
    g = gcd_zero_aware(values)
    assert gcd_zero_aware(shuffled) == g
    assert gcd_zero_aware(values + values) == g
