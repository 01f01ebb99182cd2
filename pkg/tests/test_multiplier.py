import random

import pytest
from hypothesis import given, settings, strategies as st

from nilmult import (
    AbelianStructure,
    DomainError,
    PreconditionError,
    ProductSpec,
    canonicalize,
    count_involving_last,
    modulus_of,
    multiplier_closed_form,
    multiplier_general,
    multiplier_two_factor,
    parse_commutator,
    validate_spec,
    witt_chi,
)
from nilmult.crosscheck import random_chain_case, random_two_factor_case
from nilmult.multiplier import closed_form_exponents, split_orders, weight_window


def Z(free=0, **mods):
    """Z(free, m5=2) -> Z^free + Z_5^2."""
    return canonicalize([(0, free)] + [(int(k[1:]), v) for k, v in mods.items()])


def test_validate_spec():
    assert validate_spec(ProductSpec(2, (5, 5)), 1).ok
    verdict = validate_spec(ProductSpec(2, (6, 2)), 1)
    assert not verdict.ok
    assert {v.prime for v in verdict.violations} == {2, 3}
    assert any(v.prime == 2 and v.order == 6 for v in verdict.violations)
    assert validate_spec(ProductSpec(3, (0, 0)), 2).ok
    # boundary: 5 <= n + c = 5 is rejected, 7 is fine
    assert not validate_spec(ProductSpec(3, (5,)), 2).ok
    assert validate_spec(ProductSpec(3, (7,)), 2).ok


@pytest.mark.parametrize("bad", [dict(class_n=0, orders=(5,)), dict(class_n=2, orders=()), dict(class_n=2, orders=(-1,))])
def test_product_spec_rejects(bad):
    with pytest.raises(DomainError):
        ProductSpec(**bad)


def test_modulus_of():
    assert modulus_of(parse_commutator("x1"), (0, 12)) == 0
    assert modulus_of(parse_commutator("[x2,x1]"), (0, 12)) == 12
    assert modulus_of(parse_commutator("[[x2,x1],x2]"), (25, 35)) == 5
    with pytest.raises(DomainError):
        modulus_of(parse_commutator("[x3,x1]"), (5, 5))


def test_canonicalize():
    assert canonicalize([(0, 2)]) == AbelianStructure(2, ())
    assert canonicalize([(12, 1)]).torsion == (3, 4)
    assert canonicalize([(1, 5)]).is_trivial
    assert canonicalize([(6, 1)]) == canonicalize([(2, 1), (3, 1)])
    assert canonicalize([(4, 1)]) != canonicalize([(2, 2)])


def test_text_and_json():
    s = canonicalize([(0, 2), (5, 3)])
    assert str(s) == "Z^2 + Z_5^3"
    assert s.to_json() == {"free_rank": 2, "factors": [{"modulus": 5, "multiplicity": 3}]}
    assert str(canonicalize([])) == "0"
    assert str(canonicalize([(0, 1), (7, 1)])) == "Z + Z_7"
    mixed = canonicalize([(2, 1), (12, 2)])
    assert [f["modulus"] for f in mixed.to_json()["factors"]] == [12, 2]
    assert AbelianStructure.from_json(mixed.to_json()) == mixed


def test_order_statistics():
    assert canonicalize([]).order_statistics() == {1: 1}
    assert canonicalize([(5, 2)]).order_statistics() == {1: 1, 5: 24}
    assert canonicalize([(4, 1), (2, 1)]).order_statistics() == {1: 1, 2: 3, 4: 4}


@settings(deadline=None)
@given(st.lists(st.tuples(st.integers(1, 40), st.integers(0, 2)), max_size=4))
def test_order_statistics_brute_force(raw):
    # enumerate the direct product of cyclic groups directly
    from itertools import product
    from math import gcd, lcm
    moduli = [m for m, e in raw for _ in range(e)]
    if len(moduli) > 3:
        moduli = moduli[:3]
    expected = {}
    for xs in product(*[range(m) for m in moduli]):
        o = lcm(1, *[m // gcd(m, x) for m, x in zip(moduli, xs)])
        expected[o] = expected.get(o, 0) + 1
    got = canonicalize([(m, 1) for m in moduli]).order_statistics()
    assert got == dict(sorted(expected.items()))


def test_general_examples():
    assert multiplier_general(ProductSpec(2, (5, 5)), 1) == Z(m5=2)
    assert multiplier_general(ProductSpec(2, (0, 0)), 1) == Z(2)
    assert multiplier_general(ProductSpec(2, (25, 35)), 1) == Z(m5=2)


def test_general_rejects_invalid():
    with pytest.raises(PreconditionError) as info:
        multiplier_general(ProductSpec(2, (6, 2)), 1)
    assert info.value.violations
    assert multiplier_general(ProductSpec(2, (6, 2)), 1, force=True) == Z(m2=2)


def test_closed_form_examples():
    assert multiplier_closed_form(0, (5, 5), 2, 1) == Z(m5=2)
    assert multiplier_closed_form(1, (7,), 2, 2) == Z(m7=5)
    assert multiplier_closed_form(2, (), 2, 1) == Z(2)
    assert closed_form_exponents(0, 2, 2, 1) == [0, 0, 2]
    assert closed_form_exponents(1, 1, 2, 2) == [0, 5]


def test_closed_form_preconditions():
    with pytest.raises(PreconditionError):
        multiplier_closed_form(0, (5, 7), 2, 1)
    with pytest.raises(PreconditionError):
        multiplier_closed_form(0, (6, 3), 2, 1)
    with pytest.raises(DomainError):
        multiplier_closed_form(0, (), 2, 1)


def test_two_factor_examples():
    assert multiplier_two_factor(25, 35, 2, 1) == Z(m5=2)
    assert multiplier_two_factor(5, 7, 2, 1).is_trivial
    assert multiplier_two_factor(5, 5, 2, 2) == Z(m5=5)
    with pytest.raises(PreconditionError):
        multiplier_two_factor(6, 9, 2, 1)


def test_weight_window():
    assert weight_window(2, 1) == (3, 3)
    assert weight_window(1, 3) == (4, 4)
    assert weight_window(3, 3) == (4, 6)


def test_split_orders():
    assert split_orders((0, 0, 35, 5)) == (2, (35, 5))
    assert split_orders((0, 0)) == (2, ())
    assert split_orders((5, 0)) is None
    assert split_orders((5, 7)) is None


def test_path_agreement_randomized():
    rng = random.Random(1234)
    for _ in range(200):
        n, c, m, chain = random_chain_case(rng)
        assert multiplier_general(ProductSpec(n, (0,) * m + chain), c) == multiplier_closed_form(m, chain, n, c)


def test_two_factor_agreement_randomized():
    rng = random.Random(99)
    for _ in range(100):
        r, s, n, c = random_two_factor_case(rng)
        assert multiplier_general(ProductSpec(n, (r, s)), c) == multiplier_two_factor(r, s, n, c)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("m, chain", [(0, (11,)), (1, (143, 11)), (2, (13, 13)), (0, (121, 11, 11))])
def test_branch_agreement_at_n_equals_c(n, m, chain):
    c = n
    g = [sum(witt_chi(n + i, m + k) for i in range(1, c + 1)) for k in range(len(chain) + 1)]
    f = [sum(witt_chi(c + i, m + k) for i in range(1, n + 1)) for k in range(len(chain) + 1)]
    assert g == f == closed_form_exponents(m, len(chain), n, c)
    lo, hi = weight_window(n, c)
    assert (lo, hi) == (c + 1, n + c)


@pytest.mark.parametrize("n, c", [(1, 1), (2, 1), (1, 2), (3, 2), (2, 3), (2, 2)])
@pytest.mark.parametrize("m", [0, 1, 2])
def test_counting_identity(n, c, m):
    # distinct chain entries so each modulus counts one D_j
    chain = (11 * 13 * 17, 11 * 13, 11)
    lo, hi = weight_window(n, c)
    result = multiplier_general(ProductSpec(n, (0,) * m + chain), c)
    mult = dict(result.display)
    h = closed_form_exponents(m, len(chain), n, c)
    assert result.free_rank == h[0]
    for j, r in enumerate(chain, start=1):
        assert mult.get(r, 0) == count_involving_last(m + j, lo, hi) == h[j] - h[j - 1]


@given(st.integers(0, 3), st.integers(1, 6), st.integers(1, 6))
def test_monotone_partial_sums(m, n, c):
    if n + c > 8:
        return
    h = closed_form_exponents(m, 3, n, c)
    assert all(a <= b for a, b in zip(h, h[1:]))


@pytest.mark.parametrize("q, n, c", [(1, 2, 1), (2, 2, 2), (3, 1, 3), (3, 3, 1), (4, 2, 1)])
def test_free_case(q, n, c):
    lo, hi = weight_window(n, c)
    result = multiplier_general(ProductSpec(n, (0,) * q), c)
    assert result == AbelianStructure(sum(witt_chi(d, q) for d in range(lo, hi + 1)), ())


@settings(max_examples=50)
@given(st.lists(st.sampled_from([0, 11, 13, 121, 143, 169]), min_size=1, max_size=4), st.integers(1, 3), st.integers(1, 3), st.randoms())
def test_general_is_order_invariant(orders, n, c, rnd):
    shuffled = list(orders)
    rnd.shuffle(shuffled)
    assert multiplier_general(ProductSpec(n, orders), c) == multiplier_general(ProductSpec(n, shuffled), c)


def test_direct_product_case():
    # n = 1: Z_r x Z_s has Schur multiplier Z_gcd(r, s)
    assert multiplier_general(ProductSpec(1, (25, 35)), 1) == Z(m5=1)
