import cmath
import random

import pytest
from hypothesis import given, settings, strategies as st

from fplab.errors import (
    IndexOutOfRangeError,
    NotPrimeError,
    TooLargeError,
    TooSmallError,
)
from fplab.field import build_field, character, is_prime, least_primitive_root

SMALL_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]


def test_is_prime_basics():
    assert [n for n in range(2, 40) if is_prime(n)] == [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37,
    ]
    assert not is_prime(1)
    assert not is_prime(0)
    assert is_prime(1048573)  # largest prime under the default cap
    assert not is_prime(1048575)


def test_build_field_examples():
    f5 = build_field(5)
    assert f5.g == 2
    assert f5.ind[4] == 2
    assert build_field(7).g == 3  # 2 is not a generator mod 7, 3 is
    with pytest.raises(NotPrimeError):
        build_field(4)


def test_build_field_rejects_two_and_large():
    with pytest.raises(TooSmallError):
        build_field(2)
    with pytest.raises(TooLargeError):
        build_field(1048583, cap=1 << 20)  # prime just above the cap


def test_least_primitive_root_agrees_with_exhaustion():
    for p in SMALL_PRIMES:
        g = least_primitive_root(p)
        powers = {pow(g, k, p) for k in range(p - 1)}
        assert powers == set(range(1, p))
        # nothing smaller generates
        for h in range(2, g):
            assert {pow(h, k, p) for k in range(p - 1)} != set(range(1, p))


@pytest.mark.parametrize("p", SMALL_PRIMES + [101, 257])
def test_index_round_trip(p):
    fld = build_field(p)
    for x in range(1, p):
        assert pow(fld.g, fld.ind[x], p) == x


def test_character_examples():
    f5 = build_field(5)
    principal = character(f5, 0)
    assert principal(0) == 0
    for x in range(1, 5):
        assert abs(principal(x) - 1) < 1e-9
    quadratic = character(f5, 2)
    assert abs(quadratic(2) - (-1)) < 1e-9  # Legendre symbol (2|5) = -1
    f7 = build_field(7)
    assert character(f7, 3).order == 2
    with pytest.raises(IndexOutOfRangeError):
        character(f5, 4)
    with pytest.raises(IndexOutOfRangeError):
        character(f5, -1)


def test_character_conjugate():
    f7 = build_field(7)
    chi = character(f7, 2)
    bar = chi.conjugate()
    assert bar.m == 4
    for x in range(1, 7):
        assert abs(bar(x) - chi(x).conjugate()) < 1e-12


def test_quadratic_character_is_legendre():
    for p in (5, 7, 11, 13):
        fld = build_field(p)
        chi = character(fld, (p - 1) // 2)
        squares = {x * x % p for x in range(1, p)}
        for x in range(1, p):
            want = 1 if x in squares else -1
            assert abs(chi(x) - want) < 1e-9


def test_multiplicativity_bulk():
    fld = build_field(101)
    chi = character(fld, 7)
    rng = random.Random(0)
    for _ in range(10_000):
        x = rng.randrange(1, 101)
        y = rng.randrange(1, 101)
        assert abs(chi(x * y % 101) - chi(x) * chi(y)) < 1e-9


@settings(max_examples=60, deadline=None)
@given(
    p=st.sampled_from(SMALL_PRIMES),
    m=st.integers(min_value=0, max_value=28),
    x=st.integers(min_value=1, max_value=200),
    y=st.integers(min_value=1, max_value=200),
)
def test_multiplicativity_property(p, m, x, y):
    fld = build_field(p)
    chi = character(fld, m % (p - 1))
    if x % p == 0 or y % p == 0:
        return
    assert abs(chi(x * y) - chi(x) * chi(y)) < 1e-9


def test_orthogonality():
    for p in (5, 7, 13):
        fld = build_field(p)
        for m in range(p - 1):
            chi = character(fld, m)
            total = sum(chi(x) for x in range(1, p))
            if m == 0:
                assert abs(total - (p - 1)) < 1e-9
            else:
                assert abs(total) < 1e-9


def test_values_table_matches_pointwise():
    fld = build_field(31)
    chi = character(fld, 5)
    tab = chi.values()
    assert tab[0] == 0
    for x in range(1, 31):
        assert abs(tab[x] - chi(x)) < 1e-12


def test_exponent_form():
    fld = build_field(11)
    chi = character(fld, 3)
    for x in range(1, 11):
        e = chi.exponent(x)
        assert abs(chi(x) - cmath.exp(2j * cmath.pi * e / 10)) < 1e-12
    assert chi.exponent(0) == -1
    exps = chi.exponents()
    assert exps[0] == -1
    for x in range(1, 11):
        assert exps[x] == chi.exponent(x)
