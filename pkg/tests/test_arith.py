import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lucasdensity.arith import (
    divides_power_infinity,
    divisors,
    euler_phi,
    factorize,
    gcd_power_infinity,
    integer_nth_root,
    is_probable_prime,
    iter_smooth,
    jacobi,
    moebius,
    prime_factors,
    smooth_numbers,
    squarefree_kernel,
)
from lucasdensity.errors import LucasDensityError


def test_factorize_small():
    assert factorize(12).as_dict() == {2: 2, 3: 1}
    assert factorize(1369).as_dict() == {37: 2}
    assert factorize(-1).pairs == ()
    assert factorize(1).pairs == ()
    assert factorize(-360).as_dict() == {2: 3, 3: 2, 5: 1}


def test_factorize_rejects_zero():
    with pytest.raises(LucasDensityError):
        factorize(0)


def test_factorize_large_semiprime():
    # two 10-digit primes; exercises the rho path
    p, q = 1000000007, 1000000009
    assert factorize(p * q).as_dict() == {p: 1, q: 1}


@given(st.integers(min_value=1, max_value=10**9))
def test_factorize_recomposes(n):
    fac = factorize(n)
    assert fac.value() == n
    assert all(is_probable_prime(p) for p, _ in fac.pairs)


def test_squarefree_kernel_pinned():
    assert squarefree_kernel(Fraction(-4, 5)) == (-5, Fraction(2, 5))
    assert squarefree_kernel(Fraction(1, 40)) == (10, Fraction(1, 20))
    assert squarefree_kernel(Fraction(9, 4)) == (1, Fraction(3, 2))
    assert squarefree_kernel(8) == (2, Fraction(2))
    with pytest.raises(LucasDensityError):
        squarefree_kernel(Fraction(0))


@given(st.fractions(min_value=Fraction(-10**6), max_value=Fraction(10**6),
                    max_denominator=10**4).filter(lambda q: q != 0))
def test_squarefree_kernel_properties(q):
    s, t = squarefree_kernel(q)
    assert s * t * t == q
    assert t > 0
    assert (s < 0) == (q < 0)
    assert all(e == 1 for _, e in factorize(s).pairs)


def test_gcd_power_infinity_pinned():
    assert gcd_power_infinity(12, 2) == 4
    assert gcd_power_infinity(4, 10) == 4
    assert gcd_power_infinity(2, 3) == 1
    assert gcd_power_infinity(1, 7) == 1
    assert gcd_power_infinity(720, 6) == 144


@given(st.integers(min_value=1, max_value=10**6),
       st.integers(min_value=1, max_value=10**6))
def test_gcd_power_infinity_properties(h, m):
    g = gcd_power_infinity(h, m)
    assert h % g == 0
    # the cofactor is coprime to m, and g's primes all divide m
    assert math.gcd(h // g, m) == 1
    assert divides_power_infinity(g, m) if g > 1 else g == 1


def test_divides_power_infinity():
    assert divides_power_infinity(8, 2)
    assert divides_power_infinity(1, 5)
    assert not divides_power_infinity(6, 2)
    assert divides_power_infinity(144, 6)


def test_jacobi_pinned():
    assert jacobi(5, 11) == 1
    assert jacobi(5, 13) == -1
    assert jacobi(10, 5) == 0
    assert jacobi(-1, 3) == -1
    assert jacobi(2, 7) == 1
    with pytest.raises(LucasDensityError):
        jacobi(3, 8)


def test_jacobi_matches_quadratic_residues():
    # against explicit residue sets, for every odd prime below 1000
    primes = [p for p in range(3, 1000, 2) if is_probable_prime(p)]
    for p in primes:
        residues = {x * x % p for x in range(1, p)}
        for a in range(p):
            expect = 0 if a % p == 0 else (1 if a in residues else -1)
            assert jacobi(a, p) == expect, (a, p)


def test_divisors_and_multiplicative():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(-9) == [1, 3, 9]
    assert prime_factors(60) == [2, 3, 5]
    assert moebius(1) == 1 and moebius(6) == 1 and moebius(30) == -1
    assert moebius(12) == 0
    assert euler_phi(1) == 1 and euler_phi(10) == 4 and euler_phi(97) == 96


@given(st.integers(min_value=1, max_value=5000))
def test_totient_divisor_sum(n):
    assert sum(euler_phi(d) for d in divisors(n)) == n
    assert sum(moebius(d) for d in divisors(n)) == (1 if n == 1 else 0)


def test_smooth_numbers():
    assert smooth_numbers(6, 20) == [1, 2, 3, 4, 6, 8, 9, 12, 16, 18]
    assert smooth_numbers(1, 100) == [1]
    assert list(itertools.islice(iter_smooth(10), 8)) == [1, 2, 4, 5, 8, 10, 16, 20]
    assert list(iter_smooth(1)) == [1]


def test_integer_nth_root():
    assert integer_nth_root(0, 3) == 0
    assert integer_nth_root(26, 3) == 2
    assert integer_nth_root(27, 3) == 3
    assert integer_nth_root(10**18, 2) == 10**9
    big = 12345**7
    assert integer_nth_root(big, 7) == 12345
    assert integer_nth_root(big - 1, 7) == 12344
