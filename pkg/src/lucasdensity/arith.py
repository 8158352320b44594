"""Exact integer and rational utilities.

Factorization, squarefree kernels, gcd-with-a-supernatural-power, divisor
enumeration, multiplicative functions and Jacobi symbols.  Everything here is
deterministic and pure; all results are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import LucasDensityError

# Deterministic Miller-Rabin base set: the first 13 primes certify primality
# for every n < 3.317e24, far above any conductor/discriminant handled here.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                 59, 61, 67, 71, 73, 79, 83, 89, 97)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of |n| as a sorted tuple of (prime, exponent) pairs."""

    pairs: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def value(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p ** e
        return out


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24.

    >>> is_probable_prime(9999991)
    True
    >>> is_probable_prime(1369)
    False
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # Brent's cycle variant; n is odd, composite, and has no factor < 100.
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        seed += 1
        y, c, m = seed, seed + 1, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        # rare cycle degeneracy: retry with a new polynomial


def factorize(n: int) -> Factorization:
    """Exact prime factorization of |n|; the sign is ignored.

    >>> factorize(12).as_dict()
    {2: 2, 3: 1}
    >>> factorize(-1).pairs
    ()
    """
    if n == 0:
        raise LucasDensityError("factorize(0) is undefined")
    n = abs(n)
    fac: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            fac[p] = fac.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            fac[m] = fac.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_rho(m)
        stack += [d, m // d]
    return Factorization(tuple(sorted(fac.items())))


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of |n|."""
    divs = [1]
    for p, e in factorize(n).pairs:
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


def moebius(n: int) -> int:
    """Moebius function of n >= 1."""
    if n == 1:
        return 1
    mu = 1
    for _, e in factorize(n).pairs:
        if e > 1:
            return 0
        mu = -mu
    return mu


def euler_phi(n: int) -> int:
    """Euler totient of n >= 1."""
    out = n
    for p, _ in factorize(n).pairs:
        out -= out // p
    return out


def prime_factors(n: int) -> list[int]:
    """Distinct primes dividing |n| (empty for |n| = 1)."""
    return [p for p, _ in factorize(n).pairs]


def squarefree_kernel(q: Fraction | int) -> tuple[int, Fraction]:
    """Write q = s * t**2 with s a squarefree integer carrying q's sign, t > 0.

    >>> squarefree_kernel(Fraction(-4, 5))
    (-5, Fraction(2, 5))
    >>> squarefree_kernel(Fraction(1, 40))
    (10, Fraction(1, 20))
    """
    q = Fraction(q)
    if q == 0:
        raise LucasDensityError("squarefree_kernel(0) is undefined")
    s, t = 1, Fraction(1)
    for p, e in factorize(q.numerator).pairs:
        if e % 2:
            s *= p
        t *= Fraction(p) ** (e // 2)
    for p, e in factorize(q.denominator).pairs:
        # 1/p = p * (1/p)^2, so an odd denominator prime lands in s and costs t a factor p
        if e % 2:
            s *= p
            t /= p
        t /= p ** (e // 2)
    if q < 0:
        s = -s
    assert s * t * t == q, "kernel decomposition must be exact"
    return s, t


def gcd_power_infinity(h: int, m: int) -> int:
    """Largest divisor of h composed only of primes dividing m ("(h, m^inf)").

    >>> gcd_power_infinity(12, 2)
    4
    >>> gcd_power_infinity(4, 10)
    4
    >>> gcd_power_infinity(2, 3)
    1
    """
    if h < 1 or m < 1:
        raise LucasDensityError("gcd_power_infinity needs positive arguments")
    a = h
    g = math.gcd(a, m)
    while g > 1:
        a //= g
        g = math.gcd(a, g)
    return h // a


def divides_power_infinity(e: int, d: int) -> bool:
    """True when every prime of e divides d ("e | d^inf")."""
    if e < 1:
        raise LucasDensityError("e must be positive")
    return gcd_power_infinity(e, d) == e


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a / n) for odd positive n.

    >>> jacobi(5, 11), jacobi(5, 13), jacobi(10, 5)
    (1, -1, 0)
    """
    if n <= 0 or n % 2 == 0:
        raise LucasDensityError("jacobi: modulus must be odd and positive")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def smooth_numbers(d: int, bound: int) -> list[int]:
    """Sorted v with v | d^inf and v <= bound (the divisors of the supernatural d^inf)."""
    primes = prime_factors(d) if d > 1 else []
    out = [1]
    for p in primes:
        fresh = []
        for v in out:
            w = v * p
            while w <= bound:
                fresh.append(w)
                w *= p
        out += fresh
    return sorted(out)


def iter_smooth(d: int) -> Iterator[int]:
    """Yield v | d^inf in increasing order, forever (heap merge)."""
    import heapq

    primes = prime_factors(d) if d > 1 else []
    if not primes:
        yield 1
        return
    heap = [1]
    seen = {1}
    while True:
        v = heapq.heappop(heap)
        yield v
        for p in primes:
            if v * p not in seen:
                seen.add(v * p)
                heapq.heappush(heap, v * p)


def integer_nth_root(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0."""
    if n < 0:
        raise LucasDensityError("integer_nth_root needs n >= 0")
    if n in (0, 1) or k == 1:
        return n
    x = int(round(n ** (1.0 / k)))
    while x > 0 and x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x
