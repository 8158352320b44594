"""Empirical side: prime sieving, rank of appearance, and density estimates.

The rank of appearance of a prime p in the recurrence U(a1, a2) is the least
n >= 1 with p | U_n.  For p not dividing 2*a2*Delta it equals the
multiplicative order of the root quotient modulo a prime above p, which is the
form used for elements given directly as u + v*sqrt(disc): split primes reduce
into the prime field through a square root of the discriminant, inert primes
work in the quadratic extension, and either way the order is found by descent
from p - (Delta/p) through its prime factorisation.
"""

from __future__ import annotations

import csv
import math
import multiprocessing
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .arith import jacobi
from .errors import LimitError, LucasDensityError
from .quadfield import QuadElem, SequenceContext, _sqrt_mod_prime, qf_norm

Target = Union[SequenceContext, QuadElem]

# A full table for the deep 10^7 sweep is 40 MB of int32; anything past this
# ceiling is almost certainly a mistyped limit rather than a real request.
SIEVE_CEILING = 200_000_000


# ---------------------------------------------------------------------------
# smallest-prime-factor sieve
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpfTable:
    """Smallest-prime-factor table for 2..limit."""

    limit: int
    spf: np.ndarray

    def __post_init__(self) -> None:
        assert len(self.spf) == self.limit + 1, "table must cover 0..limit"

    def factor_distinct(self, n: int) -> list[int]:
        """Distinct prime factors of 1 <= n <= limit, ascending."""
        if not 1 <= n <= self.limit:
            raise LimitError(f"{n} outside the sieved range 1..{self.limit}")
        spf = self.spf
        out: list[int] = []
        while n > 1:
            p = int(spf[n])
            out.append(p)
            while n % p == 0:
                n //= p
        return out

    def primes_up_to(self, x: int) -> np.ndarray:
        """All primes <= x as an int64 array."""
        if x > self.limit:
            raise LimitError(f"{x} exceeds the sieved limit {self.limit}")
        idx = np.arange(x + 1, dtype=self.spf.dtype)
        return np.flatnonzero(self.spf[: x + 1] == idx)[1:].astype(np.int64)
        # [1:] drops index 0, whose spf entry is 0 and matches idx[0]


def spf_sieve(limit: int) -> SpfTable:
    """Sieve smallest prime factors for every integer in 2..limit."""
    if limit < 2:
        raise LimitError(f"sieve limit must be at least 2, got {limit}")
    if limit > SIEVE_CEILING:
        raise LimitError(f"sieve limit {limit} exceeds the ceiling {SIEVE_CEILING}")
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            window = spf[p * p :: p]
            window[window == 0] = p
    # untouched entries >= 2 have no factor below their square root: primes
    rest = np.flatnonzero(spf == 0)
    spf[rest[2:]] = rest[2:]
    return SpfTable(limit=limit, spf=spf)


# ---------------------------------------------------------------------------
# Lucas pairs mod p
# ---------------------------------------------------------------------------


def lucas_pair_mod(n: int, p: int, a1: int, a2: int) -> tuple[int, int]:
    """(U_n mod p, V_n mod p) by binary doubling, O(log n) steps."""
    if n < 0:
        raise LucasDensityError(f"index must be nonnegative, got {n}")
    if p < 3 or (2 * a2) % p == 0:
        raise LucasDensityError(f"p = {p} divides 2*a2: pair undefined")
    delta = (a1 * a1 - 4 * a2) % p
    inv2 = (p + 1) // 2
    u, v, qn = 0, 2, 1  # (U_0, V_0, a2^0)
    for bit in bin(n)[2:] if n else "":
        u, v, qn = u * v % p, (v * v - 2 * qn) % p, qn * qn % p
        if bit == "1":
            u, v, qn = (
                (a1 * u + v) * inv2 % p,
                (delta * u + a1 * v) * inv2 % p,
                qn * a2 % p,
            )
    return u, v


# ---------------------------------------------------------------------------
# rank of appearance
# ---------------------------------------------------------------------------


def _order_descent(start: int, primes: list[int], is_identity_at) -> int:
    order = start
    for q in primes:
        while order % q == 0:
            reduced = order // q
            if is_identity_at(reduced):
                order = reduced
            else:
                break
    return order


def _rank_pair(p: int, a1: int, a2: int, delta: int, spf: SpfTable) -> int:
    m = p - jacobi(delta % p, p)
    half = m // 2  # m is even for odd p; keep spf usable when m = limit + 1
    factors = {2} | set(spf.factor_distinct(half)) if half > 1 else {2}
    return _order_descent(
        m,
        sorted(factors),
        lambda t: lucas_pair_mod(t, p, a1, a2)[0] == 0,
    )


def _pair_pow(x: int, y: int, n: int, p: int, disc: int) -> tuple[int, int]:
    # (x + y*w)^n in F_p[w]/(w^2 - disc)
    ru, rv = 1, 0
    while n:
        if n & 1:
            ru, rv = (ru * x + rv * y * disc) % p, (ru * y + rv * x) % p
        x, y = (x * x + y * y * disc) % p, 2 * x * y % p
        n >>= 1
    return ru, rv


def _rank_element(p: int, gamma: QuadElem, spf: SpfTable) -> int:
    disc = gamma.disc_k
    u = gamma.u.numerator * pow(gamma.u.denominator, -1, p) % p
    v = gamma.v.numerator * pow(gamma.v.denominator, -1, p) % p
    split = jacobi(disc % p, p) == 1
    m = p - 1 if split else p + 1
    half = m // 2
    factors = sorted({2} | set(spf.factor_distinct(half))) if half > 1 else [2]
    if split:
        g = (u + v * _sqrt_mod_prime(disc % p, p)) % p
        return _order_descent(m, factors, lambda t: pow(g, t, p) == 1)
    return _order_descent(m, factors, lambda t: _pair_pow(u, v, t, p, disc) == (1, 0))


def _excluded_primes(target: Target) -> set[int]:
    if isinstance(target, SequenceContext):
        bad = 2 * abs(target.a2) * abs(target.delta)
    else:
        bad = (
            2
            * abs(target.disc_k)
            * target.u.denominator
            * target.v.denominator
            * abs(target.v.numerator)
        )
    out = set()
    n, q = bad, 2
    while q * q <= n:
        if n % q == 0:
            out.add(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.add(n)
    return out


def rank(p: int, target: Target, spf: SpfTable) -> int:
    """Least n >= 1 with p | U_n, equivalently the order of gamma above p."""
    if p < 3:
        raise LucasDensityError(f"rank needs an odd prime, got {p}")
    if p in _excluded_primes(target):
        raise LucasDensityError(f"p = {p} divides the excluded locus of the input")
    if isinstance(target, SequenceContext):
        if p - jacobi(target.delta % p, p) > spf.limit + 1:
            raise LimitError(f"p = {p} outside the sieve's factoring reach")
        return _rank_pair(p, target.a1, target.a2, target.delta, spf)
    if qf_norm(target) != 1:
        raise LucasDensityError("rank is defined for norm-1 elements only")
    if p + 1 > spf.limit + 1:
        raise LimitError(f"p = {p} outside the sieve's factoring reach")
    return _rank_element(p, target, spf)


# ---------------------------------------------------------------------------
# empirical densities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EmpiricalReport:
    """Counts and ratios of primes p <= x with d | rank(p)."""

    a1: Optional[int]
    a2: Optional[int]
    d: int
    x: int
    counted: int
    counted_plus: int
    counted_minus: int
    eligible: int
    ratio: Fraction
    ratio_plus: Fraction
    ratio_minus: Fraction
    reference_delta: Optional[Fraction] = None

    def __post_init__(self) -> None:
        assert self.counted == self.counted_plus + self.counted_minus
        assert 0 <= self.counted <= self.eligible

    @property
    def deviation(self) -> Optional[Fraction]:
        if self.reference_delta is None:
            return None
        return abs(self.ratio - self.reference_delta)


_BLOCK_STATE: dict = {}


def _count_block(bounds: tuple[int, int]):
    lo, hi = bounds
    primes = _BLOCK_STATE["primes"][lo:hi]
    target = _BLOCK_STATE["target"]
    spf = _BLOCK_STATE["spf"]
    d = _BLOCK_STATE["d"]
    excluded = _BLOCK_STATE["excluded"]
    keep_rows = _BLOCK_STATE["keep_rows"]
    if isinstance(target, SequenceContext):
        char_disc = target.delta
        compute = lambda p: _rank_pair(p, target.a1, target.a2, target.delta, spf)
    else:
        char_disc = target.disc_k
        compute = lambda p: _rank_element(p, target, spf)
    counted = plus = minus = eligible = 0
    rows = [] if keep_rows else None
    for p in primes:
        p = int(p)
        if p in excluded:
            continue
        eligible += 1
        r = compute(p)
        side = jacobi(char_disc % p, p)
        hit = r % d == 0
        if hit:
            counted += 1
            if side == 1:
                plus += 1
            else:
                minus += 1
        if rows is not None:
            rows.append((p, r, side, int(hit)))
    return counted, plus, minus, eligible, rows


def empirical_density(
    target: Target,
    d: int,
    x: int,
    spf: Optional[SpfTable] = None,
    reference: Optional[Fraction] = None,
    threads: int = 1,
    dump_path: Optional[str] = None,
) -> EmpiricalReport:
    """Count primes p <= x with d | rank(p), split by the character of p."""
    if d < 1:
        raise LucasDensityError(f"divisor must be positive, got {d}")
    if spf is None:
        spf = spf_sieve(max(x + 1, 4))
    if x + 1 > spf.limit + 2:
        raise LimitError(f"x = {x} beyond the sieve capacity {spf.limit}")
    primes = spf.primes_up_to(min(x, spf.limit))
    primes = primes[primes > 2]
    excluded = _excluded_primes(target)

    _BLOCK_STATE.update(
        primes=primes,
        target=target,
        spf=spf,
        d=d,
        excluded=excluded,
        keep_rows=dump_path is not None,
    )
    try:
        n = len(primes)
        if threads <= 1 or n < 4 * threads:
            results = [_count_block((0, n))]
        else:
            step = -(-n // (4 * threads))
            blocks = [(i, min(i + step, n)) for i in range(0, n, step)]
            ctx = multiprocessing.get_context("fork")
            with ctx.Pool(processes=threads) as pool:
                results = pool.map(_count_block, blocks)
    finally:
        _BLOCK_STATE.clear()

    counted = sum(r[0] for r in results)
    plus = sum(r[1] for r in results)
    minus = sum(r[2] for r in results)
    eligible = sum(r[3] for r in results)
    if dump_path is not None:
        with open(dump_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["p", "rank", "jacobi", "divisible"])
            for r in results:
                writer.writerows(r[4])

    zero = Fraction(0)
    return EmpiricalReport(
        a1=target.a1 if isinstance(target, SequenceContext) else None,
        a2=target.a2 if isinstance(target, SequenceContext) else None,
        d=d,
        x=x,
        counted=counted,
        counted_plus=plus,
        counted_minus=minus,
        eligible=eligible,
        ratio=Fraction(counted, eligible) if eligible else zero,
        ratio_plus=Fraction(plus, eligible) if eligible else zero,
        ratio_minus=Fraction(minus, eligible) if eligible else zero,
        reference_delta=reference,
    )


def default_threads() -> int:
    """Worker count for verification runs: the machine's visible parallelism."""
    return max(1, os.cpu_count() or 1)
