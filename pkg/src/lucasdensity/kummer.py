"""Square-root data, quartic/cubic conductors, Kummer degrees, sigma existence.

The membership machinery: given the normalised root z of a norm-one element,
decide in which cyclotomic extensions of K its square/cube/fourth roots live,
and from that compute [K(zeta_n, gamma^(1/d)) : Q] exactly.  Field
discriminants of the degree-3/4 defining polynomials are computed from
scratch (Dedekind/radical-quotient maximalisation), no tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .arith import divisors, euler_phi, factorize, gcd_power_infinity, squarefree_kernel
from .errors import (
    DegenerateError,
    LucasDensityError,
    ReducibleError,
    ShapeError,
)
from .quadfield import PowerIndexData, QuadElem, qf_norm

# ---------------------------------------------------------------------------
# quadratic discriminants and square-root data
# ---------------------------------------------------------------------------


def quad_disc(q: Fraction | int) -> int:
    """Fundamental discriminant of Q(sqrt(q)); 1 when q is a square.

    >>> quad_disc(Fraction(-4, 5)), quad_disc(Fraction(1, 40)), quad_disc(Fraction(9, 4))
    (-20, 40, 1)
    """
    s, _ = squarefree_kernel(Fraction(q))
    return s if s % 4 == 1 else 4 * s


@dataclass(frozen=True)
class SqrtData:
    """Where the square root of z = u + v*sqrt(disc_k) lives.

    With norm(z) = 1: sqrt(z) generates Q(sqrt c) and Q(sqrt(c/disc_k)) over Q
    for c = (u-1)/2, and lies in K(zeta_n) iff delta1 | n or delta2 | n.
    A norm of -1 (q_flag False) rules the square root out of every cyclotomic
    extension, and the remaining fields stay unset.
    """

    q_flag: bool
    c: Optional[Fraction] = None
    delta1: Optional[int] = None
    delta2: Optional[int] = None
    c_positive: Optional[bool] = None


def sqrt_data(root: QuadElem) -> SqrtData:
    """Square-root data of the normalised h2-th root of gamma-tilde."""
    norm = qf_norm(root)
    assert norm in (1, -1), f"expected a unit-norm input, got norm {norm}"
    if norm == -1:
        return SqrtData(q_flag=False)
    c = (root.u - 1) / 2
    if c == 0:
        raise DegenerateError("c = 0 can only come from a torsion element")
    return SqrtData(
        q_flag=True,
        c=c,
        delta1=quad_disc(c),
        delta2=quad_disc(c / root.disc_k),
        c_positive=c > 0,
    )


# ---------------------------------------------------------------------------
# field discriminants of small defining polynomials
# ---------------------------------------------------------------------------


def _poly_mul_mod(a: list, b: list, f: Sequence[int]) -> list:
    """a*b reduced mod the monic polynomial f (all ascending coefficients)."""
    n = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for d in range(len(prod) - 1, n - 1, -1):
        lead = prod[d]
        if lead:
            prod[d] = 0
            for j in range(n + 1):
                prod[d - n + j] -= lead * f[j]
    prod = prod[:n]
    return prod + [0] * (n - len(prod))


def _int_det(mat: list[list[int]]) -> int:
    """Bareiss fraction-free determinant of a square integer matrix."""
    m = [row[:] for row in mat]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def _poly_discriminant(f: Sequence[int]) -> int:
    """Discriminant of a monic integer polynomial via the Sylvester resultant."""
    n = len(f) - 1
    df = [i * f[i] for i in range(1, n + 1)]
    size = 2 * n - 1
    rows = []
    for i in range(n - 1):  # shifted copies of f
        row = [0] * size
        for j, cf in enumerate(reversed(f)):
            row[i + j] = cf
        rows.append(row)
    for i in range(n):  # shifted copies of f'
        row = [0] * size
        for j, cf in enumerate(reversed(df)):
            row[i + j] = cf
        rows.append(row)
    res = _int_det(rows)
    return res if (n * (n - 1) // 2) % 2 == 0 else -res


def _has_rational_root(f: Sequence[int]) -> bool:
    if f[0] == 0:
        return True
    for d in divisors(f[0]):
        for r in (d, -d):
            acc = 0
            for c in reversed(f):
                acc = acc * r + c
            if acc == 0:
                return True
    return False


def _splits_into_quadratics(f: Sequence[int]) -> bool:
    # monic quartic = (x^2+ax+b)(x^2+cx+d) over Z, by Gauss's lemma
    a0, a1, a2, a3 = f[0], f[1], f[2], f[3]
    for b in [d for d in divisors(a0)] + [-d for d in divisors(a0)]:
        d, rem = divmod(a0, b)
        if rem:
            continue
        # a+c = a3, ac = a2-b-d, then check ad+bc = a1
        s = a3 * a3 - 4 * (a2 - b - d)
        if s < 0 or math.isqrt(s) ** 2 != s:
            continue
        r = math.isqrt(s)
        for a_cand in {(a3 + r), (a3 - r)}:
            if a_cand % 2:
                continue
            a = a_cand // 2
            c = a3 - a
            if a * d + b * c == a1:
                return True
    return False


def _check_irreducible(f: Sequence[int]) -> None:
    n = len(f) - 1
    if _has_rational_root(f):
        raise ReducibleError(f"polynomial {list(f)} has a rational root")
    if n == 4 and _splits_into_quadratics(f):
        raise ReducibleError(f"polynomial {list(f)} splits into two quadratics")


def _nullspace_mod_p(rows: list[list[int]], width: int, p: int) -> list[list[int]]:
    """Basis of {x : x*M = 0 mod p} for the matrix with the given rows."""
    dim = len(rows)
    aug = [[rows[i][j] % p for j in range(width)] + [1 if k == i else 0 for k in range(dim)]
           for i in range(dim)]
    pivot_row = 0
    for col in range(width):
        piv = next((r for r in range(pivot_row, dim) if aug[r][col] % p), None)
        if piv is None:
            continue
        aug[pivot_row], aug[piv] = aug[piv], aug[pivot_row]
        inv = pow(aug[pivot_row][col], -1, p)
        aug[pivot_row] = [x * inv % p for x in aug[pivot_row]]
        for r in range(dim):
            if r != pivot_row and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [(x - factor * y) % p for x, y in zip(aug[r], aug[pivot_row])]
        pivot_row += 1
        if pivot_row == dim:
            break
    return [row[width:] for row in aug[pivot_row:]]


def _row_hnf(gens: list[list[int]]) -> list[list[int]]:
    """Hermite form (upper triangular, positive diagonal) of a full-rank lattice."""
    n = len(gens[0])
    rows = [r[:] for r in gens if any(r)]
    out: list[list[int]] = []
    for col in range(n):
        while True:
            nz = [r for r in rows if r[col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda r: abs(r[col]))
            r0 = nz[0]
            for r in nz[1:]:
                q = r[col] // r0[col]
                for j in range(n):
                    r[j] -= q * r0[j]
        nz = [r for r in rows if r[col] != 0]
        assert nz, "generators do not span a full-rank lattice"
        piv = nz[0]
        rows.remove(piv)
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
    for i in range(n - 1, -1, -1):
        for k in range(i):
            q = out[k][i] // out[i][i]
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], out[i])]
    return out


def _mat_inv_fractions(mat: list[list[int]]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [[Fraction(mat[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _structure_constants(mat: list[list[int]], den: int, f: Sequence[int]) -> list[list[list[int]]]:
    """T[i][j] = coordinates of b_i*b_j in the order basis; must be integral."""
    n = len(f) - 1
    inv = _mat_inv_fractions(mat)
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = _poly_mul_mod(mat[i], mat[j], f)  # den^2 * b_i b_j in power coords
            coords = []
            for k in range(n):
                val = sum(Fraction(prod[t]) * inv[t][k] for t in range(n)) / den
                assert val.denominator == 1, "order is not multiplicatively closed"
                coords.append(int(val))
            row.append(coords)
        table.append(row)
    return table


def _algebra_pow_p(vec: list[int], table, p: int, n: int) -> list[int]:
    """vec^p in the mod-p structure-constant algebra."""

    def mul(x, y):
        out = [0] * n
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        tij = table[i][j]
                        for k in range(n):
                            out[k] = (out[k] + xi * yj * tij[k]) % p
        return out

    result = None
    base = [x % p for x in vec]
    e = p
    while e:
        if e & 1:
            result = base if result is None else mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def poly_field_disc(coeffs: Sequence[int]) -> int:
    """Discriminant of the number field defined by a monic integer polynomial.

    ``coeffs`` lists ascending coefficients including the leading 1, e.g.
    X^2 - 2 is [-2, 0, 1].  Degree must be 2, 3 or 4 and the polynomial
    irreducible over Q.
    """
    f = [int(c) for c in coeffs]
    n = len(f) - 1
    if n not in (2, 3, 4) or f[-1] != 1:
        raise LucasDensityError("need a monic polynomial of degree 2, 3 or 4")
    _check_irreducible(f)
    poly_disc = _poly_discriminant(f)
    assert poly_disc != 0, "irreducible polynomial cannot have a zero discriminant"
    den, mat = 1, [[int(i == j) for j in range(n)] for i in range(n)]
    for p, e in factorize(poly_disc).pairs:
        if e < 2:
            continue
        while True:
            table = _structure_constants(mat, den, f)
            # radical of the mod-p algebra = kernel of the iterated Frobenius
            frob = [_algebra_pow_p([int(i == j) for j in range(n)], table, p, n)
                    for i in range(n)]
            k = 1
            while p ** k < n:
                k += 1
            power = frob
            for _ in range(k - 1):
                power = [[sum(power[i][t] * frob[t][j] for t in range(n)) % p
                          for j in range(n)] for i in range(n)]
            radical = _nullspace_mod_p(power, n, p)
            ideal = _row_hnf([[p * int(i == j) for j in range(n)] for i in range(n)]
                             + [r[:] for r in radical])
            ideal_inv = _mat_inv_fractions(ideal)
            # multiplier test: which x in O/pO send the radical ideal into p*ideal
            mult_rows = []
            for i in range(n):
                flat = []
                for jrow in ideal:
                    prod = [0] * n  # b_i * (ideal row) in order coordinates
                    for t, ct in enumerate(jrow):
                        if ct:
                            for k2 in range(n):
                                prod[k2] += ct * table[i][t][k2]
                    for k2 in range(n):
                        val = sum(Fraction(prod[t]) * ideal_inv[t][k2] for t in range(n))
                        assert val.denominator == 1, "ideal is not stable under the order"
                        flat.append(int(val))
                mult_rows.append(flat)
            kernel = _nullspace_mod_p(mult_rows, n * n, p)
            if not kernel:
                break
            gens = [[p * x for x in row] for row in mat]
            for v in kernel:
                gens.append([sum(v[i] * mat[i][j] for i in range(n)) for j in range(n)])
            mat = _row_hnf(gens)
            den *= p
    det = 1
    for i in range(n):
        det *= mat[i][i]
    index, rem = divmod(den ** n, det)
    assert rem == 0, "index must be integral"
    assert poly_disc % (index * index) == 0, "index squared must divide the discriminant"
    return poly_disc // (index * index)


# ---------------------------------------------------------------------------
# conductors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConductorData:
    """Conductor f(L) split as base^base_exponent * squarefree_part."""

    value: int
    base: int
    base_exponent: int
    squarefree_part: int


def _split_conductor(value: int, base: int) -> tuple[int, int]:
    e = 0
    rest = value
    while rest % base == 0:
        rest //= base
        e += 1
    return e, rest


def _integralize(poly: Sequence[Fraction]) -> list[int]:
    """Substitute Y = m*X with m minimal so the monic polynomial gets integer coefficients."""
    n = len(poly) - 1
    assert poly[-1] == 1
    m = 1
    for i, c in enumerate(poly[:-1]):
        d = Fraction(c).denominator
        for p, e in factorize(d).pairs:
            need = -(-e // (n - i))  # ceil(e / (n-i))
            have = 0
            mm = m
            while mm % p == 0:
                mm //= p
                have += 1
            if need > have:
                m *= p ** (need - have)
    out = [int(Fraction(c) * m ** (n - i)) for i, c in enumerate(poly[:-1])] + [1]
    return out


def quartic_conductor(root: QuadElem) -> ConductorData:
    """Conductor of the degree-8 field containing the fourth root of the twist.

    ``root`` is the h2-normalised root over disc -4, of norm 1 and not a
    square.  The totally real quartic X^4 - X^2 - c/4 has the cyclic quartic
    subfield structure whose conductor, joined with 4, gives the answer.
    """
    assert root.disc_k == -4, "quartic conductor is specific to the Gaussian field"
    data = sqrt_data(root)
    assert data.q_flag, "norm 1 required"
    c = data.c
    poly = [-c / 4, Fraction(0), Fraction(-1), Fraction(0), Fraction(1)]
    disc_f = poly_field_disc(_integralize(poly))
    quotient, rem = divmod(disc_f, abs(data.delta2))
    if rem or quotient <= 0 or math.isqrt(quotient) ** 2 != quotient:
        raise ShapeError(
            f"quartic field discriminant {disc_f} is incompatible with the "
            f"quadratic subfield discriminant {data.delta2}")
    f_f = math.isqrt(quotient)
    value = math.lcm(4, f_f)
    exponent, rest = _split_conductor(value, 2)
    if exponent not in (2, 3, 4) or any(e > 1 for _, e in factorize(rest).pairs):
        raise ShapeError(f"quartic conductor {value} violates 2^a * squarefree, a in 2..4")
    return ConductorData(value=value, base=2, base_exponent=exponent, squarefree_part=rest)


def cubic_conductor(root: QuadElem) -> ConductorData:
    """Conductor of the cubic-root tower over disc -3.

    ``root`` is the h6-normalised root; only its rational part u enters, via
    the totally real cubic X^3 - 3X - 2u.
    """
    assert root.disc_k == -3, "cubic conductor is specific to the Eisenstein field"
    two_u = 2 * root.u
    poly = [-two_u, Fraction(-3), Fraction(0), Fraction(1)]
    disc_f = poly_field_disc(_integralize(poly))
    if disc_f <= 0 or math.isqrt(disc_f) ** 2 != disc_f:
        raise ShapeError(f"cubic field discriminant {disc_f} is not a square: not cyclic")
    value = math.isqrt(disc_f)
    exponent, rest = _split_conductor(value, 3)
    rest_pairs = factorize(rest).pairs if rest > 1 else ()
    if exponent not in (0, 2) or any(e > 1 or p % 3 != 1 for p, e in rest_pairs):
        raise ShapeError(f"cubic conductor {value} violates 3^a * (primes = 1 mod 3), a in {{0,2}}")
    return ConductorData(value=value, base=3, base_exponent=exponent, squarefree_part=rest)


# ---------------------------------------------------------------------------
# Kummer degrees and sigma existence
# ---------------------------------------------------------------------------


def _membership(m: int, n: int, sqrt: SqrtData, cond: Optional[ConductorData]) -> bool:
    """Whether the m-twisted root of gamma lies in K(zeta_n)."""
    if m == 1:
        return True
    if m == 2:
        return sqrt.q_flag and (n % abs(sqrt.delta1) == 0 or n % abs(sqrt.delta2) == 0)
    if m == 4:
        assert cond is not None and cond.base == 2, "quartic conductor required"
        return _membership(2, n, sqrt, cond) and math.lcm(4, n) % cond.value == 0
    if m == 3:
        assert cond is not None and cond.base == 3, "cubic conductor required"
        return n % cond.value == 0
    assert m == 6
    return _membership(2, n, sqrt, cond) and _membership(3, n, sqrt, cond)


def kummer_degree(
    n: int,
    dd: int,
    pix: PowerIndexData,
    sqrt: SqrtData,
    cond: Optional[ConductorData] = None,
) -> int:
    """[K(zeta_n, gamma^(1/dd)) : Q] in the twist-free normal form (h = h(1))."""
    if n < 1 or dd < 1 or n % dd:
        raise LucasDensityError(f"need dd | n, got dd={dd}, n={n}")
    h = pix.table[0]
    assert pix.h == h, "degree formula requires h = h(1); renormalise the context first"
    t = 1
    for m in divisors(len(pix.table)):
        # h_m is the m-smooth part of h: the saturation depth at which the
        # zeta_m ambiguity of the dd-th root can be absorbed
        if m == 1 or dd % (m * gcd_power_infinity(h, m)):
            continue
        if _membership(m, n, sqrt, cond):
            t = m
    degree = dd * euler_phi(n) // (math.gcd(dd, h) * t)
    if n % abs(pix.disc_k):
        degree *= 2
    return degree


def sigma_exists(
    dv: int,
    uv: int,
    disc_k: int,
    pix: PowerIndexData,
    sqrt: SqrtData,
) -> bool:
    """Whether Gal(K_{dv,uv}/Q) contains the inverting automorphism.

    Always true for imaginary fields.  For real fields the obstruction depends
    on whether the normalised square-root element becomes a square in
    K(zeta_dv), per the two-branch criterion.
    """
    if dv < 1 or uv < 1 or dv % uv:
        raise LucasDensityError(f"need uv | dv, got uv={uv}, dv={dv}")
    if disc_k < 0:
        return True
    # 2-smooth part of the power index, same normalisation as the degree
    # formula's t-condition: the square-root tower over gamma only reaches
    # depth v2(h), and an odd factor in h must not enter the 2-adic test.
    h2 = gcd_power_infinity(pix.h, 2)
    in_square = sqrt.q_flag and (dv % abs(sqrt.delta1) == 0 or dv % abs(sqrt.delta2) == 0)
    if uv % (2 * h2) or not in_square:
        return dv % disc_k != 0 and (uv % h2 != 0 or sqrt.q_flag)
    return dv % disc_k != 0 and (
        (not sqrt.c_positive and dv % abs(sqrt.delta1) == 0)
        or (sqrt.c_positive and dv % abs(sqrt.delta2) == 0)
    )
