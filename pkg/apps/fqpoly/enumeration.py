"""
Monic polynomials of a fixed degree, ranked.

The monic f = t^n + u_1 t^{n-1} + ... + u_n has rank sum(u_i * q^{n-i}),
so the constant term is the least significant base-q digit. Shards take
every rank congruent to ``index`` modulo ``total``.
"""
from sympy import divisors
from sympy.ntheory import mobius

from .dense import PolynomialError
from .poly import Poly


def check_shard(shard):
    index, total = shard
    if total < 1 or not 0 <= index < total:
        raise PolynomialError(f"invalid shard {index}/{total}")
    return index, total


def coeffs_from_rank(q, n, rank):
    """Codes of the monic degree-n polynomial with the given rank, low first."""
    out = []
    for _ in range(n):
        rank, c = divmod(rank, q)
        out.append(c)
    out.append(1)
    return out


def poly_from_rank(field, n, rank):
    return Poly(field, coeffs_from_rank(field.q, n, rank))


def poly_rank(f):
    if not f.is_monic:
        raise PolynomialError(f"{f} is not monic")
    q = f.field.q
    rank = 0
    for c in reversed(f.coeffs[:-1]):
        rank = rank * q + c
    return rank


def iter_monic_coeffs(q, n, start, stop, step=1):
    """Coefficient lists for ranks start, start+step, ... below stop.

    Consecutive ranks in a step-1 run are produced by an odometer instead
    of a full base-q conversion.
    """
    if start >= stop:
        return
    if step != 1:
        for rank in range(start, stop, step):
            yield coeffs_from_rank(q, n, rank)
        return
    cur = coeffs_from_rank(q, n, start)
    for _ in range(stop - start):
        yield cur
        cur = list(cur)
        i = 0
        while i < n:
            cur[i] += 1
            if cur[i] < q:
                break
            cur[i] = 0
            i += 1


def enumerate_monic(field, n, shard=(0, 1)):
    """Monic degree-n polynomials over ``field`` in the given shard, by rank."""
    index, total = check_shard(shard)
    if n < 0:
        raise PolynomialError(f"negative degree {n}")
    for coeffs in iter_monic_coeffs(field.q, n, index, field.q**n, total):
        yield Poly(field, coeffs)


def random_monic_coeffs(q, n, rng):
    """Uniform monic degree-n coefficient list drawn from a numpy Generator."""
    out = [int(c) for c in rng.integers(0, q, size=n)]
    out.append(1)
    return out


def random_monic(field, n, rng):
    return Poly(field, random_monic_coeffs(field.q, n, rng))


def irreducible_count(q, n):
    """Number of monic irreducible degree-n polynomials over F_q (necklace formula)."""
    if n < 1:
        raise PolynomialError(f"degree must be >= 1, got {n}")
    total = sum(int(mobius(d)) * q**(n // d) for d in divisors(n))
    return total // n
