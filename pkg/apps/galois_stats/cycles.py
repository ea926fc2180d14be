"""
Cycle types of specialised tuples f + a_1, ..., f + a_r.

A cycle type is an ascending tuple of positive parts; for a square-free
polynomial it is the multiset of irreducible factor degrees, i.e. the cycle
type of Frobenius acting on the roots.
"""
import logging
import math
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy.utilities.iterables import partitions as sympy_partitions

from apps.fqpoly.dense import gf_add, gf_ddf_degrees, gf_is_squarefree
from apps.fqpoly.enumeration import irreducible_count
from apps.hlcount.sampling import block_rng, iter_draws
from apps.hlcount.tuples import ensure_valid

logger = logging.getLogger(__name__)


class CycleTypeError(ValueError):
    """Not a partition of the expected size."""


def cycle_type(parts, n=None):
    parts = tuple(sorted(int(x) for x in parts))
    if any(x < 1 for x in parts):
        raise CycleTypeError(f"non-positive part in {parts}")
    if n is not None and sum(parts) != n:
        raise CycleTypeError(f"{parts} does not sum to {n}")
    return parts


def format_cycle_type(parts):
    return '+'.join(str(x) for x in parts)


def parse_cycle_type(text):
    return cycle_type(int(x) for x in text.split('+'))


@lru_cache(maxsize=None)
def partitions(n):
    """All cycle types of S_n, in ascending lexicographic order."""
    out = []
    for p in sympy_partitions(n):
        parts = []
        for part, mult in p.items():
            parts.extend([part] * mult)
        out.append(tuple(sorted(parts)))
    return tuple(sorted(out))


def sn_class_probability(parts):
    """Probability that a uniform permutation of S_n has the given cycle type."""
    parts = cycle_type(parts)
    if not parts:
        raise CycleTypeError("empty cycle type")
    denom = 1
    for j, m in Counter(parts).items():
        denom *= j**m * math.factorial(m)
    return Fraction(1, denom)


def finite_class_probability(parts, q):
    """Probability of the factorisation type among square-free monic
    polynomials of degree sum(parts) over F_q."""
    parts = cycle_type(parts)
    n = sum(parts)
    if n < 1:
        raise CycleTypeError("empty cycle type")
    count = 1
    for d, m in Counter(parts).items():
        count *= math.comb(irreducible_count(q, d), m)
    squarefree = q if n == 1 else q**n - q**(n - 1)
    return Fraction(count, squarefree)


def reference_distribution(n, q=None):
    """Cycle type -> probability, from S_n or (given q) the finite field."""
    if q is None:
        return {lam: sn_class_probability(lam) for lam in partitions(n)}
    return {lam: finite_class_probability(lam, q) for lam in partitions(n)}


@dataclass
class JointCycleStats:
    n: int
    r: int
    counts: Counter = dc_field(default_factory=Counter)
    total: int = 0
    discarded: int = 0
    q: int = None
    field: str = ''
    config_digest: str = ''

    @property
    def reference(self):
        return reference_distribution(self.n)

    def add(self, key, count=1):
        self.counts[key] += count
        self.total += count

    def marginal(self, i):
        out = Counter()
        for key, c in self.counts.items():
            out[key[i]] += c
        return out

    def frequency(self, key):
        return self.counts.get(key, 0) / self.total if self.total else 0.0

    def to_record(self):
        return {
            'kind': 'cycles',
            'n': self.n,
            'r': self.r,
            'field': self.field,
            'q': self.q,
            'total': self.total,
            'discarded': self.discarded,
            'counts': {
                '|'.join(format_cycle_type(p) for p in key): c
                for key, c in sorted(self.counts.items())
            },
            'reference': {
                format_cycle_type(lam): f"{p.numerator}/{p.denominator}"
                for lam, p in self.reference.items()
            },
            'config_digest': self.config_digest,
        }


def merge_stats(a, b):
    if (a.n, a.r) != (b.n, b.r):
        raise CycleTypeError("cannot merge statistics of different shapes")
    merged = JointCycleStats(n=a.n, r=a.r, counts=a.counts + b.counts,
                             total=a.total + b.total, discarded=a.discarded + b.discarded,
                             q=a.q, field=a.field, config_digest=a.config_digest)
    return merged


def joint_cycle_sample(spec, samples, seed, blocks=None):
    """Joint cycle types of (f + a_1, ..., f + a_r) over uniform draws of f.

    Draws where some f + a_i has a repeated factor are discarded and counted
    in ``discarded``.
    """
    ensure_valid(spec)
    F = spec.field
    offsets = [list(a.coeffs) for a in spec.offsets]
    stats = JointCycleStats(n=spec.n, r=spec.r, q=F.q, field=F.label,
                             config_digest=spec.digest())
    for coeffs in iter_draws(seed, samples, F.q, spec.n, blocks):
        key = []
        for a in offsets:
            g = gf_add(F, coeffs, a) if a else coeffs
            if not gf_is_squarefree(F, g):
                key = None
                break
            key.append(gf_ddf_degrees(F, g))
        if key is None:
            stats.discarded += 1
        else:
            stats.add(tuple(key))
    logger.debug(f"Cycle statistics for {spec}: {stats.total} kept, {stats.discarded} discarded")
    return stats


def permutation_cycle_type(perm):
    seen = [False] * len(perm)
    parts = []
    for start in range(len(perm)):
        if not seen[start]:
            length = 0
            j = start
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            parts.append(length)
    return tuple(sorted(parts))


def simulate_product_model(n, r, samples, seed):
    """JointCycleStats of r independent uniform permutations of S_n."""
    rng = block_rng(seed, 0)
    base = np.tile(np.arange(n), (samples * r, 1))
    perms = rng.permuted(base, axis=1).reshape(samples, r, n).tolist()
    stats = JointCycleStats(n=n, r=r)
    for row in perms:
        stats.add(tuple(permutation_cycle_type(p) for p in row))
    return stats
