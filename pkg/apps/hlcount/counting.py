"""
pi(q, n; a): the number of monic degree-n f over F_q with every f + a_i
irreducible, counted exactly by enumeration or estimated by sampling, and
set against the prediction q^n / n^r.
"""
import logging
import math
from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction

from django.conf import settings
import numpy as np
from scipy.stats import norm

from apps.ffield.field import field_parse
from apps.fqpoly.dense import gf_add, gf_ddf_degrees, gf_is_irreducible, gf_is_squarefree
from apps.fqpoly.enumeration import check_shard, iter_monic_coeffs

from .sampling import iter_draw_blocks, iter_draws
from .tuples import ensure_valid

logger = logging.getLogger(__name__)

MODE_EXACT = 'exact'
MODE_SAMPLED = 'sampled'

Z_95 = float(norm.ppf(0.975))

# largest q for the n = 3 value tables, which hold q*q booleans each
CUBIC_MAX_Q = 2**12


class BudgetExceededError(RuntimeError):
    """The requested enumeration exceeds the tuple-test budget."""


def default_budget():
    return getattr(settings, 'HLLAB_BUDGET', 10**8)


def prediction(q, n, r):
    return Fraction(q**n, n**r)


def normalized_error(abs_error, q, n):
    return float(abs_error) / q**(n - 0.5)


@dataclass
class CountResult:
    field: str
    n: int
    offsets: list
    mode: str
    pi: object
    prediction: Fraction
    abs_error: float
    normalized_error: float
    sample_size: int = None
    ci_half_width: float = None
    seed: int = None
    shard: str = '0/1'
    config_digest: str = ''
    outside_hypotheses: bool = False
    hits: int = dc_field(default=None, repr=False)

    @classmethod
    def build(cls, spec, pi, mode=MODE_EXACT, shard=(0, 1), **extra):
        pred = prediction(spec.q, spec.n, spec.r)
        err = abs(Fraction(pi) - pred)
        return cls(
            field=spec.field.label,
            n=spec.n,
            offsets=spec.offset_texts,
            mode=mode,
            pi=pi,
            prediction=pred,
            abs_error=float(err),
            normalized_error=normalized_error(err, spec.q, spec.n),
            shard=f"{shard[0]}/{shard[1]}",
            config_digest=spec.digest(),
            outside_hypotheses=spec.outside_hypotheses,
            **extra,
        )

    def to_record(self):
        record = asdict(self)
        record.pop('hits')
        record['kind'] = 'count'
        record['offsets'] = ','.join(self.offsets)
        record['prediction'] = f"{self.prediction.numerator}/{self.prediction.denominator}"
        return record


def _quadratic_tester(spec):
    """For n = 2 and odd q: t^2 + b t + c is irreducible iff b^2 - 4c is a
    nonsquare. Returns None when the character table is unavailable."""
    F = spec.field
    if spec.n != 2 or not F.is_odd or F.q > getattr(settings, 'HLLAB_TABLE_LIMIT', 2**20):
        return None
    chi = F.character_table()
    four = F.reduce_int(4)
    shifts = [(a.coeffs[1] if len(a.coeffs) > 1 else 0, a.coeffs[0] if a.coeffs else 0)
              for a in spec.short_circuit_order()]
    if F.k == 1:
        p = F.p

        def test(b, c):
            for a1, a0 in shifts:
                bb = b + a1
                if chi[(bb * bb - 4 * (c + a0)) % p] != -1:
                    return False
            return True
    else:
        add, sub, mul = F.add, F.sub, F.mul

        def test(b, c):
            for a1, a0 in shifts:
                bb = add(b, a1)
                if chi[sub(mul(bb, bb), mul(four, add(c, a0)))] != -1:
                    return False
            return True
    return test


def _cubic_shifts(spec):
    """(q, offset coefficient triples) when the n = 3 root test applies, else None."""
    F = spec.field
    limit = min(CUBIC_MAX_Q, getattr(settings, 'HLLAB_TABLE_LIMIT', 2**20))
    if spec.n != 3 or F.k != 1 or F.q > limit:
        return None
    return F.q, [tuple(a.coeff(i).code for i in range(3)) for a in spec.short_circuit_order()]


def _cubic_block_counter(spec):
    """For n = 3 over F_p a monic cubic is irreducible iff it has no root, so
    f + a is irreducible iff -(c + a_0) is not a value of
    x^3 + (b_2 + a_2) x^2 + (b_1 + a_1) x.

    Returns a function of b_2 giving the (b_1, c) hit mask, or None.
    """
    found = _cubic_shifts(spec)
    if found is None:
        return None
    q, shifts = found
    x = np.arange(q, dtype=np.int64)
    x2 = x * x % q
    x3 = x2 * x % q
    rows = x[:, None]

    def values(b):
        # values(b)[b_1, v]: v is taken by x^3 + b x^2 + b_1 x
        table = np.zeros((q, q), dtype=bool)
        table[rows, (x3 + b * x2 + rows * x) % q] = True
        return table

    def block(b2):
        tables = {}
        ok = np.ones((q, q), dtype=bool)
        for a0, a1, a2 in shifts:
            b = (b2 + a2) % q
            if b not in tables:
                tables[b] = values(b)
            ok &= ~tables[b][np.ix_((x + a1) % q, (-(x + a0)) % q)]
        return ok
    return block


def _cubic_sample_counter(spec):
    """Root test on arrays of draws; returns a function of a draw block, or None."""
    found = _cubic_shifts(spec)
    if found is None:
        return None
    q, shifts = found
    x = np.arange(q, dtype=np.int64)
    x2 = x * x % q
    x3 = x2 * x % q
    chunk = max(1, 2**20 // q)

    def count(draws):
        hits = 0
        for lo in range(0, len(draws), chunk):
            d = draws[lo:lo + chunk]
            ok = np.ones(len(d), dtype=bool)
            for a0, a1, a2 in shifts:
                c = (d[:, 0] + a0) % q
                b1 = (d[:, 1] + a1) % q
                b2 = (d[:, 2] + a2) % q
                vals = (x3 + b2[:, None] * x2 + b1[:, None] * x + c[:, None]) % q
                ok &= ~(vals == 0).any(axis=1)
            hits += int(np.count_nonzero(ok))
        return hits
    return count


def _count_cubic(block, q, index, total, start, hi):
    square = q * q
    ranks = np.arange(square, dtype=np.int64).reshape(q, q)
    hits = 0
    for b2 in range(start // square, -(-hi // square)):
        r = ranks + b2 * square
        mask = block(b2) & (r >= start) & (r < hi)
        if total > 1:
            mask &= (r - index) % total == 0
        hits += int(np.count_nonzero(mask))
    return hits


def count_range(spec, shard=(0, 1), lo=0, hi=None):
    """Hits among ranks r in [lo, hi) with r = index (mod total)."""
    index, total = check_shard(shard)
    F, n = spec.field, spec.n
    space = F.q**n
    hi = space if hi is None else min(hi, space)
    start = lo + (index - lo) % total
    if start >= hi:
        return 0
    cubic = _cubic_block_counter(spec)
    if cubic is not None:
        return _count_cubic(cubic, F.q, index, total, start, hi)
    quad = _quadratic_tester(spec)
    hits = 0
    if quad is not None:
        q = F.q
        for rank in range(start, hi, total):
            b, c = divmod(rank, q)
            if quad(b, c):
                hits += 1
        return hits
    offsets = [list(a.coeffs) for a in spec.short_circuit_order()]
    for coeffs in iter_monic_coeffs(F.q, n, start, hi, total):
        for a in offsets:
            if not gf_is_irreducible(F, gf_add(F, coeffs, a) if a else coeffs):
                break
        else:
            hits += 1
    return hits


def shard_size(space, shard):
    index, total = shard
    return max(0, -(-(space - index) // total))


def check_budget(tests, budget=None, what='tuple-tests'):
    budget = default_budget() if budget is None else budget
    if tests > budget:
        raise BudgetExceededError(f"{tests} {what} exceed the budget of {budget}")


def pi_exact(spec, shard=(0, 1), budget=None):
    """Exact pi over the shard's slice of the monic degree-n space."""
    ensure_valid(spec)
    shard = check_shard(shard)
    space = spec.q**spec.n
    check_budget(shard_size(space, shard), budget)
    hits = count_range(spec, shard)
    logger.debug(f"{spec} shard {shard[0]}/{shard[1]}: {hits} hits")
    return CountResult.build(spec, hits, MODE_EXACT, shard=shard, hits=hits)


def pi_exact_sharded(spec, shards=1, budget=None):
    """Exact pi run as ``shards`` slices and merged; the budget covers all of them."""
    ensure_valid(spec)
    check_budget(spec.q**spec.n, budget)
    return merge_counts(pi_exact(spec, (i, shards), budget) for i in range(shards))


def merge_counts(partials):
    """Sum sharded partial results into the unsharded CountResult."""
    partials = list(partials)
    if not partials:
        raise ValueError("nothing to merge")
    first = partials[0]
    if any(p.config_digest != first.config_digest for p in partials):
        raise ValueError("cannot merge results of different tuple specs")
    total = sum(p.pi for p in partials)
    pred = first.prediction
    err = abs(Fraction(total) - pred)
    q = field_parse(first.field).q
    return CountResult(
        field=first.field, n=first.n, offsets=first.offsets, mode=MODE_EXACT,
        pi=total, prediction=pred, abs_error=float(err),
        normalized_error=normalized_error(err, q, first.n),
        config_digest=first.config_digest, outside_hypotheses=first.outside_hypotheses,
        hits=total,
    )


def _is_all_irreducible_brute(F, coeffs, offsets, n):
    for a in offsets:
        g = gf_add(F, coeffs, a) if a else coeffs
        if not gf_is_squarefree(F, g) or gf_ddf_degrees(F, g) != (n,):
            return False
    return True


def pi_brute(spec, budget=None):
    """pi by distinct-degree factorisation instead of Rabin's test."""
    ensure_valid(spec)
    F, n = spec.field, spec.n
    space = F.q**n
    check_budget(space, budget)
    offsets = [list(a.coeffs) for a in spec.offsets]
    hits = sum(1 for coeffs in iter_monic_coeffs(F.q, n, 0, space)
               if _is_all_irreducible_brute(F, coeffs, offsets, n))
    return CountResult.build(spec, hits, MODE_EXACT, hits=hits)


def sample_hits(spec, samples, seed, blocks=None):
    """Number of all-irreducible draws among the given sample blocks."""
    F = spec.field
    cubic = _cubic_sample_counter(spec)
    if cubic is not None:
        return sum(cubic(d) for d in iter_draw_blocks(seed, samples, F.q, spec.n, blocks))
    quad = _quadratic_tester(spec)
    offsets = [list(a.coeffs) for a in spec.short_circuit_order()]
    hits = 0
    for coeffs in iter_draws(seed, samples, F.q, spec.n, blocks):
        if quad is not None:
            ok = quad(coeffs[1], coeffs[0])
        else:
            ok = all(gf_is_irreducible(F, gf_add(F, coeffs, a) if a else coeffs) for a in offsets)
        if ok:
            hits += 1
    return hits


def estimate_from_hits(spec, hits, samples, seed):
    space = spec.q**spec.n
    frac = hits / samples
    estimate = space * frac
    half = Z_95 * space * math.sqrt(frac * (1 - frac) / samples)
    return CountResult.build(spec, estimate, MODE_SAMPLED, sample_size=samples,
                             ci_half_width=half, seed=seed, hits=hits)


def pi_sample(spec, samples, seed, enumerate_all=False, budget=None):
    """Estimate pi from ``samples`` uniform draws keyed by ``seed``.

    With ``enumerate_all`` (calibration mode) ``samples`` must equal q^n and
    the whole space is enumerated instead; the estimate is then exact.
    """
    ensure_valid(spec)
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    check_budget(samples, budget)
    if enumerate_all:
        space = spec.q**spec.n
        if samples != space:
            raise ValueError(f"calibration mode needs samples = q^n = {space}")
        hits = count_range(spec)
        return CountResult.build(spec, hits, MODE_SAMPLED, sample_size=samples,
                                 ci_half_width=0.0, seed=seed, hits=hits)
    hits = sample_hits(spec, samples, seed)
    return estimate_from_hits(spec, hits, samples, seed)
