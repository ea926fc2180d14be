"""
Density of partial specialisations u = (u_1, ..., u_{n-1}) for which the
discriminants disc_t(t^n + u_1 t^{n-1} + ... + u_{n-1} t + U + a_i), taken as
polynomials in U, are square-free, pairwise coprime and non-constant.

The domain is F_q^{n-1}, matching the q^{n-1} main term.
"""
import logging
from dataclasses import asdict, dataclass
from fractions import Fraction

from apps.bipoly.bipoly import disc_in_t, specialize_family
from apps.fqpoly.dense import gf_gcd, gf_is_squarefree
from apps.fqpoly.enumeration import check_shard, coeffs_from_rank

from .counting import check_budget
from .tuples import ensure_valid

logger = logging.getLogger(__name__)

FAIL_SQUAREFREE = 'not_squarefree'
FAIL_COPRIME = 'not_coprime'
FAIL_CONSTANT = 'constant'


@dataclass
class CRReport:
    field: str
    n: int
    offsets: list
    N: int
    space: int
    not_squarefree: int = 0
    not_coprime: int = 0
    constant: int = 0
    config_digest: str = ''

    @property
    def density(self):
        return Fraction(self.N, self.space)

    def to_record(self):
        record = asdict(self)
        record['kind'] = 'cr'
        record['offsets'] = ','.join(self.offsets)
        record['density'] = float(self.density)
        return record


def family_discriminants(spec, u):
    """disc_t(F(u, U, t) + a_i) for every offset, as Polys in U."""
    return [disc_in_t(specialize_family(u, a, spec.n)) for a in spec.offsets]


def classify(discs):
    """None if the discriminants are admissible, else the first failed condition
    in the order square-free, coprime, non-constant."""
    F = discs[0].field
    for d in discs:
        if d.is_zero or not gf_is_squarefree(F, list(d.coeffs)):
            return FAIL_SQUAREFREE
    for i in range(len(discs)):
        for j in range(i + 1, len(discs)):
            if len(gf_gcd(F, discs[i].coeffs, discs[j].coeffs)) > 1:
                return FAIL_COPRIME
    if any(d.degree < 1 for d in discs):
        return FAIL_CONSTANT
    return None


def iter_specialisations(spec, shard=(0, 1), lo=0, hi=None):
    """u in F_q^{n-1} for ranks r in [lo, hi) with r = index (mod total).

    u is read from the rank like a monic coefficient vector of degree n - 1,
    highest coordinate first.
    """
    index, total = check_shard(shard)
    q, n = spec.q, spec.n
    space = q**(n - 1)
    hi = space if hi is None else min(hi, space)
    for rank in range(lo + (index - lo) % total, hi, total):
        codes = reversed(coeffs_from_rank(q, n - 1, rank)[:-1])
        yield [spec.field.from_code(c) for c in codes]


def cr_tally_range(spec, shard=(0, 1), lo=0, hi=None):
    """Admissible count and failure tallies over the specialisations of the shard."""
    tally = {'N': 0, FAIL_SQUAREFREE: 0, FAIL_COPRIME: 0, FAIL_CONSTANT: 0}
    for u in iter_specialisations(spec, shard, lo, hi):
        tally[classify(family_discriminants(spec, u)) or 'N'] += 1
    return tally


def cr_report(spec, tally):
    return CRReport(field=spec.field.label, n=spec.n, offsets=spec.offset_texts,
                    space=spec.q**(spec.n - 1), config_digest=spec.digest(), **tally)


def cr_count_exact(spec, budget=None):
    """Count admissible u over all of F_q^{n-1}."""
    ensure_valid(spec)
    if spec.n < 2:
        raise ValueError(f"the discriminant count needs n >= 2, got {spec.n}")
    check_budget(spec.q**(spec.n - 1), budget, what='specialisations')
    report = cr_report(spec, cr_tally_range(spec))
    logger.info(f"Discriminant density for {spec}: {report.N}/{report.space}")
    return report
