"""
Discriminant parity: Stickelberger's sign, square classes of the family
discriminants in F_q(U), and the joint quadratic-character patterns of their
specialisations.
"""
import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field

from scipy.stats import chisquare

from apps.fqpoly.dense import (
    gf_ddf_degrees,
    gf_divmod,
    gf_eval,
    gf_gcd,
    gf_is_squarefree,
    gf_odd_part,
)
from apps.fqpoly.poly import discriminant
from apps.hlcount.counting import check_budget
from apps.hlcount.crlab import family_discriminants, iter_specialisations
from apps.hlcount.tuples import ensure_valid

logger = logging.getLogger(__name__)


class ParityError(ValueError):
    """Parity statistics need odd characteristic and separable input."""


def _require_odd(F):
    if not F.is_odd:
        raise ParityError(f"quadratic characters need odd q, got {F.q}")


def stickelberger_check(f):
    """chi(disc f) == (-1)^(n - m) for square-free f of degree n with m
    irreducible factors."""
    F = f.field
    _require_odd(F)
    if f.degree < 1:
        raise ParityError("degree must be at least 1")
    coeffs = list(f.monic().coeffs)
    if not gf_is_squarefree(F, coeffs):
        raise ParityError(f"{f} is not square-free")
    m = len(gf_ddf_degrees(F, coeffs))
    expected = 1 if (f.degree - m) % 2 == 0 else -1
    return F.character(discriminant(f).code) == expected


def _refine(atoms, F, g):
    """Insert square-free g into a pairwise coprime list of square-free atoms."""
    out = []
    for a in atoms:
        d = gf_gcd(F, a, g)
        if len(d) > 1:
            rest = gf_divmod(F, a, d)[0]
            if len(rest) > 1:
                out.append(rest)
            out.append(d)
            g = gf_divmod(F, g, d)[0]
        else:
            out.append(a)
    if len(g) > 1:
        out.append(g)
    return out


def square_class_vectors(discs):
    """Bit vectors of the classes of discs in E^x / (E^x)^2 F_q^x, over a
    coprime base of their odd parts."""
    F = discs[0].field
    odd_parts = []
    for d in discs:
        if d.is_zero:
            raise ParityError("zero discriminant has no square class")
        odd_parts.append(gf_odd_part(F, list(d.coeffs)))
    atoms = []
    for g in odd_parts:
        if len(g) > 1:
            atoms = _refine(atoms, F, g)
    vectors = []
    for g in odd_parts:
        bits = 0
        for j, a in enumerate(atoms):
            if len(g) > 1 and not gf_divmod(F, g, a)[1]:
                bits |= 1 << j
        vectors.append(bits)
    return vectors


def square_class_independence(discs):
    """True iff no non-empty subset product of discs is a constant times a
    square in F_q(U)."""
    basis = []
    for v in square_class_vectors(discs):
        for b in basis:
            v = min(v, v ^ b)
        if not v:
            return False
        basis.append(v)
    return True


@dataclass
class SignPatternReport:
    r: int
    counts: Counter = field(default_factory=Counter)
    total: int = 0
    skipped: int = 0
    statistic: float = 0.0
    p_value: float = 1.0

    def frequency(self, pattern):
        return self.counts.get(pattern, 0) / self.total if self.total else 0.0

    def to_record(self):
        return {
            'kind': 'signs',
            'r': self.r,
            'total': self.total,
            'skipped': self.skipped,
            'counts': {''.join('+' if s > 0 else '-' for s in k): c
                       for k, c in sorted(self.counts.items())},
            'statistic': self.statistic,
            'p_value': self.p_value,
        }


def sign_pattern_stats(spec, u):
    """Joint quadratic characters (chi(D_1(c)), ..., chi(D_r(c))) over c in F_q,
    where D_i are the family discriminants at u. Points where some D_i(c)
    vanishes are skipped."""
    ensure_valid(spec)
    F = spec.field
    _require_odd(F)
    discs = family_discriminants(spec, u)
    report = SignPatternReport(r=spec.r)
    for c in range(F.q):
        values = [gf_eval(F, list(d.coeffs), c) for d in discs]
        if not all(values):
            report.skipped += 1
            continue
        pattern = tuple(F.character(v) for v in values)
        report.counts[pattern] += 1
        report.total += 1
    if report.total:
        patterns = list(itertools.product((1, -1), repeat=spec.r))
        observed = [report.counts.get(p, 0) for p in patterns]
        expected = [report.total / len(patterns)] * len(patterns)
        stat, p_value = chisquare(observed, expected)
        report.statistic, report.p_value = float(stat), float(p_value)
    logger.debug(f"Sign patterns for {spec}: {dict(report.counts)}")
    return report


@dataclass
class SquareClassReport:
    space: int
    independent: int = 0
    dependent: int = 0
    degenerate: int = 0

    def to_record(self):
        return {
            'kind': 'square_classes',
            'space': self.space,
            'independent': self.independent,
            'dependent': self.dependent,
            'degenerate': self.degenerate,
        }


def square_class_count(spec, budget=None):
    """Tally u in F_q^{n-1} by whether the family discriminants are independent
    modulo constants and squares. u with a zero discriminant is degenerate."""
    ensure_valid(spec)
    if spec.n < 2:
        raise ParityError(f"family discriminants need n >= 2, got {spec.n}")
    space = spec.q**(spec.n - 1)
    check_budget(space, budget, what='specialisations')
    report = SquareClassReport(space=space)
    for u in iter_specialisations(spec):
        discs = family_discriminants(spec, u)
        if any(d.is_zero for d in discs):
            report.degenerate += 1
        elif square_class_independence(discs):
            report.independent += 1
        else:
            report.dependent += 1
    logger.info(f"Square classes for {spec}: {report.independent}/{space} independent")
    return report
