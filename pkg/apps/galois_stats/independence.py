"""
Chi-square tests of joint cycle-type statistics against a product model.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field

from scipy.stats import chisquare

from .cycles import format_cycle_type, partitions, reference_distribution

logger = logging.getLogger(__name__)

MIN_EXPECTED = 5
MIN_PER_CELL = 50


class SampleSizeError(ValueError):
    """Too few samples for the chi-square approximation."""


@dataclass
class ChiSquareResult:
    statistic: float
    dof: int
    p_value: float
    buckets: int
    pooled: list = field(default_factory=list)

    def rejects(self, alpha=0.01):
        return self.p_value < alpha


@dataclass
class IndependenceReport:
    joint: ChiSquareResult
    marginals: list
    reference: str
    total: int

    def rejects(self, alpha=0.01):
        return self.joint.rejects(alpha)

    def to_record(self):
        return {
            'kind': 'independence',
            'reference': self.reference,
            'total': self.total,
            'statistic': self.joint.statistic,
            'dof': self.joint.dof,
            'p_value': self.joint.p_value,
            'marginal_p_values': [m.p_value for m in self.marginals],
        }


def pool_small_cells(observed, expected, minimum=MIN_EXPECTED):
    """Merge the cells with the smallest expectation into one bucket until
    every bucket expects at least ``minimum``.

    Returns (observed, expected, pooled_keys) with the pooled bucket last.
    """
    keys = sorted(expected, key=lambda k: (expected[k], k))
    pooled = []
    pooled_exp = 0.0
    while keys and (expected[keys[0]] < minimum or (pooled and pooled_exp < minimum)):
        k = keys.pop(0)
        pooled.append(k)
        pooled_exp += expected[k]
    obs = [observed.get(k, 0) for k in keys]
    exp = [expected[k] for k in keys]
    if pooled:
        obs.append(sum(observed.get(k, 0) for k in pooled))
        exp.append(pooled_exp)
    return obs, exp, pooled


def goodness_of_fit(observed, probabilities, total):
    """Chi-square of observed counts against fixed cell probabilities."""
    expected = {k: total * float(p) for k, p in probabilities.items()}
    obs, exp, pooled = pool_small_cells(observed, expected)
    if len(obs) < 2:
        raise SampleSizeError("fewer than two buckets after pooling")
    stat, p_value = chisquare(obs, exp)
    return ChiSquareResult(statistic=float(stat), dof=len(obs) - 1, p_value=float(p_value),
                           buckets=len(obs), pooled=pooled)


def minimum_samples(n, r):
    return MIN_PER_CELL * len(partitions(n))**r


def independence_test(stats, finite_q=None):
    """Test the joint cycle types against the product of per-coordinate
    reference distributions, plus one marginal test per coordinate.

    The reference is S_n unless ``finite_q`` is given, in which case the exact
    factorisation-type distribution of square-free polynomials over F_q is used.
    """
    needed = minimum_samples(stats.n, stats.r)
    if stats.total < needed:
        raise SampleSizeError(f"{stats.total} samples, need at least {needed}")
    ref = reference_distribution(stats.n, finite_q)
    joint_probs = {
        key: math.prod(ref[lam] for lam in key)
        for key in itertools.product(partitions(stats.n), repeat=stats.r)
    }
    joint = goodness_of_fit(stats.counts, joint_probs, stats.total)
    marginals = [goodness_of_fit(stats.marginal(i), ref, stats.total) for i in range(stats.r)]
    if joint.pooled:
        logger.debug("Pooled cells: " + ', '.join(
            '|'.join(format_cycle_type(p) for p in key) for key in joint.pooled))
    return IndependenceReport(joint=joint, marginals=marginals,
                              reference='S_n' if finite_q is None else f"F_{finite_q}",
                              total=stats.total)
