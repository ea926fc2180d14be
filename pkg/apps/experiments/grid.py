"""
Field grids and error-exponent regression.
"""
import math
from typing import NamedTuple

import numpy as np
from sympy import factorint

from apps.ffield.field import field_parse


class FitError(ValueError):
    """Too few usable rows for the regression."""


def grid_policy(max_q, odd_only=True):
    """Field labels of every prime power q <= max_q, ascending, so primes and
    prime powers interleave (3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, ...)."""
    labels = []
    for q in range(2, max_q + 1):
        if odd_only and q % 2 == 0:
            continue
        factors = factorint(q)
        if len(factors) != 1:
            continue
        (p, k), = factors.items()
        labels.append(str(p) if k == 1 else f"{p}^{k}")
    return labels


class ExponentFit(NamedTuple):
    slope: float
    intercept: float
    points: int
    excluded: int


def _value(row, key):
    return row[key] if isinstance(row, dict) else getattr(row, key)


def fit_error_exponent(rows, min_points=4):
    """Least-squares slope of log(abs_error) against log(q).

    Rows with zero error are excluded and counted. All rows must share n and
    the offset list.
    """
    rows = list(rows)
    if not rows:
        raise FitError("no rows to fit")
    shapes = {(_value(r, 'n'), _offset_key(_value(r, 'offsets'))) for r in rows}
    if len(shapes) > 1:
        raise FitError(f"rows mix different tuples: {sorted(shapes)}")
    points = []
    excluded = 0
    for r in rows:
        err = float(_value(r, 'abs_error'))
        if err == 0:
            excluded += 1
            continue
        points.append((field_parse(_value(r, 'field')).q, err))
    if len(points) < min_points:
        raise FitError(f"{len(points)} usable points, need at least {min_points}")
    points.sort()
    x = np.array([math.log(q) for q, _ in points])
    y = np.array([math.log(e) for _, e in points])
    slope, intercept = np.polyfit(x, y, 1)
    return ExponentFit(float(slope), float(intercept), len(points), excluded)


def _offset_key(offsets):
    if isinstance(offsets, str):
        return offsets
    return ','.join(offsets)
