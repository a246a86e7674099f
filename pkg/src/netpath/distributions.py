"""Tail probabilities for the chi-squared and standard normal distributions.

The upper regularized incomplete gamma follows the classic split: power
series below ``x < a + 1``, modified Lentz continued fraction above.
"""

from __future__ import annotations

import math
import sys

from .errors import DomainError, NumericalFailure

_EPS = 1e-15
_TINY = sys.float_info.min / sys.float_info.epsilon
_MAX_ITER = 10_000


def _log_prefactor(a: float, x: float) -> float:
    return -x + a * math.log(x) - math.lgamma(a)


def _lower_series(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x) by its power series."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(_log_prefactor(a, x))
    raise NumericalFailure(f"incomplete gamma series did not converge (a={a}, x={x})")


def _upper_continued_fraction(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) by continued fraction."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return math.exp(_log_prefactor(a, x)) * h
    raise NumericalFailure(f"incomplete gamma continued fraction did not converge (a={a}, x={x})")


def gammaincc(a: float, x: float) -> float:
    if a <= 0:
        raise DomainError(f"shape must be positive, got {a}")
    if x < 0 or math.isnan(x):
        raise DomainError(f"x must be non-negative, got {x}")
    if x == 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _lower_series(a, x))
    return min(1.0, _upper_continued_fraction(a, x))


def chi2_sf(x: float, k: int) -> float:
    """P(X > x) for X ~ chi-squared with ``k`` degrees of freedom."""
    if k < 1:
        raise DomainError(f"degrees of freedom must be >= 1, got {k}")
    if x < 0 or math.isnan(x):
        raise DomainError(f"chi-squared statistic must be non-negative, got {x}")
    return gammaincc(k / 2.0, x / 2.0)


def normal_sf_two_sided(z: float) -> float:
    """2 * (1 - Phi(|z|))."""
    if not math.isfinite(z):
        if math.isnan(z):
            raise DomainError("z is NaN")
        return 0.0
    return min(1.0, math.erfc(abs(z) / math.sqrt(2.0)))
