"""
Scalar special functions: log-gamma, the cone gamma function and the
modified Bessel function of the first kind ``I(alpha, z)``.

``log_bessel_i`` sums the power series for ``z <= 30`` and switches to the
large-argument expansion

    log I(a, z) ~ z - log(2 pi z)/2 + log(1 - (4a^2-1)/(8z)
                  + (4a^2-1)(4a^2-9)/(2! (8z)^2) - ...)

above it, so the result stays finite well past the overflow point of
``I`` itself.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike

from .errors import DomainError, PoleError, UnsupportedOrder

__all__ = [
    "log_gamma",
    "log_gamma_omega",
    "log_bessel_i",
    "bessel_i",
    "BesselEval",
    "g_series",
    "SERIES_CUTOFF",
]

SERIES_CUTOFF = 30.0
_SERIES_RTOL = 1e-17
_LOG_2PI = math.log(2.0 * math.pi)


def log_gamma(x: float) -> float:
    """``log |Gamma(x)|`` (C library ``lgamma``)."""
    return math.lgamma(x)


def log_gamma_omega(s: ArrayLike) -> float:
    """Log of ``Gamma_Omega(s) = (2 pi)^{r(r-1)/4} prod_i Gamma(s_i - (i-1)/2)``.

    Raises
    ------
    PoleError
        If some ``s_i - (i-1)/2 <= 0``.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    r = s.shape[0]
    shifted = s - np.arange(r) / 2.0
    if np.any(shifted <= 0):
        raise PoleError(f"Gamma_Omega has a pole at s = {s.tolist()}")
    return r * (r - 1) / 4.0 * _LOG_2PI + sum(math.lgamma(a) for a in shifted)


def _check_order(alpha: float) -> float:
    if alpha <= -1.0:
        if alpha != math.floor(alpha):
            raise UnsupportedOrder(f"non-integer order {alpha} <= -1 is not supported")
        # I(-n, z) = I(n, z) for integer n
        return -alpha
    return alpha


def _log_series(alpha: float, z: float) -> float:
    half = 0.5 * z
    log_t0 = alpha * math.log(half) - math.lgamma(alpha + 1.0)
    q = half * half
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + alpha))
        total += term
        if term < _SERIES_RTOL * total and k * (k + alpha) > q:
            break
    return log_t0 + math.log(total)


def _log_asymptotic(alpha: float, z: float) -> float:
    mu = 4.0 * alpha * alpha
    term = 1.0
    total = 1.0
    prev = math.inf
    k = 0
    while True:
        k += 1
        term *= -(mu - (2 * k - 1) ** 2) / (k * 8.0 * z)
        if term == 0.0 or abs(term) < _SERIES_RTOL * abs(total):
            total += term
            break
        if abs(term) >= prev:
            # divergent tail: stop at the smallest term
            break
        total += term
        prev = abs(term)
    return z - 0.5 * (_LOG_2PI + math.log(z)) + math.log(total)


def log_bessel_i(alpha: float, z: float) -> float:
    """``log I(alpha, z)`` for real ``z >= 0``.

    ``alpha`` must exceed -1 or be a negative integer (``I(-n, .) = I(n, .)``).
    Returns ``-inf`` where ``I`` vanishes (``z = 0``, ``alpha > 0``).
    """
    alpha = float(alpha)
    z = float(z)
    if not z >= 0.0:
        raise DomainError(f"argument must be nonnegative, got {z}")
    alpha = _check_order(alpha)
    if z == 0.0:
        if alpha == 0.0:
            return 0.0
        return -math.inf if alpha > 0 else math.inf
    if z <= SERIES_CUTOFF:
        return _log_series(alpha, z)
    return _log_asymptotic(alpha, z)


class BesselEval(NamedTuple):
    order: float
    argument: float
    log_value: float
    value: float


def bessel_i(alpha: float, z: float) -> BesselEval:
    """``I(alpha, z)`` with its logarithm; ``value`` is ``inf`` on overflow."""
    lv = log_bessel_i(alpha, z)
    try:
        v = math.exp(lv)
    except OverflowError:
        v = math.inf
    return BesselEval(float(alpha), float(z), lv, v)


def g_series(b: float, x: float, rel_tol: float = 1e-17) -> float:
    """Partial sum of ``sum_k x^k / (k! Gamma(k + b))``.

    Summation stops once the next term falls below ``rel_tol`` times the
    running sum (after the terms have started decreasing).
    """
    if not b > 0:
        raise DomainError(f"b must be positive, got {b}")
    if not x >= 0:
        raise DomainError(f"x must be nonnegative, got {x}")
    term = 1.0 / math.gamma(b) if b < 170 else math.exp(-math.lgamma(b))
    total = term
    k = 0
    while True:
        nxt = term * x / ((k + 1) * (k + b))
        if nxt < rel_tol * total and (k + 1) * (k + b) > x:
            break
        k += 1
        term = nxt
        total += term
    return total
