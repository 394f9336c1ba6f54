"""
Riesz distributions on the SPD cone, the multivariate (independent) Poisson
law, and the Poisson mixture of Riesz laws ``R(k + rho, I_r)``.

All densities are returned on the log scale. Samplers take an explicit
``numpy.random.Generator``.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import gammaln, logsumexp

from . import symcone as sc
from .errors import BoundaryShape, DimensionMismatch, DomainError, OutOfDomain
from .specfun import log_bessel_i, log_gamma_omega

__all__ = [
    "riesz_log_density",
    "riesz_log_laplace",
    "sample_riesz",
    "poisson_log_laplace",
    "sample_poisson",
    "mixture_log_density",
    "mixture_density",
    "mixture_log_density_series",
    "series_truncation",
    "sample_mixture",
    "as_rates",
]

_LOG_2PI = math.log(2.0 * math.pi)


def as_rates(lam: ArrayLike, r: int | None = None, strict: bool = True) -> NDArray[np.float64]:
    """Validate a rate vector; ``strict`` demands ``lam_i > 0``."""
    v = np.atleast_1d(np.asarray(lam, dtype=float))
    if v.ndim != 1:
        raise DimensionMismatch("rate vector must be one-dimensional")
    if r is not None and v.shape[0] != r:
        raise DimensionMismatch(f"expected {r} rates, got {v.shape[0]}")
    bad = ~(v > 0) if strict else ~(v >= 0)
    if np.any(bad) or not np.all(np.isfinite(v)):
        kind = "positive" if strict else "nonnegative"
        raise DomainError(f"rates must be finite and {kind}, got {v.tolist()}")
    return v


def _sigma(sigma: ArrayLike | None, r: int) -> NDArray[np.float64]:
    if sigma is None:
        return np.eye(r)
    out = sc.as_symmetric(sigma)
    if out.shape[0] != r:
        raise DimensionMismatch(f"sigma has order {out.shape[0]}, expected {r}")
    return out


def riesz_log_density(x: ArrayLike, s: ArrayLike, sigma: ArrayLike | None = None) -> float:
    """Log density of ``R(s, sigma)`` at ``x``; ``sigma`` defaults to ``I_r``.

    The reference measure is the Euclidean measure for ``<x, y> = tr(xy)``,
    i.e. ``2^{r(r-1)/4}`` times the entrywise measure ``prod_{i<=j} dx_ij``.
    The same convention applies to :func:`mixture_log_density`.
    """
    x = sc.as_symmetric(x)
    r = x.shape[0]
    s = sc.as_shape(s, r)
    if not sc.is_abs_continuous(s):
        raise BoundaryShape(f"shape {s.tolist()} has no density on the open cone")
    sig = _sigma(sigma, r)
    return (
        -float(np.sum(sig * x))
        + sc.log_gen_power(x, s - (r + 1) / 2.0)
        - log_gamma_omega(s)
        - sc.log_gen_power(sc.inv_spd(sig), s)
    )


def riesz_log_laplace(theta: ArrayLike, s: ArrayLike, sigma: ArrayLike | None = None) -> float:
    """``log Delta_s((sigma - theta)^{-1}) - log Delta_s(sigma^{-1})``."""
    theta = sc.as_symmetric(theta)
    r = theta.shape[0]
    s = sc.as_shape(s, r)
    sig = _sigma(sigma, r)
    gap = sig - theta
    if not sc.is_spd(gap):
        raise OutOfDomain("sigma - theta is not positive definite")
    return sc.log_gen_power(sc.inv_spd(gap), s) - sc.log_gen_power(sc.inv_spd(sig), s)


def _riesz_from_shapes(shapes: NDArray, rng: np.random.Generator) -> NDArray[np.float64]:
    # shapes: (N, r) gamma shapes for the squared diagonal of the triangular factor
    n, r = shapes.shape
    t = np.zeros((n, r, r))
    rows, cols = np.tril_indices(r, -1)
    if rows.size:
        t[:, rows, cols] = rng.normal(0.0, math.sqrt(0.5), size=(n, rows.size))
    g = np.zeros_like(shapes)
    pos = shapes > 0
    g[pos] = rng.standard_gamma(shapes[pos])
    idx = np.arange(r)
    t[:, idx, idx] = np.sqrt(g)
    x = t @ np.swapaxes(t, 1, 2)
    return 0.5 * (x + np.swapaxes(x, 1, 2))


def sample_riesz(
    s: ArrayLike, rng: np.random.Generator, size: int | None = None
) -> NDArray[np.float64]:
    """Draw from ``R(s, I_r)`` by a Bartlett-type triangular construction.

    ``X = T T^T`` with ``T`` lower triangular, ``T_ii^2 ~ Gamma(s_i - (i-1)/2)``
    and ``T_ij ~ N(0, 1/2)`` below the diagonal. Boundary shapes
    ``s_i = (i-1)/2`` are allowed (the corresponding ``T_ii`` is 0).

    Returns an ``(r, r)`` array, or ``(size, r, r)`` when ``size`` is given.
    """
    s = sc.as_shape(s)
    r = s.shape[0]
    shape = s - sc.rho(r)
    if np.any(shape < 0):
        raise DomainError(f"shape {s.tolist()} needs s_i >= (i-1)/2")
    n = 1 if size is None else int(size)
    x = _riesz_from_shapes(np.broadcast_to(shape, (n, r)).copy(), rng)
    return x[0] if size is None else x


def poisson_log_laplace(theta: ArrayLike, lam: ArrayLike) -> float:
    """``sum_i lam_i (exp(theta_i) - 1)`` for a vector ``theta``."""
    lam = as_rates(lam, strict=False)
    theta = np.asarray(theta, dtype=float)
    if theta.shape != lam.shape:
        raise DimensionMismatch("theta and lam have different lengths")
    return float(np.sum(lam * np.expm1(theta)))


def sample_poisson(
    lam: ArrayLike, rng: np.random.Generator, size: int | None = None
) -> NDArray[np.int64]:
    """Independent ``Poisson(lam_i)`` counts; ``(r,)`` or ``(size, r)``."""
    lam = as_rates(lam, strict=False)
    n = 1 if size is None else int(size)
    k = rng.poisson(lam, size=(n, lam.shape[0])).astype(np.int64)
    return k[0] if size is None else k


def sample_mixture(
    lam: ArrayLike, rng: np.random.Generator, size: int | None = None
) -> NDArray[np.float64]:
    """Draw ``k ~ Poisson(lam)`` then ``X ~ R(k + rho, I_r)``.

    With shape ``k + rho`` the diagonal gamma shapes are just ``k_i``.
    """
    lam = as_rates(lam, strict=False)
    n = 1 if size is None else int(size)
    k = rng.poisson(lam, size=(n, lam.shape[0]))
    x = _riesz_from_shapes(k.astype(float), rng)
    return x[0] if size is None else x


def mixture_log_density(x: ArrayLike, lam: ArrayLike) -> float:
    """Log density of the Poisson mixture at ``x`` in the open cone.

    Closed form in terms of ``I(1, .)``; ``Delta_{e_i}(x)`` is the squared
    ``i``-th Cholesky pivot.
    """
    u = sc.cholesky(x)
    r = u.shape[0]
    lam = as_rates(lam, r)
    log_pivots = 2.0 * np.log(np.diag(u))
    log_minors = np.cumsum(log_pivots)
    log_prev = np.concatenate(([0.0], log_minors[:-1]))
    out = -float(np.trace(u @ u.T)) - r * (r - 1) / 4.0 * _LOG_2PI - 0.5 * log_minors[-1]
    for i in range(r):
        arg = 2.0 * math.sqrt(lam[i]) * math.exp(0.5 * log_pivots[i])
        out += 0.5 * math.log(lam[i]) - lam[i] - 0.5 * log_prev[i] + log_bessel_i(1, arg)
    return out


def mixture_density(x: ArrayLike, lam: ArrayLike) -> float:
    """``exp`` of :func:`mixture_log_density`, clamped to the float range."""
    lv = mixture_log_density(x, lam)
    return math.exp(min(lv, 709.0))


def series_truncation(x: ArrayLike, lam: ArrayLike, tol: float = 1e-17) -> int:
    """Per-coordinate truncation bound for :func:`mixture_log_density_series`.

    Coordinate ``i`` of the multi-sum carries weights proportional to
    ``z^q / (q! (q-1)!)`` with ``z = lam_i Delta_{e_i}(x)``; the bound is the
    first ``q`` past the peak where the weight drops below ``tol`` times the
    peak weight and the ratio of consecutive weights is below 1/2.
    """
    u = sc.cholesky(x)
    lam = as_rates(lam, u.shape[0])
    z = np.max(lam * np.diag(u) ** 2)
    logz = math.log(z)
    q, peak, w = 1, -math.inf, -math.inf
    while True:
        w = q * logz - math.lgamma(q + 1) - math.lgamma(q)
        peak = max(peak, w)
        if w < peak + math.log(tol) and z / (q * (q + 1)) < 0.5:
            return q
        q += 1


def mixture_log_density_series(x: ArrayLike, lam: ArrayLike, trunc: int | None = None) -> float:
    """Log density from the Poisson-weighted sum of Riesz densities.

    Sums ``exp(-sum lam) lam^q / q! * R(q + rho, I_r)`` density over the
    grid ``q in {0..trunc}^r``. Terms with some ``q_i = 0`` have a gamma
    pole in the normalizer and contribute zero. Used as a check on
    :func:`mixture_log_density`.
    """
    u = sc.cholesky(x)
    r = u.shape[0]
    lam = as_rates(lam, r)
    if trunc is None:
        trunc = series_truncation(x, lam)
    if trunc < 1:
        raise DomainError("trunc must be at least 1")
    log_pivots = 2.0 * np.log(np.diag(u))
    grid = np.stack(
        np.meshgrid(*[np.arange(1, trunc + 1)] * r, indexing="ij"), axis=-1
    ).reshape(-1, r).astype(float)
    rho = sc.rho(r)
    shape = grid + rho
    # log Delta_{q+rho-n/r}(x) as a dot product with log pivots
    log_power = (shape - (r + 1) / 2.0) @ log_pivots
    log_gamma_omega = r * (r - 1) / 4.0 * _LOG_2PI + gammaln(shape - rho).sum(axis=1)
    log_terms = (
        grid @ np.log(lam)
        - gammaln(grid + 1.0).sum(axis=1)
        + log_power
        - log_gamma_omega
    )
    return float(-lam.sum() - np.trace(u @ u.T) + logsumexp(log_terms))
