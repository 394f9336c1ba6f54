"""
Natural exponential family generated by the Poisson mixture of Riesz laws.

Canonical parameters live in ``I_r - Omega``; means live in ``Omega``. For a
canonical parameter ``theta`` let ``u`` be the Cholesky factor of
``(I - theta)^{-1}`` and ``u_i`` its diagonal. Then

* cumulant: ``sum_i lam_i (Delta*_{-e_{r-i+1}}(I - theta) - 1)
  - 1/2 sum_{i<r} log Delta*_i(I - theta)``,
* mean: ``u diag(a) u^T`` with ``a_i = (i-1)/2 + lam_i u_i^2``,
* inverse mean: with ``v = chol(m)`` and
  ``b_i = (i-1)/4 + sqrt(((i-1)/4)^2 + lam_i v_i^2)``,
  ``theta = I - (u u^T)^{-1}`` for ``u = v diag(b)^{-1/2}``.

Operators (the variance function) are ``n x n`` arrays in the basis of
:func:`rieszmix.symcone.sym_basis`.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from . import symcone as sc
from .distributions import as_rates
from .errors import DomainError, IndexOutOfRange, OutOfDomain

__all__ = [
    "cumulant",
    "laplace",
    "canonical_factor",
    "a_coeffs",
    "mean_map",
    "mean_map_blockwise",
    "b_coeffs",
    "inverse_mean_map",
    "inverse_mean_map_blockwise",
    "delta_star_at_psi",
    "variance_function",
    "cumulant_hessian",
]


def _gap(theta: ArrayLike) -> NDArray[np.float64]:
    theta = sc.as_symmetric(theta)
    gap = np.eye(theta.shape[0]) - theta
    if not sc.is_spd(gap):
        raise OutOfDomain("I - theta is not positive definite")
    return gap


def cumulant(theta: ArrayLike, lam: ArrayLike) -> float:
    """Log-Laplace transform of the mixture at ``theta`` in ``I - Omega``."""
    gap = _gap(theta)
    r = gap.shape[0]
    lam = as_rates(lam, r)
    log_tr = sc.log_trailing_minors(gap)
    log_prev = np.concatenate(([0.0], log_tr[:-1]))
    # delta[j] = Delta*_{-e_{j+1}}(I - theta) = Delta*_j / Delta*_{j+1}
    delta = np.exp(log_prev - log_tr)
    poisson_part = float(np.sum(lam[::-1] * (delta - 1.0)))
    return poisson_part - 0.5 * float(np.sum(log_tr[:-1]))


def laplace(theta: ArrayLike, lam: ArrayLike) -> float:
    return float(np.exp(cumulant(theta, lam)))


def canonical_factor(theta: ArrayLike) -> NDArray[np.float64]:
    """Lower-triangular ``u`` with ``I - theta = (u u^T)^{-1}``."""
    return sc.cholesky(sc.inv_spd(_gap(theta)))


def a_coeffs(theta: ArrayLike, lam: ArrayLike) -> NDArray[np.float64]:
    u = canonical_factor(theta)
    r = u.shape[0]
    lam = as_rates(lam, r)
    return sc.rho(r) + lam * np.diag(u) ** 2


def mean_map(theta: ArrayLike, lam: ArrayLike) -> NDArray[np.float64]:
    """Gradient of :func:`cumulant`, i.e. the mean of the tilted law."""
    u = canonical_factor(theta)
    r = u.shape[0]
    lam = as_rates(lam, r)
    a = sc.rho(r) + lam * np.diag(u) ** 2
    return sc.triangular_conjugate(u, np.diag(a))


def mean_map_blockwise(theta: ArrayLike, lam: ArrayLike) -> NDArray[np.float64]:
    """Mean through trailing-block inverses of ``I - theta``.

    Coefficient of ``(P*_i(I - theta))^{-1}`` is
    ``lam_{r-i+1} delta_i - lam_{r-i} delta_{i+1} + 1/2`` with ``lam_0 = 0``,
    minus one half of the full inverse. Alternate path to :func:`mean_map`.
    """
    gap = _gap(theta)
    r = gap.shape[0]
    lam = as_rates(lam, r)
    log_tr = sc.log_trailing_minors(gap)
    delta = np.exp(np.concatenate(([0.0], log_tr[:-1])) - log_tr)
    lam_pad = np.concatenate(([0.0], lam))  # lam_pad[k] = lam_k
    out = -0.5 * sc.trailing_block_inverse(gap, r)
    for i in range(1, r + 1):
        coef = lam_pad[r - i + 1] * delta[i - 1] + 0.5
        if i < r:
            coef -= lam_pad[r - i] * delta[i]
        out += coef * sc.trailing_block_inverse(gap, i)
    return out


def b_coeffs(m: ArrayLike, lam: ArrayLike) -> NDArray[np.float64]:
    """``a_i`` at the canonical parameter whose mean is ``m``."""
    v = sc.cholesky(m)
    r = v.shape[0]
    lam = as_rates(lam, r)
    h = sc.rho(r) / 2.0
    return h + np.sqrt(h * h + lam * np.diag(v) ** 2)


def inverse_mean_map(m: ArrayLike, lam: ArrayLike) -> NDArray[np.float64]:
    """Canonical parameter with mean ``m`` (Cholesky rescaling)."""
    v = sc.cholesky(m)
    b = b_coeffs(m, lam)
    u = v / np.sqrt(b)
    r = v.shape[0]
    # (u u^T)^{-1} = u^{-T} u^{-1}
    uinv = np.linalg.solve(u, np.eye(r))
    gap = uinv.T @ uinv
    return np.eye(r) - 0.5 * (gap + gap.T)


def _block_differences(m: NDArray) -> list[NDArray[np.float64]]:
    # d[i-1] = (P*_i(m^{-1}))^{-1} - (P*_{i-1}(m^{-1}))^{-1}, i = 1..r
    minv = sc.inv_spd(m)
    r = minv.shape[0]
    blocks = [sc.trailing_block_inverse(minv, i) for i in range(r + 1)]
    return [blocks[i] - blocks[i - 1] for i in range(1, r + 1)]


def inverse_mean_map_blockwise(m: ArrayLike, lam: ArrayLike) -> NDArray[np.float64]:
    """Canonical parameter with mean ``m`` from trailing blocks of ``m^{-1}``.

    ``(I - psi(m))^{-1} = sum_j (1/b_j) D_j`` where
    ``D_j = (P*_{r-j+1}(m^{-1}))^{-1} - (P*_{r-j}(m^{-1}))^{-1}``.
    """
    m = sc.as_symmetric(m)
    r = m.shape[0]
    b = b_coeffs(m, lam)
    d = _block_differences(m)
    total = sum(d[r - j] / b[j - 1] for j in range(1, r + 1))
    return np.eye(r) - sc.inv_spd(total)


def delta_star_at_psi(m: ArrayLike, lam: ArrayLike, i: int) -> float:
    """``Delta*_{-e_i}(I - psi(m)) = v_{r-i+1}^2 / b_{r-i+1}(m)``."""
    v = sc.cholesky(m)
    r = v.shape[0]
    if not 1 <= i <= r:
        raise IndexOutOfRange(f"index {i} outside 1..{r}")
    b = b_coeffs(m, lam)
    k = r - i
    return float(v[k, k] ** 2 / b[k])


def variance_function(m: ArrayLike, lam: ArrayLike) -> NDArray[np.float64]:
    """Covariance operator of the family member with mean ``m``.

    Assembled from ``b_i(m)``, ``Delta_{e_i}(m) = v_i^2`` and the trailing
    block differences ``D_j`` of ``m^{-1}``:

        V(m) = -1/2 P(Q_r)
               + sum_i (c_{r-i+1} - c_{r-i} + 1/2) P(Q_i)
               + sum_i (lam_{r-i+1} v_{r-i+1}^2 / b_{r-i+1}^3) D_{r-i+1} (x) D_{r-i+1}

    with ``Q_i = sum_{j > r-i} D_j / b_j``, ``c_k = lam_k v_k^2 / b_k`` and
    ``c_0 = 0``. ``(x)`` is the rank-one map ``z -> <a, z> a``.
    """
    m = sc.as_symmetric(m)
    v = sc.cholesky(m)
    r = v.shape[0]
    lam = as_rates(lam, r)
    b = b_coeffs(m, lam)
    vsq = np.diag(v) ** 2
    d = _block_differences(m)
    # D_j in the j-indexing of the formula is d[r-j]
    big_d = [d[r - j] for j in range(1, r + 1)]
    c = np.concatenate(([0.0], lam * vsq / b))  # c[k] = c_k, c[0] = 0

    q = []
    acc = np.zeros_like(m)
    for i in range(1, r + 1):
        j = r - i + 1
        acc = acc + big_d[j - 1] / b[j - 1]
        q.append(acc.copy())

    out = -0.5 * sc.quad_rep_operator(q[-1])
    for i in range(1, r + 1):
        coef = c[r - i + 1] - c[r - i] + 0.5
        out += coef * sc.quad_rep_operator(q[i - 1])
    for i in range(1, r + 1):
        k = r - i + 1
        w = lam[k - 1] * vsq[k - 1] / b[k - 1] ** 3
        out += w * sc.tensor_operator(d[i - 1])
    return 0.5 * (out + out.T)


def cumulant_hessian(theta: ArrayLike, lam: ArrayLike) -> NDArray[np.float64]:
    """Hessian of :func:`cumulant` at ``theta`` via the variance function."""
    lam = as_rates(lam)
    m = mean_map(theta, lam)
    if not sc.is_spd(m):
        raise DomainError("mean left the cone")
    return variance_function(m, lam)
