"""
Linear algebra on the cone of real symmetric positive-definite matrices.

Matrices are plain ``numpy`` arrays of shape ``(r, r)``. Generalized powers
are evaluated from Cholesky diagonals:

* leading minors ``Delta_k(x) = L_11^2 ... L_kk^2`` with ``x = L L^T``,
* trailing minors ``Delta*_k(x)`` from the factorization of the
  index-reversed matrix ``J x J``.

Linear operators on the space of symmetric matrices are represented as
``n x n`` arrays, ``n = r(r+1)/2``, in the orthonormal basis (for the
pairing ``<x, y> = tr(xy)``) made of the diagonal units ``c_i`` followed by
``(E_ij + E_ji)/sqrt(2)`` for ``i < j`` in lexicographic order.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import cho_solve

from .errors import DimensionMismatch, IndexOutOfRange, NotPositiveDefinite

__all__ = [
    "as_symmetric",
    "as_shape",
    "cholesky",
    "reverse_cholesky",
    "is_spd",
    "inv_spd",
    "log_leading_minors",
    "log_trailing_minors",
    "log_gen_power",
    "log_gen_power_star",
    "jordan_product",
    "quad_rep_apply",
    "quad_rep_operator",
    "triangular_conjugate",
    "trailing_block_inverse",
    "star_swap",
    "rho",
    "kappa",
    "unit",
    "diag_unit",
    "is_abs_continuous",
    "in_gindikin",
    "sym_dim",
    "sym_basis",
    "sym_to_vec",
    "vec_to_sym",
    "tensor_operator",
]

SYM_ATOL = 1e-12
PIVOT_RTOL = 1e-13


def as_symmetric(x: ArrayLike, atol: float = SYM_ATOL) -> NDArray[np.float64]:
    """Return ``x`` as a symmetrized float array.

    Asymmetry up to ``atol`` (relative to the largest entry) is averaged
    away; anything larger is rejected.
    """
    a = np.array(x, dtype=float)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a.T)) > atol * scale:
        raise DimensionMismatch("matrix is not symmetric")
    return 0.5 * (a + a.T)


def as_shape(s: ArrayLike, r: int | None = None) -> NDArray[np.float64]:
    v = np.atleast_1d(np.asarray(s, dtype=float))
    if v.ndim != 1:
        raise DimensionMismatch("shape vector must be one-dimensional")
    if r is not None and v.shape[0] != r:
        raise DimensionMismatch(f"expected {r} components, got {v.shape[0]}")
    return v


def cholesky(x: ArrayLike) -> NDArray[np.float64]:
    """Lower-triangular factor ``u`` with ``u u^T = x`` and positive diagonal.

    Raises
    ------
    NotPositiveDefinite
        If a pivot is below ``1e-13`` times the largest diagonal entry.
    """
    a = as_symmetric(x)
    try:
        u = np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite("matrix is not positive definite") from None
    pivots = np.diag(u) ** 2
    if not np.all(pivots > PIVOT_RTOL * np.max(np.abs(np.diag(a)))):
        raise NotPositiveDefinite("matrix is numerically singular")
    return u


def reverse_cholesky(x: ArrayLike) -> NDArray[np.float64]:
    """Upper-triangular factor ``w`` with ``w w^T = x``.

    ``w[i, i]**2`` multiplied over ``i >= r-k`` gives the trailing minor of
    order ``k``.
    """
    a = as_symmetric(x)
    return cholesky(a[::-1, ::-1])[::-1, ::-1]


def is_spd(x: ArrayLike) -> bool:
    try:
        cholesky(x)
    except NotPositiveDefinite:
        return False
    return True


def inv_spd(x: ArrayLike) -> NDArray[np.float64]:
    """Inverse of an SPD matrix through its Cholesky factor."""
    u = cholesky(x)
    inv = cho_solve((u, True), np.eye(u.shape[0]))
    return 0.5 * (inv + inv.T)


def log_leading_minors(x: ArrayLike) -> NDArray[np.float64]:
    """``[log Delta_1(x), ..., log Delta_r(x)]``."""
    return np.cumsum(2.0 * np.log(np.diag(cholesky(x))))


def log_trailing_minors(x: ArrayLike) -> NDArray[np.float64]:
    """``[log Delta*_1(x), ..., log Delta*_r(x)]``."""
    d = np.diag(reverse_cholesky(x))[::-1]
    return np.cumsum(2.0 * np.log(d))


def log_gen_power(x: ArrayLike, s: ArrayLike) -> float:
    """Log of the generalized power ``Delta_s(x)`` built on leading minors."""
    u = cholesky(x)
    s = as_shape(s, u.shape[0])
    return float(np.dot(s, 2.0 * np.log(np.diag(u))))


def log_gen_power_star(x: ArrayLike, s: ArrayLike) -> float:
    """Log of ``Delta*_s(x)``, the generalized power built on trailing minors."""
    w = reverse_cholesky(x)
    s = as_shape(s, w.shape[0])
    return float(np.dot(s, 2.0 * np.log(np.diag(w)[::-1])))


def jordan_product(x: NDArray, y: NDArray) -> NDArray[np.float64]:
    return 0.5 * (x @ y + y @ x)


def quad_rep_apply(x: ArrayLike, y: ArrayLike) -> NDArray[np.float64]:
    """Quadratic representation ``P(x) y = 2 L(x)^2 y - L(x^2) y``.

    ``L(x)`` is the Jordan multiplication ``y -> (xy + yx)/2``; the result
    coincides with ``x y x``.
    """
    a = as_symmetric(x)
    b = as_symmetric(y)
    if a.shape != b.shape:
        raise DimensionMismatch(f"orders differ: {a.shape} vs {b.shape}")
    out = 2.0 * jordan_product(a, jordan_product(a, b)) - jordan_product(a @ a, b)
    return 0.5 * (out + out.T)


def triangular_conjugate(u: ArrayLike, y: ArrayLike) -> NDArray[np.float64]:
    """The cone automorphism ``u(y) = u y u^T``."""
    t = np.asarray(u, dtype=float)
    b = as_symmetric(y)
    if t.shape != b.shape:
        raise DimensionMismatch(f"orders differ: {t.shape} vs {b.shape}")
    out = t @ b @ t.T
    return 0.5 * (out + out.T)


def trailing_block_inverse(x: ArrayLike, i: int) -> NDArray[np.float64]:
    """Inverse of the trailing ``i x i`` block of ``x``, zero-padded to ``r x r``.

    ``i = 0`` gives the zero matrix.
    """
    a = as_symmetric(x)
    r = a.shape[0]
    if not 0 <= i <= r:
        raise IndexOutOfRange(f"block order {i} outside 0..{r}")
    out = np.zeros_like(a)
    if i > 0:
        out[r - i:, r - i:] = inv_spd(a[r - i:, r - i:])
    return out


def star_swap(s: ArrayLike) -> NDArray[np.float64]:
    """``(s_1, ..., s_r) -> (s_r, ..., s_1)``."""
    return as_shape(s)[::-1].copy()


def rho(r: int) -> NDArray[np.float64]:
    """``(0, 1/2, ..., (r-1)/2)``."""
    return np.arange(r) / 2.0


def kappa(r: int, length: int | None = None) -> NDArray[np.float64]:
    """``sum_{j<=r} (j/2) e_j`` padded with zeros to ``length``."""
    length = r if length is None else length
    out = np.zeros(length)
    out[:r] = np.arange(1, r + 1) / 2.0
    return out


def unit(r: int, i: int) -> NDArray[np.float64]:
    """Canonical basis vector ``e_i`` of R^r, ``i`` one-based."""
    if not 1 <= i <= r:
        raise IndexOutOfRange(f"index {i} outside 1..{r}")
    e = np.zeros(r)
    e[i - 1] = 1.0
    return e


def diag_unit(r: int, i: int) -> NDArray[np.float64]:
    """``c_i = diag(e_i)``, ``i`` one-based."""
    return np.diag(unit(r, i))


def is_abs_continuous(s: ArrayLike) -> bool:
    """``s_i > (i-1)/2`` for every ``i``."""
    v = as_shape(s)
    return bool(np.all(v > rho(v.shape[0])))


def in_gindikin(s: ArrayLike) -> bool:
    """Membership in the Gindikin set.

    Writing ``s_k = u_k + (number of j < k with u_j > 0)/2`` determines each
    ``u_k`` from ``s`` and the earlier ones, so a single left-to-right scan
    decides membership.
    """
    count = 0
    for sk in as_shape(s):
        uk = sk - count / 2.0
        if uk < 0:
            return False
        if uk > 0:
            count += 1
    return True


def sym_dim(r: int) -> int:
    return r * (r + 1) // 2


@lru_cache(maxsize=None)
def _basis_index(r: int) -> tuple[tuple[int, int], ...]:
    pairs = [(i, i) for i in range(r)]
    pairs += [(i, j) for i in range(r) for j in range(i + 1, r)]
    return tuple(pairs)


def sym_basis(r: int) -> list[NDArray[np.float64]]:
    """Orthonormal basis of the symmetric matrices of order ``r``."""
    out = []
    for i, j in _basis_index(r):
        b = np.zeros((r, r))
        if i == j:
            b[i, i] = 1.0
        else:
            b[i, j] = b[j, i] = 1.0 / math.sqrt(2.0)
        out.append(b)
    return out


def sym_to_vec(x: ArrayLike) -> NDArray[np.float64]:
    """Coordinates of ``x`` in the orthonormal basis."""
    a = np.asarray(x, dtype=float)
    r = a.shape[0]
    idx = _basis_index(r)
    rows = np.array([p[0] for p in idx])
    cols = np.array([p[1] for p in idx])
    scale = np.where(rows == cols, 1.0, math.sqrt(2.0))
    return a[rows, cols] * scale


def vec_to_sym(v: ArrayLike, r: int | None = None) -> NDArray[np.float64]:
    v = np.asarray(v, dtype=float)
    if r is None:
        r = int(round((math.sqrt(8 * v.shape[0] + 1) - 1) / 2))
    if v.shape != (sym_dim(r),):
        raise DimensionMismatch(f"vector of length {v.shape[0]} does not match order {r}")
    out = np.zeros((r, r))
    for k, (i, j) in enumerate(_basis_index(r)):
        if i == j:
            out[i, i] = v[k]
        else:
            out[i, j] = out[j, i] = v[k] / math.sqrt(2.0)
    return out


def quad_rep_operator(x: ArrayLike) -> NDArray[np.float64]:
    """Matrix of ``P(x)`` in the orthonormal basis."""
    a = as_symmetric(x)
    cols = [sym_to_vec(a @ b @ a) for b in sym_basis(a.shape[0])]
    return np.column_stack(cols)


def tensor_operator(a: ArrayLike, b: ArrayLike | None = None) -> NDArray[np.float64]:
    """Matrix of the rank-one operator ``z -> <b, z> a``."""
    va = sym_to_vec(a)
    vb = va if b is None else sym_to_vec(b)
    return np.outer(va, vb)
