"""
Independent numerical checks: finite differences on symmetric matrices,
Monte Carlo comparison of Laplace transforms, and r = 1 normalization.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate

from . import symcone as sc
from .distributions import as_rates, mixture_log_density
from .errors import ConvergenceError, DomainError

__all__ = [
    "McReport",
    "fd_gradient",
    "fd_hessian",
    "spawn_generators",
    "worker_count",
    "mc_laplace_check",
    "normalization_check_r1",
]

Sampler = Callable[[np.random.Generator, int], NDArray[np.float64]]
ScalarField = Callable[[NDArray[np.float64]], float]

_CHUNK = 1 << 16


@dataclass(frozen=True)
class McReport:
    estimate: float
    closed_form: float
    std_error: float
    z_score: float
    n_samples: int
    seed: int
    check: str = "mc_laplace"
    threshold: float = 4.0

    @property
    def passed(self) -> bool:
        return abs(self.z_score) <= self.threshold

    def to_json(self) -> dict:
        d = asdict(self)
        return {
            "check": d["check"],
            "estimate": d["estimate"],
            "closed_form": d["closed_form"],
            "std_error": d["std_error"],
            "z_score": d["z_score"],
            "n": d["n_samples"],
            "seed": d["seed"],
            "pass": self.passed,
        }


def fd_gradient(f: ScalarField, at: ArrayLike, step: float | None = None) -> NDArray[np.float64]:
    """Central-difference gradient of ``f`` under the trace pairing.

    Differences are taken along the orthonormal basis and reassembled as a
    symmetric matrix. Default step is ``1e-5 (1 + ||at||_F)``.
    """
    x = sc.as_symmetric(at)
    if step is None:
        step = 1e-5 * (1.0 + np.linalg.norm(x))
    basis = sc.sym_basis(x.shape[0])
    g = np.array([(f(x + step * b) - f(x - step * b)) / (2.0 * step) for b in basis])
    return sc.vec_to_sym(g, x.shape[0])


def fd_hessian(f: ScalarField, at: ArrayLike, step: float | None = None) -> NDArray[np.float64]:
    """Central-difference Hessian of ``f`` as an ``n x n`` operator matrix.

    Default step is ``5e-4 (1 + ||at||_F)``. The result is symmetrized.
    """
    x = sc.as_symmetric(at)
    if step is None:
        step = 5e-4 * (1.0 + np.linalg.norm(x))
    basis = sc.sym_basis(x.shape[0])
    n = len(basis)
    h = step
    f0 = f(x)
    out = np.empty((n, n))
    for a in range(n):
        ea = h * basis[a]
        out[a, a] = (f(x + ea) - 2.0 * f0 + f(x - ea)) / h**2
        for b in range(a + 1, n):
            eb = h * basis[b]
            val = (f(x + ea + eb) - f(x + ea - eb) - f(x - ea + eb) + f(x - ea - eb)) / (4.0 * h**2)
            out[a, b] = out[b, a] = val
    return out


def spawn_generators(seed: int, workers: int) -> list[np.random.Generator]:
    """One independent generator per worker, keyed by ``(seed, index)``."""
    children = np.random.SeedSequence(seed).spawn(workers)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def worker_count(default: int = 1) -> int:
    """Worker count from ``RIESZ_MIX_THREADS`` (falls back to ``default``)."""
    raw = os.environ.get("RIESZ_MIX_THREADS")
    if not raw:
        return default
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"RIESZ_MIX_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise DomainError("RIESZ_MIX_THREADS must be at least 1")
    return n


def _split(n: int, workers: int) -> list[int]:
    base, extra = divmod(n, workers)
    return [base + (1 if i < extra else 0) for i in range(workers)]


def _worker_values(sampler: Sampler, theta: NDArray, rng: np.random.Generator, n: int) -> NDArray:
    out = np.empty(n)
    done = 0
    while done < n:
        m = min(_CHUNK, n - done)
        x = sampler(rng, m)
        out[done:done + m] = np.exp(np.einsum("ij,nij->n", theta, x))
        done += m
    return out


def mc_laplace_check(
    sampler: Sampler,
    log_laplace: Callable[[NDArray[np.float64]], float],
    theta: ArrayLike,
    n: int,
    seed: int,
    workers: int | None = None,
    check: str = "mc_laplace",
    threshold: float = 4.0,
) -> McReport:
    """Compare the sample mean of ``exp(<theta, X>)`` with a closed form.

    ``sampler(rng, size)`` must return a ``(size, r, r)`` array. Samples are
    split across ``workers`` independent substreams; the result depends only
    on ``(seed, n, workers)``.
    """
    theta = sc.as_symmetric(theta)
    if n < 2:
        raise DomainError("need at least two samples")
    workers = worker_count() if workers is None else workers
    closed = math.exp(log_laplace(theta))
    rngs = spawn_generators(seed, workers)
    sizes = _split(n, workers)
    if workers == 1:
        parts = [_worker_values(sampler, theta, rngs[0], sizes[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda a: _worker_values(sampler, theta, *a), zip(rngs, sizes)))
    values = np.concatenate(parts)
    estimate = float(np.mean(values))
    if np.ptp(values) == 0.0:
        std_error = 0.0
    else:
        std_error = float(np.std(values, ddof=1) / math.sqrt(n))
    if std_error > 0:
        z = (estimate - closed) / std_error
    else:
        z = 0.0 if math.isclose(estimate, closed, rel_tol=1e-14) else math.copysign(math.inf, estimate - closed)
    return McReport(estimate, closed, std_error, z, n, seed, check, threshold)


def normalization_check_r1(lam: ArrayLike, x_max: float = 60.0, limit: int = 200) -> float:
    """Integral of the r = 1 mixture density over ``(0, x_max)``.

    The density covers only the absolutely continuous part; the atom at 0
    carries ``exp(-lam)``.
    """
    lam = as_rates(lam, 1)

    def f(t):
        return math.exp(mixture_log_density([[t]], lam)) if t > 0 else lam[0] * math.exp(-lam[0])

    val, err, info = integrate.quad(f, 0.0, x_max, epsabs=1e-12, epsrel=1e-12, limit=limit, full_output=True)[:3]
    if err > 1e-9:
        raise ConvergenceError(f"quadrature error estimate {err:.3g} exceeds 1e-9")
    return float(val)
