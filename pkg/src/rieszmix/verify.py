"""
Verification suites behind ``rieszmix verify``.

Every suite returns a list of JSON-ready dicts, each with a ``"check"`` name
and a boolean ``"pass"``.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

import numpy as np

from . import distributions as dist
from . import nef
from . import symcone as sc
from .oracle import fd_gradient, fd_hessian, mc_laplace_check, normalization_check_r1
from .specfun import g_series, log_bessel_i

__all__ = [
    "random_spd",
    "random_lower",
    "random_canonical",
    "SUITES",
    "run_suite",
]


def random_spd(rng: np.random.Generator, r: int, lo: float = 0.2, hi: float = 5.0) -> np.ndarray:
    """SPD matrix with Haar-random eigenvectors and eigenvalues log-uniform in ``[lo, hi]``."""
    q, rr = np.linalg.qr(rng.normal(size=(r, r)))
    q = q * np.sign(np.diag(rr))
    ev = np.exp(rng.uniform(math.log(lo), math.log(hi), size=r))
    x = (q * ev) @ q.T
    return 0.5 * (x + x.T)


def random_lower(rng: np.random.Generator, r: int) -> np.ndarray:
    """Lower-triangular matrix with positive diagonal in ``[0.5, 2]``."""
    u = np.tril(rng.normal(scale=0.5, size=(r, r)), -1)
    u[np.diag_indices(r)] = rng.uniform(0.5, 2.0, size=r)
    return u


def random_canonical(rng: np.random.Generator, r: int, lo: float = 0.4, hi: float = 3.0) -> np.ndarray:
    """``theta = I - y`` with ``y`` from :func:`random_spd`."""
    return np.eye(r) - random_spd(rng, r, lo, hi)


def _rel(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


def _summary(name: str, errors: Iterable[float], tol: float, **extra) -> dict:
    errors = list(errors)
    worst = max(errors) if errors else 0.0
    return {"check": name, **extra, "count": len(errors), "max_error": worst, "tol": tol, "pass": worst <= tol}


def suite_prop1(seed: int = 0, r: int | None = None, n: int | None = None) -> list[dict]:
    out = []
    for b in (0.5, 1.0, 1.5, 2.0, 5.5):
        for x in (0.1, 1.0, 10.0, 100.0):
            series = g_series(b, x)
            closed = x ** ((1.0 - b) / 2.0) * math.exp(log_bessel_i(b - 1.0, 2.0 * math.sqrt(x)))
            err = abs(series - closed) / closed
            out.append({"check": "prop1", "b": b, "x": x, "series": series, "bessel": closed,
                        "rel_error": err, "tol": 1e-10, "pass": err <= 1e-10})
    return out


def identity_errors(rng: np.random.Generator, r: int, count: int = 200) -> dict[str, list[float]]:
    """Relative errors of the cone identities on ``count`` random instances."""
    errs: dict[str, list[float]] = {"inverse_power": [], "trailing_block": [], "triangular_power": [], "triangular_minors": [], "quad_rep": []}
    for _ in range(count):
        x = random_spd(rng, r)
        g = rng.normal(size=(r, r))
        y = g + g.T
        s = rng.uniform(-3.0, 3.0, size=r)
        u = random_lower(rng, r)

        # Delta_s(x^{-1}) = Delta*_{-s*}(x); logs compared absolutely = relative on values
        errs["inverse_power"].append(abs(math.expm1(
            sc.log_gen_power(sc.inv_spd(x), s) - sc.log_gen_power_star(x, -sc.star_swap(s)))))

        uut = u @ u.T
        uut_inv = sc.inv_spd(uut)
        for i in range(1, r + 1):
            target = sc.triangular_conjugate(u, np.diag((np.arange(r) >= r - i).astype(float)))
            errs["trailing_block"].append(_rel(sc.trailing_block_inverse(uut_inv, i), target))

        errs["triangular_power"].append(abs(math.expm1(
            sc.log_gen_power(uut, s) - sc.log_gen_power_star(uut_inv, -sc.star_swap(s)))))

        lhs = sc.log_leading_minors(sc.triangular_conjugate(u, x))
        rhs = np.cumsum(2.0 * np.log(np.diag(u))) + sc.log_leading_minors(x)
        errs["triangular_minors"].append(float(np.max(np.abs(np.expm1(lhs - rhs)))))

        errs["quad_rep"].append(_rel(sc.quad_rep_apply(x, y), x @ y @ x))
    return errs


def suite_identities(seed: int = 0, r: int | None = None, n: int | None = None) -> list[dict]:
    rng = np.random.default_rng(seed)
    orders = [r] if r else [1, 2, 3, 4, 5]
    out = []
    for order in orders:
        for name, errs in identity_errors(rng, order).items():
            out.append(_summary(f"identity_{name}", errs, 1e-10, r=order))
    return out


def _theta_points(rng: np.random.Generator, r: int, count: int = 5) -> list[np.ndarray]:
    # eigenvalues of theta in [-1, 0.2]: exp(<theta, X>) keeps a finite fourth moment
    return [random_canonical(rng, r, 0.8, 2.0) for _ in range(count)]


def suite_laplace(seed: int = 0, r: int | None = None, n: int | None = None) -> list[dict]:
    n = 10**6 if n is None else n
    rng = np.random.default_rng(seed)
    out = []
    riesz_cases = [(1.0, 1.0), (2.5, 0.8), (0.0, 1.5)]
    mixture_cases = [(1.0,), (1.0, 2.0)]
    if r:
        mixture_cases = [c for c in mixture_cases if len(c) == r]
        if r != 2:
            riesz_cases = []
    k = 0
    for s in riesz_cases:
        for theta in _theta_points(rng, len(s)):
            rep = mc_laplace_check(
                lambda g, size, s=s: dist.sample_riesz(s, g, size),
                lambda t, s=s: dist.riesz_log_laplace(t, s),
                theta, n, seed * 1000 + k, check=f"riesz_laplace s={list(s)}")
            out.append(rep.to_json())
            k += 1
    for lam in mixture_cases:
        for theta in _theta_points(rng, len(lam)):
            rep = mc_laplace_check(
                lambda g, size, lam=lam: dist.sample_mixture(lam, g, size),
                lambda t, lam=lam: nef.cumulant(t, lam),
                theta, n, seed * 1000 + k, check=f"mixture_laplace lam={list(lam)}")
            out.append(rep.to_json())
            k += 1
    return out


def gradient_errors(rng: np.random.Generator, r: int, count: int = 20) -> list[float]:
    """``||mean_map - FD gradient|| / (1 + ||m||)`` on random ``(theta, lam)``."""
    errs = []
    for _ in range(count):
        lam = rng.uniform(0.2, 3.0, size=r)
        theta = random_canonical(rng, r)
        m = nef.mean_map(theta, lam)
        g = fd_gradient(lambda t: nef.cumulant(t, lam), theta)
        errs.append(float(np.linalg.norm(m - g) / (1.0 + np.linalg.norm(m))))
    return errs


def hessian_errors(rng: np.random.Generator, r: int, count: int = 20) -> list[float]:
    """Operator-norm relative error of the variance function vs FD Hessian."""
    errs = []
    for _ in range(count):
        lam = rng.uniform(0.2, 3.0, size=r)
        theta = random_canonical(rng, r)
        v = nef.variance_function(nef.mean_map(theta, lam), lam)
        h = fd_hessian(lambda t: nef.cumulant(t, lam), theta)
        errs.append(float(np.linalg.norm(v - h, 2) / np.linalg.norm(v, 2)))
    return errs


def suite_gradient(seed: int = 0, r: int | None = None, n: int | None = None) -> list[dict]:
    rng = np.random.default_rng(seed)
    return [_summary("gradient", gradient_errors(rng, order), 1e-6, r=order)
            for order in ([r] if r else [1, 2, 3])]


def suite_hessian(seed: int = 0, r: int | None = None, n: int | None = None) -> list[dict]:
    rng = np.random.default_rng(seed)
    return [_summary("hessian", hessian_errors(rng, order), 1e-4, r=order)
            for order in ([r] if r else [1, 2, 3])]


def suite_normalize(seed: int = 0, r: int | None = None, n: int | None = None) -> list[dict]:
    out = []
    for lam in (0.5, 1.0, 5.0):
        mass = normalization_check_r1([lam], x_max=120.0)
        err = abs(mass + math.exp(-lam) - 1.0)
        out.append({"check": "normalize_r1", "lambda": lam, "mass": mass, "atom": math.exp(-lam),
                    "error": err, "tol": 1e-6, "pass": err <= 1e-6})
    return out


def suite_inverse(seed: int = 0, r: int | None = None, n: int | None = None) -> list[dict]:
    rng = np.random.default_rng(seed)
    out = []
    for order in ([r] if r else [1, 2, 3]):
        round_trip, two_path, fixed = [], [], []
        for _ in range(100):
            lam = rng.uniform(0.2, 3.0, size=order)
            m = random_spd(rng, order)
            theta = nef.inverse_mean_map(m, lam)
            round_trip.append(_rel(nef.mean_map(theta, lam), m))
            two_path.append(_rel(nef.inverse_mean_map_blockwise(m, lam), theta))
            b = nef.b_coeffs(m, lam)
            vsq = np.diag(sc.cholesky(m)) ** 2
            fixed.append(float(np.max(np.abs(b - (sc.rho(order) + lam * vsq / b)) / b)))
        out.append(_summary("inverse_round_trip", round_trip, 1e-10, r=order))
        out.append(_summary("inverse_two_path", two_path, 1e-10, r=order))
        out.append(_summary("b_fixed_point", fixed, 1e-12, r=order))
    return out


def suite_domain(seed: int = 0, r: int | None = None, n: int | None = None) -> list[dict]:
    rng = np.random.default_rng(seed)
    out = []
    for order in ([r] if r else [2, 3, 4]):
        bad = 0
        for _ in range(1000):
            lam = rng.uniform(0.05, 5.0, size=order)
            theta = random_canonical(rng, order, 1e-2, 1e2)
            bad += not sc.is_spd(nef.mean_map(theta, lam))
        out.append({"check": "domain_of_means", "r": order, "count": 1000, "failures": bad, "pass": bad == 0})
    return out


SUITES: dict[str, Callable[..., list[dict]]] = {
    "prop1": suite_prop1,
    "identities": suite_identities,
    "laplace": suite_laplace,
    "gradient": suite_gradient,
    "hessian": suite_hessian,
    "normalize": suite_normalize,
    "inverse": suite_inverse,
    "domain": suite_domain,
}


def run_suite(name: str, seed: int = 0, r: int | None = None, n: int | None = None) -> list[dict]:
    if name == "all":
        return [c for key in SUITES for c in SUITES[key](seed=seed, r=r, n=n)]
    return SUITES[name](seed=seed, r=r, n=n)
