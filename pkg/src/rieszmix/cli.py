"""
Command-line front end. All results go to stdout as JSON; diagnostics go to
stderr.

Exit codes: 0 success, 1 failed verification, 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import distributions as dist
from . import nef
from . import symcone as sc
from .errors import DimensionMismatch, RieszMixError
from .oracle import spawn_generators, worker_count
from .verify import SUITES, run_suite


class InputError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def load_matrix(path: str) -> np.ndarray:
    """Read a MatrixJson file ``{"r": r, "data": [[...], ...]}``."""
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read matrix from {path}: {exc}") from None
    data = obj.get("data") if isinstance(obj, dict) else obj
    try:
        a = np.array(data, dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"{path}: 'data' must be a numeric r x r array") from None
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError(f"{path}: 'data' must be square, got shape {a.shape}")
    if isinstance(obj, dict) and "r" in obj and obj["r"] != a.shape[0]:
        raise InputError(f"{path}: r = {obj['r']} does not match data of order {a.shape[0]}")
    return sc.as_symmetric(a)


def matrix_json(a: np.ndarray) -> dict:
    return {"r": int(a.shape[0]), "data": np.asarray(a, dtype=float).tolist()}


def _same_order(r: int, **named: int) -> None:
    for name, k in named.items():
        if k != r:
            raise DimensionMismatch(f"{name} has order {k}, expected {r}")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def cmd_density(args) -> int:
    x = load_matrix(args.x)
    _same_order(len(args.lam), x=x.shape[0])
    lv = dist.mixture_log_density(x, args.lam)
    _emit({"log_density": lv} if args.log else {"density": math.exp(lv) if lv < 709.0 else math.inf})
    return 0


def cmd_riesz_density(args) -> int:
    x = load_matrix(args.x)
    sigma = load_matrix(args.sigma) if args.sigma else np.eye(x.shape[0])
    _same_order(len(args.s), x=x.shape[0], sigma=sigma.shape[0])
    _emit({"log_density": dist.riesz_log_density(x, args.s, sigma)})
    return 0


def cmd_sample(args) -> int:
    params = args.params
    if args.model == "riesz":
        def draw(g, n):
            return dist.sample_riesz(params, g, n)
    elif args.model == "poisson":
        def draw(g, n):
            return dist.sample_poisson(params, g, n)
    else:
        def draw(g, n):
            return dist.sample_mixture(params, g, n)
    if args.n < 0:
        raise InputError("--n must be nonnegative")
    workers = worker_count()
    rngs = spawn_generators(args.seed, workers)
    base, extra = divmod(args.n, workers)
    lines = []
    for i, g in enumerate(rngs):
        size = base + (1 if i < extra else 0)
        for item in draw(g, size):
            lines.append(json.dumps({"k": item.tolist()} if args.model == "poisson" else matrix_json(item)))
    text = "".join(line + "\n" for line in lines)
    if args.out:
        Path(args.out).write_text(text)
        _emit({"model": args.model, "n": args.n, "seed": args.seed, "workers": workers, "out": args.out})
    else:
        sys.stdout.write(text)
    return 0


def cmd_mean(args) -> int:
    theta = load_matrix(args.theta)
    _same_order(len(args.lam), theta=theta.shape[0])
    _emit(matrix_json(nef.mean_map(theta, args.lam)))
    return 0


def cmd_theta(args) -> int:
    m = load_matrix(args.mean)
    _same_order(len(args.lam), mean=m.shape[0])
    _emit(matrix_json(nef.inverse_mean_map(m, args.lam)))
    return 0


def cmd_variance(args) -> int:
    m = load_matrix(args.mean)
    _same_order(len(args.lam), mean=m.shape[0])
    v = nef.variance_function(m, args.lam)
    _emit({"r": int(m.shape[0]), "n": int(v.shape[0]), "data": v.tolist()})
    return 0


def cmd_verify(args) -> int:
    checks = run_suite(args.suite, seed=args.seed, r=args.r, n=args.n)
    _emit(checks)
    failed = [c["check"] for c in checks if not c["pass"]]
    if failed:
        print(f"{len(failed)} of {len(checks)} checks failed: {sorted(set(failed))}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rieszmix", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("density", help="mixture density at a matrix")
    q.add_argument("--lambda", dest="lam", type=_floats, required=True)
    q.add_argument("--x", required=True)
    q.add_argument("--log", action="store_true")
    q.set_defaults(func=cmd_density)

    q = sub.add_parser("riesz-density", help="Riesz log-density")
    q.add_argument("--s", type=_floats, required=True)
    q.add_argument("--sigma")
    q.add_argument("--x", required=True)
    q.set_defaults(func=cmd_riesz_density)

    q = sub.add_parser("sample", help="draw samples as JSON lines")
    q.add_argument("--model", choices=["riesz", "poisson", "mixture"], required=True)
    q.add_argument("--params", type=_floats, required=True,
                   help="shape s for riesz, rates lambda for poisson/mixture")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--seed", type=int, required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_sample)

    q = sub.add_parser("mean", help="mean map at a canonical parameter")
    q.add_argument("--lambda", dest="lam", type=_floats, required=True)
    q.add_argument("--theta", required=True)
    q.set_defaults(func=cmd_mean)

    q = sub.add_parser("theta", help="canonical parameter for a mean")
    q.add_argument("--lambda", dest="lam", type=_floats, required=True)
    q.add_argument("--mean", required=True)
    q.set_defaults(func=cmd_theta)

    q = sub.add_parser("variance", help="variance function operator at a mean")
    q.add_argument("--lambda", dest="lam", type=_floats, required=True)
    q.add_argument("--mean", required=True)
    q.set_defaults(func=cmd_variance)

    q = sub.add_parser("verify", help="run a verification suite")
    q.add_argument("--suite", choices=[*SUITES, "all"], required=True)
    q.add_argument("--r", type=int)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--n", type=int, help="Monte Carlo sample size for the laplace suite")
    q.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, RieszMixError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
