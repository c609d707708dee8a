"""Experiment runner, decay-profile export and config-file sweeps."""

from __future__ import annotations

import csv
import io
import itertools
import time
from dataclasses import fields

import numpy as np

from .bounds import SpectralInterval, haber_bound_column, kron_bound_column
from .driver import SolverConfig, SplitSolution, solve_lyapunov
from .eigen import lanczos_extreme_eigs
from .generators import (
    Problem,
    ProblemSpec,
    gen_1d_operator,
    gen_kron_example,
    gen_pentadiag_operator,
    random_spd_banded,
)

RECORD_FIELDS = ("generator", "n", "method", "its", "beta", "rank", "tau", "seconds", "relres", "bytes")
DECAY_FIELDS = ("i", "abs_x", "bound_spectral", "bound_kron")


def make_problem(spec):
    """Build the problem described by a :class:`ProblemSpec`."""
    p = spec.params
    if spec.generator == "kron":
        n_blocks = int(p.get("n_blocks", spec.n // 6))
        return gen_kron_example(n_blocks)
    if spec.generator == "diffusion1d":
        return gen_1d_operator(spec.n, float(p["gamma"]), spec.seed)
    if spec.generator == "pentadiag":
        return gen_pentadiag_operator(spec.n, float(p["gamma"]), spec.seed)
    if spec.generator == "random_spd":
        return random_spd_banded(
            spec.n,
            int(p.get("beta_A", 2)),
            int(p.get("beta_D", 2)),
            spec.seed,
            p.get("kappa_shift"),
        )
    raise ValueError(f"unknown generator {spec.generator!r}")


def run_experiment(spec, method="auto", cfg=None):
    """Generate, solve and summarize one problem.

    Returns
    -------
    dict
        Keys ``generator, n, method, its, beta, rank, tau, seconds, relres,
        bytes``; ``relres`` is recomputed from the returned solution.
    """
    cfg = SolverConfig() if cfg is None else cfg
    prob = spec if isinstance(spec, Problem) else make_problem(spec)
    t0 = time.perf_counter()
    sol = solve_lyapunov(prob.A, prob.D, cfg, method=method)
    seconds = time.perf_counter() - t0
    mem = sol.memory_report()
    return {
        "generator": prob.spec.generator,
        "n": prob.A.n,
        "method": sol.report["method"],
        "its": sol.report["iterations"],
        "beta": sol.XB.beta,
        "rank": sol.rank,
        "tau": sol.tau,
        "seconds": seconds,
        "relres": sol.relative_residual(prob.A, prob.D),
        "bytes": mem["bytes_total"],
    }


def records_to_csv(records, columns=RECORD_FIELDS):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(r)
    return buf.getvalue()


def decay_profile(X, j, A=None, D=None, spec=None, rows=None):
    """Column ``j`` of ``|X|`` alongside both decay bounds.

    ``X`` is a dense array or a :class:`SplitSolution`. Bounds are filled
    with NaN when ``D`` or a spectral interval for ``A`` is unavailable.

    Returns
    -------
    dict of ndarray
        Keys ``i, abs_x, bound_spectral, bound_kron``.
    """
    if isinstance(X, SplitSolution):
        n = X.n
        e = np.zeros(n)
        e[j] = 1.0
        col = X.apply(e)
    else:
        X = np.asarray(X)
        n = X.shape[0]
        col = X[:, j]
    rows = np.arange(n) if rows is None else np.asarray(rows, dtype=int)
    if spec is None and A is not None:
        eig = lanczos_extreme_eigs(A, tol=1e-8)
        spec = SpectralInterval(eig.lambda_min, eig.lambda_max, max(A.beta, 1))
    if spec is not None and D is not None:
        b1 = haber_bound_column(spec, D, j, rows)
        b2 = kron_bound_column(spec, D, j, rows)
    else:
        b1 = b2 = np.full(rows.size, np.nan)
    return {
        "i": rows,
        "abs_x": np.abs(col[rows]),
        "bound_spectral": np.asarray(b1, dtype=float),
        "bound_kron": np.asarray(b2, dtype=float),
    }


def emit_decay_profile(X, j, A=None, D=None, spec=None, rows=None):
    """CSV text with columns ``i, abs_x, bound_spectral, bound_kron`` (0-based ``i``)."""
    prof = decay_profile(X, j, A, D, spec, rows)
    lines = [",".join(DECAY_FIELDS)]
    for k in range(prof["i"].size):
        lines.append(
            f"{prof['i'][k]},{prof['abs_x'][k]:.6e},{prof['bound_spectral'][k]:.6e},{prof['bound_kron'][k]:.6e}"
        )
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# config-file sweeps

_CFG_FIELDS = {f.name for f in fields(SolverConfig)}


def _convert(value):
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    low = value.lower()
    if low in ("none", ""):
        return None
    if low in ("true", "false"):
        return low == "true"
    return value


def parse_config(text):
    """Parse ``key = value`` lines; comma-separated values define a sweep.

    Returns the list of parameter dictionaries over the Cartesian product
    of all listed values.
    """
    keys, choices = [], []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"expected key=value, got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        keys.append(key.replace("-", "_"))
        choices.append([_convert(v.strip()) for v in val.split(",")])
    return [dict(zip(keys, combo)) for combo in itertools.product(*choices)]


def run_config(params):
    """Run one parameter dictionary from :func:`parse_config`."""
    params = dict(params)
    generator = params.pop("generator")
    method = params.pop("method", "auto")
    seed = int(params.pop("seed", 0))
    n = int(params.pop("n", 0))
    cfg_kw = {k: params.pop(k) for k in list(params) if k in _CFG_FIELDS}
    cfg = SolverConfig(seed=seed, **cfg_kw)
    if generator == "kron" and not n:
        n = 6 * int(params["n_blocks"])
    spec = ProblemSpec(generator, n, params, seed)
    rec = run_experiment(spec, method, cfg)
    rec.update({k: v for k, v in params.items()})
    return rec
