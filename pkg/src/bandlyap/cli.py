"""Command-line interface: ``bandlyap <command> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .bench import (
    RECORD_FIELDS,
    emit_decay_profile,
    make_problem,
    parse_config,
    records_to_csv,
    run_config,
)
from .bounds import SpectralInterval, haber_bound_column, kron_bound_column
from .driver import METHODS, SolverConfig, solve_lyapunov, solve_sylvester
from .eigen import lanczos_extreme_eigs
from .exceptions import BandlyapError
from .generators import ProblemSpec
from .io import read_coordinate, write_coordinate, write_factor
from .oracles import MAX_DENSE_ORDER, dense_lyap_oracle, dense_sylvester_oracle

BOUNDS_HELP = """CSV columns:
  i               row index (0-based)
  j               column index (0-based)
  bound_spectral  entry bound from the spectral interval of A alone
  bound_kron      entry bound from the Kronecker-sum resolvent integral
  exact           |X[i, j]| from the dense solver, empty when not requested"""

DECAY_HELP = """CSV columns:
  i               row index (0-based)
  abs_x           |X[i, j]| of the computed solution
  bound_spectral  entry bound from the spectral interval of A alone
  bound_kron      entry bound from the Kronecker-sum resolvent integral"""

BENCH_HELP = f"""Config file: one 'key = value' per line, '#' starts a comment.
Comma-separated values sweep over the Cartesian product. Keys:
  generator  kron | diffusion1d | pentadiag | random_spd
  n, seed, method (auto | cg | split)
  generator parameters: n_blocks, gamma, beta_A, beta_D, kappa_shift
  solver settings: {', '.join(f.name for f in SolverConfig.__dataclass_fields__.values())}

CSV columns: {', '.join(RECORD_FIELDS)} followed by the generator parameters.
  its      iterations (CG steps or Krylov basis size)
  beta     bandwidth of the banded part
  rank     rank of the low-rank part
  bytes    storage of banded plus low-rank parts"""

SOLVE_HELP = """CG runs also write the CSV file PREFIX_history.csv with columns:
  iter    iteration number
  relres  relative residual
  beta    bandwidth of the iterate"""


def _add_solver_flags(p):
    p.add_argument("--eps-res", type=float, default=1e-3, help="relative residual target")
    p.add_argument("--max-it", type=int, default=2000, help="iteration cap")
    p.add_argument("--nu", type=int, default=6, help="rational approximation degree")
    p.add_argument("--nu-rule", action="store_true", help="derive nu from eps-quad instead of --nu")
    p.add_argument("--eps-b", type=float, default=1e-5, help="resolvent entry threshold")
    p.add_argument("--eps-quad", type=float, default=1e-5, help="quadrature tolerance")
    p.add_argument("--eps-tau", type=float, default=1e-5, help="decay target defining tau")
    p.add_argument("--beta-max", type=int, default=500, help="bandwidth target defining tau")
    p.add_argument("--tau", type=float, default=None, help="override the splitting time")
    p.add_argument("--eps-it", type=float, default=None, help="stagnation tolerance (default: eps-quad)")
    p.add_argument("--check-period", type=int, default=10, help="iterations between residual checks")
    p.add_argument("--kappa-threshold", type=float, default=1e4, help="auto method crossover")
    p.add_argument("--seed", type=int, default=0)


def _config(args):
    return SolverConfig(
        eps_res=args.eps_res,
        m_max=args.max_it,
        eps_tau=args.eps_tau,
        beta_max=args.beta_max,
        nu=args.nu,
        eps_B=args.eps_b,
        eps_quad=args.eps_quad,
        d=args.check_period,
        seed=args.seed,
        eps_it=args.eps_it,
        kappa_threshold=args.kappa_threshold,
        tau=args.tau,
        nu_rule=args.nu_rule,
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bandlyap",
        description="Banded Lyapunov and Sylvester solvers with decay-bound tools.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write test matrices in coordinate format")
    g.add_argument("generator", choices=["kron", "diffusion1d", "pentadiag", "random_spd"])
    g.add_argument("--n", type=int, default=0, help="order (kron: 6 * n-blocks)")
    g.add_argument("--n-blocks", type=int, default=170)
    g.add_argument("--gamma", type=float, default=1.0)
    g.add_argument("--beta-a", type=int, default=2)
    g.add_argument("--beta-d", type=int, default=2)
    g.add_argument("--kappa-shift", type=float, default=None)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="prefix; writes PREFIX_A.txt and PREFIX_D.txt")

    s = sub.add_parser(
        "solve",
        help="solve AX + XA = D (or AX + XB = D)",
        epilog=SOLVE_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    s.add_argument("A")
    s.add_argument("D")
    s.add_argument("--B", default=None, help="second coefficient for a Sylvester equation")
    s.add_argument("--method", choices=METHODS, default="auto")
    s.add_argument("--out", default=None, help="prefix for PREFIX_XB.txt, PREFIX_factor.npz, PREFIX_report.txt")
    _add_solver_flags(s)

    b = sub.add_parser(
        "bounds",
        help="entry bounds for one solution column",
        epilog=BOUNDS_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    b.add_argument("A")
    b.add_argument("D")
    b.add_argument("--column", type=int, required=True, help="0-based column index")
    b.add_argument("--exact", action="store_true", help=f"add dense solution entries (n <= {MAX_DENSE_ORDER})")

    o = sub.add_parser("oracle-check", help="compare a solver run with the dense solution")
    o.add_argument("A")
    o.add_argument("D")
    o.add_argument("--B", default=None)
    o.add_argument("--method", choices=METHODS, default="auto")
    _add_solver_flags(o)

    be = sub.add_parser(
        "bench",
        help="run a sweep described by a key=value config file",
        epilog=BENCH_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    be.add_argument("config")
    be.add_argument("--out", default=None, help="CSV output path (default stdout)")

    d = sub.add_parser(
        "decay",
        help="decay profile of one solution column",
        epilog=DECAY_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    d.add_argument("A")
    d.add_argument("D")
    d.add_argument("--column", type=int, required=True)
    d.add_argument("--method", choices=("dense",) + METHODS, default="dense")
    d.add_argument("--no-bounds", action="store_true", help="skip the bound columns")
    _add_solver_flags(d)
    return parser


def _emit(text, path):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _spectral(A):
    eig = lanczos_extreme_eigs(A, tol=1e-8)
    return SpectralInterval(eig.lambda_min, eig.lambda_max, max(A.beta, 1))


def cmd_gen(args):
    params = {
        "n_blocks": args.n_blocks,
        "gamma": args.gamma,
        "beta_A": args.beta_a,
        "beta_D": args.beta_d,
        "kappa_shift": args.kappa_shift,
    }
    n = args.n or (6 * args.n_blocks if args.generator == "kron" else 0)
    if n <= 0:
        raise SystemExit("--n is required for this generator")
    prob = make_problem(ProblemSpec(args.generator, n, params, args.seed))
    write_coordinate(f"{args.out}_A.txt", prob.A)
    write_coordinate(f"{args.out}_D.txt", prob.D)
    print(f"n={prob.A.n} beta_A={prob.A.beta} beta_D={prob.D.beta}")


def _report_lines(sol, A, D, B):
    mem = sol.memory_report()
    rep = sol.report
    tau = "" if sol.tau is None else f"{sol.tau:.10g}"
    lines = [
        f"method={rep['method']}",
        f"iterations={rep['iterations']}",
        f"tau={tau}",
        f"beta_xb={mem['beta_xb']}",
        f"rank={mem['rank']}",
        f"relres={sol.relative_residual(A, D, B):.6e}",
        f"converged={rep['converged']}",
        f"seconds={rep['seconds']:.3f}",
        f"bytes={mem['bytes_total']}",
    ]
    if "stop_reason" in rep:
        lines.append(f"stop_reason={rep['stop_reason']}")
    return lines


def _solve(args):
    A = read_coordinate(args.A)
    D = read_coordinate(args.D)
    B = read_coordinate(args.B) if args.B else None
    cfg = _config(args)
    if B is None:
        sol = solve_lyapunov(A, D, cfg, method=args.method)
    else:
        sol = solve_sylvester(A, B, D, cfg, method=args.method)
    return A, B, D, sol


def cmd_solve(args):
    A, B, D, sol = _solve(args)
    lines = _report_lines(sol, A, D, B)
    text = "\n".join(lines) + "\n"
    if args.out:
        write_coordinate(f"{args.out}_XB.txt", sol.XB)
        write_factor(f"{args.out}_factor.npz", sol.low_rank)
        Path(f"{args.out}_report.txt").write_text(text)
        if sol.report["method"] == "cg":
            hist = sol.report["residual_history"]
            rows = ["iter,relres,beta"]
            betas = sol.report.get("beta_history") or [""] * len(hist)
            rows += [f"{k},{r:.6e},{b}" for (k, r), b in zip(hist, betas)]
            Path(f"{args.out}_history.csv").write_text("\n".join(rows) + "\n")
    sys.stdout.write(text)


def cmd_bounds(args):
    A = read_coordinate(args.A)
    D = read_coordinate(args.D)
    j = args.column
    if not 0 <= j < A.n:
        raise SystemExit(f"column {j} outside order {A.n}")
    spec = _spectral(A)
    rows = np.arange(A.n)
    b1 = haber_bound_column(spec, D, j, rows)
    b2 = kron_bound_column(spec, D, j, rows)
    exact = None
    if args.exact:
        exact = np.abs(dense_lyap_oracle(A.to_dense(), D.to_dense())[:, j])
    out = ["i,j,bound_spectral,bound_kron,exact"]
    for i in rows:
        ex = "" if exact is None else f"{exact[i]:.6e}"
        out.append(f"{i},{j},{b1[i]:.6e},{b2[i]:.6e},{ex}")
    sys.stdout.write("\n".join(out) + "\n")


def cmd_oracle_check(args):
    A, B, D, sol = _solve(args)
    Ad, Dd = A.to_dense(), D.to_dense()
    if B is None:
        Xo = dense_lyap_oracle(Ad, Dd)
        Bd = Ad
    else:
        Bd = B.to_dense()
        Xo = dense_sylvester_oracle(Ad, Bd, Dd)
    X = sol.to_dense()
    nD = np.linalg.norm(Dd)
    res_dense = np.linalg.norm(Ad @ X + X @ Bd - Dd) / nD
    res_oracle = np.linalg.norm(Ad @ Xo + Xo @ Bd - Dd) / nD
    err = np.linalg.norm(X - Xo) / np.linalg.norm(Xo)
    print(f"method={sol.report['method']}")
    print(f"relres_solver={sol.relative_residual(A, D, B):.6e}")
    print(f"relres_dense={res_dense:.6e}")
    print(f"relres_oracle={res_oracle:.6e}")
    print(f"relerr_vs_oracle={err:.6e}")


def cmd_bench(args):
    configs = parse_config(Path(args.config).read_text())
    records = [run_config(c) for c in configs]
    extra = []
    for r in records:
        extra += [k for k in r if k not in RECORD_FIELDS and k not in extra]
    _emit(records_to_csv(records, RECORD_FIELDS + tuple(extra)), args.out)


def cmd_decay(args):
    A = read_coordinate(args.A)
    D = read_coordinate(args.D)
    if args.method == "dense":
        X = dense_lyap_oracle(A.to_dense(), D.to_dense())
    else:
        X = solve_lyapunov(A, D, _config(args), method=args.method)
    if args.no_bounds:
        text = emit_decay_profile(X, args.column)
    else:
        text = emit_decay_profile(X, args.column, A, D, _spectral(A))
    sys.stdout.write(text)


COMMANDS = {
    "gen": cmd_gen,
    "solve": cmd_solve,
    "bounds": cmd_bounds,
    "oracle-check": cmd_oracle_check,
    "bench": cmd_bench,
    "decay": cmd_decay,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except (BandlyapError, ValueError, OSError) as exc:
        print(f"bandlyap: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
