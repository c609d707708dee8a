"""Solvers for Lyapunov and Sylvester equations with banded symmetric data."""

from .banded import BandedMatrix, band_add, band_matmul, frob_inner, frob_norm, sym_part_lower, truncate_small
from .bounds import (
    SpectralInterval,
    TauChoice,
    benzi_exp_bound,
    cutoff_bar_p,
    freund_constants,
    freund_resolvent_bound,
    haber_solution_bound,
    kron_solution_bound,
    lowrank_tail_bound,
    predicted_cg_iterations,
    select_tau,
    tau_decay_profile,
)
from .cg import CgReport, lyap_cg, sylv_cg
from .driver import SolverConfig, SplitSolution, method_select, solve_lyapunov, solve_sylvester
from .eigen import EigPair, lanczos_extreme_eigs
from .exceptions import (
    BandlyapError,
    BreakdownError,
    DegenerateIntervalError,
    EllipseConsistencyError,
    NotSPDError,
    QuadratureError,
    ShapeMismatchError,
    SingularPivotError,
    TauSelectionError,
)
from .expm import RationalChebTable, banded_resolvent, cheb_table, compute_XB, rational_exp
from .factor import CholFactor, LdltFactor, banded_cholesky, chol_solve, complex_ldlt
from .generators import (
    Problem,
    ProblemSpec,
    gen_1d_operator,
    gen_kron_example,
    gen_pentadiag_operator,
    random_spd_banded,
)
from .io import read_coordinate, write_coordinate
from .lowrank import LowRankFactor, TwoSidedFactor, lowrank_iterate, lowrank_iterate_sylvester
from .oracles import dense_finite_horizon_oracle, dense_lyap_oracle, dense_sylvester_oracle

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
