"""Multi-target shrinkage estimators of means and covariance matrices."""

from .cov import CovMtsOptions, TargetSpec, build_target, estimate_A_cov, estimate_b_cov, mts_cov
from .mean import (
    MeanMtsOptions,
    ShrinkageResult,
    combine,
    estimate_A_mean,
    estimate_b_mean,
    mts_mean,
    weight_constraint_rows,
)
from .qp import QpProblem, QpSolution, brute_force_solve, qp_objective, solve
from .stat_core import (
    Dataset,
    EigDecomp,
    WhitenMode,
    eig_sym,
    load_csv,
    sample_covariance,
    sample_mean,
    whitening_transform,
)

__version__ = "0.1.0"
