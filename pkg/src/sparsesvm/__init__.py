"""Sparse hinge-loss training via linear programming.

Trains L1-regularized (soft) and sparsest-separator (hard) SVMs by
solving the equivalent LP with either an exact simplex solver or a
norm-aware multiplicative-weights solver, with query-counted data
access, seeded synthetic problem families, and closed-form performance
bounds the experiment harness checks empirically.
"""

from .bounds import (
    bernstein_bound,
    gauss_density,
    gauss_moments,
    hard_margin_norm_bound,
    high_dim_risk_bound,
    risk_bound,
    soft_margin_norm_bounds,
    tail_decay_product,
    variance_bound,
)
from .core import (
    BetaVector,
    Dataset,
    DatasetError,
    DualSolution,
    InfeasibleProblem,
    IterationLimitExceeded,
    LpInstance,
    LpStructureError,
    NoSolutionWithinBounds,
    PrimalSolution,
    QueryLedger,
    SparseSvmConfig,
    UnboundedProblem,
    dataset_from_arrays,
    make_primal,
    support_set,
    validate_dataset,
    validate_lp,
)
from .datagen import (
    MarginProblemSpec,
    SubgaussianProblemSpec,
    gen_margin,
    gen_paired,
    gen_subgaussian,
    gen_xor,
    make_beta_star,
    make_margin_spec,
    make_subgaussian_spec,
)
from .formulation import (
    build_hard_lp,
    build_soft_lp,
    hinge_objective,
    read_beta,
)
from .mwu import MwuConfig, MwuReport, sample_dual, sample_primal_support, solve_mwu
from .oracles import OracleSet, build_oracles
from .simplex import solve_exact, support_vectors

__all__ = [
    "BetaVector",
    "Dataset",
    "DatasetError",
    "DualSolution",
    "InfeasibleProblem",
    "IterationLimitExceeded",
    "LpInstance",
    "LpStructureError",
    "MarginProblemSpec",
    "MwuConfig",
    "MwuReport",
    "NoSolutionWithinBounds",
    "OracleSet",
    "PrimalSolution",
    "QueryLedger",
    "SparseSvmConfig",
    "SubgaussianProblemSpec",
    "UnboundedProblem",
    "bernstein_bound",
    "build_hard_lp",
    "build_oracles",
    "build_soft_lp",
    "dataset_from_arrays",
    "gauss_density",
    "gauss_moments",
    "gen_margin",
    "gen_paired",
    "gen_subgaussian",
    "gen_xor",
    "hard_margin_norm_bound",
    "high_dim_risk_bound",
    "hinge_objective",
    "make_beta_star",
    "make_margin_spec",
    "make_primal",
    "make_subgaussian_spec",
    "read_beta",
    "risk_bound",
    "sample_dual",
    "sample_primal_support",
    "soft_margin_norm_bounds",
    "solve_exact",
    "solve_mwu",
    "support_set",
    "support_vectors",
    "tail_decay_product",
    "validate_dataset",
    "validate_lp",
    "variance_bound",
]

__version__ = "1.0.0"
