"""LP formulations of L1-regularized SVM training.

Slack form (m + 2p nonnegative variables, one row per sample):

    min (1/m) sum_i xi_i + lam * sum_j (beta+_j + beta-_j)
    s.t. xi_i + y_i <x_i, beta+ - beta-> >= 1        for all i

Separable form (2p variables, no slacks):

    min sum_j (beta+_j + beta-_j)
    s.t. y_i <x_i, beta+ - beta-> >= 1               for all i

Rows are stored multiplied by -1 (<= orientation, right-hand side -1),
matching the oracle layer in :mod:`sparsesvm.oracles`.  At any optimum
of the slack form, xi_i equals the hinge loss of sample i, and
beta = beta+ - beta- recovers the coefficient vector with
|beta_j| = beta+_j + beta-_j.
"""

from __future__ import annotations

import numpy as np

from .core import (
    BetaVector,
    Dataset,
    LpInstance,
    PrimalSolution,
    SparseSvmConfig,
    support_set,
    validate_dataset,
)

__all__ = ["build_soft_lp", "build_hard_lp", "read_beta", "hinge_objective"]


def _signed_features(d: Dataset) -> np.ndarray:
    # row i is y_i * x_i
    return d.labels[:, None] * d.features


def build_soft_lp(d: Dataset, cfg: SparseSvmConfig) -> LpInstance:
    """Build the slack-form LP for dataset ``d`` with weight ``cfg.lam``."""
    validate_dataset(d)
    m, p = d.m, d.p
    n = m + 2 * p
    c = np.empty(n, dtype=np.float64)
    c[:m] = 1.0 / m
    c[m:] = cfg.lam

    yx = _signed_features(d)
    a = np.zeros((m, n), dtype=np.float64)
    a[:, :m] = -np.eye(m)          # slack block: -1 only at position i
    a[:, m:m + p] = -yx            # beta+ block
    a[:, m + p:] = yx              # beta- block
    b = np.full(m, -1.0)
    return LpInstance(n=n, num_constraints=m, c_diag=c, a_diags=a, b=b, kind="soft")


def build_hard_lp(d: Dataset) -> LpInstance:
    """Build the separable-form LP (unit objective, no slack block)."""
    validate_dataset(d)
    m, p = d.m, d.p
    n = 2 * p
    c = np.ones(n, dtype=np.float64)
    yx = _signed_features(d)
    a = np.concatenate([-yx, yx], axis=1)
    b = np.full(m, -1.0)
    return LpInstance(n=n, num_constraints=m, c_diag=c, a_diags=a, b=b, kind="hard")


def read_beta(primal: PrimalSolution) -> BetaVector:
    """Recover coefficients from the split variables.

    beta_j = beta+_j - beta-_j; the reported ``l1_norm`` is the split
    mass sum(beta+ + beta-), which upper-bounds ||beta||_1 and matches it
    whenever no coordinate carries mass in both parts.
    """
    beta = primal.beta_plus - primal.beta_minus
    return BetaVector(
        beta=beta,
        support=support_set(beta),
        l1_norm=float(np.sum(primal.beta_plus) + np.sum(primal.beta_minus)),
    )


def hinge_objective(d: Dataset, beta: np.ndarray, lam: float) -> float:
    """Evaluate (1/m) sum_i max(0, 1 - y_i <x_i, beta>) + lam * ||beta||_1."""
    validate_dataset(d)
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (d.p,):
        raise ValueError(f"beta shape {beta.shape} != ({d.p},)")
    margins = d.labels * (d.features @ beta)
    losses = np.maximum(0.0, 1.0 - margins)
    return float(np.mean(losses) + lam * np.sum(np.abs(beta)))
