"""Shared data types for L1-regularized SVM training via linear programming.

The primal problem is

    min (1/m) sum_i max(0, 1 - y_i <beta, x_i>) + lam * ||beta||_1

over beta in R^p, for a dataset of m samples x_i in R^p with labels
y_i in {-1, +1}.  Its LP form uses nonnegative variables
(xi_1..xi_m, beta+_1..beta+_p, beta-_1..beta-_p) and one inequality per
sample; see :mod:`sparsesvm.formulation`.

All numeric payloads are float64 numpy arrays.  Solutions are frozen;
their stored aggregates (objective, norms) are computed once, by the
exact expressions the test-suite re-evaluates, so recomputation matches
bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "Dataset",
    "SparseSvmConfig",
    "LpInstance",
    "PrimalSolution",
    "DualSolution",
    "BetaVector",
    "QueryLedger",
    "DatasetError",
    "LpStructureError",
    "InfeasibleProblem",
    "UnboundedProblem",
    "IterationLimitExceeded",
    "NoSolutionWithinBounds",
    "SUPPORT_RTOL",
    "validate_dataset",
    "validate_lp",
    "support_set",
    "make_primal",
    "dataset_from_arrays",
]

# Relative threshold deciding which coefficients count as nonzero:
# j is in the support iff |beta_j| > SUPPORT_RTOL * max(1, ||beta||_inf).
SUPPORT_RTOL = 1e-8


class DatasetError(ValueError):
    """Raised when a dataset violates its shape or label contract."""


class LpStructureError(ValueError):
    """Raised when an LP instance violates its structural contract."""


class InfeasibleProblem(RuntimeError):
    """The LP has no feasible point (phase-1 optimum stayed positive)."""


class UnboundedProblem(RuntimeError):
    """The LP objective is unbounded below on the feasible region."""


class IterationLimitExceeded(RuntimeError):
    """A solver ran out of its iteration budget before terminating."""


class NoSolutionWithinBounds(RuntimeError):
    """The iterative solver certified that no solution exists inside the
    configured norm bounds (bracket collapsed); either the bounds are too
    small or the problem is infeasible."""


@dataclass(frozen=True)
class Dataset:
    """A labeled sample set.

    Attributes:
        m: Number of samples.
        p: Number of features.
        labels: Shape ``(m,)`` array with entries in {-1.0, +1.0}.
        features: Shape ``(m, p)`` float64 matrix; row i is sample x_i.
    """

    m: int
    p: int
    labels: NDArray[np.float64]
    features: NDArray[np.float64]


def validate_dataset(d: Dataset) -> None:
    """Check shape/label invariants, raising :class:`DatasetError` on failure."""
    if d.m < 1 or d.p < 1:
        raise DatasetError(f"need m >= 1 and p >= 1, got m={d.m}, p={d.p}")
    labels = np.asarray(d.labels)
    features = np.asarray(d.features)
    if labels.shape != (d.m,):
        raise DatasetError(f"labels shape {labels.shape} != ({d.m},)")
    if features.shape != (d.m, d.p):
        raise DatasetError(f"features shape {features.shape} != ({d.m}, {d.p})")
    if not np.all(np.isin(labels, (-1.0, 1.0))):
        bad = labels[~np.isin(labels, (-1.0, 1.0))]
        raise DatasetError(f"labels must be -1 or +1, found {bad[:5]}")
    if not np.all(np.isfinite(features)):
        raise DatasetError("features contain non-finite entries")


def dataset_from_arrays(labels, features) -> Dataset:
    """Build and validate a :class:`Dataset` from raw arrays."""
    labels = np.asarray(labels, dtype=np.float64)
    features = np.asarray(features, dtype=np.float64)
    d = Dataset(m=int(labels.shape[0]), p=int(features.shape[1]),
                labels=labels, features=features)
    validate_dataset(d)
    return d


@dataclass(frozen=True)
class SparseSvmConfig:
    """Training configuration.

    Attributes:
        lam: L1 regularization weight, strictly positive.
    """

    lam: float

    def __post_init__(self) -> None:
        if not (self.lam > 0.0 and np.isfinite(self.lam)):
            raise ValueError(f"lam must be a positive finite real, got {self.lam}")


@dataclass(frozen=True)
class LpInstance:
    """An LP with nonnegative variables and per-sample inequality rows.

    Constraints are stored in <= orientation with unit right-hand side:
    ``a_diags[i] . x <= b[i]`` with ``b[i] == -1`` for every row, i.e.
    the margin constraints multiplied through by -1.

    Attributes:
        n: Number of variables (m + 2p for the slack form, 2p for the
            separable form).
        num_constraints: Number of rows, one per sample.
        c_diag: Shape ``(n,)`` objective coefficients, all > 0.
        a_diags: Shape ``(num_constraints, n)`` constraint rows.
        b: Shape ``(num_constraints,)`` right-hand sides, all -1.
        kind: "soft" (slack form) or "hard" (separable form).
    """

    n: int
    num_constraints: int
    c_diag: NDArray[np.float64]
    a_diags: NDArray[np.float64]
    b: NDArray[np.float64]
    kind: str = "soft"


def validate_lp(lp: LpInstance) -> None:
    """Check structural invariants, raising :class:`LpStructureError`."""
    if lp.kind not in ("soft", "hard"):
        raise LpStructureError(f"kind must be 'soft' or 'hard', got {lp.kind!r}")
    m = lp.num_constraints
    if lp.c_diag.shape != (lp.n,):
        raise LpStructureError("c_diag shape mismatch")
    if lp.a_diags.shape != (m, lp.n):
        raise LpStructureError("a_diags shape mismatch")
    if lp.b.shape != (m,):
        raise LpStructureError("b shape mismatch")
    if not np.all(lp.b == -1.0):
        raise LpStructureError("all right-hand sides must equal -1")
    if not np.all(lp.c_diag > 0.0):
        raise LpStructureError("objective coefficients must be strictly positive")
    # soft: n = m + 2p; hard: n = 2p.  Both demand an even non-slack block.
    rest = lp.n - m if lp.kind == "soft" else lp.n
    if rest <= 0 or rest % 2 != 0:
        raise LpStructureError(f"variable layout inconsistent: n={lp.n}, m={m}")


@dataclass(frozen=True)
class PrimalSolution:
    """Primal LP solution split into its variable blocks.

    Attributes:
        xi: Shape ``(m,)`` slack values (all-zero for the separable form).
        beta_plus: Shape ``(p,)`` positive parts.
        beta_minus: Shape ``(p,)`` negative parts.
        objective: Value of ``c_diag . x`` at this point.
        norm_R: ``sum(xi) + sum(beta_plus) + sum(beta_minus)``, the L1
            norm of the stacked variable vector (symbol R).
    """

    xi: NDArray[np.float64]
    beta_plus: NDArray[np.float64]
    beta_minus: NDArray[np.float64]
    objective: float
    norm_R: float

    def stacked(self) -> NDArray[np.float64]:
        return np.concatenate([self.xi, self.beta_plus, self.beta_minus])


def make_primal(lp: "LpInstance", xi, beta_plus, beta_minus) -> "PrimalSolution":
    """Construct a :class:`PrimalSolution` with aggregates derived from
    the components.

    The stored scalars are produced by exactly the expressions below, so
    re-evaluating them on the stored arrays reproduces them bit for bit.
    For the separable form the slack block is all zeros and does not
    enter the objective.
    """
    xi = np.asarray(xi, dtype=np.float64)
    bp = np.asarray(beta_plus, dtype=np.float64)
    bm = np.asarray(beta_minus, dtype=np.float64)
    if lp.kind == "soft":
        variables = np.concatenate([xi, bp, bm])
    else:
        variables = np.concatenate([bp, bm])
    return PrimalSolution(
        xi=xi,
        beta_plus=bp,
        beta_minus=bm,
        objective=float(lp.c_diag @ variables),
        norm_R=float(np.sum(xi) + np.sum(bp) + np.sum(bm)),
    )


@dataclass(frozen=True)
class DualSolution:
    """Dual multipliers, one per sample constraint.

    Stored in the orientation where the margin constraints read
    ``G x >= 1``: alpha is then nonnegative and the dual program is a
    maximization whose value is ``sum(alpha)``.

    Attributes:
        alpha: Shape ``(m,)`` nonnegative multipliers.
        norm_r: ``sum(alpha)``, the dual L1 norm (symbol r).
        objective: Dual objective value, equal to ``norm_r``.
    """

    alpha: NDArray[np.float64]
    norm_r: float
    objective: float

    @staticmethod
    def build(alpha) -> "DualSolution":
        alpha = np.asarray(alpha, dtype=np.float64)
        s = float(np.sum(alpha))
        return DualSolution(alpha=alpha, norm_r=s, objective=s)


@dataclass(frozen=True)
class BetaVector:
    """A recovered coefficient vector with its sparsity pattern.

    Attributes:
        beta: Shape ``(p,)`` coefficients ``beta_plus - beta_minus``.
        support: Sorted 0-based indices j with
            ``|beta_j| > SUPPORT_RTOL * max(1, ||beta||_inf)``.
        l1_norm: ``sum(beta_plus + beta_minus)``, the split-variable L1
            mass (equals ``||beta||_1`` when the parts do not overlap).
    """

    beta: NDArray[np.float64]
    support: tuple[int, ...]
    l1_norm: float


def support_set(beta: NDArray[np.float64]) -> tuple[int, ...]:
    """Indices exceeding the relative sparsity threshold, sorted ascending."""
    beta = np.asarray(beta)
    scale = max(1.0, float(np.max(np.abs(beta))) if beta.size else 1.0)
    idx = np.nonzero(np.abs(beta) > SUPPORT_RTOL * scale)[0]
    return tuple(int(j) for j in idx)


@dataclass
class QueryLedger:
    """Mutable counters for oracle-mediated reads.

    Each counter tallies reads of one abstraction level: entries of the
    right-hand side b, of the objective diagonal C, of the constraint
    diagonals A_i, and of the underlying sample store x_i^j.  A read of a
    feature-block A entry counts once in ``a_queries`` and the sample
    access it composes from counts once in ``data_queries``.
    """

    b_queries: int = 0
    c_queries: int = 0
    a_queries: int = 0
    data_queries: int = 0

    def total(self) -> int:
        return self.b_queries + self.c_queries + self.a_queries + self.data_queries

    def as_dict(self) -> dict[str, int]:
        return {
            "b_queries": self.b_queries,
            "c_queries": self.c_queries,
            "a_queries": self.a_queries,
            "data_queries": self.data_queries,
        }

    def add(
        self,
        b_queries: int = 0,
        c_queries: int = 0,
        a_queries: int = 0,
        data_queries: int = 0,
    ) -> None:
        if min(b_queries, c_queries, a_queries, data_queries) < 0:
            raise ValueError("ledger increments must be nonnegative")
        self.b_queries += b_queries
        self.c_queries += c_queries
        self.a_queries += a_queries
        self.data_queries += data_queries
