"""Norm-aware multiplicative-weights solver for the training LPs.

The solver binary-searches the objective value t and answers each
threshold with a weighted-feasibility game: Hedge weights over the m
constraint rows plus the row t − c·x ≥ 0, against a best response that
puts all of an L1 budget ``R_bound`` on the single most favorable
coordinate. A game that runs its full round count yields an averaged
point violating every row by at most ε/4 with objective at most
t + ε/4; a round whose weighted row no point of the ball can satisfy
certifies that the threshold is unachievable and becomes the dual
certificate. The final bracket has width ≤ ε/2, so the returned primal
objective exceeds the optimum by at most 3ε/4 and the certified lower
end trails it by at most ε.

Iteration ceiling per threshold: ⌈4·width²·ln(m+1)/(ε/4)²⌉ rounds with
the fixed learning rate η = (ε/4)/(2·width²), where
width = R_bound·max|entry| + max(1, bracket top). Feasibility of the
running average is checked every ``CHECK_EVERY`` rounds, so typical
runs stop far below the ceiling.

Query accounting: the matrix is fetched once through the oracle layer
up front, and every further round (and every feasibility check) replays
the same per-entry reads, charged in aggregate after each game — one
a-query per constraint entry, one b/c-query per right-hand side and
objective entry, one data query per feature entry touched.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ._mwu_kernel import (
    STATUS_CERTIFICATE,
    STATUS_SUCCESS,
    hedge_feasibility,
)
from .core import (
    DualSolution,
    IterationLimitExceeded,
    LpInstance,
    LpStructureError,
    NoSolutionWithinBounds,
    PrimalSolution,
    QueryLedger,
    make_primal,
    validate_lp,
)
from .oracles import OracleSet

__all__ = [
    "MwuConfig",
    "MwuReport",
    "solve_mwu",
    "sample_dual",
    "sample_primal_support",
]

CHECK_EVERY = 32
"""Rounds between feasibility checks of the running average."""


@dataclass(frozen=True)
class MwuConfig:
    """Solver inputs: accuracy, norm ceilings, budget.

    Attributes:
        epsilon: Target additive accuracy ε > 0 for objective and
            constraint residuals.
        R_bound: L1 ceiling for the primal solution; the best response
            spends exactly this budget. Must be ≥ 1.
        r_bound: L1 ceiling for the dual multipliers, recorded for
            reporting and the documented iteration ceiling. Must be ≥ 1.
        max_iters: Total round budget across all thresholds. Each
            threshold already stops at its own rounds ceiling, so the
            default is a coarse safety rail, not a tuning knob; lower
            it only to force an early abort.
        seed: Default seed for readout sampling helpers.
    """

    epsilon: float
    R_bound: float
    r_bound: float
    max_iters: int = 1_000_000_000
    seed: int = 0

    def __post_init__(self) -> None:
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValueError("epsilon must be positive and finite")
        if not self.R_bound >= 1:
            raise ValueError("R_bound must be at least 1")
        if not self.r_bound >= 1:
            raise ValueError("r_bound must be at least 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass(frozen=True)
class MwuReport:
    """What one solve cost and how tight it finished.

    Attributes:
        iterations: Hedge rounds used across all thresholds.
        gap_estimate: Primal objective minus certified dual objective.
        ledger: Oracle query totals for the whole solve.
        wall_time_s: Wall-clock duration of the solve.
        width: Payoff scale bound the learning rate was derived from.
        max_abs_payoff: Largest raw payoff magnitude observed.
        mean_abs_payoff: Mean raw payoff magnitude observed.
        t_steps: Number of thresholds the binary search visited.
        bracket_lo: Certified lower end of the final objective bracket.
        bracket_hi: Achieved upper end of the final objective bracket.
    """

    iterations: int
    gap_estimate: float
    ledger: QueryLedger
    wall_time_s: float
    width: float
    max_abs_payoff: float
    mean_abs_payoff: float
    t_steps: int
    bracket_lo: float
    bracket_hi: float


def solve_mwu(
    lp: LpInstance, cfg: MwuConfig, oracle: OracleSet
) -> tuple[PrimalSolution, DualSolution, MwuReport]:
    """Approximately solve the LP within the configured norm ceilings.

    Returns a primal point whose constraints are violated by at most ε
    and whose objective is within ε of the optimum, plus a dual vector
    whose total mass is the certified lower bracket end — provided the
    true solution norms fit under ``cfg.R_bound`` / ``cfg.r_bound``.

    Raises:
        NoSolutionWithinBounds: the top of the objective bracket was
            itself certified unachievable — the norm ceilings are too
            small, or the problem is infeasible.
        IterationLimitExceeded: ``cfg.max_iters`` ran out before the
            bracket closed.
    """
    validate_lp(lp)
    if (
        oracle.m != lp.num_constraints
        or oracle.n != lp.n
        or oracle.kind != lp.kind
    ):
        raise LpStructureError("oracle shape/kind does not match the LP")
    started = time.perf_counter()
    ledger = QueryLedger()
    a = oracle.fetch_a_full(ledger)
    b = oracle.fetch_b(ledger)
    c = oracle.fetch_c(ledger)
    G = np.ascontiguousarray(-a)
    h = -b
    m, n = G.shape
    p = oracle.p

    top = 1.0 if lp.kind == "soft" else float(cfg.R_bound)
    radius = float(cfg.R_bound)
    width = radius * max(np.abs(G).max(), np.abs(c).max()) + max(1.0, top)
    eps_inner = cfg.epsilon / 4.0
    eta = eps_inner / (2.0 * width * width)
    rounds_ceiling = math.ceil(
        4.0 * width * width * math.log(m + 1) / (eps_inner * eps_inner)
    )

    state = {
        "iterations": 0,
        "checks": 0,
        "payoff_max": 0.0,
        "payoff_mean_num": 0.0,
        "t_steps": 0,
    }

    def run(t: float):
        budget = cfg.max_iters - state["iterations"]
        if budget <= 0:
            raise IterationLimitExceeded(
                f"round budget {cfg.max_iters} exhausted at threshold {t:.6g}"
            )
        out = hedge_feasibility(
            G, h, c, t, radius, eta, min(rounds_ceiling, budget),
            eps_inner, CHECK_EVERY,
        )
        status, rounds, checks = out[0], out[1], out[2]
        state["iterations"] += int(rounds)
        state["checks"] += int(checks)
        state["payoff_max"] = max(state["payoff_max"], float(out[7]))
        state["payoff_mean_num"] += float(out[8]) * int(rounds)
        state["t_steps"] += 1
        replays = int(rounds) + int(checks)
        ledger.add(
            a_queries=replays * m * n,
            b_queries=replays * m,
            c_queries=replays * n,
            data_queries=replays * 2 * m * p,
        )
        if status == STATUS_SUCCESS or status == STATUS_CERTIFICATE:
            return status, out
        raise IterationLimitExceeded(
            f"threshold {t:.6g} undecided after {rounds} rounds "
            f"(budget {cfg.max_iters})"
        )

    lo, hi = 0.0, top
    best: tuple | None = None
    cert_weights: NDArray[np.float64] | None = None
    while hi - lo > 0.5 * cfg.epsilon:
        mid = 0.5 * (lo + hi)
        status, out = run(mid)
        if status == STATUS_SUCCESS:
            hi = mid
            best = out
        else:
            lo = mid
            cert_weights = out[6]
    if best is None:
        status, out = run(top)
        if status == STATUS_CERTIFICATE:
            raise NoSolutionWithinBounds(
                f"objective threshold {top:.6g} certified unachievable "
                f"within L1 radius {radius:.6g}"
            )
        best = out

    x_avg = best[3]
    xi = x_avg[:m] if lp.kind == "soft" else np.zeros(m)
    offset = m if lp.kind == "soft" else 0
    beta_plus = x_avg[offset : offset + p]
    beta_minus = x_avg[offset + p :]
    primal = make_primal(lp, xi, beta_plus, beta_minus)

    if cert_weights is None:
        alpha = np.zeros(m)
    else:
        row_mass = float(np.sum(cert_weights[:m]))
        alpha = lo * cert_weights[:m] / row_mass
    dual = DualSolution.build(alpha)

    iterations = state["iterations"]
    mean_payoff = (
        state["payoff_mean_num"] / iterations if iterations else 0.0
    )
    report = MwuReport(
        iterations=iterations,
        gap_estimate=primal.objective - dual.objective,
        ledger=ledger,
        wall_time_s=time.perf_counter() - started,
        width=float(width),
        max_abs_payoff=state["payoff_max"],
        mean_abs_payoff=mean_payoff,
        t_steps=state["t_steps"],
        bracket_lo=lo,
        bracket_hi=hi,
    )
    return primal, dual, report


def sample_dual(
    dual: DualSolution, k: int, seed: int
) -> NDArray[np.int64]:
    """Draw k sample indices i.i.d. proportional to the dual masses.

    Emulates a readout that surfaces one support vector per draw.
    Indices are 0-based.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    total = float(np.sum(dual.alpha))
    if total <= 0:
        raise ValueError("dual solution has no mass to sample")
    rng = np.random.default_rng(seed)
    return rng.choice(dual.alpha.size, size=k, p=dual.alpha / total)


def sample_primal_support(
    primal: PrimalSolution, k: int, seed: int
) -> list[tuple[str, int]]:
    """Draw k labeled indices proportional to primal magnitudes.

    Each draw is ("slack", sample_index) or ("feature", feature_index);
    the positive and negative coefficient halves of one feature map to
    the same label. Indices are 0-based.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    m = primal.xi.size
    p = primal.beta_plus.size
    stacked = np.abs(primal.stacked())
    total = float(np.sum(stacked))
    if total <= 0:
        raise ValueError("primal solution has no mass to sample")
    rng = np.random.default_rng(seed)
    draws = rng.choice(stacked.size, size=k, p=stacked / total)
    labeled: list[tuple[str, int]] = []
    for idx in draws:
        if idx < m:
            labeled.append(("slack", int(idx)))
        elif idx < m + p:
            labeled.append(("feature", int(idx - m)))
        else:
            labeled.append(("feature", int(idx - m - p)))
    return labeled
