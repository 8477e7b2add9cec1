"""Exact LP baseline: primal simplex on a dense tableau.

The instance arrives in <= orientation with right-hand side -1 per row
(:class:`sparsesvm.core.LpInstance`); internally rows are flipped to

    min c.x   s.t.  G x >= 1,  x >= 0,      G = -a_diags,

then put in standard equality form with surplus variables.

Two strategies cover the two instance kinds:

* ``primal``: two-phase tableau simplex.  Slack-form instances start
  phase 2 directly from the identity basis supplied by the xi block;
  otherwise phase 1 runs with artificial variables, whose positive
  optimum certifies infeasibility.
* ``dual``: pivoting on ``max 1.u  s.t.  G^T u <= c, u >= 0``, which is
  feasible at u = 0 and therefore needs no phase 1; an unbounded dual
  certifies primal infeasibility.  This is the default for the
  separable form, where the two-phase path stalls badly under
  degeneracy (thousands of pivots against tens for the dual).

Pivot rules: "bland" (lowest eligible index; guaranteed termination),
"dantzig" (most negative reduced cost) and "devex" (reference-weight
pricing).  The non-Bland rules fall back to Bland permanently after a
long degenerate stall, keeping the termination guarantee.

After pivoting terminates, the terminal basis is re-solved against the
original data (LU solves for basic values and duals) so the reported
primal/dual pair satisfies feasibility, complementary slackness and
strong duality to solver tolerance rather than to accumulated tableau
drift.
"""

from __future__ import annotations

import numpy as np

from .core import (
    DualSolution,
    InfeasibleProblem,
    IterationLimitExceeded,
    LpInstance,
    PrimalSolution,
    UnboundedProblem,
    make_primal,
    validate_lp,
)

__all__ = ["solve_exact", "support_vectors", "SimplexResultError"]

# Degenerate pivots tolerated in dantzig/devex mode before falling back
# to Bland's rule.
_STALL_LIMIT = 2048


class SimplexResultError(RuntimeError):
    """The terminal basis failed post-solve verification."""


def _pivot(T: np.ndarray, basis: np.ndarray, r: int, j: int) -> None:
    # Row-reduce column j to the r-th unit vector.
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    rows = np.flatnonzero(col)
    if rows.size:
        T[rows] -= np.outer(col[rows], T[r])
        T[rows, j] = 0.0           # exact zero, not roundoff
    T[r, j] = 1.0
    basis[r] = j


def _run_simplex(T, basis, allowed, rule, max_iters, tol):
    """Pivot until no eligible entering column remains.

    Returns the number of pivots.  ``allowed`` masks columns eligible to
    enter (artificials are excluded in phase 2).  Raises on iteration
    cap or unboundedness.
    """
    m = T.shape[0] - 1
    ncols = T.shape[1] - 1
    mode = rule
    stall = 0
    gamma = np.ones(ncols) if mode == "devex" else None
    for it in range(max_iters):
        red = T[m, :ncols]
        in_basis = np.zeros(ncols, dtype=bool)
        in_basis[basis] = True
        cand = (red < -tol) & allowed & ~in_basis
        if not cand.any():
            return it
        if mode == "bland":
            j = int(np.flatnonzero(cand)[0])
        elif mode == "dantzig":
            j = int(np.argmin(np.where(cand, red, 0.0)))
        else:
            j = int(np.argmax(np.where(cand, red * red / gamma, -1.0)))
        colj = T[:m, j]
        pos = colj > tol
        if not pos.any():
            raise UnboundedProblem("entering column has no positive entries")
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / colj[pos]
        rmin = ratios.min()
        ties = np.flatnonzero(ratios <= rmin + 1e-9 * max(1.0, rmin))
        if mode == "bland":
            r = int(ties[np.argmin(basis[ties])])
        else:
            r = int(ties[np.argmax(np.abs(colj[ties]))])
            stall = stall + 1 if rmin <= tol else 0
            if stall > _STALL_LIMIT:
                mode = "bland"      # anti-cycling fallback
        if gamma is not None and mode == "devex":
            gq, arq, leave = gamma[j], T[r, j], basis[r]
            _pivot(T, basis, r, j)
            np.maximum(gamma, T[r, :ncols] ** 2 * gq, out=gamma)
            gamma[leave] = max(gq / (arq * arq), 1.0)
            if gamma.max() > 1e12:
                gamma[:] = 1.0      # reference framework reset
        else:
            _pivot(T, basis, r, j)
    raise IterationLimitExceeded(f"simplex exceeded {max_iters} pivots")


def _refine(A_std, rhs, c_std, basis, nvars):
    """Re-solve the terminal basis against original data.

    Returns (x, duals): basic values scattered into the first ``nvars``
    components, and row multipliers from the transposed system.
    """
    B = A_std[:, basis]
    xB = np.linalg.solve(B, rhs)
    u = np.linalg.solve(B.T, c_std[basis])
    x = np.zeros(A_std.shape[1])
    x[basis] = xB
    return x[:nvars], u


def _solve_primal_form(G, h, c, tol, rule, max_iters, identity_start):
    """Two-phase simplex for min c.x s.t. G x >= h (h >= 0), x >= 0.

    Returns (x, u, pivots).  ``identity_start``: the first len(h) columns
    of G form an identity, so phase 1 is skipped.
    """
    m, n = G.shape
    A_std = np.concatenate([G, -np.eye(m)], axis=1)
    c_std = np.concatenate([c, np.zeros(m)])
    ncols = n + m
    pivots = 0

    if identity_start:
        basis = np.arange(m, dtype=np.int64)
        T = np.zeros((m + 1, ncols + 1))
        T[:m, :-1] = A_std
        T[:m, -1] = h
        allowed = np.ones(ncols, dtype=bool)
    else:
        # Phase 1: artificial identity basis, minimize the artificial sum.
        A1 = np.concatenate([A_std, np.eye(m)], axis=1)
        basis = np.arange(ncols, ncols + m, dtype=np.int64)
        T = np.zeros((m + 1, ncols + m + 1))
        T[:m, :-1] = A1
        T[:m, -1] = h
        T[m, ncols:ncols + m] = 1.0
        for r in range(m):
            T[m] -= T[r]
        pivots += _run_simplex(T, basis, np.ones(ncols + m, dtype=bool),
                               rule, max_iters, tol)
        if -T[m, -1] > tol:
            raise InfeasibleProblem(
                f"phase-1 optimum {-T[m, -1]:.3e} > {tol:.1e}")
        # Drive leftover artificials (basic at zero) out where possible.
        for r in np.flatnonzero(basis >= ncols):
            row = T[r, :ncols]
            free = np.flatnonzero(np.abs(row) > tol)
            if free.size:
                _pivot(T, basis, int(r), int(free[0]))
        T = np.concatenate([T[:, :ncols], T[:, -1:]], axis=1)
        allowed = np.ones(ncols, dtype=bool)
        stuck = np.flatnonzero(basis >= ncols)
        if stuck.size:
            # Rows still carried by an artificial are redundant; keep a
            # frozen unit column for them so the basis stays square.  In
            # tableau coordinates that column is e_r because it is the
            # r-th basis column.
            ext = np.zeros((m + 1, stuck.size))
            ext[stuck, np.arange(stuck.size)] = 1.0
            T = np.concatenate([T[:, :ncols], ext, T[:, -1:]], axis=1)
            A_std = np.concatenate([A_std, ext[:m]], axis=1)
            c_std = np.concatenate([c_std, np.zeros(stuck.size)])
            basis[stuck] = ncols + np.arange(stuck.size)
            allowed = np.concatenate([allowed,
                                      np.zeros(stuck.size, dtype=bool)])
            ncols += stuck.size

    # Phase 2 objective row: reduced costs of c against the current basis.
    T[m, :] = 0.0
    T[m, :ncols] = c_std
    for r in range(m):
        cb = c_std[basis[r]]
        if cb != 0.0:
            T[m] -= cb * T[r]
    pivots += _run_simplex(T, basis, allowed, rule, max_iters, tol)

    x, u = _refine(A_std, h, c_std, basis, n)
    return x, u, pivots


def _solve_via_dual(G, c, tol, rule, max_iters):
    """Pivot on the dual max 1.u s.t. G^T u <= c, u >= 0.

    Feasible at u = 0 (slack basis), so no phase 1; an unbounded dual
    certifies that the primal has no feasible point.  Returns
    (x, u, pivots) for the original problem: x from the multipliers of
    the dual rows, u from the dual's own variables.
    """
    m, n = G.shape
    A_std = np.concatenate([G.T, np.eye(n)], axis=1)   # n rows, m+n cols
    rhs = c.copy()
    c_std = np.concatenate([-np.ones(m), np.zeros(n)])
    basis = np.arange(m, m + n, dtype=np.int64)
    T = np.zeros((n + 1, m + n + 1))
    T[:n, :-1] = A_std
    T[:n, -1] = rhs
    T[n, :m + n] = c_std
    try:
        pivots = _run_simplex(T, basis, np.ones(m + n, dtype=bool),
                              rule, max_iters, tol)
    except UnboundedProblem as e:
        raise InfeasibleProblem(
            "no feasible point: every candidate violates a constraint "
            "(dual objective grows without bound)"
        ) from e
    u_full, w = _refine(A_std, rhs, c_std, basis, m + n)
    # Multipliers w of the dual rows are -x of the original problem.
    return -w, u_full[:m], pivots


def solve_exact(
    lp: LpInstance,
    tol: float = 1e-8,
    rule: str = "bland",
    strategy: str = "auto",
    max_iters: int | None = None,
    stats: dict | None = None,
) -> tuple[PrimalSolution, DualSolution]:
    """Solve the LP to optimality.

    Args:
        lp: Instance in <= orientation (right-hand sides all -1).
        tol: Feasibility/optimality tolerance for pivoting and for the
            post-solve verification.
        rule: "bland" (default), "dantzig" or "devex".
        strategy: "auto" (slack form -> "primal", separable -> "dual"),
            or force "primal"/"dual".
        max_iters: Pivot cap per phase; defaults to ``50 * (n + m)``.
        stats: Optional dict that receives {"pivots": total pivot count}.

    Returns:
        ``(primal, dual)`` with matching objectives (strong duality) and
        complementary slackness to tolerance.

    Raises:
        InfeasibleProblem: no feasible point (positive phase-1 optimum,
            or unbounded dual under the "dual" strategy).
        UnboundedProblem: an entering column had no blocking row.
        IterationLimitExceeded: pivot cap hit.
        SimplexResultError: terminal basis failed verification.
    """
    validate_lp(lp)
    m = lp.num_constraints
    n = lp.n
    if max_iters is None:
        max_iters = 50 * (n + m)
    if strategy == "auto":
        strategy = "primal" if lp.kind == "soft" else "dual"

    G = -lp.a_diags                      # rows flipped to >= orientation
    h = -lp.b                            # all ones

    if strategy == "primal":
        x, u, pivots = _solve_primal_form(
            G, h, lp.c_diag, tol, rule, max_iters,
            identity_start=lp.kind == "soft")
    elif strategy == "dual":
        x, u, pivots = _solve_via_dual(G, lp.c_diag, tol, rule, max_iters)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if stats is not None:
        stats["pivots"] = pivots

    # Tiny negatives from the refinement solves are clipped after
    # checking they are within tolerance.
    if x.min(initial=0.0) < -tol or u.min(initial=0.0) < -tol:
        raise SimplexResultError(
            f"negative components beyond tolerance: min x {x.min():.3e}, "
            f"min u {u.min():.3e}")
    x = np.maximum(x, 0.0)
    u = np.maximum(u, 0.0)

    _verify(lp, G, h, x, u, tol)

    if lp.kind == "soft":
        p = (n - m) // 2
        xi, bp, bm = x[:m], x[m:m + p], x[m + p:]
    else:
        p = n // 2
        xi, bp, bm = np.zeros(m), x[:p], x[p:]
    return make_primal(lp, xi, bp, bm), DualSolution.build(u)


def _verify(lp, G, h, x, u, tol):
    slack = G @ x - h
    if slack.min(initial=0.0) < -tol:
        raise SimplexResultError(f"primal infeasibility {slack.min():.3e}")
    red = lp.c_diag - G.T @ u
    if red.min(initial=0.0) < -tol:
        raise SimplexResultError(f"dual infeasibility {red.min():.3e}")
    scale = max(1.0, float(np.abs(x).max(initial=0.0)))
    cs1 = float(np.abs(u * slack).max(initial=0.0))
    cs2 = float(np.abs(x * red).max(initial=0.0))
    if max(cs1, cs2) > tol * scale:
        raise SimplexResultError(f"complementary slackness {max(cs1, cs2):.3e}")
    gap = abs(float(lp.c_diag @ x) - float(h @ u))
    if gap > tol * max(1.0, abs(float(lp.c_diag @ x))):
        raise SimplexResultError(f"duality gap {gap:.3e}")


def support_vectors(dual: DualSolution, tau: float) -> set[int]:
    """0-based indices of samples whose multiplier exceeds ``tau``."""
    return {int(i) for i in np.flatnonzero(dual.alpha > tau)}
