"""Experiment harness: file formats, solver drivers, and sweeps.

Everything the command line exposes lives here as plain functions so
tests can drive the same paths: dataset CSV and sidecar-JSON round
trips, query-counted training runs for both solvers, bound-verification
grids, and the scaling sweep. All file outputs are deterministic given
seeds — floats are written with 17 significant digits and no timestamps
are embedded (wall-clock columns are filled only on request).
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from .bounds import (
    bernstein_bound,
    hard_margin_norm_bound,
    soft_margin_norm_bounds,
)
from .core import (
    Dataset,
    DatasetError,
    LpInstance,
    PrimalSolution,
    DualSolution,
    QueryLedger,
    SparseSvmConfig,
    dataset_from_arrays,
    make_primal,
    support_set,
)
from .datagen import (
    MarginProblemSpec,
    SubgaussianProblemSpec,
    gen_margin,
    gen_paired,
    gen_subgaussian,
    gen_xor,
    make_margin_spec,
    make_subgaussian_spec,
)
from .formulation import hinge_objective, read_beta
from .mwu import MwuConfig, solve_mwu
from .oracles import build_oracles
from .simplex import solve_exact

__all__ = [
    "default_lam",
    "write_dataset_csv",
    "read_dataset_csv",
    "write_sidecar_json",
    "read_sidecar_json",
    "generate_family",
    "train_on_dataset",
    "run_margin_verification",
    "run_risk_verification",
    "run_norm_verification",
    "run_sweep",
    "write_rows_csv",
    "SWEEP_COLUMNS",
]

FLOAT_FMT = "%.17g"

SWEEP_COLUMNS = (
    "p",
    "m",
    "epsilon",
    "R_measured",
    "r_measured",
    "iterations",
    "a_queries",
    "data_queries",
    "wall_ms",
)

_TABLEAU_SIZE_LIMIT = 2000
"""Largest n + m the dense-tableau solver handles in harness sweeps;
bigger instances go to the sparse LP backend."""


def default_lam(p: int) -> float:
    """Sweep default λ = 1/√(1 + 2 ln p), keeping λ·√(1+2 ln p) = 1."""
    if p < 2:
        raise ValueError("p must be at least 2")
    return 1.0 / math.sqrt(1.0 + 2.0 * math.log(p))


# -- file formats ------------------------------------------------------


def write_dataset_csv(path: str | Path, dataset: Dataset) -> None:
    """Write header y,x1,...,xp with 17-significant-digit floats."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["y"] + [f"x{j + 1}" for j in range(dataset.p)])
        for i in range(dataset.m):
            row = [FLOAT_FMT % dataset.labels[i]]
            row.extend(FLOAT_FMT % v for v in dataset.features[i])
            writer.writerow(row)


def read_dataset_csv(path: str | Path) -> Dataset:
    """Read a dataset written by :func:`write_dataset_csv`."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError(f"{path}: empty dataset file") from None
        if not header or header[0] != "y":
            raise DatasetError(f"{path}: malformed header {header!r}")
        rows = [[float(v) for v in row] for row in reader if row]
    if not rows:
        raise DatasetError(f"{path}: no samples")
    data = np.asarray(rows)
    if data.shape[1] != len(header):
        raise DatasetError(f"{path}: ragged rows")
    return dataset_from_arrays(data[:, 0], data[:, 1:])


def write_sidecar_json(path: str | Path, payload: dict) -> None:
    """Write generation parameters next to a dataset, replayably."""
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_sidecar_json(path: str | Path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _spec_payload(spec) -> dict:
    if isinstance(spec, MarginProblemSpec):
        return {
            "family": "margin",
            "p": spec.p,
            "p_prime": spec.p_prime,
            "nu": spec.nu,
            "box": spec.box,
            "beta_star": [float(v) for v in spec.beta_star],
        }
    if isinstance(spec, SubgaussianProblemSpec):
        return {
            "family": "subgaussian",
            "p": spec.p,
            "p_prime": spec.p_prime,
            "c": spec.c,
            "mu": spec.mu,
            "delta_trunc": spec.delta_trunc,
            "beta_star": [float(v) for v in spec.beta_star],
        }
    raise TypeError(f"unknown spec type {type(spec)!r}")


def generate_family(
    family: str,
    seed: int,
    m: int | None = None,
    p: int | None = None,
    p_prime: int | None = None,
    nu: float | None = None,
    c: float | None = None,
    delta_trunc: float | None = None,
    mu: float | None = None,
    box: float | None = None,
    copies: int | None = None,
    x: NDArray[np.float64] | None = None,
    stratified: bool = True,
    random_support: bool = False,
    mixed_signs: bool = False,
) -> tuple[Dataset, dict]:
    """Generate one dataset plus its replayable sidecar payload."""
    from .datagen import make_beta_star

    if family == "margin":
        if None in (m, p, p_prime, nu):
            raise ValueError("margin family needs m, p, p_prime, nu")
        beta_star = make_beta_star(
            p, p_prime, seed=seed if (random_support or mixed_signs) else None,
            random_support=random_support, mixed_signs=mixed_signs,
        )
        spec = make_margin_spec(p, p_prime, nu, box=box, beta_star=beta_star)
        dataset = gen_margin(spec, m, seed, stratified=stratified)
        payload = _spec_payload(spec)
    elif family == "subgaussian":
        if None in (m, p, p_prime, c, delta_trunc):
            raise ValueError(
                "subgaussian family needs m, p, p_prime, c, delta_trunc"
            )
        beta_star = make_beta_star(
            p, p_prime, seed=seed if (random_support or mixed_signs) else None,
            random_support=random_support, mixed_signs=mixed_signs,
        )
        spec = make_subgaussian_spec(
            p, p_prime, c, delta_trunc, mu=mu, beta_star=beta_star
        )
        dataset = gen_subgaussian(spec, m, seed, stratified=stratified)
        payload = _spec_payload(spec)
    elif family == "xor":
        dataset = gen_xor(seed)
        payload = {"family": "xor"}
    elif family == "paired":
        if copies is None or x is None:
            raise ValueError("paired family needs copies and x")
        dataset = gen_paired(x, copies)
        payload = {"family": "paired", "copies": copies,
                   "x": [float(v) for v in np.asarray(x)]}
    else:
        raise ValueError(f"unknown family {family!r}")
    payload.update({"m": dataset.m, "seed": seed, "stratified": stratified})
    return dataset, payload


# -- counted solver drivers -------------------------------------------


def _lp_from_oracles(oracle, ledger: QueryLedger) -> LpInstance:
    """Assemble the LP by reading every entry through the oracles."""
    a = oracle.fetch_a_full(ledger)
    b = oracle.fetch_b(ledger)
    c = oracle.fetch_c(ledger)
    return LpInstance(
        n=oracle.n,
        num_constraints=oracle.m,
        c_diag=c,
        a_diags=a,
        b=b,
        kind=oracle.kind,
    )


def _solve_lp_backend(
    lp: LpInstance, rule: str, strategy: str, engine: str
) -> tuple[PrimalSolution, DualSolution, int]:
    """Solve exactly with the tableau solver or the sparse LP backend.

    "auto" keeps the in-house solver up to ``_TABLEAU_SIZE_LIMIT``
    variables-plus-rows and hands larger instances to the HiGHS backend
    (same optimum, cross-checked where both run).
    """
    if engine == "auto":
        engine = (
            "tableau"
            if lp.n + lp.num_constraints <= _TABLEAU_SIZE_LIMIT
            else "highs"
        )
    if engine == "tableau":
        stats: dict = {}
        primal, dual = solve_exact(
            lp, rule=rule, strategy=strategy, stats=stats
        )
        return primal, dual, int(stats.get("pivots", 0))
    if engine != "highs":
        raise ValueError(f"unknown engine {engine!r}")
    from scipy import sparse
    from scipy.optimize import linprog

    res = linprog(
        lp.c_diag,
        A_ub=sparse.csr_matrix(lp.a_diags),
        b_ub=lp.b,
        bounds=(0, None),
        method="highs",
    )
    if res.status == 2:
        from .core import InfeasibleProblem

        raise InfeasibleProblem("LP backend reported infeasible")
    if res.status != 0:
        raise RuntimeError(f"LP backend failed with status {res.status}")
    x = np.maximum(res.x, 0.0)
    alpha = np.maximum(-np.asarray(res.ineqlin.marginals), 0.0)
    m = lp.num_constraints
    if lp.kind == "soft":
        p = (lp.n - m) // 2
        xi, bp, bm = x[:m], x[m : m + p], x[m + p :]
    else:
        p = lp.n // 2
        xi, bp, bm = np.zeros(m), x[:p], x[p:]
    return make_primal(lp, xi, bp, bm), DualSolution.build(alpha), int(res.nit)


def train_on_dataset(
    dataset: Dataset,
    kind: str = "soft",
    solver: str = "exact",
    lam: float | None = None,
    epsilon: float = 0.05,
    R_bound: float | None = None,
    r_bound: float | None = None,
    rule: str = "bland",
    strategy: str = "auto",
    engine: str = "tableau",
    max_iters: int | None = None,
) -> dict:
    """Train one model and return the full JSON-ready report.

    The exact path reads the LP through the counted oracles and solves
    to optimality; the mwu path needs explicit ``R_bound``/``r_bound``
    ceilings. λ defaults to :func:`default_lam`.
    """
    if lam is None:
        lam = default_lam(dataset.p) if kind == "soft" else 1.0
    config = SparseSvmConfig(lam=lam)
    oracle = build_oracles(dataset, config, kind=kind)
    started = time.perf_counter()
    if solver == "exact":
        ledger = QueryLedger()
        lp = _lp_from_oracles(oracle, ledger)
        primal, dual, iterations = _solve_lp_backend(lp, rule, strategy, engine)
    elif solver == "mwu":
        if R_bound is None or r_bound is None:
            raise ValueError("mwu solver needs R_bound and r_bound")
        from .formulation import build_hard_lp, build_soft_lp

        lp = (
            build_soft_lp(dataset, config)
            if kind == "soft"
            else build_hard_lp(dataset)
        )
        cfg = MwuConfig(
            epsilon=epsilon,
            R_bound=R_bound,
            r_bound=r_bound,
            **({"max_iters": max_iters} if max_iters else {}),
        )
        primal, dual, mwu_report = solve_mwu(lp, cfg, oracle)
        ledger = mwu_report.ledger
        iterations = mwu_report.iterations
    else:
        raise ValueError(f"unknown solver {solver!r}")
    wall = time.perf_counter() - started
    beta_vec = read_beta(primal)
    return {
        "solver": solver,
        "kind": kind,
        "lambda": lam,
        "epsilon": epsilon if solver == "mwu" else None,
        "objective": primal.objective,
        "R": primal.norm_R,
        "r": dual.norm_r,
        "duality_gap": primal.objective - dual.objective,
        "beta": [float(v) for v in beta_vec.beta],
        "support": [int(i) for i in beta_vec.support],
        "xi": [float(v) for v in primal.xi],
        "alpha": [float(v) for v in dual.alpha],
        "iterations": iterations,
        "wall_time_s": wall,
        "ledger": ledger.as_dict(),
    }


# -- bound-verification grids -----------------------------------------


def run_margin_verification(
    p_list: list[int],
    p_prime_list: list[int],
    nu_list: list[float],
    trials: int,
    seed: int,
    m_cap: int = 500,
    rule: str = "devex",
) -> tuple[list[dict], bool]:
    """Hard-margin norm ceiling √p′/ν over a (p, p′, ν) grid.

    Sample counts follow m = ⌈4·p′/ν²⌉ capped at ``m_cap``. Each row
    records the exact ‖β̂‖₁ against the ceiling (tolerance 1e-6).
    """
    rows: list[dict] = []
    all_pass = True
    instance = 0
    for p in p_list:
        for p_prime in p_prime_list:
            for nu in nu_list:
                m = min(m_cap, math.ceil(4 * p_prime / (nu * nu)))
                spec = make_margin_spec(p, p_prime, nu)
                bound = hard_margin_norm_bound(p_prime, nu)
                for trial in range(trials):
                    dataset = gen_margin(spec, m, seed + instance)
                    instance += 1
                    report = train_on_dataset(
                        dataset, kind="hard", solver="exact", rule=rule
                    )
                    measured = sum(abs(v) for v in report["beta"])
                    ok = measured <= bound + 1e-6
                    all_pass = all_pass and ok
                    rows.append(
                        {
                            "family": "margin",
                            "check": "hard_norm",
                            "p": p,
                            "p_prime": p_prime,
                            "nu": nu,
                            "m": m,
                            "trial": trial,
                            "measured": measured,
                            "bound": bound,
                            "pass": int(ok),
                        }
                    )
    return rows, all_pass


def run_risk_verification(
    p: int,
    p_prime: int,
    c: float,
    m: int,
    trials: int,
    seed: int,
    confidence_delta: float = 0.1,
) -> tuple[list[dict], bool]:
    """Planted-model empirical risk against its concentration bound.

    Draws ``trials`` independent training sets and compares the hinge
    risk of β* with the three-term bound at the family's μ and
    Δ = 2 ln p. Mandatory condition: violation frequency ≤ δ.
    """
    delta_trunc = 2.0 * math.log(p)
    spec = make_subgaussian_spec(p, p_prime, c, delta_trunc)
    bound = bernstein_bound(spec.mu, delta_trunc, m, confidence_delta)
    rows: list[dict] = []
    failures = 0
    for trial in range(trials):
        dataset = gen_subgaussian(spec, m, seed + trial)
        measured = hinge_objective(dataset, spec.beta_star, 0.0)
        ok = measured <= bound
        failures += 0 if ok else 1
        rows.append(
            {
                "family": "subgaussian",
                "check": "planted_risk",
                "p": p,
                "p_prime": p_prime,
                "c": c,
                "m": m,
                "trial": trial,
                "measured": measured,
                "bound": bound,
                "pass": int(ok),
            }
        )
    return rows, failures <= confidence_delta * trials


def run_norm_verification(
    p_list: list[int],
    trials_per_p: int,
    seed: int,
    c: float = 1.5,
    confidence_delta: float = 0.1,
    rule: str = "devex",
) -> tuple[list[dict], bool]:
    """Soft-margin solution norms against their (R, r) ceilings.

    Uses m = p/2, λ = 1/√(1+2 ln p), the high-dimensional support size
    p′ = round(1+2 ln p), and Δ = 2 ln p. Mandatory condition: each
    ceiling holds with frequency ≥ 1 − δ.
    """
    rows: list[dict] = []
    violations = 0
    total = 0
    instance = 0
    for p in p_list:
        m = p // 2
        lam = default_lam(p)
        p_prime = int(round(1.0 + 2.0 * math.log(p)))
        spec = make_subgaussian_spec(p, p_prime, c, 2.0 * math.log(p))
        big_r_bound, r_bound = soft_margin_norm_bounds(
            p, m, lam, confidence_delta
        )
        for trial in range(trials_per_p):
            dataset = gen_subgaussian(spec, m, seed + instance)
            instance += 1
            report = train_on_dataset(
                dataset, kind="soft", solver="exact", lam=lam, rule=rule
            )
            for check, measured, bound in (
                ("primal_norm", report["R"], big_r_bound),
                ("dual_norm", report["r"], r_bound),
            ):
                ok = measured <= bound
                total += 1
                violations += 0 if ok else 1
                rows.append(
                    {
                        "family": "subgaussian",
                        "check": check,
                        "p": p,
                        "p_prime": p_prime,
                        "c": c,
                        "m": m,
                        "trial": trial,
                        "measured": measured,
                        "bound": bound,
                        "pass": int(ok),
                    }
                )
    return rows, violations <= confidence_delta * total


# -- scaling sweep -----------------------------------------------------


def _sweep_cell(cell: dict) -> dict:
    """Run one sweep cell; pure function of the cell description."""
    p = cell["p"]
    m = cell["m"]
    lam = cell.get("lam") or default_lam(p)
    p_prime = cell.get("p_prime") or int(round(1.0 + 2.0 * math.log(p)))
    delta_trunc = cell.get("delta_trunc") or 2.0 * math.log(p)
    spec = make_subgaussian_spec(p, p_prime, cell["c"], delta_trunc)
    dataset = gen_subgaussian(spec, m, cell["seed"])
    started = time.perf_counter()
    exact = train_on_dataset(
        dataset,
        kind="soft",
        solver="exact",
        lam=lam,
        rule="devex",
        engine=cell.get("engine", "auto"),
    )
    if cell["solver"] == "exact":
        report = exact
    else:
        report = train_on_dataset(
            dataset,
            kind="soft",
            solver="mwu",
            lam=lam,
            epsilon=cell["epsilon"],
            R_bound=max(1.0, exact["R"]),
            r_bound=max(1.0, exact["r"]),
        )
    wall_ms = (time.perf_counter() - started) * 1000.0
    return {
        "p": p,
        "m": m,
        "epsilon": cell["epsilon"] if cell["solver"] == "mwu" else 0.0,
        "R_measured": report["R"],
        "r_measured": report["r"],
        "iterations": report["iterations"],
        "a_queries": report["ledger"]["a_queries"],
        "data_queries": report["ledger"]["data_queries"],
        "wall_ms": ("%.0f" % wall_ms) if cell.get("timing") else "",
    }


def run_sweep(cells: list[dict], jobs: int = 1) -> list[dict]:
    """Run sweep cells, optionally in parallel, in stable cell order.

    Each cell owns its RNG stream (cells carry ``seed`` = base seed +
    cell index) and its ledger, so results are independent of ``jobs``.
    """
    if jobs <= 1:
        return [_sweep_cell(cell) for cell in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_cell, cells))


def default_jobs() -> int:
    """Worker count from SPARSESVM_JOBS, defaulting to 1."""
    try:
        return max(1, int(os.environ.get("SPARSESVM_JOBS", "1")))
    except ValueError:
        return 1


def write_rows_csv(
    path: str | Path, rows: list[dict], columns: tuple[str, ...]
) -> None:
    """Write dict rows with fixed column order and lossless floats."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            out = []
            for col in columns:
                value = row[col]
                if isinstance(value, float):
                    out.append(FLOAT_FMT % value)
                else:
                    out.append(str(value))
            writer.writerow(out)
