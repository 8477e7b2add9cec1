"""Command-line front end.

Four subcommands cover the experiment surface: ``gen`` writes seeded
datasets with replayable sidecar JSON, ``train`` fits one model with
either solver and writes a JSON report, ``verify-bounds`` sweeps the
closed-form guarantees against measured quantities, and ``sweep`` runs
the scaling grid. Exit status: 0 on success, 1 when a mandatory bound
fails or a solve fails, 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .core import (
    DatasetError,
    InfeasibleProblem,
    IterationLimitExceeded,
    LpStructureError,
    NoSolutionWithinBounds,
    UnboundedProblem,
)
from .experiments import (
    SWEEP_COLUMNS,
    default_jobs,
    default_lam,
    generate_family,
    read_dataset_csv,
    run_margin_verification,
    run_norm_verification,
    run_risk_verification,
    run_sweep,
    train_on_dataset,
    write_dataset_csv,
    write_rows_csv,
    write_sidecar_json,
)

VERIFY_COLUMNS = (
    "family",
    "check",
    "p",
    "p_prime",
    "nu",
    "c",
    "m",
    "trial",
    "measured",
    "bound",
    "pass",
)


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v]


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparsesvm",
        description="Sparse hinge-loss training with exact and "
        "multiplicative-weights LP solvers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a seeded dataset")
    gen.add_argument("--family", required=True,
                     choices=["margin", "subgaussian", "xor", "paired"])
    gen.add_argument("--m", type=int)
    gen.add_argument("--p", type=int)
    gen.add_argument("--p-prime", type=int)
    gen.add_argument("--nu", type=float)
    gen.add_argument("--c", type=float)
    gen.add_argument("--delta-trunc", type=float,
                     help="truncation width (default 2 ln p)")
    gen.add_argument("--mu", type=float)
    gen.add_argument("--box", type=float)
    gen.add_argument("--copies", type=int, default=1)
    gen.add_argument("--x", type=_float_list,
                     help="comma-separated base point for the paired family")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--no-stratify", action="store_true")
    gen.add_argument("--random-support", action="store_true")
    gen.add_argument("--mixed-signs", action="store_true")
    gen.add_argument("-o", "--output", required=True)

    train = sub.add_parser("train", help="fit one model, write JSON report")
    train.add_argument("-i", "--input", required=True)
    train.add_argument("--kind", choices=["soft", "hard"], default="soft")
    train.add_argument("--solver", choices=["exact", "mwu"], default="exact")
    train.add_argument("--lam", type=float,
                       help="default 1/sqrt(1 + 2 ln p)")
    train.add_argument("--epsilon", type=float, default=0.05)
    train.add_argument("--R-bound", type=float, dest="R_bound")
    train.add_argument("--r-bound", type=float, dest="r_bound")
    train.add_argument("--rule", choices=["bland", "dantzig", "devex"],
                       default="bland")
    train.add_argument("--strategy", choices=["auto", "primal", "dual"],
                       default="auto")
    train.add_argument("--engine", choices=["tableau", "highs", "auto"],
                       default="tableau")
    train.add_argument("--max-iters", type=int)
    train.add_argument("-o", "--output", required=True)

    verify = sub.add_parser(
        "verify-bounds", help="check closed-form guarantees empirically"
    )
    verify.add_argument("--check", required=True,
                        choices=["margin", "risk", "norms"])
    verify.add_argument("--p", type=int, default=256)
    verify.add_argument("--p-list", type=_int_list)
    verify.add_argument("--p-prime", type=int, default=5)
    verify.add_argument("--p-prime-list", type=_int_list)
    verify.add_argument("--nu-list", type=_float_list)
    verify.add_argument("--c", type=float, default=1.5)
    verify.add_argument("--m", type=int, default=200)
    verify.add_argument("--trials", type=int, required=True)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--delta", type=float, default=0.1,
                        help="confidence parameter for the bounds")
    verify.add_argument("-o", "--output", required=True)

    sweep = sub.add_parser("sweep", help="run the scaling grid")
    sweep.add_argument("--p-list", type=_int_list, required=True)
    sweep.add_argument("--m-ratio", type=float, default=0.5)
    sweep.add_argument("--m", type=int, help="fixed m overriding --m-ratio")
    sweep.add_argument("--c", type=float, default=32.0,
                       help="separation strength of the sweep family")
    sweep.add_argument("--p-prime", type=int)
    sweep.add_argument("--lam", type=float)
    sweep.add_argument("--solver", choices=["exact", "mwu"], default="exact")
    sweep.add_argument("--epsilon-list", type=_float_list, default=[0.05])
    sweep.add_argument("--engine", choices=["tableau", "highs", "auto"],
                       default="auto")
    sweep.add_argument("--seed", type=int, default=7000)
    sweep.add_argument("--jobs", type=int, default=None)
    sweep.add_argument("--timing", action="store_true",
                       help="fill the wall_ms column (breaks byte-for-byte "
                       "reproducibility across machines)")
    sweep.add_argument("-o", "--output", required=True)
    return parser


def _cmd_gen(args: argparse.Namespace) -> int:
    dataset, payload = generate_family(
        args.family,
        args.seed,
        m=args.m,
        p=args.p,
        p_prime=args.p_prime,
        nu=args.nu,
        c=args.c,
        delta_trunc=args.delta_trunc
        if args.delta_trunc is not None
        else (2.0 * math.log(args.p) if (args.family == "subgaussian" and args.p) else None),
        mu=args.mu,
        box=args.box,
        copies=args.copies,
        x=np.asarray(args.x) if args.x is not None else None,
        stratified=not args.no_stratify,
        random_support=args.random_support,
        mixed_signs=args.mixed_signs,
    )
    out = Path(args.output)
    write_dataset_csv(out, dataset)
    write_sidecar_json(out.with_suffix(".spec.json"), payload)
    print(f"wrote {dataset.m} samples with p={dataset.p} to {out}")
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    dataset = read_dataset_csv(args.input)
    if args.solver == "mwu" and (args.R_bound is None or args.r_bound is None):
        print("train: --solver mwu requires --R-bound and --r-bound",
              file=sys.stderr)
        return 2
    report = train_on_dataset(
        dataset,
        kind=args.kind,
        solver=args.solver,
        lam=args.lam,
        epsilon=args.epsilon,
        R_bound=args.R_bound,
        r_bound=args.r_bound,
        rule=args.rule,
        strategy=args.strategy,
        engine=args.engine,
        max_iters=args.max_iters,
    )
    with open(args.output, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(
        "objective={objective:.6g} R={R:.6g} r={r:.6g} gap={duality_gap:.3g} "
        "iterations={iterations} support={n}".format(
            n=len(report["support"]), **report
        )
    )
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.check == "margin":
        rows, ok = run_margin_verification(
            args.p_list or [16, 64, 256],
            args.p_prime_list or [1, 2, 4],
            args.nu_list or [0.25, 0.5, 1.0],
            args.trials,
            args.seed,
        )
    elif args.check == "risk":
        rows, ok = run_risk_verification(
            args.p, args.p_prime, args.c, args.m, args.trials, args.seed,
            confidence_delta=args.delta,
        )
    else:
        rows, ok = run_norm_verification(
            args.p_list or [64, 256], args.trials, args.seed,
            c=args.c, confidence_delta=args.delta,
        )
    for row in rows:
        for col in VERIFY_COLUMNS:
            row.setdefault(col, "")
    write_rows_csv(args.output, rows, VERIFY_COLUMNS)
    passed = sum(row["pass"] == 1 for row in rows)
    print(f"{passed}/{len(rows)} checks passed -> {args.output}")
    if not ok:
        print("verify-bounds: mandatory condition failed", file=sys.stderr)
        return 1
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    cells = []
    index = 0
    for p in args.p_list:
        m = args.m if args.m is not None else max(2, int(p * args.m_ratio))
        epsilons = args.epsilon_list if args.solver == "mwu" else [0.0]
        for epsilon in epsilons:
            cells.append(
                {
                    "p": p,
                    "m": m,
                    "c": args.c,
                    "p_prime": args.p_prime,
                    "lam": args.lam,
                    "solver": args.solver,
                    "epsilon": epsilon,
                    "engine": args.engine,
                    "seed": args.seed + index,
                    "timing": args.timing,
                }
            )
            index += 1
    jobs = args.jobs if args.jobs is not None else default_jobs()
    rows = run_sweep(cells, jobs=jobs)
    write_rows_csv(args.output, rows, SWEEP_COLUMNS)
    print(f"swept {len(rows)} cells -> {args.output}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "gen": _cmd_gen,
        "train": _cmd_train,
        "verify-bounds": _cmd_verify,
        "sweep": _cmd_sweep,
    }
    try:
        return handlers[args.command](args)
    except (
        InfeasibleProblem,
        UnboundedProblem,
        NoSolutionWithinBounds,
        IterationLimitExceeded,
    ) as exc:
        print(f"solver: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, DatasetError, LpStructureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
