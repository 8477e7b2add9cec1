"""Width-aware multiplicative-weights solver: guarantees and accounting."""

import numpy as np
import pytest

from sparsesvm import (
    LpStructureError,
    MwuConfig,
    NoSolutionWithinBounds,
    SparseSvmConfig,
    build_hard_lp,
    build_oracles,
    build_soft_lp,
    dataset_from_arrays,
    gen_paired,
    gen_subgaussian,
    gen_xor,
    make_subgaussian_spec,
    solve_exact,
    solve_mwu,
    sample_dual,
    sample_primal_support,
)


def _problem(seed=0, m=12, p=6, c=2.5):
    spec = make_subgaussian_spec(p, 2, c, 4.0)
    d = gen_subgaussian(spec, m, seed)
    cfg = SparseSvmConfig(lam=0.4)
    lp = build_soft_lp(d, cfg)
    oracle = build_oracles(d, cfg, kind="soft")
    return lp, oracle


def _mwu_config(lp, epsilon, seed=0):
    exact_primal, exact_dual = solve_exact(lp)
    return (
        MwuConfig(
            epsilon=epsilon,
            R_bound=max(1.0, exact_primal.norm_R),
            r_bound=max(1.0, exact_dual.norm_r),
            seed=seed,
        ),
        exact_primal.objective,
    )


class TestApproximationGuarantee:
    @pytest.mark.parametrize("seed", range(6))
    def test_objective_within_epsilon_both_sides(self, seed):
        lp, oracle = _problem(seed)
        cfg, opt = _mwu_config(lp, epsilon=0.1)
        primal, dual, report = solve_mwu(lp, cfg, oracle)
        assert abs(primal.objective - opt) <= 0.1
        # Feasibility also holds to within the same budget.
        residual = float(np.max(lp.a_diags @ primal.stacked() - lp.b))
        assert residual <= 0.1
        # The dual mass brackets the optimum from below within epsilon.
        assert opt - 0.1 <= dual.objective <= opt + 1e-9

    def test_duplicated_conflicting_point_lands_near_one(self):
        d = gen_paired(np.array([1.0, 0.5]), copies=1)
        cfg_model = SparseSvmConfig(lam=0.25)
        lp = build_soft_lp(d, cfg_model)
        oracle = build_oracles(d, cfg_model, kind="soft")
        cfg = MwuConfig(epsilon=0.05, R_bound=2.0, r_bound=1.0)
        primal, dual, _ = solve_mwu(lp, cfg, oracle)
        assert 0.95 <= primal.objective <= 1.05
        assert 0.95 <= dual.objective <= 1.0 + 1e-9

    def test_gap_estimate_is_primal_minus_dual(self):
        lp, oracle = _problem(3)
        cfg, _ = _mwu_config(lp, epsilon=0.2)
        primal, dual, report = solve_mwu(lp, cfg, oracle)
        assert report.gap_estimate == pytest.approx(
            primal.objective - dual.objective
        )
        assert report.gap_estimate <= 0.2 + 1e-9


class TestCertificates:
    def test_unachievable_norm_ball_is_reported(self):
        d = gen_xor()
        lp = build_hard_lp(d)
        oracle = build_oracles(d, SparseSvmConfig(lam=1.0), kind="hard")
        cfg = MwuConfig(epsilon=0.1, R_bound=50.0, r_bound=10.0)
        with pytest.raises(NoSolutionWithinBounds):
            solve_mwu(lp, cfg, oracle)

    def test_oracle_lp_shape_mismatch_rejected(self):
        lp, _ = _problem(0, m=12, p=6)
        _, other = _problem(0, m=10, p=6)
        cfg = MwuConfig(epsilon=0.2, R_bound=5.0, r_bound=2.0)
        with pytest.raises(LpStructureError):
            solve_mwu(lp, cfg, other)


class TestDeterminismAndAccounting:
    def test_repeat_runs_identical(self):
        lp, oracle_a = _problem(5)
        _, oracle_b = _problem(5)
        cfg, _ = _mwu_config(lp, epsilon=0.15)
        pa, da, ra = solve_mwu(lp, cfg, oracle_a)
        pb, db, rb = solve_mwu(lp, cfg, oracle_b)
        np.testing.assert_array_equal(pa.stacked(), pb.stacked())
        np.testing.assert_array_equal(da.alpha, db.alpha)
        assert ra.iterations == rb.iterations
        assert ra.t_steps == rb.t_steps
        assert ra.ledger.as_dict() == rb.ledger.as_dict()

    def test_query_counts_dominate_iterations(self):
        lp, oracle = _problem(7)
        cfg, _ = _mwu_config(lp, epsilon=0.2)
        _, _, report = solve_mwu(lp, cfg, oracle)
        counts = report.ledger.as_dict()
        assert counts["a_queries"] >= report.iterations
        assert counts["data_queries"] >= 1
        assert report.iterations >= 1

    def test_report_bracket_and_width(self):
        lp, oracle = _problem(2)
        cfg, opt = _mwu_config(lp, epsilon=0.1)
        _, _, report = solve_mwu(lp, cfg, oracle)
        assert report.width > 0.0
        assert report.bracket_lo <= report.bracket_hi
        assert report.bracket_hi - report.bracket_lo <= 0.1
        assert report.bracket_lo <= opt + 1e-9
        assert report.wall_time_s >= 0.0
        assert report.max_abs_payoff <= report.width + 1e-9

    def test_budget_exhaustion_raises(self):
        from sparsesvm import IterationLimitExceeded

        lp, oracle = _problem(1)
        cfg = MwuConfig(epsilon=0.05, R_bound=4.0, r_bound=2.0, max_iters=50)
        with pytest.raises(IterationLimitExceeded):
            solve_mwu(lp, cfg, oracle)


class TestConfigValidation:
    def test_rejects_bad_epsilon(self):
        with pytest.raises(ValueError):
            MwuConfig(epsilon=0.0, R_bound=2.0, r_bound=1.0)
        with pytest.raises(ValueError):
            MwuConfig(epsilon=float("inf"), R_bound=2.0, r_bound=1.0)

    def test_rejects_norm_bounds_below_one(self):
        with pytest.raises(ValueError):
            MwuConfig(epsilon=0.1, R_bound=0.5, r_bound=1.0)
        with pytest.raises(ValueError):
            MwuConfig(epsilon=0.1, R_bound=2.0, r_bound=0.99)


class TestSampling:
    def test_dual_sampling_tracks_masses(self):
        lp, oracle = _problem(4)
        cfg, _ = _mwu_config(lp, epsilon=0.15)
        _, dual, _ = solve_mwu(lp, cfg, oracle)
        draws = sample_dual(dual, 4000, seed=11)
        assert draws.min() >= 0 and draws.max() < dual.alpha.size
        freq = np.bincount(draws, minlength=dual.alpha.size) / 4000
        weights = dual.alpha / np.sum(dual.alpha)
        np.testing.assert_allclose(freq, weights, atol=0.05)

    def test_primal_sampling_labels_blocks(self):
        lp, oracle = _problem(4, m=8, p=4)
        cfg, _ = _mwu_config(lp, epsilon=0.15)
        primal, _, _ = solve_mwu(lp, cfg, oracle)
        draws = sample_primal_support(primal, 200, seed=3)
        assert len(draws) == 200
        for label, idx in draws:
            if label == "slack":
                assert 0 <= idx < 8
            else:
                assert label == "feature"
                assert 0 <= idx < 4
        assert sample_primal_support(primal, 50, seed=9) == sample_primal_support(
            primal, 50, seed=9
        )

    def test_sampling_rejects_empty_mass(self):
        from sparsesvm import DualSolution

        with pytest.raises(ValueError):
            sample_dual(DualSolution.build(np.zeros(3)), 5, seed=0)
