"""Harness round-trips, counted training reports, sweeps, verifications."""

import json
import math

import numpy as np
import pytest

from sparsesvm import DatasetError, gen_subgaussian, make_subgaussian_spec
from sparsesvm.experiments import (
    SWEEP_COLUMNS,
    default_lam,
    generate_family,
    read_dataset_csv,
    read_sidecar_json,
    run_margin_verification,
    run_norm_verification,
    run_risk_verification,
    run_sweep,
    train_on_dataset,
    write_dataset_csv,
    write_rows_csv,
    write_sidecar_json,
)


class TestFileFormats:
    def test_dataset_round_trip_is_lossless(self, tmp_path):
        spec = make_subgaussian_spec(5, 2, 2.0, 4.0)
        d = gen_subgaussian(spec, 9, 21)
        path = tmp_path / "d.csv"
        write_dataset_csv(path, d)
        back = read_dataset_csv(path)
        np.testing.assert_array_equal(back.labels, d.labels)
        np.testing.assert_array_equal(back.features, d.features)

    def test_dataset_header_shape(self, tmp_path):
        d, _ = generate_family("xor", seed=0)
        path = tmp_path / "xor.csv"
        write_dataset_csv(path, d)
        header = path.read_text().splitlines()[0]
        assert header == "y,x1,x2"

    def test_read_rejects_malformed_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("label,x1\n1,2\n")
        with pytest.raises(DatasetError):
            read_dataset_csv(path)

    def test_read_rejects_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(DatasetError):
            read_dataset_csv(path)

    def test_sidecar_round_trip(self, tmp_path):
        _, payload = generate_family(
            "subgaussian", seed=4, m=6, p=5, p_prime=2, c=2.0, delta_trunc=3.0
        )
        path = tmp_path / "d.spec.json"
        write_sidecar_json(path, payload)
        assert read_sidecar_json(path) == payload

    def test_sidecar_replays_identically(self):
        d1, payload = generate_family(
            "subgaussian", seed=4, m=6, p=5, p_prime=2, c=2.0, delta_trunc=3.0
        )
        d2, _ = generate_family(
            payload["family"],
            payload["seed"],
            m=payload["m"],
            p=payload["p"],
            p_prime=payload["p_prime"],
            c=payload["c"],
            delta_trunc=payload["delta_trunc"],
        )
        np.testing.assert_array_equal(d1.features, d2.features)

    def test_rows_csv_float_format(self, tmp_path):
        path = tmp_path / "rows.csv"
        write_rows_csv(path, [{"a": 0.1, "b": 3}], ("a", "b"))
        assert path.read_text().splitlines() == [
            "a,b",
            "0.10000000000000001,3",
        ]


class TestGenerateFamily:
    def test_margin_requires_all_parameters(self):
        with pytest.raises(ValueError):
            generate_family("margin", seed=0, m=10, p=4)

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            generate_family("moons", seed=0)

    def test_paired_payload_carries_base_point(self):
        d, payload = generate_family(
            "paired", seed=0, copies=2, x=np.array([1.0, -0.5])
        )
        assert d.m == 4
        assert payload["x"] == [1.0, -0.5]


class TestTrainReports:
    def test_exact_report_frozen_values(self):
        spec = make_subgaussian_spec(16, 3, 2.5, 2 * math.log(16))
        d = gen_subgaussian(spec, 30, 11)
        report = train_on_dataset(d, kind="soft", solver="exact")
        assert report["lambda"] == pytest.approx(default_lam(16))
        assert report["objective"] == pytest.approx(0.1872839172147166, abs=1e-10)
        assert report["R"] == pytest.approx(0.7077628481744032, abs=1e-10)
        assert report["r"] == pytest.approx(report["objective"], abs=1e-8)
        assert report["duality_gap"] == pytest.approx(0.0, abs=1e-8)
        assert report["support"] == [0, 1, 2]
        assert report["epsilon"] is None
        # The exact path reads the whole LP through the counted oracles.
        n = 30 + 2 * 16
        assert report["ledger"]["a_queries"] == 30 * n
        assert report["ledger"]["data_queries"] == 2 * 30 * 16

    def test_engines_agree(self):
        spec = make_subgaussian_spec(12, 2, 2.0, 4.0)
        d = gen_subgaussian(spec, 20, 3)
        tableau = train_on_dataset(d, solver="exact", engine="tableau")
        highs = train_on_dataset(d, solver="exact", engine="highs")
        assert tableau["objective"] == pytest.approx(
            highs["objective"], abs=1e-8
        )
        assert highs["iterations"] >= 1

    def test_mwu_report_matches_exact_within_epsilon(self):
        spec = make_subgaussian_spec(8, 2, 2.5, 4.0)
        d = gen_subgaussian(spec, 14, 6)
        exact = train_on_dataset(d, solver="exact")
        report = train_on_dataset(
            d,
            solver="mwu",
            epsilon=0.1,
            R_bound=max(1.0, exact["R"]),
            r_bound=max(1.0, exact["r"]),
        )
        assert abs(report["objective"] - exact["objective"]) <= 0.1
        assert report["iterations"] > 0
        assert report["ledger"]["a_queries"] >= report["iterations"]

    def test_mwu_requires_bounds(self):
        d, _ = generate_family("xor", seed=0)
        with pytest.raises(ValueError):
            train_on_dataset(d, solver="mwu", epsilon=0.1)

    def test_report_is_json_serializable(self):
        d, _ = generate_family("xor", seed=0)
        report = train_on_dataset(d, solver="exact", lam=0.25)
        encoded = json.dumps(report, sort_keys=True)
        assert json.loads(encoded)["objective"] == report["objective"]


class TestVerificationRunners:
    def test_margin_rows_pass_on_small_grid(self):
        rows, ok = run_margin_verification(
            [8], [1, 2], [0.5], trials=2, seed=0
        )
        assert ok
        assert len(rows) == 4
        assert all(row["pass"] == 1 for row in rows)
        assert all(row["measured"] <= row["bound"] + 1e-6 for row in rows)

    def test_risk_rows_record_bound(self):
        rows, ok = run_risk_verification(
            64, 5, 1.5, m=100, trials=20, seed=3
        )
        assert ok
        bounds = {row["bound"] for row in rows}
        assert len(bounds) == 1  # same closed-form ceiling every trial
        assert len(rows) == 20

    def test_norm_rows_come_in_pairs(self):
        rows, ok = run_norm_verification([32], trials_per_p=3, seed=5)
        assert ok
        assert len(rows) == 6
        assert {row["check"] for row in rows} == {"primal_norm", "dual_norm"}


class TestSweep:
    @staticmethod
    def _cells(solver="exact", epsilon=0.0):
        return [
            {
                "p": p,
                "m": p // 2,
                "c": 8.0,
                "p_prime": None,
                "lam": None,
                "solver": solver,
                "epsilon": epsilon,
                "engine": "auto",
                "seed": 100 + i,
                "timing": False,
            }
            for i, p in enumerate((8, 16))
        ]

    def test_exact_sweep_rows_and_determinism(self):
        rows_a = run_sweep(self._cells())
        rows_b = run_sweep(self._cells())
        assert rows_a == rows_b
        assert [row["p"] for row in rows_a] == [8, 16]
        for row in rows_a:
            assert set(row) == set(SWEEP_COLUMNS)
            assert row["wall_ms"] == ""
            assert row["iterations"] >= 0
            assert row["a_queries"] > 0

    def test_mwu_sweep_uses_epsilon(self):
        rows = run_sweep(self._cells(solver="mwu", epsilon=0.3))
        for row in rows:
            assert row["epsilon"] == 0.3
            assert row["iterations"] > 0

    def test_parallel_results_match_serial(self):
        serial = run_sweep(self._cells())
        parallel = run_sweep(self._cells(), jobs=2)
        assert serial == parallel
