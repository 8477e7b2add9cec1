"""Entry oracles: values match the assembled LP, counts match the reads."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sparsesvm import (
    QueryLedger,
    SparseSvmConfig,
    build_hard_lp,
    build_oracles,
    build_soft_lp,
    dataset_from_arrays,
)


def _dataset(seed=0, m=4, p=3):
    rng = np.random.default_rng(seed)
    return dataset_from_arrays(
        rng.choice([-1.0, 1.0], size=m), rng.normal(size=(m, p))
    )


class TestEntryConsistency:
    @pytest.mark.parametrize("kind", ["soft", "hard"])
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_every_entry_matches_assembled_lp(self, kind, seed):
        d = _dataset(seed, m=5, p=4)
        cfg = SparseSvmConfig(lam=0.3)
        oracle = build_oracles(d, cfg, kind=kind)
        lp = build_soft_lp(d, cfg) if kind == "soft" else build_hard_lp(d)
        ledger = QueryLedger()
        assert (oracle.m, oracle.n) == (lp.num_constraints, lp.n)
        for i in range(1, oracle.m + 1):
            assert oracle.query_b(i, ledger) == lp.b[i - 1]
            for k in range(1, oracle.n + 1):
                assert oracle.query_a(i, k, ledger) == lp.a_diags[i - 1, k - 1]
        for k in range(1, oracle.n + 1):
            assert oracle.query_c(k, ledger) == lp.c_diag[k - 1]

    def test_fetch_matches_pointwise(self):
        d = _dataset(3)
        cfg = SparseSvmConfig(lam=0.7)
        oracle = build_oracles(d, cfg, kind="soft")
        lp = build_soft_lp(d, cfg)
        ledger = QueryLedger()
        np.testing.assert_array_equal(oracle.fetch_b(ledger), lp.b)
        np.testing.assert_array_equal(oracle.fetch_c(ledger), lp.c_diag)
        np.testing.assert_array_equal(oracle.fetch_a_full(ledger), lp.a_diags)
        for i in range(1, oracle.m + 1):
            np.testing.assert_array_equal(
                oracle.fetch_a_row(i, ledger), lp.a_diags[i - 1]
            )

    def test_raw_feature_read(self):
        d = _dataset(4)
        oracle = build_oracles(d, SparseSvmConfig(lam=1.0), kind="soft")
        ledger = QueryLedger()
        assert oracle.qram_read(2, 3, ledger) == d.features[1, 2]
        assert ledger.data_queries == 1


class TestIndexing:
    def test_one_based_bounds_enforced(self):
        oracle = build_oracles(_dataset(), SparseSvmConfig(lam=1.0), "soft")
        ledger = QueryLedger()
        for bad in (0, oracle.m + 1):
            with pytest.raises(IndexError):
                oracle.query_b(bad, ledger)
        for bad in (0, oracle.n + 1):
            with pytest.raises(IndexError):
                oracle.query_c(bad, ledger)
        with pytest.raises(IndexError):
            oracle.query_a(1, oracle.n + 1, ledger)
        with pytest.raises(IndexError):
            oracle.qram_read(oracle.m + 1, 1, ledger)


class TestCounting:
    def test_pointwise_counts(self):
        d = _dataset(m=4, p=3)
        oracle = build_oracles(d, SparseSvmConfig(lam=0.5), "soft")
        ledger = QueryLedger()
        oracle.query_b(1, ledger)
        oracle.query_c(2, ledger)
        oracle.query_a(1, 1, ledger)          # slack block: no data read
        oracle.query_a(2, oracle.m + 1, ledger)  # feature block: one read
        assert ledger.as_dict() == {
            "b_queries": 1, "c_queries": 1, "a_queries": 2, "data_queries": 1,
        }

    def test_bulk_counts_are_entrywise(self):
        d = _dataset(m=4, p=3)
        oracle = build_oracles(d, SparseSvmConfig(lam=0.5), "soft")
        ledger = QueryLedger()
        oracle.fetch_b(ledger)
        oracle.fetch_c(ledger)
        oracle.fetch_a_full(ledger)
        m, n, p = oracle.m, oracle.n, oracle.p
        assert ledger.b_queries == m
        assert ledger.c_queries == n
        assert ledger.a_queries == m * n
        assert ledger.data_queries == 2 * m * p

    @settings(max_examples=15, deadline=None)
    @given(st.integers(min_value=1, max_value=6),
           st.integers(min_value=1, max_value=6))
    def test_row_fetch_counts_scale_with_width(self, m, p):
        d = _dataset(9, m=m, p=p)
        oracle = build_oracles(d, SparseSvmConfig(lam=0.5), "soft")
        ledger = QueryLedger()
        oracle.fetch_a_row(1, ledger)
        assert ledger.a_queries == oracle.n
        assert ledger.data_queries == 2 * p


class TestKindsAndQuantization:
    def test_hard_kind_has_no_slack_columns(self):
        d = _dataset(m=3, p=2)
        oracle = build_oracles(d, SparseSvmConfig(lam=0.5), "hard")
        assert (oracle.num_slacks, oracle.n) == (0, 4)
        ledger = QueryLedger()
        # Separable-form costs are all 1 regardless of lam.
        assert oracle.query_c(1, ledger) == 1.0
        assert oracle.beta_weight == 1.0

    def test_quantization_rounds_reads(self):
        d = dataset_from_arrays([1.0], [[0.123456789]])
        exactly = build_oracles(d, SparseSvmConfig(lam=1.0), "soft")
        coarse = build_oracles(
            d, SparseSvmConfig(lam=1.0), "soft", quantize_bits=8
        )
        ledger = QueryLedger()
        full = exactly.query_a(1, 2, ledger)
        rounded = coarse.query_a(1, 2, ledger)
        assert rounded != full
        assert abs(rounded - full) <= 2.0 ** -8
        # Quantization is a read-side effect; stored data is untouched.
        assert d.features[0, 0] == 0.123456789
