"""Seeded problem families: determinism, geometry, stratification."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sparsesvm import (
    DatasetError,
    gen_margin,
    gen_paired,
    gen_subgaussian,
    gen_xor,
    make_beta_star,
    make_margin_spec,
    make_subgaussian_spec,
)


class TestBetaStar:
    def test_default_is_prefix_support_unit_norm(self):
        beta = make_beta_star(6, 4)
        np.testing.assert_allclose(beta[:4], 0.5)
        np.testing.assert_allclose(beta[4:], 0.0)
        assert np.linalg.norm(beta) == pytest.approx(1.0)

    def test_random_support_needs_seed(self):
        with pytest.raises(ValueError):
            make_beta_star(6, 2, random_support=True)

    def test_mixed_signs_keeps_magnitudes(self):
        beta = make_beta_star(8, 3, seed=5, mixed_signs=True)
        np.testing.assert_allclose(np.abs(beta[:3]), 1 / np.sqrt(3))
        assert np.linalg.norm(beta) == pytest.approx(1.0)

    def test_invalid_support_size(self):
        with pytest.raises(ValueError):
            make_beta_star(4, 5)


class TestSpecs:
    def test_margin_box_default(self):
        spec = make_margin_spec(8, 2, 0.25)
        assert spec.box == pytest.approx(40.0)

    def test_subgaussian_mu_default_and_floor(self):
        spec = make_subgaussian_spec(16, 4, 1.5, 3.0)
        assert spec.mu == pytest.approx(3.0)  # 1.5 * sqrt(4)
        with pytest.raises(ValueError):
            make_subgaussian_spec(16, 4, 1.5, 3.0, mu=1.2)  # below c*sqrt(p')
        with pytest.raises(ValueError):
            make_subgaussian_spec(16, 4, 0.9, 3.0)  # c must exceed 1

    def test_spec_rejects_wrong_support_count(self):
        beta = np.zeros(8)
        beta[0] = 1.0
        with pytest.raises(ValueError):
            make_margin_spec(8, 2, 0.5, beta_star=beta)


class TestMarginFamily:
    def test_deterministic_under_seed(self):
        spec = make_margin_spec(6, 2, 0.5)
        a = gen_margin(spec, 20, 123)
        b = gen_margin(spec, 20, 123)
        np.testing.assert_array_equal(a.features, b.features)
        np.testing.assert_array_equal(a.labels, b.labels)
        c = gen_margin(spec, 20, 124)
        assert not np.array_equal(a.features, c.features)

    def test_every_sample_clears_the_margin(self):
        spec = make_margin_spec(6, 2, 0.5)
        d = gen_margin(spec, 50, 7)
        projections = d.features @ spec.beta_star
        assert np.all(np.abs(projections) >= 0.5)
        np.testing.assert_array_equal(d.labels, np.sign(projections))

    def test_stratified_label_split(self):
        d = gen_margin(make_margin_spec(6, 2, 0.5), 31, 11)
        assert int(np.sum(d.labels == 1.0)) == 16  # ceil(31/2)

    def test_unstratified_keeps_natural_labels(self):
        d = gen_margin(make_margin_spec(6, 2, 0.5), 31, 11, stratified=False)
        assert set(np.unique(d.labels)) <= {-1.0, 1.0}

    def test_rejection_cap_reported(self):
        # A margin wider than the box is unsatisfiable: the draw budget
        # (1000 per requested sample) must trip, not spin forever.
        spec = make_margin_spec(4, 2, 2.0, box=0.5)
        with pytest.raises(DatasetError):
            gen_margin(spec, 5, 0)


class TestSubgaussianFamily:
    def test_deterministic_under_seed(self):
        spec = make_subgaussian_spec(8, 2, 2.0, 4.0)
        a = gen_subgaussian(spec, 25, 9)
        b = gen_subgaussian(spec, 25, 9)
        np.testing.assert_array_equal(a.features, b.features)

    def test_planted_margin_respects_truncation(self):
        spec = make_subgaussian_spec(8, 2, 2.0, 4.0)
        d = gen_subgaussian(spec, 200, 13)
        margins = d.labels * (d.features @ spec.beta_star)
        # Draws whose projection falls below -delta are redrawn.
        assert np.all(margins >= -spec.delta_trunc)
        assert np.mean(margins) == pytest.approx(spec.mu, abs=0.5)

    def test_off_support_is_standard_normal(self):
        spec = make_subgaussian_spec(40, 2, 2.0, 4.0)
        d = gen_subgaussian(spec, 400, 17)
        tail = d.features[:, 2:]
        assert abs(float(np.mean(tail))) < 0.05
        assert float(np.std(tail)) == pytest.approx(1.0, abs=0.05)

    @settings(max_examples=10, deadline=None)
    @given(st.integers(min_value=2, max_value=40),
           st.integers(min_value=0, max_value=1000))
    def test_stratification_quota_holds(self, m, seed):
        spec = make_subgaussian_spec(6, 2, 2.0, 4.0)
        d = gen_subgaussian(spec, m, seed)
        assert int(np.sum(d.labels == 1.0)) == (m + 1) // 2


class TestFixedFamilies:
    def test_xor_layout(self):
        d = gen_xor()
        np.testing.assert_array_equal(
            d.features, [[1, 1], [-1, -1], [1, -1], [-1, 1]]
        )
        np.testing.assert_array_equal(d.labels, [1, 1, -1, -1])

    def test_paired_tiles_conflicting_labels(self):
        d = gen_paired(np.array([2.0, -1.0]), copies=3)
        assert d.m == 6
        np.testing.assert_array_equal(d.labels, [1, -1, 1, -1, 1, -1])
        np.testing.assert_array_equal(d.features, np.tile([2.0, -1.0], (6, 1)))

    def test_paired_rejects_bad_copies(self):
        with pytest.raises(ValueError):
            gen_paired(np.array([1.0]), copies=0)
