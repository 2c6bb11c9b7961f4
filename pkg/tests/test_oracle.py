"""Tests for the Monte Carlo mutual information estimator and the bisection water-filler."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

import ampcap as ac
from ampcap import bounds, channel, oracle


def one_dim_model(snr_db, radius=1.0):
    region = channel.ConstraintRegion((channel.SubRegion(1, ac.BALL, radius),))
    sigma2 = channel.sigma_for_snr(region, snr_db)
    return channel.ChannelModel([[1.0]], sigma2, region)


def two_point_constellation(radius):
    points = np.array([[-radius], [radius]])
    return oracle.Constellation(points, np.array([0.5, 0.5]))


def binary_mi_by_quadrature(radius, sigma2):
    """Mutual information of an equiprobable two-point input over AWGN, in bits.

    Output entropy by numerical integration of the two-component mixture.
    """
    sigma = math.sqrt(sigma2)

    def density(y):
        z = (
            math.exp(-((y - radius) ** 2) / (2.0 * sigma2))
            + math.exp(-((y + radius) ** 2) / (2.0 * sigma2))
        )
        return 0.5 * z / math.sqrt(2.0 * math.pi * sigma2)

    span = radius + 12.0 * sigma
    h_out, _ = quad(
        lambda y: -density(y) * math.log(max(density(y), 1e-300)),
        -span,
        span,
        limit=400,
        points=[-radius, 0.0, radius],
    )
    h_noise = 0.5 * math.log(2.0 * math.pi * math.e * sigma2)
    return (h_out - h_noise) / math.log(2.0)


class TestConstellation:
    def test_single_antenna_ring(self):
        m = channel.per_antenna_model(np.eye(1, dtype=complex), radius=2.0)
        c = oracle.per_antenna_constellation(m, rings=1, phases=4)
        assert len(c) == 4
        np.testing.assert_allclose(np.linalg.norm(c.points, axis=1), 2.0)
        np.testing.assert_allclose(c.probabilities, 0.25)

    def test_points_respect_the_region(self):
        m = channel.per_antenna_model(channel.random_channel(2, 3), radius=0.7)
        c = oracle.per_antenna_constellation(m, rings=3, phases=5)
        part = m.region.partition()
        for i in range(len(m.region.subregions)):
            block = c.points[:, part.block_slice(i)]
            assert np.max(np.linalg.norm(block, axis=1)) <= 0.7 * (1 + 1e-12)

    def test_phase_precondition(self):
        m = channel.per_antenna_model(np.eye(1, dtype=complex))
        with pytest.raises(ValueError):
            oracle.per_antenna_constellation(m, rings=1, phases=1)
        with pytest.raises(ValueError):
            oracle.per_antenna_constellation(m, rings=0, phases=4)

    def test_size_guard(self):
        m = channel.per_antenna_model(channel.random_channel(4, 0))
        with pytest.raises(ValueError):
            oracle.per_antenna_constellation(m, rings=4, phases=8)  # 32**4 > 1e6

    def test_simplex_validation(self):
        with pytest.raises(ValueError):
            oracle.Constellation(np.zeros((2, 1)), np.array([0.6, 0.6]))

    def test_default_constellation_scales_with_snr(self):
        base = channel.per_antenna_model(channel.random_channel(2, 1))
        low = oracle.default_constellation(channel.model_at_snr(base, -5.0))
        high = oracle.default_constellation(channel.model_at_snr(base, 25.0))
        assert len(high) > len(low)


class TestMcMutualInformation:
    def test_single_point_is_exactly_zero(self):
        m = one_dim_model(0.0)
        c = oracle.Constellation(np.array([[0.5]]), np.array([1.0]))
        est = oracle.mc_mutual_information(m, c, 2000, seed=0)
        assert est.value_bits == 0.0
        assert est.std_error_bits == 0.0

    def test_two_point_high_snr_approaches_one_bit(self):
        m = one_dim_model(28.0)  # sigma ~ R/25
        est = oracle.mc_mutual_information(m, two_point_constellation(1.0), 20000, seed=1)
        assert abs(est.value_bits - 1.0) < 1e-3

    def test_matches_quadrature_within_three_sigma(self):
        for snr_db in (-5.0, 0.0, 5.0):
            m = one_dim_model(snr_db)
            est = oracle.mc_mutual_information(m, two_point_constellation(1.0), 100000, seed=2)
            exact = binary_mi_by_quadrature(1.0, m.sigma_z2)
            assert abs(est.value_bits - exact) <= 3.0 * est.std_error_bits

    def test_deterministic_given_seed(self):
        m = one_dim_model(3.0)
        c = two_point_constellation(1.0)
        a = oracle.mc_mutual_information(m, c, 5000, seed=7)
        b = oracle.mc_mutual_information(m, c, 5000, seed=7)
        assert a == b
        c2 = oracle.mc_mutual_information(m, c, 5000, seed=8)
        assert a.value_bits != c2.value_bits

    def test_batch_size_does_not_change_result(self):
        m = one_dim_model(3.0)
        c = two_point_constellation(1.0)
        a = oracle.mc_mutual_information(m, c, 5000, seed=7, batch_size=512)
        b = oracle.mc_mutual_information(m, c, 5000, seed=7, batch_size=4096)
        assert a.value_bits == b.value_bits

    def test_stderr_scales_with_samples(self):
        m = one_dim_model(0.0)
        c = two_point_constellation(1.0)
        ratios = []
        for seed in range(8):
            small = oracle.mc_mutual_information(m, c, 4000, seed=seed)
            large = oracle.mc_mutual_information(m, c, 8000, seed=100 + seed)
            ratios.append(large.std_error_bits / small.std_error_bits)
        mean_ratio = float(np.mean(ratios))
        assert 0.8 / math.sqrt(2.0) < mean_ratio < 1.2 / math.sqrt(2.0)

    def test_sits_below_compound_upper_bound(self):
        base = channel.per_antenna_model(channel.random_channel(2, 5))
        for snr in (-5.0, 10.0):
            m = channel.model_at_snr(base, snr)
            c = oracle.per_antenna_constellation(m, rings=2, phases=6)
            est = oracle.mc_mutual_information(m, c, 20000, seed=9)
            ub = bounds.compound_upper_bound(m)
            assert est.value_bits - 3.0 * est.std_error_bits <= ub.value_bits

    def test_sample_precondition(self):
        m = one_dim_model(0.0)
        with pytest.raises(ValueError):
            oracle.mc_mutual_information(m, two_point_constellation(1.0), 999, seed=0)

    def test_rejects_points_outside_region(self):
        m = one_dim_model(0.0)
        c = oracle.Constellation(np.array([[-2.0], [2.0]]), np.array([0.5, 0.5]))
        with pytest.raises(ValueError):
            oracle.mc_mutual_information(m, c, 2000, seed=0)

    def test_estimate_wraps_into_bound_result(self):
        m = one_dim_model(0.0)
        est = oracle.mc_mutual_information(m, two_point_constellation(1.0), 2000, seed=0)
        r = est.to_bound_result(0.0)
        assert r.kind == bounds.KIND_ORACLE
        assert r.value_bits >= 0.0


class TestWaterfillBisection:
    def test_symmetric_case(self):
        alloc = oracle.waterfill_bisection([1.0, 1.0], 2.0)
        np.testing.assert_allclose(alloc.powers, [1.0, 1.0], atol=1e-10)

    def test_budget_to_zero(self):
        alloc = oracle.waterfill_bisection([1.0, 2.0, 3.0], 1e-9)
        assert np.all(alloc.powers <= 2e-9)
        assert math.isclose(alloc.powers.sum(), 1e-9, rel_tol=1e-10)

    def test_agrees_with_closed_form(self):
        rng = np.random.default_rng(10)
        for _ in range(300):
            n = int(rng.integers(1, 9))
            v = rng.uniform(0.05, 8.0, n)
            budget = float(rng.uniform(0.01, 12.0))
            fast = bounds.waterfill(v, budget)
            slow = oracle.waterfill_bisection(v, budget)
            np.testing.assert_allclose(fast.powers, slow.powers, atol=1e-8)
