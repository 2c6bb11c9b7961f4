"""Tests for channel models, regions, SNR bookkeeping and serialization."""

import json
import math

import numpy as np
import pytest

import ampcap as ac
from ampcap import bounds, channel, linalg


def make_model(radii, dims=None, shapes=None, sigma_z2=1.0, H=None, seed=0):
    dims = dims or [2] * len(radii)
    shapes = shapes or [ac.BALL] * len(radii)
    subs = tuple(
        channel.SubRegion(d, s, r) for d, s, r in zip(dims, shapes, radii)
    )
    region = channel.ConstraintRegion(subs)
    if H is None:
        rng = np.random.default_rng(seed)
        H = rng.standard_normal((region.dimension, region.dimension))
        H += 0.5 * np.eye(region.dimension)
    return channel.ChannelModel(H, sigma_z2, region)


class TestVolume:
    def test_two_ball_radius_one(self):
        r = channel.ConstraintRegion((channel.SubRegion(2, ac.BALL, 1.0),))
        assert math.isclose(channel.volume(r), math.pi, rel_tol=1e-14)

    def test_product_of_two_balls(self):
        R = 1.7
        r = channel.ConstraintRegion(
            (channel.SubRegion(2, ac.BALL, R), channel.SubRegion(2, ac.BALL, R))
        )
        assert math.isclose(channel.volume(r), (math.pi * R * R) ** 2, rel_tol=1e-14)

    def test_three_ball_radius_two(self):
        r = channel.ConstraintRegion((channel.SubRegion(3, ac.BALL, 2.0),))
        assert math.isclose(channel.volume(r), (4.0 / 3.0) * math.pi * 8.0, rel_tol=1e-14)

    def test_box_side_from_circumscribed_radius(self):
        # sup-norm radius R means side 2R/sqrt(n)
        sr = channel.SubRegion(4, ac.BOX, 3.0)
        assert math.isclose(sr.box_side, 2.0 * 3.0 / 2.0, rel_tol=1e-14)
        assert math.isclose(sr.volume(), sr.box_side ** 4, rel_tol=1e-14)

    def test_one_dimensional_ball_is_an_interval(self):
        sr = channel.SubRegion(1, ac.BALL, 2.5)
        assert math.isclose(sr.volume(), 5.0, rel_tol=1e-14)

    def test_log_volume_matches_volume(self):
        sr = channel.SubRegion(3, ac.BALL, 0.7)
        assert math.isclose(math.exp(sr.log_volume()), sr.volume(), rel_tol=1e-13)


class TestSnr:
    def test_sigma_for_snr_direct(self):
        region = channel.per_antenna_region(2, radius=1.0)  # N = 4
        assert math.isclose(channel.sigma_for_snr(region, 0.0), 0.25, rel_tol=1e-14)

    def test_sigma_for_snr_10db(self):
        region = channel.ConstraintRegion((channel.SubRegion(2, ac.BALL, 1.0),))
        assert math.isclose(channel.sigma_for_snr(region, 10.0), 0.05, rel_tol=1e-14)

    def test_round_trip(self):
        region = channel.per_antenna_region(3, radius=0.8)
        for snr_db in (-17.3, 0.0, 4.5, 33.0):
            sigma = channel.sigma_for_snr(region, snr_db)
            model = channel.ChannelModel(np.eye(region.dimension), sigma, region)
            assert math.isclose(channel.snr_db_of(model), snr_db, abs_tol=1e-12)

    def test_snr_point_linear_db_consistency(self):
        pt = channel.SnrPoint.from_db(13.0)
        assert math.isclose(pt.snr_linear, 10.0 ** 1.3, rel_tol=1e-14)
        back = channel.SnrPoint.from_linear(pt.snr_linear)
        assert math.isclose(back.snr_db, 13.0, abs_tol=1e-12)


class TestNormalizeRadii:
    def test_equal_radii_unchanged(self):
        m = make_model([1.5, 1.5])
        assert channel.normalize_radii(m) is m

    def test_forced_column_scaling(self):
        m = make_model([1.0, 2.0], H=np.eye(4))
        n = channel.normalize_radii(m)
        assert n.region.radii == (1.0, 1.0)
        np.testing.assert_array_equal(n.H[:, :2], np.eye(4)[:, :2])
        np.testing.assert_array_equal(n.H[:, 2:], 2.0 * np.eye(4)[:, 2:])

    def test_bounds_invariant_under_equivalent_models(self):
        # a model with unequal radii and its hand-scaled equivalent
        m = make_model([1.0, 2.0], seed=3)
        H_eq = np.array(m.H)
        H_eq[:, 2:] *= 2.0
        eq = channel.ChannelModel(H_eq, m.sigma_z2, channel.per_antenna_region(2, 1.0))
        for snr in (-10.0, 0.0, 20.0):
            a = bounds.bound_summary(channel.model_at_snr(m, snr))
            b = bounds.bound_summary(channel.model_at_snr(eq, snr))
            for key in ("epi_lb", "ub_t1", "ub_t2", "compound_ub"):
                assert math.isclose(a[key], b[key], abs_tol=1e-9)

    def test_per_antenna_region_sup_norm(self):
        # corner points with every antenna at full amplitude reach R * sqrt(K)
        K, R = 3, 1.3
        region = channel.per_antenna_region(K, R)
        rng = np.random.default_rng(5)
        best = 0.0
        for _ in range(200):
            angles = rng.uniform(0, 2 * np.pi, K)
            x = np.concatenate([[R * np.cos(a), R * np.sin(a)] for a in angles])
            assert region.contains(x)
            best = max(best, float(np.linalg.norm(x)))
        assert math.isclose(best, R * math.sqrt(K), rel_tol=1e-12)


class TestRandomChannel:
    def test_deterministic(self):
        a = channel.random_channel(3, seed=42)
        b = channel.random_channel(3, seed=42)
        np.testing.assert_array_equal(a, b)

    def test_seed_changes_draw(self):
        a = channel.random_channel(3, seed=1)
        b = channel.random_channel(3, seed=2)
        assert not np.allclose(a, b)

    def test_unit_second_moment(self):
        rng_draws = [channel.random_channel(2, seed=s) for s in range(2500)]
        sq = np.mean([np.mean(np.abs(h) ** 2) for h in rng_draws])
        assert abs(sq - 1.0) < 0.05

    def test_rejects_bad_size(self):
        with pytest.raises(ValueError):
            channel.random_channel(0, seed=0)


class TestWhitenerGainConstruction:
    def test_targets_hit(self):
        targets = [0.52, 0.37]
        Hc = channel.channel_with_whitener_gains(targets)
        model = channel.per_antenna_model(Hc, radius=1.0, sigma_z2=0.3)
        gains = bounds.noise_covariance(model).whitener_gains()
        np.testing.assert_allclose(gains, targets, atol=1e-9)

    def test_gains_are_noise_independent(self):
        Hc = channel.channel_with_whitener_gains([1.1, 0.6, 0.25])
        g1 = bounds.noise_covariance(channel.per_antenna_model(Hc, sigma_z2=0.01)).whitener_gains()
        g2 = bounds.noise_covariance(channel.per_antenna_model(Hc, sigma_z2=9.0)).whitener_gains()
        np.testing.assert_allclose(g1, g2, rtol=1e-10)


class TestSerialization:
    def test_round_trip_bit_exact(self, tmp_path):
        m = make_model([0.9, 1.7], seed=21, sigma_z2=0.123456789123456789)
        path = tmp_path / "model.json"
        channel.save_model(m, path)
        loaded = channel.load_model(path)
        np.testing.assert_array_equal(loaded.H, m.H)
        assert loaded.sigma_z2 == m.sigma_z2
        assert loaded.region == m.region

    def test_complex_round_trip_realifies(self, tmp_path):
        Hc = channel.random_channel(2, seed=9)
        region = channel.per_antenna_region(2)
        path = tmp_path / "complex.json"
        channel.save_complex_channel(path, Hc, region, sigma_z2=1.0)
        loaded = channel.load_model(path)
        np.testing.assert_array_equal(loaded.H, linalg.realify(Hc))

    def test_dimension_mismatch_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        doc = {
            "H_real": np.eye(4).tolist(),
            "sigma_z2": 1.0,
            "partition": [{"dim": 2, "shape": "ball", "radius": 1.0}],
        }
        path.write_text(json.dumps(doc))
        with pytest.raises(channel.ModelFormatError):
            channel.load_model(path)

    def test_singular_matrix_rejected(self, tmp_path):
        path = tmp_path / "singular.json"
        doc = {
            "H_real": [[1.0, 1.0], [1.0, 1.0]],
            "sigma_z2": 1.0,
            "partition": [{"dim": 2, "shape": "ball", "radius": 1.0}],
        }
        path.write_text(json.dumps(doc))
        with pytest.raises(linalg.RankDeficientError):
            channel.load_model(path)

    def test_both_matrix_forms_rejected(self, tmp_path):
        path = tmp_path / "both.json"
        doc = {
            "H_real": [[1.0, 0.0], [0.0, 1.0]],
            "H_complex": [[[1.0, 0.0]]],
            "sigma_z2": 1.0,
            "partition": [{"dim": 2, "shape": "ball", "radius": 1.0}],
        }
        path.write_text(json.dumps(doc))
        with pytest.raises(channel.ModelFormatError):
            channel.load_model(path)

    def test_garbage_rejected(self, tmp_path):
        path = tmp_path / "garbage.json"
        path.write_text("{not json")
        with pytest.raises(channel.ModelFormatError):
            channel.load_model(path)

    def test_numbers_have_full_precision(self, tmp_path):
        m = make_model([1.0], dims=[1], H=np.array([[1.0 / 3.0]]), sigma_z2=math.pi)
        path = tmp_path / "precision.json"
        channel.save_model(m, path)
        doc = json.loads(path.read_text())
        assert doc["H_real"][0][0] == 1.0 / 3.0
        assert doc["sigma_z2"] == math.pi


class TestModelValidation:
    def test_rejects_rank_deficient(self):
        region = channel.per_antenna_region(1)
        with pytest.raises(linalg.RankDeficientError):
            channel.ChannelModel(np.ones((2, 2)), 1.0, region)

    def test_rejects_dimension_mismatch(self):
        region = channel.per_antenna_region(2)
        with pytest.raises(ValueError):
            channel.ChannelModel(np.eye(2), 1.0, region)

    def test_rejects_bad_noise(self):
        region = channel.per_antenna_region(1)
        with pytest.raises(ValueError):
            channel.ChannelModel(np.eye(2), 0.0, region)

    def test_model_matrix_read_only(self):
        m = make_model([1.0])
        with pytest.raises(ValueError):
            m.H[0, 0] = 5.0
