"""Estimators: summaries, the four kappa routes, and the direction test."""

import math

import numpy as np
import pytest

from sphstats.distributions import VmfParams
from sphstats.errors import DegenerateDataError
from sphstats.estimation import (
    FitMethod,
    fit_axial_mle,
    fit_fisher_known_axis,
    fit_fisher_known_pole,
    fit_mle,
    fit_sme,
    summarize,
)
from sphstats.estimation import test_mean_direction as run_direction_test
from sphstats.geometry import angle_between, axis_representative, from_polar, unit_vector
from sphstats.sampling import SeededStream, sample_haar_so3, sample_vmf
from sphstats.special import inverse_mean_resultant, mean_resultant_fn

from oracles import bisect_root


def _cap_sample(colatitudes, phis=None):
    if phis is None:
        phis = np.zeros(len(colatitudes))
    return np.array([from_polar((t, p)) for t, p in zip(colatitudes, phis)])


class TestSummarize:
    def test_single_vector(self):
        v = unit_vector([0.6, 0.0, 0.8])
        s = summarize([v])
        assert s.n == 1
        assert np.allclose(s.mean_vector, v)
        assert s.mean_resultant_length == pytest.approx(1.0)
        assert np.allclose(s.mean_direction, v)

    def test_antipodal_pair_degenerate(self):
        v = unit_vector([0.3, -0.8, 0.52])
        s = summarize([v, -v])
        assert s.mean_resultant_length == 0.0
        assert s.mean_direction is None

    def test_circular_pair_mean_wraps_correctly(self):
        # mean of headings at 1 and 359 degrees is 0 degrees, not 180
        angles = np.radians([1.0, 359.0])
        sample = np.column_stack([np.cos(angles), np.sin(angles)])
        s = summarize(sample)
        heading = math.degrees(math.atan2(s.mean_direction[1], s.mean_direction[0]))
        assert heading == pytest.approx(0.0, abs=1e-12)

    def test_factorization_invariant(self):
        sample = sample_vmf(VmfParams(mu=[0.1, 0.3, 0.95], kappa=3.0), 200, SeededStream(seed=2))
        s = summarize(sample)
        assert np.allclose(s.mean_vector, s.mean_resultant_length * s.mean_direction)

    def test_suff_stat_only_with_reference(self):
        sample = _cap_sample([0.2, 0.4, 0.9])
        assert summarize(sample).suff_stat_x is None
        s = summarize(sample, reference=[0.0, 0.0, 1.0])
        assert s.suff_stat_x == pytest.approx(sum(math.cos(t) for t in (0.2, 0.4, 0.9)))

    def test_empty_sample(self):
        with pytest.raises(ValueError):
            summarize(np.empty((0, 3)))


class TestFitMle:
    def test_synthetic_recovery(self):
        truth = VmfParams(mu=[0.0, 0.6, 0.8], kappa=5.0)
        sample = sample_vmf(truth, 10**5, SeededStream(seed=101, stream_id=1))
        fit = fit_mle(sample)
        assert 4.9 <= fit.kappa_hat <= 5.1
        assert math.degrees(angle_between(fit.mu_hat, truth.mu)) < 1.0
        assert fit.method is FitMethod.MLE
        assert fit.residual <= 1e-10

    def test_degenerate_zero_resultant(self):
        v = unit_vector([1.0, 0.0, 0.0])
        with pytest.raises(DegenerateDataError):
            fit_mle([v, -v])

    def test_degenerate_repeated_vector(self):
        v = unit_vector([0.0, 1.0, 0.0])
        with pytest.raises(DegenerateDataError):
            fit_mle([v, v, v])


class TestFitSme:
    def test_equator_gives_zero(self):
        # exact equatorial vectors so the numerator is exactly zero
        sample = np.array([[1.0, 0, 0], [0, 1.0, 0], [-1.0, 0, 0], [0, -1.0, 0]])
        fit = fit_sme(sample, [0.0, 0.0, 1.0])
        assert fit.kappa_hat == 0.0

    def test_arithmetic_oracle(self):
        thetas = [0.1, 0.2, 0.3]
        sample = _cap_sample(thetas, phis=[0.4, 2.2, 5.0])
        expected = 2.0 * sum(math.cos(t) for t in thetas) / sum(math.sin(t) ** 2 for t in thetas)
        fit = fit_sme(sample, [0.0, 0.0, 1.0])
        assert fit.kappa_hat == pytest.approx(expected, rel=1e-12)

    def test_negative_numerator_clamped(self):
        sample = _cap_sample([math.pi - 0.2, math.pi - 0.3], phis=[0.0, 2.0])
        fit = fit_sme(sample, [0.0, 0.0, 1.0])
        assert fit.kappa_hat == 0.0

    def test_all_mass_at_pole_degenerate(self):
        sample = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 1.0]])
        with pytest.raises(DegenerateDataError):
            fit_sme(sample, [0.0, 0.0, 1.0])

    def test_monte_carlo_recovery(self):
        truth = VmfParams(mu=[0.0, 0.0, 1.0], kappa=5.0)
        sample = sample_vmf(truth, 10**5, SeededStream(seed=55, stream_id=3))
        fit = fit_sme(sample, truth.mu)
        assert abs(fit.kappa_hat - 5.0) / 5.0 < 0.05


class TestFisherKnownPole:
    def test_zero_statistic(self):
        assert fit_fisher_known_pole(0.0, 5) == 0.0
        assert fit_fisher_known_pole(-2.0, 5) == 0.0

    def test_hospers_roundtrip(self):
        x = 45.0 * mean_resultant_fn(2, 7.51)
        assert fit_fisher_known_pole(x, 45) == pytest.approx(7.51, abs=1e-6)

    def test_against_bisection_oracle(self):
        oracle = bisect_root(lambda k: (1.0 / math.tanh(k) - 1.0 / k) - 0.5, 1e-6, 100.0)
        assert fit_fisher_known_pole(5.0, 10) == pytest.approx(oracle, rel=1e-10)

    def test_shares_root_with_mle_inversion(self):
        # same code path, identical float result
        for x, n in ((3.0, 7), (8.3, 12), (0.4, 2)):
            assert fit_fisher_known_pole(x, n) == inverse_mean_resultant(2, x / n)

    def test_saturated_statistic(self):
        with pytest.raises(DegenerateDataError):
            fit_fisher_known_pole(9.0, 9)


class TestFisherKnownAxis:
    def test_zero_statistic(self):
        assert fit_fisher_known_axis(0.0, 5) == 0.0

    def test_root_collapse_threshold(self):
        # kappa-hat = 0 exactly when x^2 <= n/3
        n = 12
        assert fit_fisher_known_axis(math.sqrt(n / 3.0) - 1e-9, n) == 0.0
        assert fit_fisher_known_axis(math.sqrt(n / 3.0) + 1e-3, n) > 0.0

    @pytest.mark.parametrize("ratio", [0.3, 0.6, 0.9])
    def test_even_in_x(self, ratio):
        n = 20
        x = ratio * n
        assert fit_fisher_known_axis(x, n) == fit_fisher_known_axis(-x, n)

    def test_residual_contract(self):
        n, x = 11, 7.4
        kappa = fit_fisher_known_axis(x, n)
        residual = mean_resultant_fn(2, kappa) - (x / n) * math.tanh(kappa * x)
        assert abs(residual) <= 1e-10

    def test_never_exceeds_known_pole_root(self):
        for n in (5, 9, 40):
            x = 0.7 * n
            assert fit_fisher_known_axis(x, n) <= fit_fisher_known_pole(x, n) + 1e-12

    def test_large_n_merges_with_known_pole(self):
        # tanh(kappa x) saturates, so the two roots coincide to double
        # precision already at n = 5 for x/n = 0.8
        for n in (5, 10, 50, 500):
            x = 0.8 * n
            assert fit_fisher_known_axis(x, n) == pytest.approx(fit_fisher_known_pole(x, n), rel=1e-12)


class TestAxialMle:
    def test_cluster_at_negative_representative(self):
        nu = axis_representative(unit_vector([0.1, 0.2, 0.97]))
        sample = sample_vmf(VmfParams(mu=-nu, kappa=15.0), 300, SeededStream(seed=77))
        result = fit_axial_mle(sample, nu)
        assert result.lambda_hat == -1
        assert np.allclose(result.fit.mu_hat, -nu)

    def test_cluster_at_positive_representative(self):
        nu = axis_representative(unit_vector([0.1, 0.2, 0.97]))
        sample = sample_vmf(VmfParams(mu=nu, kappa=15.0), 300, SeededStream(seed=78))
        result = fit_axial_mle(sample, nu)
        assert result.lambda_hat == 1
        x = float((sample @ nu).sum())
        assert result.fit.kappa_hat == fit_fisher_known_pole(x, 300)

    def test_flip_negates_lambda_preserves_kappa(self):
        nu = axis_representative(unit_vector([0.5, -0.1, 0.86]))
        sample = sample_vmf(VmfParams(mu=nu, kappa=6.0), 200, SeededStream(seed=79))
        plus = fit_axial_mle(sample, nu)
        minus = fit_axial_mle(-sample, nu)
        assert minus.lambda_hat == -plus.lambda_hat
        assert minus.fit.kappa_hat == plus.fit.kappa_hat

    def test_tie_break_flag(self):
        v = unit_vector([1.0, 0.0, 0.0])
        result = fit_axial_mle(np.array([v, -v]), [0.0, 0.0, 1.0])
        assert result.lambda_hat == 1
        assert result.lambda_tie


class TestMeanDirectionTest:
    def test_exact_null_direction(self):
        sample = _cap_sample([0.4, 0.4], phis=[0.0, math.pi])  # mean along the pole
        report = run_direction_test(sample, [0.0, 0.0, 1.0])
        assert report.statistic == pytest.approx(0.0, abs=1e-10)
        assert report.p_value == pytest.approx(1.0, abs=1e-10)
        assert not report.reject

    def test_power_against_rotated_null(self):
        # true mean 30 degrees away from mu0, kappa = 20, n = 100
        mu0 = unit_vector([0.0, 0.0, 1.0])
        truth = unit_vector([math.sin(math.radians(30)), 0.0, math.cos(math.radians(30))])
        rejections = 0
        base = SeededStream(seed=300, stream_id=0)
        for i in range(100):
            sample = sample_vmf(VmfParams(mu=truth, kappa=20.0), 100, base.substream(i))
            if run_direction_test(sample, mu0).reject:
                rejections += 1
        assert rejections >= 99

    def test_bootstrap_agrees_under_null(self):
        mu0 = unit_vector([0.2, -0.4, 0.89])
        sample = sample_vmf(VmfParams(mu=mu0, kappa=8.0), 60, SeededStream(seed=91))
        report = run_direction_test(sample, mu0, n_bootstrap=199, stream=SeededStream(seed=92))
        assert report.bootstrap_p is not None
        assert (report.bootstrap_p < 0.05) == (report.p_value < 0.05)

    def test_degenerate_sample(self):
        with pytest.raises(DegenerateDataError):
            run_direction_test(np.array([[0.0, 0.0, 1.0]]), [0.0, 0.0, 1.0])


class TestEquivariance:
    def test_rotation_equivariance_all_methods(self):
        truth = VmfParams(mu=[0.3, -0.2, 0.93], kappa=4.0)
        sample = sample_vmf(truth, 150, SeededStream(seed=123))
        base_mle = fit_mle(sample)
        base_sme = fit_sme(sample, truth.mu)
        nu = axis_representative(truth.mu)
        base_axial = fit_axial_mle(sample, nu)
        for rot in sample_haar_so3(20, SeededStream(seed=124)):
            rotated = sample @ rot.matrix.T
            r_mle = fit_mle(rotated)
            assert r_mle.kappa_hat == pytest.approx(base_mle.kappa_hat, abs=1e-10)
            assert np.max(np.abs(r_mle.mu_hat - rot.matrix @ base_mle.mu_hat)) < 1e-10
            r_sme = fit_sme(rotated, rot.matrix @ truth.mu)
            assert r_sme.kappa_hat == pytest.approx(base_sme.kappa_hat, abs=1e-10)
            # axial route: rotate the axis along with the data
            r_axial = fit_axial_mle(rotated, rot.matrix @ nu)
            assert r_axial.fit.kappa_hat == pytest.approx(base_axial.fit.kappa_hat, abs=1e-10)

    def test_consistency_rate(self):
        # kappa error should shrink roughly like n^{-1/2}
        base = SeededStream(seed=500, stream_id=0)
        slopes = []
        for kappa in (1.0, 5.0, 20.0):
            truth = VmfParams(mu=[0.0, 0.0, 1.0], kappa=kappa)
            sizes = (100, 1000, 10000)
            rmse = []
            for j, n in enumerate(sizes):
                errors = []
                for rep in range(50):
                    sample = sample_vmf(truth, n, base.substream(1000 * j + rep))
                    errors.append(fit_mle(sample).kappa_hat - kappa)
                rmse.append(math.sqrt(float(np.mean(np.square(errors)))))
            slope = np.polyfit(np.log(sizes), np.log(rmse), 1)[0]
            slopes.append(slope)
            assert -0.65 <= slope <= -0.35, (kappa, slope)
        print(f"consistency log-log slopes: {[f'{s:.3f}' for s in slopes]}")
