import math

import numpy as np
from django.test import SimpleTestCase, tag

from apps.stats.constants import FitMethod, K_CAP_DB, K_FLOOR_DB
from apps.stats.entities import EnvelopeSamples
from apps.stats.exceptions import InsufficientDataError, StatsArgumentError
from apps.stats.services.rician_service import (
    fit_envelope,
    fit_rician_ml,
    kfactor_moment,
    log_likelihood,
    log_likelihood_gradient,
    log_likelihood_hessian,
)


def rician_draw(rng, k_db, n=225):
    k = 10.0 ** (k_db / 10.0)
    sigma = math.sqrt(1.0 / (2.0 * k))
    return np.abs(1.0 + sigma * (rng.standard_normal(n) + 1j * rng.standard_normal(n)))


def rayleigh_draw(rng, n=225):
    return np.abs(rng.standard_normal(n) + 1j * rng.standard_normal(n))


class EnvelopeSamplesTests(SimpleTestCase):

    def test_normalized_to_unit_mean(self):
        samples = EnvelopeSamples.from_amplitudes(rician_draw(np.random.default_rng(1), 10.0) * 3e-6)
        self.assertAlmostEqual(float(samples.values.mean()), 1.0, delta=1e-12)
        self.assertEqual(samples.size, 225)

    def test_complex_amplitudes_use_magnitude(self):
        rng = np.random.default_rng(2)
        amplitudes = rng.standard_normal(20) + 1j * rng.standard_normal(20)
        samples = EnvelopeSamples.from_amplitudes(amplitudes)
        np.testing.assert_allclose(samples.values * samples.normalization, np.abs(amplitudes))

    def test_too_few_samples(self):
        with self.assertRaises(InsufficientDataError):
            EnvelopeSamples.from_amplitudes(np.ones(9))

    def test_invalid_samples(self):
        with self.assertRaises(StatsArgumentError):
            EnvelopeSamples.from_amplitudes([1.0] * 12 + [-0.1])
        with self.assertRaises(StatsArgumentError):
            EnvelopeSamples.from_amplitudes(np.zeros(20))


class MomentMethodTests(SimpleTestCase):

    def test_constant_samples_hit_the_cap(self):
        fit = kfactor_moment(EnvelopeSamples.from_amplitudes(np.full(30, 0.7)))
        self.assertEqual(fit.k_hat_db, K_CAP_DB)
        self.assertEqual(fit.method, FitMethod.MOMENT)

    def test_rayleigh_moments_give_the_floor(self):
        # power variance equals the squared mean power
        high = 3.0 + math.sqrt(12.0)
        powers = np.array([high] * 5 + [1.0] * 15)
        fit = kfactor_moment(EnvelopeSamples.from_amplitudes(np.sqrt(powers)))
        self.assertEqual(fit.k_hat_db, K_FLOOR_DB)

    def test_parameters_reproduce_k(self):
        fit = kfactor_moment(EnvelopeSamples.from_amplitudes(rician_draw(np.random.default_rng(3), 8.0)))
        k = fit.nu_hat ** 2 / (2.0 * fit.sigma_hat ** 2)
        self.assertAlmostEqual(10.0 * math.log10(k), fit.k_hat_db, places=9)


class MaximumLikelihoodTests(SimpleTestCase):

    def test_constant_samples_hit_the_cap(self):
        fit = fit_rician_ml(EnvelopeSamples.from_amplitudes(np.full(225, 2.5)))
        self.assertEqual(fit.k_hat_db, K_CAP_DB)
        self.assertTrue(fit.converged)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(11)
        h = 1e-6
        for _ in range(100):
            nu = rng.uniform(0.1, 2.0)
            log_sigma = rng.uniform(-2.0, 0.5)
            x = rician_draw(rng, rng.uniform(-5.0, 25.0), n=50)
            analytic = log_likelihood_gradient(nu, log_sigma, x)
            numeric = np.array([
                (log_likelihood(nu + h, math.exp(log_sigma), x) - log_likelihood(nu - h, math.exp(log_sigma), x)) / (2 * h),
                (log_likelihood(nu, math.exp(log_sigma + h), x) - log_likelihood(nu, math.exp(log_sigma - h), x)) / (2 * h),
            ])
            self.assertLess(np.linalg.norm(analytic - numeric), 1e-4 * max(np.linalg.norm(analytic), 1.0))

    def test_hessian_matches_finite_differences(self):
        rng = np.random.default_rng(12)
        h = 1e-6
        for _ in range(20):
            nu = rng.uniform(0.2, 1.5)
            log_sigma = rng.uniform(-1.5, 0.0)
            x = rician_draw(rng, 5.0, n=40)
            hessian = log_likelihood_hessian(nu, log_sigma, x)
            numeric = np.column_stack([
                (log_likelihood_gradient(nu + h, log_sigma, x) - log_likelihood_gradient(nu - h, log_sigma, x)) / (2 * h),
                (log_likelihood_gradient(nu, log_sigma + h, x) - log_likelihood_gradient(nu, log_sigma - h, x)) / (2 * h),
            ])
            self.assertLess(np.linalg.norm(hessian - numeric), 1e-4 * max(np.linalg.norm(hessian), 1.0))

    def test_converged_fit_is_stationary(self):
        rng = np.random.default_rng(5)
        for k_db in (0.0, 5.0, 10.0, 17.0, 25.0):
            samples = EnvelopeSamples.from_amplitudes(rician_draw(rng, k_db))
            fit = fit_rician_ml(samples)
            self.assertEqual(fit.method, FitMethod.ML)
            self.assertGreater(fit.sigma_hat, 0.0)
            if fit.converged:
                gradient = log_likelihood_gradient(fit.nu_hat, math.log(fit.sigma_hat), samples.values)
                self.assertLess(np.linalg.norm(gradient), 1e-6)

    def test_ml_not_below_moment_likelihood(self):
        samples = EnvelopeSamples.from_amplitudes(rician_draw(np.random.default_rng(6), 10.0))
        ml = fit_rician_ml(samples)
        moment = kfactor_moment(samples)
        self.assertGreaterEqual(ml.log_likelihood, moment.log_likelihood - 1e-9)

    def test_scale_equivariance(self):
        raw = rician_draw(np.random.default_rng(7), 12.0)
        first = fit_rician_ml(EnvelopeSamples.from_amplitudes(raw))
        second = fit_rician_ml(EnvelopeSamples.from_amplitudes(raw * 4.0))
        self.assertEqual(first.k_hat_db, second.k_hat_db)

    def test_recovers_strong_line_of_sight(self):
        rng = np.random.default_rng(17)
        ml, moment = [], []
        for _ in range(40):
            samples = EnvelopeSamples.from_amplitudes(rician_draw(rng, 17.0))
            ml.append(fit_rician_ml(samples).k_hat_db)
            moment.append(kfactor_moment(samples).k_hat_db)
        self.assertAlmostEqual(float(np.median(ml)), 17.0, delta=0.7)
        self.assertLessEqual(abs(float(np.median(ml)) - float(np.median(moment))), 1.5)

    def test_rayleigh_envelope_has_low_k(self):
        rng = np.random.default_rng(23)
        estimates = [fit_rician_ml(EnvelopeSamples.from_amplitudes(rayleigh_draw(rng))).k_hat_db for _ in range(50)]
        self.assertLess(float(np.median(estimates)), 0.0)

    def test_fit_envelope_reports_both_methods(self):
        result = fit_envelope(rician_draw(np.random.default_rng(8), 10.0))
        self.assertEqual(result["samples"], 225)
        self.assertEqual(result["ml"]["method"], "ml")
        self.assertEqual(result["moment"]["method"], "moment")

    @tag("slow")
    def test_recovery_across_k(self):
        rng = np.random.default_rng(2024)
        for k_db in (-5.0, 0.0, 5.0, 10.0, 17.0, 25.0):
            ml, moment = [], []
            for _ in range(200):
                samples = EnvelopeSamples.from_amplitudes(rician_draw(rng, k_db))
                ml.append(fit_rician_ml(samples).k_hat_db)
                moment.append(kfactor_moment(samples).k_hat_db)
            self.assertAlmostEqual(float(np.median(ml)), k_db, delta=0.7, msg=f"K = {k_db} dB")
            self.assertLessEqual(abs(float(np.median(ml)) - float(np.median(moment))), 1.5, msg=f"K = {k_db} dB")
