import math

import numpy as np
from django.test import SimpleTestCase

from apps.field.services.lobe_service import (
    hemisphere_quadrature,
    lobe,
    lobe_integral,
    lobe_normalization,
    normalization_table,
)


def _closed_form(theta_i):
    return 2.0 * math.pi / 3.0 + 0.5 * math.pi * math.cos(theta_i)


class LobeTests(SimpleTestCase):

    def test_peak_on_specular_direction(self):
        self.assertEqual(float(lobe(1.0)), 1.0)
        self.assertEqual(float(lobe(-1.0)), 0.0)
        self.assertAlmostEqual(float(lobe(0.0)), 0.25)

    def test_quadrature_covers_hemisphere(self):
        directions, weights = hemisphere_quadrature()
        self.assertAlmostEqual(float(weights.sum()), 2.0 * math.pi, places=10)
        np.testing.assert_allclose(np.linalg.norm(directions, axis=1), 1.0, atol=1e-12)
        self.assertTrue(np.all(directions[:, 2] > 0.0))

    def test_normal_incidence_integral(self):
        self.assertAlmostEqual(lobe_integral(0.0), 7.0 * math.pi / 6.0, places=9)

    def test_integral_matches_closed_form(self):
        for degrees in (10.0, 33.0, 60.0, 85.0):
            theta = math.radians(degrees)
            self.assertAlmostEqual(lobe_integral(theta), _closed_form(theta), places=9)

    def test_table_interpolation(self):
        angles, values = normalization_table(2.0)
        self.assertEqual(len(angles), 181)
        self.assertAlmostEqual(math.degrees(angles[-1]), 90.0)
        for degrees in (0.0, 12.25, 47.3, 89.9):
            theta = math.radians(degrees)
            self.assertAlmostEqual(lobe_normalization(theta), _closed_form(theta), delta=1e-4)

    def test_monte_carlo_agreement(self):
        rng = np.random.default_rng(7)
        n = 1_000_000
        mu = rng.random(n)
        phi = rng.random(n) * 2.0 * math.pi
        rho = np.sqrt(1.0 - mu ** 2)
        theta = math.radians(40.0)
        specular = np.array([math.sin(theta), 0.0, math.cos(theta)])
        cos_psi = rho * np.cos(phi) * specular[0] + mu * specular[2]
        estimate = 2.0 * math.pi * float(lobe(cos_psi).mean())
        self.assertAlmostEqual(estimate / lobe_normalization(theta), 1.0, delta=0.005)

    def test_other_exponent_cached_separately(self):
        first = normalization_table(4.0)
        self.assertIs(normalization_table(4.0), first)
        self.assertLess(lobe_normalization(0.3, 4.0), lobe_normalization(0.3, 2.0))
