import cmath
import math

import numpy as np
from django.test import SimpleTestCase
from scipy import constants as sc

from apps.field.exceptions import FieldGeometryError
from apps.field.services.utd_service import (
    diffraction_dyadic,
    transition_function,
    wedge_coefficients,
)
from apps.scene.entities import Material

CONDUCTOR = Material(eps_r=1.0, sigma=1e12, scattering_s=0.0)

# half-plane along z: o-face along +x, air swept toward +y
HALF_PLANE = (np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]), 2.0 * math.pi)


def _wavenumber(frequency_hz):
    return 2.0 * math.pi * frequency_hz / sc.c


def _half_plane_keller(phi, phi_prime, wavenumber):
    pre = -cmath.exp(-0.25j * math.pi) / (2.0 * math.sqrt(2.0 * math.pi * wavenumber))
    minus = 1.0 / math.cos((phi - phi_prime) / 2.0)
    plus = 1.0 / math.cos((phi + phi_prime) / 2.0)
    return pre * (minus - plus), pre * (minus + plus)


def _around(angle):
    return np.array([math.cos(angle), math.sin(angle), 0.0])


class TransitionFunctionTests(SimpleTestCase):

    def test_large_argument_tends_to_one(self):
        self.assertAlmostEqual(abs(transition_function(1e6) - 1.0), 0.0, places=5)

    def test_zero_argument(self):
        self.assertEqual(transition_function(0.0), 0j)

    def test_small_argument_magnitude(self):
        x = 1e-6
        self.assertAlmostEqual(abs(transition_function(x)) / math.sqrt(math.pi * x), 1.0, places=2)


class WedgeCoefficientTests(SimpleTestCase):

    def test_half_plane_deep_shadow_matches_keller(self):
        k = _wavenumber(10e9)
        phi_prime, phi = math.pi / 4, 1.6 * math.pi
        soft, hard = wedge_coefficients(2.0, phi, phi_prime, 1.0, 5.0, k)
        keller_soft, keller_hard = _half_plane_keller(phi, phi_prime, k)
        self.assertLess(abs(soft - keller_soft), 0.01 * abs(keller_soft))
        self.assertLess(abs(hard - keller_hard), 0.01 * abs(keller_hard))

    def test_total_field_continuous_across_shadow_boundary(self):
        k = _wavenumber(3.5e9)
        rho = 20.0
        phi_prime = math.pi / 3
        boundary = math.pi + phi_prime

        def total(phi, which):
            lit = phi - phi_prime < math.pi
            incident = cmath.exp(1j * k * rho * math.cos(phi - phi_prime)) if lit else 0j
            coefficient = wedge_coefficients(2.0, phi, phi_prime, 1.0, rho, k)[which]
            return incident + coefficient * cmath.exp(-1j * k * rho) / math.sqrt(rho)

        for which in (0, 1):
            before = total(boundary - 1e-5, which)
            after = total(boundary + 1e-5, which)
            self.assertLess(abs(after - before), 0.01 * abs(before))

    def test_reflection_boundary_continuous_for_conductor(self):
        k = _wavenumber(3.5e9)
        rho = 20.0
        phi_prime = math.pi / 3
        boundary = math.pi - phi_prime

        def total(phi, which):
            sign = -1.0 if which == 0 else 1.0
            field = cmath.exp(1j * k * rho * math.cos(phi - phi_prime))
            if phi + phi_prime < math.pi:
                field += sign * cmath.exp(1j * k * rho * math.cos(phi + phi_prime))
            coefficient = wedge_coefficients(2.0, phi, phi_prime, 1.0, rho, k)[which]
            return field + coefficient * cmath.exp(-1j * k * rho) / math.sqrt(rho)

        for which in (0, 1):
            before = total(boundary - 1e-5, which)
            after = total(boundary + 1e-5, which)
            self.assertLess(abs(after - before), 0.01 * max(abs(before), 0.1))


class DiffractionDyadicTests(SimpleTestCase):

    def test_conductor_half_plane_matches_coefficients(self):
        k = _wavenumber(10e9)
        phi_prime, phi = math.pi / 4, 1.6 * math.pi
        incoming = -_around(phi_prime)
        outgoing = _around(phi)
        dyadic = diffraction_dyadic(HALF_PLANE, incoming, outgoing, 10.0, 10.0, (CONDUCTOR, CONDUCTOR), 10e9)
        soft, hard = wedge_coefficients(2.0, phi, phi_prime, 1.0, 5.0, k)
        self.assertLess(abs(dyadic.soft - soft), 1e-4 * abs(soft))
        self.assertLess(abs(dyadic.hard - hard), 1e-4 * abs(hard))
        self.assertAlmostEqual(dyadic.spreading, math.sqrt(10.0 / (10.0 * 20.0)))

    def test_diffracted_field_is_transverse(self):
        incoming = -_around(math.pi / 4) + np.array([0.0, 0.0, -0.3])
        incoming /= np.linalg.norm(incoming)
        outgoing = _around(1.3 * math.pi) + np.array([0.0, 0.0, -0.3])
        outgoing /= np.linalg.norm(outgoing)
        material = Material(eps_r=5.0, sigma=0.01, scattering_s=0.4)
        dyadic = diffraction_dyadic(HALF_PLANE, incoming, outgoing, 30.0, 12.0, (material, material), 3.5e9)
        field = np.cross(incoming, [0.3, -0.2, 1.0]).astype(complex) * (1 + 0.5j)
        diffracted = dyadic.apply(field)
        self.assertLess(abs(diffracted @ outgoing), 1e-12 * np.linalg.norm(diffracted) + 1e-15)
        self.assertEqual(dyadic.matrix.shape, (2, 2))

    def test_wedge_that_does_not_diffract(self):
        flat = HALF_PLANE[:3] + (math.pi,)
        with self.assertRaises(FieldGeometryError):
            diffraction_dyadic(flat, -_around(0.5), _around(2.0), 1.0, 1.0, (CONDUCTOR, CONDUCTOR), 2.1e9)

    def test_ray_along_edge(self):
        along = np.array([0.0, 0.0, 1.0])
        with self.assertRaises(FieldGeometryError):
            diffraction_dyadic(HALF_PLANE, along, _around(2.0), 1.0, 1.0, (CONDUCTOR, CONDUCTOR), 2.1e9)
