"""Uniform wedge diffraction with heuristic coefficients for lossy faces."""
import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import constants as sc
from scipy.special import modfresnelm

from apps.field.constants import UTD_POLE_TOLERANCE
from apps.field.exceptions import FieldGeometryError
from apps.field.services.fresnel_service import fresnel_coefficients, grazing_to_incidence
from apps.scene.entities import Material
from apps.tracer.services.wedge_service import wedge_angle

_Q = cmath.exp(0.25j * math.pi)


def transition_function(x: float) -> complex:
    """2j sqrt(x) e^{jx} times the Fresnel tail integral from sqrt(x); tends to 1 for large x."""
    if x <= 0.0:
        return 0j
    root = math.sqrt(x)
    tail = modfresnelm(root)[0]
    return complex(2j * root * cmath.exp(1j * x) * tail)


def _cot_term(n: float, beta: float, sign: int, kl: float) -> complex:
    """cot((pi + sign*beta) / 2n) * F(kL a^sign(beta)), with its limit at the pole."""
    if sign > 0:
        big_n = round((math.pi + beta) / (2.0 * math.pi * n))
    else:
        big_n = round((beta - math.pi) / (2.0 * math.pi * n))
    angle = (math.pi + sign * beta) / (2.0 * n)
    s = math.sin(angle)
    if abs(s) < UTD_POLE_TOLERANCE:
        eps = math.pi + sign * (beta - 2.0 * math.pi * n * big_n)
        side = (eps > 0.0) - (eps < 0.0)
        return n * _Q * (math.sqrt(2.0 * math.pi * kl) * side - 2.0 * kl * eps * _Q)
    a = 2.0 * math.cos((2.0 * math.pi * n * big_n - beta) / 2.0) ** 2
    return math.cos(angle) / s * transition_function(kl * a)


def wedge_coefficients(n, phi, phi_prime, sin_beta0, distance_param, wavenumber, r0=(-1.0, 1.0), rn=(-1.0, 1.0)):
    """(soft, hard) wedge coefficients.

    ``r0`` and ``rn`` are the (soft, hard) reflection coefficients of the o-
    and n-faces; (-1, +1) on both faces gives the perfectly conducting wedge.
    """
    kl = wavenumber * distance_param
    pre = -cmath.exp(-0.25j * math.pi) / (2.0 * n * math.sqrt(2.0 * math.pi * wavenumber) * sin_beta0)
    minus = phi - phi_prime
    plus = phi + phi_prime
    direct = _cot_term(n, minus, +1, kl) + _cot_term(n, minus, -1, kl)
    face_o = _cot_term(n, plus, -1, kl)
    face_n = _cot_term(n, plus, +1, kl)
    return tuple(pre * (direct + r0[i] * face_o + rn[i] * face_n) for i in range(2))


@dataclass(frozen=True, eq=False)
class DiffractionDyadic:
    """Coefficients plus the edge-fixed bases they act between."""

    soft: complex
    hard: complex
    spreading: float
    beta_in: np.ndarray
    phi_in: np.ndarray
    beta_out: np.ndarray
    phi_out: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return np.diag([self.soft, self.hard])

    def apply(self, field: np.ndarray) -> np.ndarray:
        return (
            self.soft * (field @ self.beta_in) * self.beta_out
            + self.hard * (field @ self.phi_in) * self.phi_out
        )


def _unit(v):
    return v / np.linalg.norm(v)


def _fold(angle: float, alpha: float) -> float:
    """Snap an angle a hair outside the air region onto the nearer face."""
    if angle <= alpha:
        return angle
    return 0.0 if 2.0 * math.pi - angle < angle - alpha else alpha


def _edge_basis(axis, direction):
    phi_hat = _unit(np.cross(axis, direction))
    return np.cross(phi_hat, direction), phi_hat


def diffraction_dyadic(
    frame: tuple,
    incoming: np.ndarray,
    outgoing: np.ndarray,
    s_prime: float,
    s: float,
    materials: tuple[Material, Material],
    frequency_hz: float,
) -> DiffractionDyadic:
    """Diffraction at one edge point.

    ``frame`` is (axis, t_o, n_o, alpha) of the edge, ``incoming`` and
    ``outgoing`` the unit propagation directions before and after the edge,
    ``s_prime`` and ``s`` the unfolded distances to the previous source and
    the next caustic or receiver.
    """
    axis, t_o, n_o, alpha = frame
    n = alpha / math.pi
    if not 1.0 < n <= 2.0 + 1e-12:
        raise FieldGeometryError(f"wedge with air angle {alpha:.6f} rad does not diffract")
    sin_beta0 = float(np.linalg.norm(np.cross(incoming, axis)))
    if sin_beta0 <= 0.0:
        raise FieldGeometryError("ray grazes along the edge")

    phi_prime = float(wedge_angle(axis, t_o, n_o, -incoming))
    phi = float(wedge_angle(axis, t_o, n_o, outgoing))
    phi_prime = _fold(phi_prime, alpha)
    phi = _fold(phi, alpha)

    wavenumber = 2.0 * math.pi * frequency_hz / sc.c
    distance_param = s * s_prime * sin_beta0 ** 2 / (s + s_prime)
    material_o, material_n = materials
    r0 = fresnel_coefficients(material_o, grazing_to_incidence(phi_prime), frequency_hz)
    rn = fresnel_coefficients(material_n, grazing_to_incidence(alpha - phi), frequency_hz)
    soft, hard = wedge_coefficients(n, phi, phi_prime, sin_beta0, distance_param, wavenumber, r0, rn)

    beta_in, phi_in = _edge_basis(axis, incoming)
    beta_out, phi_out = _edge_basis(axis, outgoing)
    return DiffractionDyadic(
        soft=soft,
        hard=hard,
        spreading=math.sqrt(s_prime / (s * (s + s_prime))),
        beta_in=beta_in,
        phi_in=phi_in,
        beta_out=beta_out,
        phi_out=phi_out,
    )
