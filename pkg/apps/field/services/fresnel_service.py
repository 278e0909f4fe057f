import math

import numpy as np

from apps.field.constants import MAX_INCIDENCE_ANGLE
from apps.field.exceptions import FieldArgumentError
from apps.scene.entities import Material


def fresnel_coefficients(material: Material, incidence_angle: float, frequency_hz: float) -> tuple[complex, complex]:
    """(soft, hard) reflection coefficients of a smooth half-space.

    The hard coefficient refers to parallel unit vectors built as
    ``e_perp x s`` on both sides, so a perfect conductor gives (-1, +1).
    """
    if not 0.0 <= incidence_angle < 0.5 * math.pi:
        raise FieldArgumentError(f"incidence angle must be in [0, pi/2), got {incidence_angle}")
    eps = material.complex_permittivity(frequency_hz)
    cos_t = math.cos(incidence_angle)
    root = np.sqrt(eps - math.sin(incidence_angle) ** 2 + 0j)
    soft = (cos_t - root) / (cos_t + root)
    hard = (eps * cos_t - root) / (eps * cos_t + root)
    return complex(soft), complex(hard)


def fresnel_dyadic(material: Material, incidence_angle: float, frequency_hz: float) -> np.ndarray:
    """diag(soft, hard) scaled by the specular reduction of rough surfaces."""
    soft, hard = fresnel_coefficients(material, incidence_angle, frequency_hz)
    return material.specular_reduction * np.diag([soft, hard])


def grazing_to_incidence(grazing_angle: float) -> float:
    """Incidence angle from the normal for a ray leaving a face at ``grazing_angle``."""
    return min(abs(0.5 * math.pi - grazing_angle), MAX_INCIDENCE_ANGLE)
