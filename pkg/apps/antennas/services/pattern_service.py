import math

import numpy as np
from scipy import constants as sc
from scipy.integrate import trapezoid

from apps.antennas.constants import (
    APERTURE_BEAMS,
    APERTURE_DIAMETER_M,
    HALF_POWER_EXPONENT,
    MountHeight,
    PATCH_PEAK_GAIN,
    PatternKind,
    TRANSVERSALITY_TOLERANCE,
    UNIT_TOLERANCE,
    USE_CASES,
    UseCase,
)
from apps.antennas.entities import AntennaConfig, Polarization
from apps.antennas.exceptions import AntennaArgumentError, PolarizationContractError
from apps.antennas.services.polarization_service import polarization_vector


def gain(antenna: AntennaConfig, direction):
    """Linear power gain toward ``direction`` (unit vector, or an (N, 3) array of them)."""
    d = np.asarray(direction, dtype=float)
    norms = np.linalg.norm(d, axis=-1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOLERANCE):
        raise AntennaArgumentError("gain direction must be unit-length")

    if antenna.pattern == PatternKind.ISOTROPIC:
        values = np.ones(d.shape[:-1])
    else:
        cos_theta = np.clip(d @ antenna.boresight_vector, -1.0, 1.0)
        if antenna.pattern == PatternKind.PATCH:
            values = np.where(cos_theta > 0.0, PATCH_PEAK_GAIN * cos_theta, 0.0)
        else:
            theta_deg = np.degrees(np.arccos(cos_theta))
            values = antenna.peak_gain * np.exp(-HALF_POWER_EXPONENT * (theta_deg / antenna.hpbw_deg) ** 2)
    if np.ndim(values) == 0:
        return float(values)
    return values


def rx_weight(antenna: AntennaConfig, arrival_direction, incident_field) -> complex:
    """Open-circuit-equivalent amplitude of one incident ray.

    ``arrival_direction`` points from the receiver toward where the ray comes
    from; the wave itself propagates along its negative.
    """
    look = np.asarray(arrival_direction, dtype=float)
    g = gain(antenna, look)
    field = np.asarray(incident_field, dtype=complex)
    magnitude = float(np.linalg.norm(field))
    if magnitude > 0.0 and abs(complex(field @ look)) > TRANSVERSALITY_TOLERANCE * magnitude:
        raise PolarizationContractError(
            f"incident field has longitudinal component {abs(complex(field @ look)):.3e} (|E|={magnitude:.3e})"
        )
    p_rx = polarization_vector(antenna.polarization, -look)
    return complex(math.sqrt(g) * (field @ np.conj(p_rx)))


def uniform_aperture_directivity_dbi(diameter_m: float, frequency_hz: float) -> float:
    wavelength = sc.c / frequency_hz
    return 10.0 * math.log10((math.pi * diameter_m / wavelength) ** 2)


def sphere_average_gain(antenna: AntennaConfig, n_theta: int = 721, n_phi: int = 360) -> float:
    """Gain averaged over the sphere; 1 for a lossless pattern."""
    theta = np.linspace(0.0, math.pi, n_theta)
    phi = np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False)
    t, p = np.meshgrid(theta, phi, indexing="ij")
    dirs = np.stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)], axis=-1)
    values = gain(antenna, dirs).mean(axis=1)
    return float(trapezoid(values * np.sin(theta), theta) / 2.0)


def antenna_for_use_case(use_case: str, band: str, satellite_direction=None) -> AntennaConfig:
    try:
        entry = USE_CASES[UseCase(use_case)]
    except ValueError as exc:
        raise AntennaArgumentError(f"unknown use case '{use_case}'") from exc
    if band not in entry["bands"]:
        raise AntennaArgumentError(f"use case '{use_case}' does not operate in band {band}")
    mount = entry["mount_height"]
    if entry["pattern"] == PatternKind.ISOTROPIC:
        return AntennaConfig.isotropic(entry["polarization"], mount_height=mount)
    if entry["pattern"] == PatternKind.PATCH:
        return AntennaConfig.patch(entry["polarization"], mount_height=mount)
    directivity, hpbw = APERTURE_BEAMS[band]
    antenna = AntennaConfig(
        pattern=PatternKind.APERTURE,
        polarization=Polarization(entry["polarization"]),
        directivity_dbi=directivity,
        hpbw_deg=hpbw,
        aperture_diameter_m=APERTURE_DIAMETER_M,
        mount_height=MountHeight.ROOFTOP,
    )
    if satellite_direction is not None:
        antenna = antenna.pointed_at(satellite_direction)
    return antenna
