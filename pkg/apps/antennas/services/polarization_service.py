import math

import numpy as np
from scipy import constants as sc

from apps.antennas.constants import PolarizationKind, SATELLITE_POWER_W, UNIT_TOLERANCE
from apps.antennas.entities import Polarization
from apps.antennas.exceptions import AntennaArgumentError

ETA_0 = sc.mu_0 * sc.c

_Z = np.array([0.0, 0.0, 1.0])
_X = np.array([1.0, 0.0, 0.0])


def check_unit(direction, name: str = "direction") -> np.ndarray:
    d = np.asarray(direction, dtype=float)
    norm = float(np.linalg.norm(d))
    if abs(norm - 1.0) > UNIT_TOLERANCE:
        raise AntennaArgumentError(f"{name} must be unit-length, got norm {norm:.9f}")
    return d


def transverse_basis(propagation) -> tuple[np.ndarray, np.ndarray]:
    """Right-handed (u1, u2) with u1 x u2 along the propagation direction."""
    k = np.asarray(propagation, dtype=float)
    ref = _Z if abs(k[2]) < 0.999 else _X
    u1 = np.cross(k, ref)
    u1 /= np.linalg.norm(u1)
    u2 = np.cross(k, u1)
    return u1, u2


def polarization_vector(polarization: Polarization, propagation) -> np.ndarray:
    """Unit complex polarization vector of a wave travelling along ``propagation``."""
    k = np.asarray(propagation, dtype=float)
    u1, u2 = transverse_basis(k)
    if polarization.kind == PolarizationKind.RHCP:
        return (u1 - 1j * u2) / math.sqrt(2.0)
    if polarization.kind == PolarizationKind.LHCP:
        return (u1 + 1j * u2) / math.sqrt(2.0)
    vertical = _Z - (_Z @ k) * k
    norm = np.linalg.norm(vertical)
    if norm < 1e-9:
        # no vertical component along the zenith axis
        return u1.astype(complex)
    return (vertical / norm).astype(complex)


def field_magnitude_at_1m(power_w: float = SATELLITE_POWER_W) -> float:
    return math.sqrt(2.0 * ETA_0 * power_w / (4.0 * math.pi))


def tx_field_at_1m(polarization: Polarization, direction, power_w: float = SATELLITE_POWER_W) -> np.ndarray:
    d = check_unit(direction)
    return field_magnitude_at_1m(power_w) * polarization_vector(polarization, d)
