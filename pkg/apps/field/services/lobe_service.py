import math
import threading

import numpy as np
from cachetools import LRUCache, cached

from apps.field.constants import (
    LOBE_QUADRATURE_MU,
    LOBE_QUADRATURE_PHI,
    LOBE_TABLE_STEP_DEG,
    SCATTERING_ALPHA_R,
)

_table_cache = LRUCache(maxsize=4)
_table_lock = threading.Lock()


def lobe(cos_psi, alpha_r: float = SCATTERING_ALPHA_R):
    """Single-lobe pattern around the specular direction; 1 on the lobe axis."""
    return ((1.0 + np.asarray(cos_psi, dtype=float)) / 2.0) ** alpha_r


def hemisphere_quadrature(n_mu: int = LOBE_QUADRATURE_MU, n_phi: int = LOBE_QUADRATURE_PHI):
    """Unit directions (z up) and solid-angle weights covering the upper hemisphere."""
    nodes, weights = np.polynomial.legendre.leggauss(n_mu)
    mu = 0.5 * (nodes + 1.0)
    w_mu = 0.5 * weights
    phi = np.arange(n_phi) * (2.0 * math.pi / n_phi)
    m, p = np.meshgrid(mu, phi, indexing="ij")
    rho = np.sqrt(1.0 - m ** 2)
    directions = np.stack([rho * np.cos(p), rho * np.sin(p), m], axis=-1).reshape(-1, 3)
    w = np.repeat(w_mu, n_phi) * (2.0 * math.pi / n_phi)
    return directions, w


def lobe_integral(theta_i: float, alpha_r: float = SCATTERING_ALPHA_R) -> float:
    """Integral of the lobe over the half-space in front of the surface."""
    directions, w = hemisphere_quadrature()
    specular = np.array([math.sin(theta_i), 0.0, math.cos(theta_i)])
    return float(lobe(directions @ specular, alpha_r) @ w)


@cached(cache=_table_cache, key=lambda alpha_r: alpha_r, lock=_table_lock)
def normalization_table(alpha_r: float) -> tuple[np.ndarray, np.ndarray]:
    angles = np.radians(np.arange(0.0, 90.0 + LOBE_TABLE_STEP_DEG / 2, LOBE_TABLE_STEP_DEG))
    values = np.array([lobe_integral(a, alpha_r) for a in angles])
    return angles, values


def lobe_normalization(theta_i: float, alpha_r: float = SCATTERING_ALPHA_R) -> float:
    angles, values = normalization_table(float(alpha_r))
    return float(np.interp(theta_i, angles, values))
