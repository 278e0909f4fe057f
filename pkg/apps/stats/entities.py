import math
from dataclasses import dataclass

import numpy as np

from apps.stats.constants import MECHANISM_LABELS, MIN_SAMPLES
from apps.stats.exceptions import InsufficientDataError, StatsArgumentError


@dataclass(frozen=True, eq=False)
class EnvelopeSamples:
    """Amplitude samples of one grid, divided by their mean."""

    values: np.ndarray
    normalization: float

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "EnvelopeSamples":
        raw = np.abs(np.asarray(amplitudes)) if np.iscomplexobj(amplitudes) else np.asarray(amplitudes, dtype=float)
        raw = raw.ravel()
        if raw.size < MIN_SAMPLES:
            raise InsufficientDataError(f"need at least {MIN_SAMPLES} samples, got {raw.size}")
        if not np.all(np.isfinite(raw)):
            raise StatsArgumentError("samples must be finite")
        if np.any(raw < 0.0):
            raise StatsArgumentError("amplitude samples must be >= 0")
        mean = float(raw.mean())
        if mean <= 0.0:
            raise StatsArgumentError("all samples are zero")
        return cls(values=raw / mean, normalization=mean)

    @property
    def size(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class RicianFit:
    nu_hat: float
    sigma_hat: float
    k_hat_db: float
    log_likelihood: float
    method: str
    converged: bool

    @property
    def k_linear(self) -> float:
        return 10.0 ** (self.k_hat_db / 10.0)

    def as_dict(self) -> dict:
        return {
            "nu_hat": self.nu_hat,
            "sigma_hat": self.sigma_hat,
            "k_db": self.k_hat_db,
            "log_likelihood": self.log_likelihood,
            "method": str(self.method),
            "converged": self.converged,
        }


@dataclass(frozen=True, eq=False)
class PowerDelayProfile:
    powers: np.ndarray
    delays: np.ndarray

    def __post_init__(self):
        if self.powers.shape != self.delays.shape:
            raise StatsArgumentError("one delay per tap power is required")
        if np.any(self.powers < 0.0) or not np.all(np.isfinite(self.powers)):
            raise StatsArgumentError("tap powers must be finite and >= 0")
        if not np.all(np.isfinite(self.delays)):
            raise StatsArgumentError("tap delays must be finite")

    @classmethod
    def from_taps(cls, taps) -> "PowerDelayProfile":
        taps = list(taps)
        powers = np.array([float(p) for p, _ in taps])
        delays = np.array([float(t) for _, t in taps])
        return cls(powers=powers, delays=delays)

    @classmethod
    def from_contributions(cls, contributions, weights) -> "PowerDelayProfile":
        """One tap per path: power of the receiver-weighted amplitude at the grid center."""
        weights = np.asarray(weights, dtype=complex)
        if len(weights) != len(contributions):
            raise StatsArgumentError("one receiver weight per contribution is required")
        return cls(
            powers=np.abs(weights) ** 2,
            delays=np.array([c.delay_s for c in contributions], dtype=float),
        )

    @property
    def total_power(self) -> float:
        return float(self.powers.sum())

    def __len__(self) -> int:
        return int(self.powers.size)


@dataclass(frozen=True)
class MechanismBreakdown:
    shares: dict

    def __post_init__(self):
        unknown = set(self.shares) - set(MECHANISM_LABELS)
        if unknown:
            raise StatsArgumentError(f"unknown mechanism labels {sorted(unknown)}")
        if any(v < 0.0 for v in self.shares.values()):
            raise StatsArgumentError("mechanism shares must be >= 0")
        if not math.isclose(sum(self.shares.values()), 1.0, abs_tol=1e-9):
            raise StatsArgumentError("mechanism shares must sum to 1")

    def share(self, label: str) -> float:
        return self.shares.get(label, 0.0)

    def as_percentages(self) -> dict:
        return {label: 100.0 * self.share(label) for label in MECHANISM_LABELS}
