import math

import numpy as np

from apps.stats.constants import Aggregate, MECHANISM_LABELS
from apps.stats.entities import MechanismBreakdown, PowerDelayProfile
from apps.stats.exceptions import StatsArgumentError, UndefinedStatisticError


def _checked_total(pdp: PowerDelayProfile) -> float:
    if not len(pdp):
        raise UndefinedStatisticError("delay statistics of an empty power delay profile")
    total = pdp.total_power
    if total <= 0.0:
        raise UndefinedStatisticError("power delay profile carries no power")
    return total


def mean_excess_delay(pdp: PowerDelayProfile) -> float:
    total = _checked_total(pdp)
    return float(pdp.powers @ pdp.delays / total)


def delay_spread(pdp: PowerDelayProfile) -> float:
    """RMS delay spread in seconds."""
    total = _checked_total(pdp)
    weights = pdp.powers / total
    mean = float(weights @ pdp.delays)
    return math.sqrt(float(weights @ (pdp.delays - mean) ** 2))


def mechanism_breakdown_from(contributions, weights) -> MechanismBreakdown:
    if not len(contributions):
        raise UndefinedStatisticError("no contributions to break down")
    powers = np.abs(np.asarray(weights, dtype=complex)) ** 2
    if len(powers) != len(contributions):
        raise StatsArgumentError("one receiver weight per contribution is required")
    total = float(powers.sum())
    if total <= 0.0:
        raise UndefinedStatisticError("received power is zero")
    shares = dict.fromkeys(MECHANISM_LABELS, 0.0)
    for contribution, power in zip(contributions, powers):
        shares[contribution.mechanism_label] += float(power) / total
    return MechanismBreakdown(shares=shares)


def mechanism_breakdown(realization) -> MechanismBreakdown:
    """Share of the grid-center received power carried by each mechanism label."""
    return mechanism_breakdown_from(realization.contributions, realization.center_weights)


def mean_breakdown(breakdowns) -> MechanismBreakdown:
    breakdowns = list(breakdowns)
    if not breakdowns:
        raise UndefinedStatisticError("no breakdowns to average")
    return MechanismBreakdown(shares={
        label: float(np.mean([b.share(label) for b in breakdowns])) for label in MECHANISM_LABELS
    })


def los_probability(flags) -> float:
    flags = np.asarray(list(flags), dtype=bool)
    if flags.size == 0:
        raise StatsArgumentError("LoS probability needs at least one flag")
    return float(flags.mean())


def aggregate(values, how: str = Aggregate.MEDIAN) -> float:
    """Median or mean over grids, ignoring undefined entries; NaN when nothing is left."""
    values = np.asarray([v for v in values if v is not None], dtype=float)
    values = values[np.isfinite(values)]
    if values.size == 0:
        return math.nan
    if how == Aggregate.MEDIAN:
        return float(np.median(values))
    if how == Aggregate.MEAN:
        return float(np.mean(values))
    raise StatsArgumentError(f"unknown aggregate '{how}'")
