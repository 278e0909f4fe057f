"""Rician K-factor estimation on grid envelopes."""
import logging
import math

import numpy as np
from scipy.optimize import minimize, root
from scipy.special import i0e, i1e

from apps.stats.constants import (
    FitMethod,
    K_CAP_DB,
    K_FLOOR_DB,
    ML_CONVERGED_GRADIENT,
    ML_GRADIENT_TOLERANCE,
    ML_MAX_ITERATIONS,
    ZERO_VARIANCE,
)
from apps.stats.entities import EnvelopeSamples, RicianFit

logger = logging.getLogger(__name__)

_K_CAP = 10.0 ** (K_CAP_DB / 10.0)


def k_to_db(k_linear: float) -> float:
    if k_linear <= 0.0:
        return K_FLOOR_DB
    return float(np.clip(10.0 * math.log10(k_linear), K_FLOOR_DB, K_CAP_DB))


def _log_i0(z):
    return np.log(i0e(z)) + z


def log_likelihood(nu: float, sigma: float, x: np.ndarray) -> float:
    """Rician log-likelihood of amplitude samples ``x``."""
    s2 = sigma * sigma
    return float(np.sum(np.log(x) - np.log(s2) - (x * x + nu * nu) / (2.0 * s2) + _log_i0(x * nu / s2)))


def log_likelihood_gradient(nu: float, log_sigma: float, x: np.ndarray) -> np.ndarray:
    """Gradient of the log-likelihood with respect to (nu, log sigma)."""
    s2 = math.exp(2.0 * log_sigma)
    z = x * nu / s2
    # I0' = I1
    ratio = i1e(z) / i0e(z)
    d_nu = np.sum(-nu / s2 + ratio * x / s2)
    d_log_sigma = np.sum(-2.0 + (x * x + nu * nu) / s2 - 2.0 * ratio * z)
    return np.array([d_nu, d_log_sigma])


def log_likelihood_hessian(nu: float, log_sigma: float, x: np.ndarray) -> np.ndarray:
    s2 = math.exp(2.0 * log_sigma)
    z = x * nu / s2
    ratio = i1e(z) / i0e(z)
    over_z = np.divide(ratio, z, out=np.full_like(z, 0.5), where=z > 1e-8)
    slope = 1.0 - over_z - ratio * ratio
    h_nn = np.sum(-1.0 / s2 + slope * x * x / (s2 * s2))
    h_nt = np.sum(2.0 * nu / s2 - 2.0 * ratio * x / s2 - 2.0 * slope * z * x / s2)
    h_tt = np.sum(-2.0 * (x * x + nu * nu) / s2 + 4.0 * slope * z * z + 4.0 * ratio * z)
    return np.array([[h_nn, h_nt], [h_nt, h_tt]])


def _stationary(theta, x):
    return log_likelihood_gradient(theta[0], theta[1], x), log_likelihood_hessian(theta[0], theta[1], x)


def _negative(theta, x):
    nu, log_sigma = theta
    sigma = math.exp(log_sigma)
    return -log_likelihood(nu, sigma, x), -log_likelihood_gradient(nu, log_sigma, x)


def _parameters_for(k_linear: float, mean_power: float) -> tuple[float, float]:
    nu = math.sqrt(k_linear * mean_power / (k_linear + 1.0))
    sigma = math.sqrt(mean_power / (2.0 * (k_linear + 1.0)))
    return nu, sigma


def _fading_free(samples: EnvelopeSamples, method: str) -> RicianFit:
    nu, sigma = _parameters_for(_K_CAP, float(np.mean(samples.values ** 2)))
    return RicianFit(
        nu_hat=nu,
        sigma_hat=sigma,
        k_hat_db=K_CAP_DB,
        log_likelihood=log_likelihood(nu, sigma, samples.values),
        method=method,
        converged=True,
    )


def kfactor_moment(samples: EnvelopeSamples) -> RicianFit:
    """K from the second and fourth envelope moments."""
    x = samples.values
    power = x * x
    mean_power = float(power.mean())
    gamma = float(power.var()) / mean_power ** 2
    if gamma < ZERO_VARIANCE:
        return _fading_free(samples, FitMethod.MOMENT)
    if gamma >= 1.0:
        k_linear = 0.0
    else:
        root_term = math.sqrt(1.0 - gamma)
        k_linear = root_term / (1.0 - root_term)
    nu, sigma = _parameters_for(min(k_linear, _K_CAP), mean_power)
    return RicianFit(
        nu_hat=nu,
        sigma_hat=sigma,
        k_hat_db=k_to_db(k_linear),
        log_likelihood=log_likelihood(nu, sigma, x),
        method=FitMethod.MOMENT,
        converged=True,
    )


def fit_rician_ml(samples: EnvelopeSamples) -> RicianFit:
    """Maximum-likelihood (nu, sigma) by BFGS in (nu, log sigma), started from the moment fit."""
    x = samples.values
    if float(x.var()) < ZERO_VARIANCE:
        return _fading_free(samples, FitMethod.ML)

    start = kfactor_moment(samples)
    # nu = 0 is a stationary point of the even likelihood; start off it
    nu0 = max(start.nu_hat, 0.1 * math.sqrt(float(np.mean(x * x))))
    result = minimize(
        _negative,
        np.array([nu0, math.log(start.sigma_hat)]),
        args=(x,),
        jac=True,
        method="BFGS",
        options={"gtol": ML_GRADIENT_TOLERANCE, "maxiter": ML_MAX_ITERATIONS},
    )
    theta = result.x
    best = -float(result.fun)
    gradient = log_likelihood_gradient(theta[0], theta[1], x)
    if np.linalg.norm(gradient) >= ML_CONVERGED_GRADIENT:
        polish = root(_stationary, theta, args=(x,), jac=True, method="hybr", options={"xtol": 1e-14})
        if polish.success and np.all(np.isfinite(polish.x)):
            value = log_likelihood(polish.x[0], math.exp(polish.x[1]), x)
            if value >= best - 1e-9 * abs(best):
                theta, best = polish.x, value
                gradient = log_likelihood_gradient(theta[0], theta[1], x)

    nu = abs(float(theta[0]))
    sigma = math.exp(float(theta[1]))
    converged = bool(np.linalg.norm(gradient) < ML_CONVERGED_GRADIENT)
    if not converged:
        logger.debug("rician fit stopped after %d iterations: %s", result.nit, result.message)
    return RicianFit(
        nu_hat=nu,
        sigma_hat=sigma,
        k_hat_db=k_to_db(nu * nu / (2.0 * sigma * sigma)),
        log_likelihood=best,
        method=FitMethod.ML,
        converged=converged,
    )


def fit_envelope(amplitudes) -> dict:
    """ML and moment fits of raw amplitudes, as reported by the standalone estimator."""
    samples = EnvelopeSamples.from_amplitudes(amplitudes)
    return {
        "samples": samples.size,
        "normalization": samples.normalization,
        "ml": fit_rician_ml(samples).as_dict(),
        "moment": kfactor_moment(samples).as_dict(),
    }
