from django.db import models

from apps.tracer.constants import MECHANISM_ORDER

MIN_SAMPLES = 10

# dB
K_FLOOR_DB = -40.0
K_CAP_DB = 80.0

# sample variance below which the envelope is taken as fading-free
ZERO_VARIANCE = 1e-12

ML_GRADIENT_TOLERANCE = 1e-8
ML_MAX_ITERATIONS = 200
# gradient norm of the total log-likelihood accepted as a stationary point
ML_CONVERGED_GRADIENT = 1e-6

MECHANISM_LABELS = MECHANISM_ORDER


class FitMethod(models.TextChoices):
    ML = "ml", "Maximum likelihood"
    MOMENT = "moment", "Moment method"


class Aggregate(models.TextChoices):
    MEDIAN = "median", "Median"
    MEAN = "mean", "Mean"
