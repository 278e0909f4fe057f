import math

# effective-roughness lobe exponent
SCATTERING_ALPHA_R = 2.0

# incidence-angle table of the lobe normalization
LOBE_TABLE_STEP_DEG = 0.5
LOBE_QUADRATURE_MU = 64
LOBE_QUADRATURE_PHI = 128

# below this |sin| the UTD cotangent is replaced by its boundary limit
UTD_POLE_TOLERANCE = 1e-12

# Fresnel incidence angles are clipped just short of grazing
MAX_INCIDENCE_ANGLE = 0.5 * math.pi - 1e-12

CONTRIBUTION_CSV_FIELDS = (
    "path_id",
    "label",
    "delay_s",
    "ex_re",
    "ex_im",
    "ey_re",
    "ey_im",
    "ez_re",
    "ez_im",
    "arrival_azimuth_deg",
    "arrival_elevation_deg",
)
