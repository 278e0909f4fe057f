from apps.core.exceptions import BusinessException


class TracerException(BusinessException):

    default_code = 60000
    default_detail = "tracer error"


class TracerArgumentError(TracerException):

    default_code = 61000
    default_detail = "invalid tracer argument"


class GeometryError(TracerException):

    default_code = 61001
    default_detail = "degenerate path geometry"
