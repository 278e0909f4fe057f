from apps.core.exceptions import BusinessException


class AntennaException(BusinessException):

    default_code = 30000
    default_detail = "antenna error"


class AntennaArgumentError(AntennaException):

    default_code = 31000
    default_detail = "invalid antenna argument"


class PolarizationContractError(AntennaException):

    default_code = 31001
    default_detail = "incident field is not transverse to its propagation direction"
