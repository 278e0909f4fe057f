from apps.core.exceptions import BusinessException


class FieldException(BusinessException):

    default_code = 70000
    default_detail = "field computation error"


class FieldGeometryError(FieldException):

    default_code = 71000
    default_detail = "path geometry cannot carry a field"


class FieldArgumentError(FieldException):

    default_code = 71001
    default_detail = "invalid field argument"


class ScatteringContractError(FieldException):

    default_code = 71002
    default_detail = "scattering tile is not lit from the incident side"


class BandConfigurationError(FieldException):

    default_code = 71100
    default_detail = "no electromagnetic parameters for the requested band"
