from apps.core.exceptions import BusinessException


class SceneException(BusinessException):

    default_code = 20000
    default_detail = "scene error"


class SceneFormatError(SceneException):

    default_code = 21000
    default_detail = "scene file could not be parsed"


class SceneValidationError(SceneException):

    default_code = 21001
    default_detail = "scene violates a geometric invariant"


class SceneArgumentError(SceneException):

    default_code = 21100
    default_detail = "invalid scene generation argument"
