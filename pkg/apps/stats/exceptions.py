from apps.core.exceptions import BusinessException


class StatsException(BusinessException):

    default_code = 80000
    default_detail = "channel statistics error"


class InsufficientDataError(StatsException):

    default_code = 81000
    default_detail = "not enough samples for the estimator"


class StatsArgumentError(StatsException):

    default_code = 81001
    default_detail = "invalid statistics argument"


class UndefinedStatisticError(StatsException):

    default_code = 81002
    default_detail = "statistic is undefined for this input"
