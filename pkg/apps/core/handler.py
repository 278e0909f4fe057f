import logging

from django.conf import settings
from rest_framework import status
from rest_framework.exceptions import ValidationError
from rest_framework.views import exception_handler

from apps.core.exceptions import BusinessException
from apps.core.response import error_response

logger = logging.getLogger(__name__)

VALIDATION_ERROR_CODE = 40000
INTERNAL_ERROR_CODE = 50000


def _first_message(data, default="request failed") -> str:
    if isinstance(data, dict):
        for key in ("detail", "non_field_errors"):
            value = data.get(key)
            if value:
                return _first_message(value, default)
        return default
    if isinstance(data, list):
        return _first_message(data[0], default) if data else default
    return default if data is None else str(data)


def custom_exception_handler(exc, context):
    if isinstance(exc, BusinessException):
        logger.info("%s rejected: [%s] %s", context.get("view").__class__.__name__, exc.code, exc.detail)
        return error_response(
            code=exc.code,
            message=str(exc.detail),
            data=exc.data,
            status_code=exc.status_code,
        )

    response = exception_handler(exc, context)

    if isinstance(exc, ValidationError):
        return error_response(
            code=VALIDATION_ERROR_CODE,
            message="validation error",
            data=response.data if response is not None else None,
        )

    if response is not None:
        return error_response(
            code=response.status_code * 100,
            message=_first_message(response.data),
            data=response.data,
            status_code=response.status_code,
        )

    if settings.DEBUG:
        raise exc

    logger.exception("unhandled error in %s", context.get("view").__class__.__name__)
    return error_response(
        code=INTERNAL_ERROR_CODE,
        message="internal error",
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
    )
