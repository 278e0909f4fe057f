from typing import Any

from rest_framework import status
from rest_framework.response import Response


class APIResponse(Response):
    """``{code, message, data}`` envelope; code 0 means success."""

    def __init__(
        self,
        *,
        code: int = 0,
        message: str = "",
        data: Any = None,
        status_code: int = status.HTTP_200_OK,
        headers=None,
        content_type=None,
    ):
        super().__init__(
            data={"code": code, "message": message, "data": data},
            status=status_code,
            headers=headers,
            exception=code != 0,
            content_type=content_type,
        )


def success_response(
    *, data=None, message: str = "", status_code: int = status.HTTP_200_OK
) -> APIResponse:
    return APIResponse(code=0, message=message, data=data, status_code=status_code)


def error_response(
    *, code: int, message: str, data=None, status_code: int = status.HTTP_400_BAD_REQUEST
) -> APIResponse:
    return APIResponse(code=code, message=message, data=data, status_code=status_code)
