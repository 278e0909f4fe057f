from apps.core.exceptions import BusinessException


class CampaignException(BusinessException):

    default_code = 90000
    default_detail = "campaign error"


class CampaignConfigError(CampaignException):

    default_code = 91000
    default_detail = "invalid campaign config"


class GridPlacementError(CampaignException):

    default_code = 91001
    default_detail = "cannot place receiver grids"

    def __init__(self, detail=None, code=None, achieved: int = 0, requested: int = 0):
        super().__init__(detail, code)
        self.achieved = achieved
        self.requested = requested

    @property
    def data(self) -> dict:
        return {"achieved": self.achieved, "requested": self.requested}


class CampaignFailed(CampaignException):

    default_code = 91002
    default_detail = "campaign failed"


class CampaignRunNotFound(CampaignException):

    default_code = 91003
    default_detail = "campaign run not found"


class CampaignDispatchFailed(CampaignException):

    default_code = 91004
    default_detail = "campaign task dispatch failed"
