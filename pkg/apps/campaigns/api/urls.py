from django.urls import path

from apps.campaigns.api.views.rician_fit_view import RicianFitView
from apps.campaigns.api.views.run_view import CampaignRunDetailView, CampaignRunListView


urlpatterns = [
    path(
        "runs/",
        CampaignRunListView.as_view(),
        name="campaign-runs",
    ),
    path(
        "runs/<uuid:run_id>/",
        CampaignRunDetailView.as_view(),
        name="campaign-run-detail",
    ),
    path(
        "rician-fit/",
        RicianFitView.as_view(),
        name="campaign-rician-fit",
    ),
]
