from rest_framework.permissions import AllowAny
from rest_framework.views import APIView

from apps.campaigns.api.serializers.run_serializer import RicianFitRequestSerializer, RicianFitResponseSerializer
from apps.core.response import success_response
from apps.stats.services.rician_service import fit_envelope


class RicianFitView(APIView):

    permission_classes = [AllowAny]

    def post(self, request):
        serializer = RicianFitRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        result = fit_envelope(serializer.validated_data["amplitudes"])
        return success_response(data=RicianFitResponseSerializer(result).data)
