from rest_framework import viewsets

from sp_recon.utils.responses import success_response
from .models import ExperimentRun
from .serializers import ExperimentRunDetailSerializer, ExperimentRunSerializer


class ExperimentRunViewSet(viewsets.ReadOnlyModelViewSet):
    queryset = ExperimentRun.objects.prefetch_related("points")

    def get_serializer_class(self):
        if self.action == "retrieve":
            return ExperimentRunDetailSerializer
        return ExperimentRunSerializer

    def get_queryset(self):
        queryset = super().get_queryset()
        kind = self.request.query_params.get("kind")  # optional filter
        if kind:
            queryset = queryset.filter(kind=kind)
        return queryset

    def list(self, request, *args, **kwargs):
        serializer = self.get_serializer(self.get_queryset(), many=True)
        return success_response(serializer.data)

    def retrieve(self, request, *args, **kwargs):
        serializer = self.get_serializer(self.get_object())
        return success_response(serializer.data)
