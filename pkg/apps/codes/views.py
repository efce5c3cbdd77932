from django.http import HttpResponse
from rest_framework import viewsets
from rest_framework.decorators import action

from .models import RegisteredCode
from .serializers import RegisteredCodeSerializer
from sp_recon.utils.responses import success_response


class RegisteredCodeViewSet(viewsets.ReadOnlyModelViewSet):
    serializer_class = RegisteredCodeSerializer
    queryset = RegisteredCode.objects.all()

    def list(self, request, *args, **kwargs):
        serializer = self.get_serializer(self.get_queryset(), many=True)
        return success_response(serializer.data)

    def retrieve(self, request, *args, **kwargs):
        serializer = self.get_serializer(self.get_object())
        return success_response(serializer.data)

    @action(detail=True, methods=["get"])
    def alist(self, request, pk=None):
        # raw text so Bob can fetch exactly the matrix Alice registered
        return HttpResponse(self.get_object().alist, content_type="text/plain")
