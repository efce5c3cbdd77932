# api/views.py
from django.conf import settings
from django.http import JsonResponse


def health_check(request):
    return JsonResponse({"status": "ok", "threads": settings.RECON["THREADS"]})
