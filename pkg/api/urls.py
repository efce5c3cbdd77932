from django.urls import path, include
from .views import health_check

urlpatterns = [
    path("health/", health_check, name="health-check"),
    path("codes/", include("apps.codes.urls")),
    path("runs/", include("apps.experiments.urls")),
    path("keybudget/", include("apps.security.urls")),
]
