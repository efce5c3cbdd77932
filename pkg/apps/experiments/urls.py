from rest_framework.routers import DefaultRouter

from .views import ExperimentRunViewSet

router = DefaultRouter()
router.register(r"", ExperimentRunViewSet, basename="run")

urlpatterns = router.urls
