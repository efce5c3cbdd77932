from rest_framework.routers import DefaultRouter
from .views import RegisteredCodeViewSet

router = DefaultRouter()
router.register(r"", RegisteredCodeViewSet, basename="code")

urlpatterns = router.urls
