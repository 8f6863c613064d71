"""URLs for the django_utility_space app."""


from django.urls import include, path
from rest_framework.routers import DefaultRouter

from .views import UtilitySpaceViewSet

router = DefaultRouter()
router.register(r"", UtilitySpaceViewSet, basename="utility-space")

urlpatterns = [
    path("", include(router.urls)),
]
