"""URL configuration for the testproject.

The utility space endpoints live under /utility/, for example
POST /utility/distance/.
"""
from django.urls import include, path

from django_utility_space import urls as django_utility_space_urls

urlpatterns = [
    path("utility/", include(django_utility_space_urls.router.urls)),
]
