"""App defaults for django_utility_space."""

from django.apps import AppConfig


class DjangoUtilitySpaceConfig(AppConfig):
    """AppConfig for django_utility_space."""

    default_auto_field = "django.db.models.BigAutoField"
    name = "django_utility_space"
    verbose_name = "Utility space geometry"
