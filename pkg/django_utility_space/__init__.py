"""The django_utility_space package."""
