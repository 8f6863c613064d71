"""Management command support for django_utility_space."""
