"""Management commands for django_utility_space."""
