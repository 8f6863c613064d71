"""Command and API tests for django_utility_space."""
