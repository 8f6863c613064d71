"""The django_utility_space test package."""
