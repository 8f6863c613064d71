"""The testproject hosting the django_utility_space app."""
