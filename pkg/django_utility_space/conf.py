"""Settings lookup for django_utility_space.

Projects may override the defaults with a dict in their settings:

    UTILITY_SPACE = {
        "INDIFFERENCE_TOL": 1e-9,
        "TIE_TOL": 1e-9,
        "CONE_TOL": 1e-9,
        "THREADS": 4,
        "MAX_API_POPULATION": 100000,
    }

The UTILGEO_THREADS environment variable takes precedence over THREADS.
"""

import os
from typing import Any

from django.conf import settings

from django_utility_space import constants

DEFAULTS = {
    "INDIFFERENCE_TOL": constants.INDIFFERENCE_TOL,
    "TIE_TOL": constants.TIE_TOL,
    "CONE_TOL": constants.CONE_TOL,
    "THREADS": 1,
    "MAX_API_POPULATION": 100000,
}

THREADS_ENV = "UTILGEO_THREADS"


def get_setting(name: str) -> Any:
    """Get a django_utility_space setting, falling back to the package default.

    :param name: The key in the UTILITY_SPACE settings dict.
    :raises KeyError: If the name is not a known setting.
    :return: The configured value.
    """
    if name not in DEFAULTS:
        raise KeyError(f"Unknown django_utility_space setting '{name}'")

    overrides = {}
    if settings.configured:
        overrides = getattr(settings, "UTILITY_SPACE", {}) or {}
    return overrides.get(name, DEFAULTS[name])


def get_thread_count() -> int:
    """Return the number of worker threads for population generation.

    :raises ValueError: If UTILGEO_THREADS is set but is not a positive integer.
    :return: The worker count.
    """
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw == "":
        return max(1, int(get_setting("THREADS")))

    try:
        threads = int(raw)
    except ValueError as exc:
        raise ValueError(f"{THREADS_ENV} must be an integer, got '{raw}'") from exc
    if threads < 1:
        raise ValueError(f"{THREADS_ENV} must be at least 1, got {threads}")
    return threads
