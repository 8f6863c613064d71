"""Django settings for the testproject of django_utility_space.

The project exists to run the management commands and the REST endpoints of
the app, and to host their tests.

For more information on this file, see
https://docs.djangoproject.com/en/4.2/topics/settings/
"""

import os

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get(
    "UTILGEO_SECRET_KEY", "django-insecure-utility-space-testproject-key-not-for-production"
)

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = os.environ.get("UTILGEO_DEBUG", "1") == "1"

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "django.contrib.sessions",
    "rest_framework",
    "django_utility_space",
]

MIDDLEWARE = [
    "django.middleware.security.SecurityMiddleware",
    "django.contrib.sessions.middleware.SessionMiddleware",
    "django.middleware.common.CommonMiddleware",
    "django.middleware.csrf.CsrfViewMiddleware",
    "django.contrib.auth.middleware.AuthenticationMiddleware",
]

ROOT_URLCONF = "testproject.urls"

# Database
# https://docs.djangoproject.com/en/4.2/ref/settings/#databases
#
# The app has no models, the database only holds the users of the API.

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": os.environ.get("UTILGEO_DATABASE_NAME", "db.sqlite3"),
    }
}


# REST framework

REST_FRAMEWORK = {
    "DEFAULT_AUTHENTICATION_CLASSES": [
        "rest_framework.authentication.SessionAuthentication",
        "rest_framework.authentication.BasicAuthentication",
    ],
    "DEFAULT_RENDERER_CLASSES": ["rest_framework.renderers.JSONRenderer"],
}


# django_utility_space

UTILITY_SPACE = {
    "INDIFFERENCE_TOL": float(os.environ.get("UTILGEO_INDIFFERENCE_TOL", "1e-9")),
    "TIE_TOL": float(os.environ.get("UTILGEO_TIE_TOL", "1e-9")),
    "CONE_TOL": float(os.environ.get("UTILGEO_CONE_TOL", "1e-9")),
    "THREADS": 1,
    "MAX_API_POPULATION": int(os.environ.get("UTILGEO_MAX_API_POPULATION", "100000")),
}


# Logging
#
# Diagnostics go to standard error so that the commands keep standard output
# for data.

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "stderr": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "plain",
        },
    },
    "loggers": {
        "django_utility_space": {
            "handlers": ["stderr"],
            "level": os.environ.get("UTILGEO_LOG_LEVEL", "INFO"),
            "propagate": False,
        },
    },
}


# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

USE_TZ = True


# Default primary key field type
# https://docs.djangoproject.com/en/4.2/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"
