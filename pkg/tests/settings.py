# tests/settings.py
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent

SECRET_KEY = "test-secret"
DEBUG = True

INSTALLED_APPS = [
    "ppgmask",
]

DATABASES = {
    "default": {"ENGINE": "django.db.backends.sqlite3", "NAME": ":memory:"}
}

USE_TZ = True

PPGMASK = {
    "BUILD_ID": "test",
}

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "handlers": {"console": {"class": "logging.StreamHandler"}},
    "loggers": {
        "ppgmask": {"handlers": ["console"], "level": "WARNING"},
        "domain": {"handlers": ["console"], "level": "WARNING"},
    },
}
