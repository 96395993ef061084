"""
Settings for running the ppgmask commands from manage.py.

Only the ppgmask app is installed; there are no models, views or URLs.
PPGMASK_LOG_LEVEL sets the level of the ppgmask and domain loggers.
"""

import os
from pathlib import Path

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get("DJANGO_SECRET_KEY", "ppgmask-local")
DEBUG = False

INSTALLED_APPS = [
    "ppgmask",
]

DATABASES = {
    "default": {"ENGINE": "django.db.backends.sqlite3", "NAME": BASE_DIR / "db.sqlite3"}
}

USE_TZ = True

PPGMASK = {
    "BUILD_ID": os.environ.get("PPGMASK_BUILD_ID", "dev"),
    "DEFAULT_WINDOW_S": 240.0,
}

LOG_LEVEL = os.environ.get("PPGMASK_LOG_LEVEL", "INFO")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "plain": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "plain"},
    },
    "loggers": {
        "ppgmask": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
        "domain": {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False},
    },
}
