"""
App-wide defaults, overridable through the PPGMASK dict in Django settings.
"""

from typing import Any

from django.conf import settings

DEFAULTS: dict[str, Any] = {
    "BUILD_ID": "dev",
    "MANIFEST_NAME": "manifest.json",
    "DEFAULT_WINDOW_S": 240.0,
    "PATCH_LEN": 50,
}


class AppSettings:
    """Reads settings.PPGMASK lazily so test overrides are picked up."""

    def __getattr__(self, name: str) -> Any:
        if name not in DEFAULTS:
            raise AttributeError(f"unknown ppgmask setting {name!r}")
        return getattr(settings, "PPGMASK", {}).get(name, DEFAULTS[name])


app_settings = AppSettings()
