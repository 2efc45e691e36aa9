from pathlib import Path
from typing import Any

DEFAULTS = {
    "INERTIA_PRECISION": 60,
    "INERTIA_MIN_DIGITS": 10,
    "INERTIA_CATALOG_DIR": Path(__file__).resolve().parent.parent / "catalogs",
    "INERTIA_ENUMERATION_BUDGET": 20000,
    "INERTIA_REALIZE_BUDGET": 4000,
    "INERTIA_SEED": 20240229,
    "INERTIA_LOG_LEVEL": "INFO",
}


def get(name: str) -> Any:
    """Setting value from django.conf.settings, falling back to DEFAULTS."""
    try:
        from django.conf import settings

        if settings.configured:
            return getattr(settings, name, DEFAULTS[name])
    except ImportError:
        pass
    return DEFAULTS[name]
