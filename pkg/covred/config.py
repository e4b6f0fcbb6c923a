"""
Settings loader
تحميل إعدادات التطبيق من config/settings.yaml
"""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

ENV_PREFIX = "COVRED_"
DEFAULT_SETTINGS_PATH = Path(__file__).parent.parent / "config" / "settings.yaml"

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "app": {"name": "covred", "version": "1.0.0"},
    "field": {"p": 5, "e": 1},
    "oracle": {"max_depth": 64, "max_ramification_index": 40, "max_refinements": 200},
    "output": {"emit": "json", "indent": 2},
    "database": {"enabled": False, "path": "data/covred.db"},
    "logging": {
        "level": "WARNING",
        "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    },
    "performance": {"progress": True},
}

_cache: Optional[Dict[str, Dict[str, Any]]] = None


def _coerce(raw: str, current: Any) -> Any:
    """تحويل قيمة متغير البيئة إلى نوع القيمة الافتراضية"""
    if isinstance(current, bool):
        return raw.strip().lower() in ("1", "true", "yes", "on")
    if isinstance(current, int):
        return int(raw)
    return raw


def load_settings(path: Optional[str] = None) -> Dict[str, Dict[str, Any]]:
    """
    تحميل الإعدادات ودمجها مع القيم الافتراضية

    Variables named COVRED_<SECTION>_<KEY> override the YAML file.

    Args:
        path: مسار ملف الإعدادات (الافتراضي config/settings.yaml)

    Returns:
        قاموس متداخل للإعدادات
    """
    global _cache
    load_dotenv()

    settings = copy.deepcopy(DEFAULTS)
    settings_path = Path(path) if path else DEFAULT_SETTINGS_PATH
    if settings_path.exists():
        with open(settings_path, "r", encoding="utf-8") as fh:
            loaded = yaml.safe_load(fh) or {}
        for section, values in loaded.items():
            if isinstance(values, dict):
                settings.setdefault(section, {}).update(values)
            else:
                settings[section] = values
    elif path:
        logger.warning(f"Settings file not found: {settings_path}")

    for section, values in settings.items():
        if not isinstance(values, dict):
            continue
        for key, current in values.items():
            env_name = f"{ENV_PREFIX}{section}_{key}".upper()
            if env_name in os.environ:
                values[key] = _coerce(os.environ[env_name], current)
                logger.debug(f"Setting {section}.{key} overridden from {env_name}")

    # COVRED_LOG_LEVEL is the short form used in scripts
    if "COVRED_LOG_LEVEL" in os.environ:
        settings["logging"]["level"] = os.environ["COVRED_LOG_LEVEL"]

    _cache = settings
    return settings


def get_setting(dotted: str, default: Any = None) -> Any:
    """
    قراءة إعداد واحد بمسار منقّط مثل "oracle.max_depth"
    """
    settings = _cache if _cache is not None else load_settings()
    node: Any = settings
    for part in dotted.split("."):
        if not isinstance(node, dict) or part not in node:
            return default
        node = node[part]
    return node
