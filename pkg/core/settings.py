# core/settings.py
import logging
import math
import os
from typing import Any, Dict, Mapping, Optional

from .exceptions import ConfigError
from .yaml_utils import load_yaml_file

logger = logging.getLogger(__name__)

# Every tunable of the toolkit. CLI flags override environment variables,
# which override a settings file, which overrides these defaults.
DEFAULT_SETTINGS: Dict[str, Any] = {
    "tol_norm": 1e-12,
    "tol_triality": 1e-10,
    "tol_statefile": 1e-9,
    "tol_equidistance": 1e-10,
    "grid_polar": 200,
    "grid_azimuthal": 400,
    "default_seed": 0,
    "default_samples": 10000,
    "default_gamma_list": [0.0, 0.25, 0.5, 0.75, 1.0],
    "default_grid": "0:1:0.01",
    "float_digits": 12,
    "workers": 1,
}

# env var -> (settings key, parser)
ENV_OVERRIDES = {
    "QUANTON_SEED": ("default_seed", int),
    "QUANTON_SAMPLES": ("default_samples", int),
    "QUANTON_WORKERS": ("workers", int),
}

# smallest accepted value of the integer settings; every tol_* must be positive
_LOWER_BOUNDS = {"grid_polar": 2, "grid_azimuthal": 1, "default_samples": 1, "float_digits": 1, "workers": 1, "default_seed": 0}


def load_settings(path: Optional[str] = None, env: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
    """
    Builds the effective settings dictionary.

    Args:
        path (str, optional): A YAML file with a mapping of settings keys to override.
        env (Mapping[str, str], optional): Environment to read ``QUANTON_*`` overrides from.
            Defaults to ``os.environ``.

    Returns:
        Dict[str, Any]: A fresh dictionary; ``DEFAULT_SETTINGS`` is never mutated.

    Raises:
        ConfigError: If the file is not a mapping or names an unknown key, if a
            value cannot be converted to the type of its default or lies out of
            range, or if an environment override cannot be parsed.
    """
    settings = dict(DEFAULT_SETTINGS)
    settings["default_gamma_list"] = list(DEFAULT_SETTINGS["default_gamma_list"])

    if path:
        file_settings = load_yaml_file(path, error_cls=ConfigError)
        if file_settings is None:
            file_settings = {}
        if not isinstance(file_settings, dict):
            raise ConfigError(f"Settings file {path} must contain a mapping, got {type(file_settings).__name__}")
        unknown = sorted(set(file_settings) - set(DEFAULT_SETTINGS))
        if unknown:
            raise ConfigError(f"Unknown settings in {path}: {', '.join(unknown)}")
        for key, value in file_settings.items():
            settings[key] = _coerce(key, value, path)
        logger.debug("Loaded %d settings from %s", len(file_settings), path)

    env = os.environ if env is None else env
    for var, (key, parse) in ENV_OVERRIDES.items():
        raw = env.get(var)
        if raw is None or raw == "":
            continue
        try:
            settings[key] = parse(raw)
        except ValueError as e:
            raise ConfigError(f"Invalid value for {var}: {raw!r} ({e})") from e
        logger.debug("Setting %s overridden by %s", key, var)

    _check_bounds(settings)
    return settings


def _coerce(key: str, value: Any, source: str) -> Any:
    """Converts a settings-file value to the type of its default; quoted numbers are accepted."""
    default = DEFAULT_SETTINGS[key]
    try:
        if isinstance(value, bool):
            raise ValueError("booleans are not settings values")
        if isinstance(default, list):
            if not isinstance(value, list):
                raise ValueError("expected a list")
            return [_to_float(v) for v in value]
        if isinstance(default, int):
            if isinstance(value, float) and not value.is_integer():
                raise ValueError("expected an integer")
            return int(value)
        if isinstance(default, float):
            return _to_float(value)
        if not isinstance(value, str):
            raise ValueError("expected a string")
        return value
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid value for {key} in {source}: {value!r} ({e})") from e


def _to_float(value: Any) -> float:
    if isinstance(value, bool):
        raise ValueError("booleans are not numbers")
    result = float(value)
    if not math.isfinite(result):
        raise ValueError("not a finite number")
    return result


def _check_bounds(settings: Dict[str, Any]) -> None:
    for key, low in _LOWER_BOUNDS.items():
        if settings[key] < low:
            raise ConfigError(f"Setting {key} must be at least {low}, got {settings[key]}")
    for key, value in settings.items():
        if key.startswith("tol_") and not value > 0.0:
            raise ConfigError(f"Setting {key} must be positive, got {value}")
