"""
Layered settings: built-in defaults, then an optional YAML file, then flags.
"""
import copy
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml

from ..exceptions import ConfigError

logger = logging.getLogger(__name__)


class SettingsManager:
    """Resolves analysis settings by dot-notation key."""

    def __init__(self, config_path: Optional[Union[str, Path]] = None):
        """Initialize the settings manager.

        Args:
            config_path: Optional YAML file whose values override the defaults
        """
        self.defaults = self._get_default_settings()
        self.settings: Dict[str, Any] = copy.deepcopy(self.defaults)
        self.config_path = Path(config_path) if config_path else None
        if self.config_path is not None:
            self.load_file(self.config_path)

    def _get_default_settings(self) -> Dict[str, Any]:
        """Get default settings.

        Returns:
            Dictionary of default settings
        """
        return {
            "inputs": {
                "nifty": None,
                "gold_usd": None,
                "wti_usd": None,
                "usdinr": None,
            },
            "ingest": {
                "date_column": "date",
                "value_column": None,
                "date_format": None,
                "tolerance_days": 3,
            },
            "correlation": {
                "windows": [[0, 200], [200, 700], [700, 1200]],
            },
            "anova": {
                "dependent": "nifty",
                "regressors": ["oil", "gold"],
            },
            "unitroot": {
                "trends": ["none", "constant", "constant_and_linear"],
                "tests": ["ADF", "PP", "KPSS"],
                "columns": None,
                "adf_lags": None,
                "adf_max_lags": None,
                "pp_bandwidth": 23,
                "kpss_bandwidth": 23,
            },
            "johansen": {
                "lag_order": 2,
            },
            "dwt": {
                "levels": 7,
                "boundary": "symmetric",
            },
            "granger": {
                "lag_order": 3,
                "max_lags": 8,
            },
            "fourier": {
                "column": "nifty",
                "max_index": 500,
                "demean": False,
            },
            "cwt": {
                "voices": 8,
                "min_scale": 2.0,
                "max_period": 512.0,
                "omega0": 6.0,
                "time_smoothing": 2.0,
                "scale_smoothing": 0.6,
                "n_surrogates": 300,
                "pairs": [["nifty", "gold"], ["nifty", "oil"], ["gold", "oil"]],
            },
            "run": {
                "seed": 42,
                "output_dir": None,
                "formats": ["markdown", "csv"],
                "progress": True,
            },
        }

    def load_file(self, path: Path) -> None:
        """Merge a YAML mapping (nested or flat keys) into the settings.

        Raises:
            ConfigError: If the file is unreadable or not a mapping
        """
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"Cannot read config file {path}: {e}", path=str(path)) from e
        if not isinstance(data, Mapping):
            raise ConfigError(f"Config file {path} must contain a key-value mapping", path=str(path))
        logger.info("Loaded settings from %s", path)
        self.update(self._flatten(data))

    def _flatten(self, data: Mapping[str, Any], prefix: str = "") -> Dict[str, Any]:
        flat: Dict[str, Any] = {}
        for key, value in data.items():
            key = str(key).replace('-', '_')
            dotted = f"{prefix}{key}"
            if isinstance(value, Mapping) and dotted in self.defaults:
                flat.update(self._flatten(value, prefix=f"{dotted}."))
            else:
                flat[dotted] = value
        return flat

    def resolve_key(self, key: str) -> str:
        """Expand a bare leaf name ('voices') to its dotted form ('cwt.voices').

        Raises:
            ConfigError: If the key is unknown or ambiguous
        """
        if '.' in key:
            section, leaf = key.split('.', 1)
            if section in self.defaults and leaf in self.defaults[section]:
                return key
            raise ConfigError(f"Unknown setting '{key}'")
        matches = [f"{s}.{key}" for s, values in self.defaults.items() if key in values]
        if len(matches) != 1:
            reason = "ambiguous" if matches else "unknown"
            raise ConfigError(f"Setting '{key}' is {reason}")
        return matches[0]

    def get(self, key: str, default: Any = None) -> Any:
        """Get a setting value by key.

        Args:
            key: Setting key in dot notation (e.g., 'cwt.voices')
            default: Default value if key is not found

        Returns:
            The setting value or default if not found
        """
        current: Any = self.settings
        try:
            for k in key.split('.'):
                current = current[k]
            return current
        except (KeyError, TypeError):
            return default

    def set(self, key: str, value: Any) -> None:
        """Set a setting value by key."""
        section, leaf = self.resolve_key(key).split('.', 1)
        self.settings[section][leaf] = value

    def update(self, values: Mapping[str, Any], skip_none: bool = False) -> None:
        """Set several values at once; flags pass skip_none to keep lower layers."""
        for key, value in values.items():
            if skip_none and value is None:
                continue
            self.set(key, value)

    def reset_to_defaults(self) -> None:
        """Reset all settings to their default values."""
        self.settings = copy.deepcopy(self.defaults)

    def as_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(self.settings)
