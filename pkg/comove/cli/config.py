"""
Validated run configuration assembled from defaults, a YAML file and flags.
"""
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticValidationError, field_validator

from ..exceptions import ConfigError
from ..models import BoundaryRule, TrendSpec, UnitRootTest
from ..utils.rng import MAX_SEED
from ..utils.settings import SettingsManager

logger = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "COMOVE_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "comove-output"
INPUT_NAMES = ("nifty", "gold_usd", "wti_usd", "usdinr")


class RunConfig(BaseModel):
    """Everything one pipeline run needs; immutable once validated."""

    model_config = ConfigDict(frozen=True, extra='forbid')

    nifty: Optional[Path] = None
    gold_usd: Optional[Path] = None
    wti_usd: Optional[Path] = None
    usdinr: Optional[Path] = None

    date_column: str = "date"
    value_column: Optional[str] = None
    date_format: Optional[str] = None
    tolerance_days: int = Field(3, ge=0)

    windows: List[Tuple[int, int]] = [(0, 200), (200, 700), (700, 1200)]
    anova_dependent: str = "nifty"
    anova_regressors: List[str] = ["oil", "gold"]

    trends: List[TrendSpec] = list(TrendSpec)
    unitroot_tests: List[UnitRootTest] = list(UnitRootTest)
    unitroot_columns: Optional[List[str]] = None
    adf_lags: Optional[int] = Field(None, ge=0)
    adf_max_lags: Optional[int] = Field(None, ge=0)
    pp_bandwidth: Optional[int] = Field(23, ge=0)
    kpss_bandwidth: Optional[int] = Field(23, ge=0)

    johansen_lag_order: int = Field(2, ge=1)

    levels: int = Field(7, ge=1, le=10)
    boundary: BoundaryRule = BoundaryRule.SYMMETRIC
    granger_lag_order: Union[int, str] = 3
    granger_max_lags: int = Field(8, ge=1)

    fourier_column: str = "nifty"
    fourier_max_index: int = Field(500, ge=1)
    demean: bool = False

    voices: int = Field(8, ge=1)
    min_scale: float = Field(2.0, gt=0)
    max_period: float = Field(512.0, gt=0)
    omega0: float = Field(6.0, gt=0)
    time_smoothing: float = Field(2.0, gt=0)
    scale_smoothing: float = Field(0.6, gt=0)
    n_surrogates: int = Field(300, ge=100)
    pairs: List[Tuple[str, str]] = [("nifty", "gold"), ("nifty", "oil"), ("gold", "oil")]

    seed: int = Field(42, ge=0, le=MAX_SEED)
    output_dir: Path = Path(DEFAULT_OUTPUT_DIR)
    formats: List[str] = ["markdown", "csv"]
    progress: bool = True

    @field_validator('nifty', 'gold_usd', 'wti_usd', 'usdinr')
    @classmethod
    def _readable(cls, path: Optional[Path]) -> Optional[Path]:
        if path is not None and not (path.is_file() and os.access(path, os.R_OK)):
            raise ValueError(f"input file {path} is not readable")
        return path

    @field_validator('windows')
    @classmethod
    def _ordered_windows(cls, windows: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
        for start, end in windows:
            if start < 0 or start >= end:
                raise ValueError(f"window ({start}, {end}) must satisfy 0 <= start < end")
        return windows

    @field_validator('granger_lag_order')
    @classmethod
    def _granger_lag(cls, value: Union[int, str]) -> Union[int, str]:
        if isinstance(value, str):
            if value.lower() == "aic":
                return "aic"
            if not value.isdigit():
                raise ValueError(f"granger lag order must be a positive integer or 'aic', got {value!r}")
            value = int(value)
        if value < 1:
            raise ValueError(f"granger lag order must be at least 1, got {value}")
        return value

    @field_validator('formats')
    @classmethod
    def _known_formats(cls, formats: List[str]) -> List[str]:
        unknown = [f for f in formats if f not in ("markdown", "csv")]
        if unknown:
            raise ValueError(f"unknown report formats: {unknown}")
        return formats

    def input_paths(self) -> Dict[str, Optional[Path]]:
        return {name: getattr(self, name) for name in INPUT_NAMES}

    def missing_inputs(self) -> List[str]:
        return [name for name, path in self.input_paths().items() if path is None]


# RunConfig field -> settings key
_FIELD_KEYS = {
    "nifty": "inputs.nifty",
    "gold_usd": "inputs.gold_usd",
    "wti_usd": "inputs.wti_usd",
    "usdinr": "inputs.usdinr",
    "date_column": "ingest.date_column",
    "value_column": "ingest.value_column",
    "date_format": "ingest.date_format",
    "tolerance_days": "ingest.tolerance_days",
    "windows": "correlation.windows",
    "anova_dependent": "anova.dependent",
    "anova_regressors": "anova.regressors",
    "trends": "unitroot.trends",
    "unitroot_tests": "unitroot.tests",
    "unitroot_columns": "unitroot.columns",
    "adf_lags": "unitroot.adf_lags",
    "adf_max_lags": "unitroot.adf_max_lags",
    "pp_bandwidth": "unitroot.pp_bandwidth",
    "kpss_bandwidth": "unitroot.kpss_bandwidth",
    "johansen_lag_order": "johansen.lag_order",
    "levels": "dwt.levels",
    "boundary": "dwt.boundary",
    "granger_lag_order": "granger.lag_order",
    "granger_max_lags": "granger.max_lags",
    "fourier_column": "fourier.column",
    "fourier_max_index": "fourier.max_index",
    "demean": "fourier.demean",
    "voices": "cwt.voices",
    "min_scale": "cwt.min_scale",
    "max_period": "cwt.max_period",
    "omega0": "cwt.omega0",
    "time_smoothing": "cwt.time_smoothing",
    "scale_smoothing": "cwt.scale_smoothing",
    "n_surrogates": "cwt.n_surrogates",
    "pairs": "cwt.pairs",
    "seed": "run.seed",
    "output_dir": "run.output_dir",
    "formats": "run.formats",
    "progress": "run.progress",
}

_NULLABLE = frozenset({"unitroot_columns", "value_column", "date_format", "adf_lags", "adf_max_lags", "pp_bandwidth", "kpss_bandwidth"})


def build_run_config(
    config_path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """Layer defaults, the YAML file and flag overrides into a RunConfig.

    Args:
        config_path: Optional YAML settings file
        overrides: Settings keys (dotted or bare leaf) from the command line;
            None values leave lower layers untouched
        environ: Environment used for the default output directory

    Returns:
        Validated RunConfig

    Raises:
        ConfigError: If any layer is unreadable or a value fails validation
    """
    environ = os.environ if environ is None else environ
    settings = SettingsManager(config_path)
    settings.update(overrides or {}, skip_none=True)

    values = {name: settings.get(key) for name, key in _FIELD_KEYS.items()}
    if values["output_dir"] is None:
        values["output_dir"] = environ.get(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR
    values = {k: v for k, v in values.items() if v is not None or k in _NULLABLE}
    try:
        config = RunConfig(**values)
    except PydanticValidationError as e:
        first = e.errors()[0]
        loc = first.get("loc") or ("",)
        field = str(loc[0])
        path = str(values.get(field)) if field in INPUT_NAMES else None
        raise ConfigError(f"Invalid setting '{_FIELD_KEYS.get(field, field)}': {first.get('msg')}", path=path) from e
    logger.debug("Run configuration: %s", config.model_dump())
    return config
