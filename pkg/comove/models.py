"""
Data models shared by the analysis modules.

Arrays held by the models are marked read-only on construction; a model is
safe to share between readers once built.
"""
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .exceptions import ArgumentError, SampleSizeError, UnknownColumnError, ValidationError

SIGNIFICANCE_LEVELS: Tuple[str, ...] = ("10%", "5%", "1%")


def _frozen(values: Any, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


class TrendSpec(str, Enum):
    """Deterministic terms of a unit-root test regression."""
    NONE = "none"
    CONSTANT = "constant"
    CONSTANT_AND_LINEAR = "constant_and_linear"

    @property
    def regression(self) -> str:
        """Short code used by the MacKinnon response surface ('n', 'c', 'ct')."""
        return {"none": "n", "constant": "c", "constant_and_linear": "ct"}[self.value]

    @property
    def n_deterministic(self) -> int:
        return {"none": 0, "constant": 1, "constant_and_linear": 2}[self.value]

    @property
    def title(self) -> str:
        return {
            "none": "None",
            "constant": "Constant",
            "constant_and_linear": "Constant and Linear Trend",
        }[self.value]


class UnitRootTest(str, Enum):
    """Unit-root and stationarity tests."""
    ADF = "ADF"
    PP = "PP"
    KPSS = "KPSS"


class BoundaryRule(str, Enum):
    """Boundary extension used by the a trous transform."""
    SYMMETRIC = "symmetric"
    PERIODIC = "periodic"


@dataclass(frozen=True, eq=False)
class RawSeries:
    """Date-stamped univariate observations loaded from one file."""
    name: str
    dates: Tuple[date, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'dates', tuple(self.dates))
        object.__setattr__(self, 'values', _frozen(self.values))
        if self.values.ndim != 1 or len(self.values) != len(self.dates):
            raise ValidationError(
                f"Series '{self.name}' has {len(self.dates)} dates but {self.values.size} values"
            )
        if len(self.dates) == 0:
            raise ValidationError(f"Series '{self.name}' is empty")
        if not np.all(np.isfinite(self.values)):
            raise ValidationError(f"Series '{self.name}' contains non-finite values")
        for i in range(1, len(self.dates)):
            if self.dates[i] <= self.dates[i - 1]:
                raise ValidationError(
                    f"Series '{self.name}' dates are not strictly increasing at {self.dates[i]}"
                )

    def __len__(self) -> int:
        return len(self.dates)

    def renamed(self, name: str) -> 'RawSeries':
        return RawSeries(name=name, dates=self.dates, values=self.values)

    def to_dict(self) -> Dict[str, Any]:
        """Convert the series to a dictionary."""
        return {
            'name': self.name,
            'dates': [d.isoformat() for d in self.dates],
            'values': self.values.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RawSeries':
        """Create a series from a dictionary."""
        return cls(
            name=data['name'],
            dates=tuple(date.fromisoformat(d) for d in data['dates']),
            values=np.asarray(data['values'], dtype=float),
        )


@dataclass(frozen=True, eq=False)
class AlignedPanel:
    """N weekly observations of K named variables on a common date grid."""
    MIN_OBS = 8

    dates: Tuple[date, ...]
    columns: Mapping[str, np.ndarray]

    def __post_init__(self):
        object.__setattr__(self, 'dates', tuple(self.dates))
        frozen = {name: _frozen(col) for name, col in self.columns.items()}
        object.__setattr__(self, 'columns', frozen)
        n = len(self.dates)
        for name, col in frozen.items():
            if col.ndim != 1 or col.size != n:
                raise ValidationError(
                    f"Panel column '{name}' has {col.size} rows, expected {n}"
                )
            if not np.all(np.isfinite(col)):
                raise ValidationError(f"Panel column '{name}' contains missing cells")
        if n < self.MIN_OBS:
            raise SampleSizeError(f"Panel needs at least {self.MIN_OBS} weeks, got {n}")

    @property
    def n_obs(self) -> int:
        return len(self.dates)

    @property
    def names(self) -> List[str]:
        return list(self.columns)

    def column(self, name: str) -> np.ndarray:
        """Return a column by name.

        Raises:
            UnknownColumnError: If the panel has no such column
        """
        try:
            return self.columns[name]
        except KeyError:
            raise UnknownColumnError(
                f"Unknown column '{name}'; available: {', '.join(self.columns)}"
            ) from None

    def matrix(self, names: Optional[Sequence[str]] = None) -> np.ndarray:
        """Stack the named columns (all by default) into an N x K matrix."""
        names = list(names) if names is not None else self.names
        return np.column_stack([self.column(n) for n in names])

    def select(self, names: Sequence[str]) -> 'AlignedPanel':
        return AlignedPanel(dates=self.dates, columns={n: self.column(n) for n in names})

    def rows(self, start: int, end: int) -> 'AlignedPanel':
        """Half-open row slice [start, end)."""
        return AlignedPanel(
            dates=self.dates[start:end],
            columns={n: c[start:end] for n, c in self.columns.items()},
        )

    def as_series(self, name: str) -> RawSeries:
        return RawSeries(name=name, dates=self.dates, values=self.column(name))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'dates': [d.isoformat() for d in self.dates],
            'columns': {n: c.tolist() for n, c in self.columns.items()},
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'AlignedPanel':
        return cls(
            dates=tuple(date.fromisoformat(d) for d in data['dates']),
            columns={n: np.asarray(v, dtype=float) for n, v in data['columns'].items()},
        )


@dataclass(frozen=True, eq=False)
class RegressionReport:
    """OLS fit with intercept and its ANOVA summary."""
    intercept: float
    coefficients: np.ndarray
    residuals: np.ndarray
    r_squared: float
    adj_r_squared: float
    f_statistic: float
    f_p_value: float
    durbin_watson: float
    std_errors: np.ndarray
    t_values: np.ndarray
    p_values: np.ndarray
    regressors: Tuple[str, ...] = ()
    dependent: str = "y"

    @property
    def slope(self) -> float:
        """Slope b1 of a single-regressor fit (first slope otherwise)."""
        return float(self.coefficients[0])

    @property
    def n_obs(self) -> int:
        return int(self.residuals.size)

    @property
    def df_model(self) -> int:
        return int(self.coefficients.size)

    @property
    def df_resid(self) -> int:
        return self.n_obs - self.df_model - 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            'dependent': self.dependent,
            'regressors': list(self.regressors),
            'intercept': self.intercept,
            'coefficients': self.coefficients.tolist(),
            'std_errors': self.std_errors.tolist(),
            't_values': self.t_values.tolist(),
            'p_values': self.p_values.tolist(),
            'r_squared': self.r_squared,
            'adj_r_squared': self.adj_r_squared,
            'f_statistic': self.f_statistic,
            'f_p_value': self.f_p_value,
            'durbin_watson': self.durbin_watson,
            'n_obs': self.n_obs,
        }


@dataclass(frozen=True)
class UnitRootReport:
    """Outcome of one ADF, PP or KPSS test."""
    test: UnitRootTest
    statistic: float
    p_value: float
    lags: int
    trend: TrendSpec
    critical_values: Mapping[str, float]
    reject_at: Tuple[str, ...]
    n_obs: int = 0
    p_value_bound: Optional[str] = None

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValidationError(f"p-value {self.p_value} outside [0, 1]")

    @property
    def rejected(self) -> bool:
        """True when the null is rejected at 5%."""
        return "5%" in self.reject_at

    def to_dict(self) -> Dict[str, Any]:
        return {
            'test': self.test.value,
            'statistic': self.statistic,
            'p_value': self.p_value,
            'p_value_bound': self.p_value_bound,
            'lags': self.lags,
            'trend': self.trend.value,
            'critical_values': dict(self.critical_values),
            'reject_at': list(self.reject_at),
            'n_obs': self.n_obs,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'UnitRootReport':
        data = dict(data)
        data['test'] = UnitRootTest(data['test'])
        data['trend'] = TrendSpec(data['trend'])
        data['reject_at'] = tuple(data['reject_at'])
        return cls(**data)


@dataclass(frozen=True, eq=False)
class JohansenReport:
    """Johansen trace test with linear trend."""
    eigenvalues: np.ndarray
    trace_stats: np.ndarray
    critical_values: Mapping[int, Mapping[str, float]]
    eigenvectors: np.ndarray
    lag_order: int
    variables: Tuple[str, ...] = ()
    n_obs: int = 0

    def rank(self, level: str = "5%") -> int:
        """Cointegration rank chosen by the sequential trace procedure."""
        for r, stat in enumerate(self.trace_stats):
            if stat <= self.critical_values[r][level]:
                return r
        return len(self.trace_stats)

    def rejects(self, r: int, level: str = "5%") -> bool:
        """True when H0: rank <= r is rejected at the given level."""
        return bool(self.trace_stats[r] > self.critical_values[r][level])

    def to_dict(self) -> Dict[str, Any]:
        return {
            'variables': list(self.variables),
            'eigenvalues': self.eigenvalues.tolist(),
            'trace_stats': self.trace_stats.tolist(),
            'critical_values': {str(r): dict(v) for r, v in self.critical_values.items()},
            'eigenvectors': self.eigenvectors.tolist(),
            'lag_order': self.lag_order,
            'n_obs': self.n_obs,
        }


@dataclass(frozen=True, eq=False)
class VarResult:
    """Per-equation OLS estimate of a VAR(p) with intercept."""
    intercept: np.ndarray
    coefficients: np.ndarray
    residuals: np.ndarray
    sigma: np.ndarray
    lag_order: int
    aic: float
    variables: Tuple[str, ...] = ()

    def lag_matrix(self, lag: int) -> np.ndarray:
        """Coefficient matrix A_lag (K x K), rows are equations."""
        if not 1 <= lag <= self.lag_order:
            raise ArgumentError(f"lag must be in [1, {self.lag_order}], got {lag}")
        return self.coefficients[lag - 1]


@dataclass(frozen=True)
class GrangerReport:
    """F-test of whether lags of `independent` improve prediction of `dependent`."""
    dependent: str
    independent: str
    lag_order: int
    f_statistic: float
    p_value: float
    df_num: int = 0
    df_den: int = 0
    ssr_restricted: float = 0.0
    ssr_unrestricted: float = 0.0
    scale: Optional[int] = None

    @property
    def significance_code(self) -> str:
        return significance_code(self.p_value)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'dependent': self.dependent,
            'independent': self.independent,
            'lag_order': self.lag_order,
            'f_statistic': self.f_statistic,
            'p_value': self.p_value,
            'df_num': self.df_num,
            'df_den': self.df_den,
            'scale': self.scale,
        }


def significance_code(p_value: float) -> str:
    """Map a p-value to the usual '***', '**', '*', '.', ' ' codes."""
    if p_value <= 0.001:
        return "***"
    if p_value <= 0.01:
        return "**"
    if p_value <= 0.05:
        return "*"
    if p_value <= 0.1:
        return "."
    return " "


@dataclass(frozen=True, eq=False)
class ScaleDecomposition:
    """Non-decimated Haar decomposition: J full-length details plus a smooth."""
    details: np.ndarray
    smooth: np.ndarray
    J: int
    boundary_rule: BoundaryRule = BoundaryRule.SYMMETRIC

    def __post_init__(self):
        details = _frozen(np.atleast_2d(self.details))
        smooth = _frozen(self.smooth)
        object.__setattr__(self, 'details', details)
        object.__setattr__(self, 'smooth', smooth)
        if self.J < 1 or details.shape[0] != self.J:
            raise ValidationError(f"Expected {self.J} detail rows, got {details.shape[0]}")
        if details.shape[1] != smooth.size:
            raise ValidationError("Detail and smooth lengths differ")

    @property
    def n_obs(self) -> int:
        return int(self.smooth.size)

    def detail(self, j: int) -> np.ndarray:
        """Detail series d_j for j in 1..J."""
        if not 1 <= j <= self.J:
            raise ArgumentError(f"scale must be in [1, {self.J}], got {j}")
        return self.details[j - 1]


def scale_band(j: int) -> Tuple[int, int]:
    """Period band (in weeks) covered by dyadic scale j."""
    return 2 ** j, 2 ** (j + 1)


def scale_label(j: int) -> str:
    lo, hi = scale_band(j)
    return f"Scale {j} ({lo}-{hi} weeks)"


@dataclass(frozen=True, eq=False)
class Periodogram:
    """Power of a series on a frequency grid (cycles per week)."""
    frequencies: np.ndarray
    power: np.ndarray
    aliased: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))
    demeaned: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'frequencies', _frozen(self.frequencies))
        object.__setattr__(self, 'power', _frozen(self.power))
        aliased = self.aliased if self.aliased.size else self.frequencies > 0.5
        object.__setattr__(self, 'aliased', _frozen(aliased, dtype=bool))

    def peak_frequency(self) -> float:
        return float(self.frequencies[int(np.argmax(self.power))])


@dataclass(frozen=True, eq=False)
class CwtField:
    """Continuous wavelet coefficients on a (scale x time) grid."""
    coefficients: np.ndarray
    scales: np.ndarray
    periods: np.ndarray
    coi: np.ndarray
    dt: float = 1.0
    omega0: float = 6.0

    @property
    def shape(self) -> Tuple[int, int]:
        return self.coefficients.shape

    @property
    def n_obs(self) -> int:
        return int(self.coefficients.shape[1])

    def inside_coi(self) -> np.ndarray:
        """Boolean (scale x time) mask of cells free of edge effects."""
        return self.periods[:, None] <= self.coi[None, :]


@dataclass(frozen=True, eq=False)
class CoherenceField:
    """Wavelet coherence (or multiple coherence) on a (scale x time) grid."""
    values: np.ndarray
    scales: np.ndarray
    periods: np.ndarray
    coi: np.ndarray
    phase: Optional[np.ndarray] = None
    significance: Optional[np.ndarray] = None
    undefined: Optional[np.ndarray] = None
    clamped: int = 0

    def inside_coi(self) -> np.ndarray:
        return self.periods[:, None] <= self.coi[None, :]

    def with_significance(self, p_values: np.ndarray) -> 'CoherenceField':
        return CoherenceField(
            values=self.values, scales=self.scales, periods=self.periods, coi=self.coi,
            phase=self.phase, significance=p_values, undefined=self.undefined,
            clamped=self.clamped,
        )


@dataclass(frozen=True)
class UnitRootRow:
    """Unit-root results for one series under one trend specification."""
    series: str
    reports: Mapping[UnitRootTest, UnitRootReport]


@dataclass(frozen=True, eq=False)
class PortfolioResult:
    """Portfolio built from a cointegrating vector and its ADF test."""
    weights: np.ndarray
    series: np.ndarray
    adf: UnitRootReport
    variables: Tuple[str, ...] = ()
