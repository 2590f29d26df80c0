"""
comove

Time-domain, frequency-domain and time-frequency co-movement analysis of
crude oil, gold and equity index prices: correlation and regression,
unit-root and cointegration tests, scale-wise Granger causality on a Haar
a trous decomposition, periodogram scans and Morlet wavelet coherence.
"""

__version__ = "0.1.0"

from .cointegration import johansen_trace, portfolio_series
from .cwt import (
    band_mean, cross_wavelet, default_scales, morlet_cwt, multiple_wavelet_coherence, significance,
    smooth, wavelet_coherence, wavelet_power,
)
from .exceptions import (
    AlignmentError, ArgumentError, ComoveError, ConfigError, DataError, NumericalError,
    NumericalRankError, ParseError, ReportCompletenessError, SampleSizeError, SingularDesignError,
    UndefinedStatisticError, UnknownColumnError, UnsupportedSpecError, ValidationError,
)
from .ingest import align_panel, build_analysis_panel, convert_currency, difference, load_csv
from .models import (
    AlignedPanel, BoundaryRule, CoherenceField, CwtField, GrangerReport, JohansenReport, Periodogram,
    PortfolioResult, RawSeries, RegressionReport, ScaleDecomposition, TrendSpec, UnitRootReport,
    UnitRootRow, UnitRootTest, VarResult,
)
from .report import ReportBundle, format_real, render_tables, write_manifest
from .spectral import frequency_scan, index_grid
from .stats import ols_anova, pearson, windowed_correlations
from .unitroot import adf_test, kpss_test, pp_test
from .vargranger import granger_test, scale_granger_matrix, select_var_order, var_fit
from .wavelets import haar_atrous_decompose, reconstruct

__all__ = [
    '__version__',
    # ingest
    'load_csv', 'convert_currency', 'align_panel', 'difference', 'build_analysis_panel',
    # time domain
    'pearson', 'windowed_correlations', 'ols_anova',
    'adf_test', 'pp_test', 'kpss_test',
    'johansen_trace', 'portfolio_series',
    'var_fit', 'select_var_order', 'granger_test', 'scale_granger_matrix',
    # frequency and time-frequency
    'haar_atrous_decompose', 'reconstruct',
    'frequency_scan', 'index_grid',
    'morlet_cwt', 'wavelet_power', 'cross_wavelet', 'smooth', 'default_scales',
    'wavelet_coherence', 'multiple_wavelet_coherence', 'significance', 'band_mean',
    # report
    'ReportBundle', 'format_real', 'render_tables', 'write_manifest',
    # types
    'RawSeries', 'AlignedPanel', 'TrendSpec', 'UnitRootTest', 'BoundaryRule',
    'RegressionReport', 'UnitRootReport', 'UnitRootRow', 'JohansenReport', 'PortfolioResult',
    'VarResult', 'GrangerReport', 'ScaleDecomposition', 'Periodogram', 'CwtField', 'CoherenceField',
    # errors
    'ComoveError', 'ConfigError', 'ArgumentError', 'UnsupportedSpecError', 'DataError', 'ParseError',
    'ValidationError', 'AlignmentError', 'UnknownColumnError', 'SampleSizeError', 'NumericalError',
    'SingularDesignError', 'NumericalRankError', 'UndefinedStatisticError', 'ReportCompletenessError',
]
