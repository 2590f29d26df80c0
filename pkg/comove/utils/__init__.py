"""
Shared helpers: least squares, seeded substreams and layered settings.
"""

from .regression import LeastSquaresFit, add_constant, lagmat, ols
from .rng import SeedStreams, as_seed_sequence, validate_seed
from .settings import SettingsManager

__all__ = [
    'LeastSquaresFit',
    'add_constant',
    'lagmat',
    'ols',
    'SeedStreams',
    'as_seed_sequence',
    'validate_seed',
    'SettingsManager',
]
