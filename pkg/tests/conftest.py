"""
Pytest configuration and fixtures for testing.
"""
import os
import sys
from pathlib import Path
from unittest.mock import patch

import numpy as np
import pytest

# Add the project root to the Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

from comove.models import AlignedPanel  # noqa: E402
from tests.synthetic import planted_panel, weekly_dates, write_panel_inputs, write_series_csv  # noqa: E402

ORIGINAL_DATA_ENV = "COMOVE_ORIGINAL_DATA"


@pytest.fixture
def rng():
    """Fixture to provide a seeded generator."""
    return np.random.default_rng(20181106)


@pytest.fixture
def csv_writer(tmp_path):
    """Fixture returning write(name, values, dates=None, value_column='value') -> path."""
    def write(name, values, dates=None, value_column="value", date_format="%Y-%m-%d"):
        values = list(values)
        dates = dates if dates is not None else weekly_dates(len(values))
        return write_series_csv(tmp_path / name, dates, values, value_column, date_format)
    return write


@pytest.fixture
def planted(rng) -> AlignedPanel:
    """Fixture to provide a 512-week panel with planted cointegration and a shared cycle."""
    return planted_panel(rng, 512)


@pytest.fixture
def panel_inputs(tmp_path, planted):
    """Fixture writing the four raw input CSVs of the planted panel."""
    directory = tmp_path / "inputs"
    directory.mkdir()
    return write_panel_inputs(directory, planted)


@pytest.fixture
def clean_env(tmp_path):
    """Fixture isolating the comove environment variables and working directory."""
    with patch.dict(os.environ, {}, clear=False):
        os.environ.pop("COMOVE_OUTPUT_DIR", None)
        cwd = os.getcwd()
        os.chdir(tmp_path)
        try:
            yield tmp_path
        finally:
            os.chdir(cwd)


@pytest.fixture
def original_data_dir():
    """Directory with the original price files; skips when not configured."""
    value = os.environ.get(ORIGINAL_DATA_ENV)
    if not value or not Path(value).is_dir():
        pytest.skip(f"{ORIGINAL_DATA_ENV} is not set to a directory with the original price files")
    return Path(value)
