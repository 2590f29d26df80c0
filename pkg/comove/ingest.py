"""
Loading, validation, currency conversion and weekly alignment of price series.
"""
import logging
from datetime import date
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from .exceptions import (
    AlignmentError, ArgumentError, ConfigError, ParseError, SampleSizeError, ValidationError,
)
from .models import AlignedPanel, RawSeries

logger = logging.getLogger(__name__)

DEFAULT_DATE_COLUMN = "date"
DEFAULT_TOLERANCE_DAYS = 3
ISO_DATE_FORMAT = "%Y-%m-%d"

# Column names of the analysis panel, in Johansen variable order.
PANEL_COLUMNS = ("oil", "gold", "nifty")
DISPLAY_NAMES = {"oil": "Oil", "gold": "Gold", "nifty": "NSE-Nifty"}


def display_name(column: str) -> str:
    return DISPLAY_NAMES.get(column, column)


def load_csv(
    path: Union[str, Path],
    value_column: Optional[str] = None,
    date_column: str = DEFAULT_DATE_COLUMN,
    date_format: Optional[str] = None,
    name: Optional[str] = None,
) -> RawSeries:
    """Load one date-stamped series from a CSV file.

    Args:
        path: CSV file with a header row
        value_column: Numeric column to read; when omitted the file must have
            exactly one column besides the date column
        date_column: Name of the date column
        date_format: strptime format, ISO 8601 (YYYY-MM-DD) when omitted
        name: Series label, defaults to the value column name

    Returns:
        RawSeries sorted ascending by date

    Raises:
        ConfigError: If the file cannot be read
        ParseError: If a date or value cannot be parsed (carries the 1-based data row)
        ValidationError: If the file is empty, a column is missing or a date repeats
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Input file not found: {path}", path=str(path))
    try:
        frame = pd.read_csv(
            path, dtype=str, keep_default_na=False, skipinitialspace=True, encoding='utf-8'
        )
    except pd.errors.EmptyDataError:
        raise ValidationError(f"{path}: file is empty") from None
    except (OSError, UnicodeDecodeError, pd.errors.ParserError) as e:
        raise ConfigError(f"Cannot read {path}: {e}", path=str(path)) from e

    frame.columns = [str(c).strip() for c in frame.columns]
    if date_column not in frame.columns:
        raise ValidationError(f"{path}: no date column '{date_column}'")
    if value_column is None:
        candidates = [c for c in frame.columns if c != date_column]
        if len(candidates) != 1:
            raise ValidationError(
                f"{path}: cannot choose a value column among {candidates}; name one explicitly"
            )
        value_column = candidates[0]
    elif value_column not in frame.columns:
        raise ValidationError(f"{path}: no value column '{value_column}'")
    if frame.empty:
        raise ValidationError(f"{path}: file has a header but no observations")

    raw_dates = frame[date_column].str.strip()
    raw_values = frame[value_column].str.strip()
    dates = pd.to_datetime(raw_dates, format=date_format or ISO_DATE_FORMAT, errors='coerce')
    values = pd.to_numeric(raw_values, errors='coerce').to_numpy(dtype=float)

    bad_date = dates.isna().to_numpy()
    bad_value = ~np.isfinite(values)
    bad = np.flatnonzero(bad_date | bad_value)
    if bad.size:
        i = int(bad[0])
        cell = raw_dates.iloc[i] if bad_date[i] else raw_values.iloc[i]
        kind = "date" if bad_date[i] else "number"
        raise ParseError(f"{path}: row {i + 1}: cannot parse {kind} {cell!r}", row=i + 1)

    order = np.argsort(dates.to_numpy(), kind='stable')
    parsed = [d.date() for d in dates.iloc[order]]
    values = values[order]
    duplicates = sorted({parsed[i] for i in range(1, len(parsed)) if parsed[i] == parsed[i - 1]})
    if duplicates:
        raise ValidationError(
            f"{path}: duplicate dates {', '.join(d.isoformat() for d in duplicates)}"
        )
    if len(parsed) < 2:
        raise ValidationError(f"{path}: at least 2 observations required, found {len(parsed)}")

    series = RawSeries(name=name or value_column, dates=tuple(parsed), values=values)
    logger.info("Loaded %d observations of '%s' from %s", len(series), series.name, path)
    return series


def match_dates(
    targets: Sequence[date], candidates: Sequence[date], tolerance_days: int = DEFAULT_TOLERANCE_DAYS
) -> List[Optional[int]]:
    """Index of the nearest candidate date within tolerance for each target.

    Ties go to the earlier candidate; targets with no candidate map to None.
    """
    if tolerance_days < 0:
        raise ArgumentError(f"tolerance_days must be non-negative, got {tolerance_days}")
    cand = np.array([d.toordinal() for d in candidates], dtype=np.int64)
    result: List[Optional[int]] = []
    for target in targets:
        t = target.toordinal()
        pos = int(np.searchsorted(cand, t))
        best: Optional[int] = None
        best_dist = tolerance_days + 1
        for idx in (pos - 1, pos):
            if 0 <= idx < cand.size:
                dist = abs(int(cand[idx]) - t)
                if dist < best_dist:
                    best, best_dist = idx, dist
        result.append(best)
    return result


def convert_currency(
    asset: RawSeries, fx: RawSeries, tolerance_days: int = DEFAULT_TOLERANCE_DAYS
) -> RawSeries:
    """Multiply an asset series by the exchange rate quoted at the same week.

    Raises:
        AlignmentError: If some asset dates have no exchange-rate quote within tolerance
    """
    matches = match_dates(asset.dates, fx.dates, tolerance_days)
    missing = [d for d, m in zip(asset.dates, matches) if m is None]
    if missing:
        shown = ', '.join(d.isoformat() for d in missing[:10])
        more = f" (+{len(missing) - 10} more)" if len(missing) > 10 else ""
        raise AlignmentError(
            f"No '{fx.name}' quote within {tolerance_days} days of {shown}{more}", dates=missing
        )
    rates = fx.values[np.array(matches, dtype=int)]
    return RawSeries(name=asset.name, dates=asset.dates, values=asset.values * rates)


def align_panel(
    series: Sequence[RawSeries], tolerance_days: int = DEFAULT_TOLERANCE_DAYS
) -> AlignedPanel:
    """Restrict several series to their common weeks.

    The first series provides the date grid. Every other series contributes the
    quote nearest to each grid date within tolerance; a quote is used for at most
    one grid date. Grid dates missing from any series are dropped.

    Raises:
        ArgumentError: If fewer than two series are given or names repeat
        AlignmentError: If the series share no week
        SampleSizeError: If fewer than 8 common weeks remain
    """
    if len(series) < 2:
        raise ArgumentError(f"align_panel needs at least 2 series, got {len(series)}")
    names = [s.name for s in series]
    if len(set(names)) != len(names):
        raise ArgumentError(f"Series names must be unique, got {names}")

    grid = series[0].dates
    keep = np.ones(len(grid), dtype=bool)
    picks: Dict[str, np.ndarray] = {series[0].name: np.arange(len(grid))}
    for other in series[1:]:
        matches = _one_to_one(grid, other.dates, match_dates(grid, other.dates, tolerance_days))
        idx = np.array([-1 if m is None else m for m in matches], dtype=int)
        keep &= idx >= 0
        picks[other.name] = idx

    if not keep.any():
        raise AlignmentError(f"Series {names} have no common week")
    dates = tuple(d for d, k in zip(grid, keep) if k)
    columns = {s.name: s.values[picks[s.name][keep]] for s in series}
    dropped = len(grid) - len(dates)
    logger.info("Aligned %d series on %d common weeks (%d grid weeks dropped)", len(series), len(dates), dropped)
    return AlignedPanel(dates=dates, columns=columns)


def _one_to_one(
    grid: Sequence[date], candidates: Sequence[date], matches: List[Optional[int]]
) -> List[Optional[int]]:
    """Keep only the nearest grid date when several claim the same quote."""
    claimed: Dict[int, int] = {}
    for i, m in enumerate(matches):
        if m is None:
            continue
        j = claimed.get(m)
        dist = abs((grid[i] - candidates[m]).days)
        if j is None or dist < abs((grid[j] - candidates[m]).days):
            claimed[m] = i
    owner = {i: m for m, i in claimed.items()}
    return [owner.get(i) for i in range(len(matches))]


def difference(panel: AlignedPanel, column: str) -> np.ndarray:
    """First difference out[t] = x[t+1] - x[t] of a panel column.

    Raises:
        UnknownColumnError: If the column does not exist
        SampleSizeError: If the panel has fewer than 2 rows
    """
    x = panel.column(column)
    if x.size < 2:
        raise SampleSizeError(f"Cannot difference '{column}' with {x.size} observations")
    return np.diff(x)


def build_analysis_panel(
    nifty: RawSeries,
    gold_usd: RawSeries,
    wti_usd: RawSeries,
    usdinr: RawSeries,
    tolerance_days: int = DEFAULT_TOLERANCE_DAYS,
) -> AlignedPanel:
    """INR-denominated Oil, Gold and Nifty panel from the four raw inputs."""
    oil = convert_currency(_restrict(wti_usd, usdinr, tolerance_days), usdinr, tolerance_days)
    gold = convert_currency(_restrict(gold_usd, usdinr, tolerance_days), usdinr, tolerance_days)
    panel = align_panel(
        [nifty.renamed("nifty"), oil.renamed("oil"), gold.renamed("gold")], tolerance_days
    )
    return panel.select(PANEL_COLUMNS)


def _restrict(asset: RawSeries, fx: RawSeries, tolerance_days: int) -> RawSeries:
    """Drop asset weeks that fall outside the exchange-rate history."""
    matches = match_dates(asset.dates, fx.dates, tolerance_days)
    keep = [i for i, m in enumerate(matches) if m is not None]
    if len(keep) < len(asset.dates):
        logger.info(
            "Dropping %d '%s' weeks without a '%s' quote",
            len(asset.dates) - len(keep), asset.name, fx.name,
        )
    if not keep:
        raise AlignmentError(f"'{asset.name}' and '{fx.name}' share no week")
    return RawSeries(
        name=asset.name,
        dates=tuple(asset.dates[i] for i in keep),
        values=asset.values[np.array(keep)],
    )
