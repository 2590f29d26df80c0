"""
Seeded synthetic series shared by the test suite.
"""
from datetime import date, timedelta
from pathlib import Path
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from comove.models import AlignedPanel

START = date(1995, 11, 5)


def weekly_dates(n: int, start: date = START, step_days: int = 7) -> Tuple[date, ...]:
    return tuple(start + timedelta(days=step_days * i) for i in range(n))


def random_walk(rng: np.random.Generator, n: int, start: float = 0.0, scale: float = 1.0) -> np.ndarray:
    return start + np.cumsum(scale * rng.standard_normal(n))


def ar1(rng: np.random.Generator, n: int, phi: float, scale: float = 1.0) -> np.ndarray:
    out = np.empty(n)
    noise = scale * rng.standard_normal(n)
    out[0] = noise[0] / np.sqrt(1.0 - phi * phi)
    for t in range(1, n):
        out[t] = phi * out[t - 1] + noise[t]
    return out


def cointegrated_pair(rng: np.random.Generator, n: int, beta: float = 2.0, phi: float = 0.5):
    """x a random walk, y = beta * x + stationary AR(1) noise."""
    x = random_walk(rng, n)
    y = beta * x + ar1(rng, n, phi)
    return x, y


def band_coherent_pair(
    rng: np.random.Generator, n: int, period: float = 64.0, amplitude: float = 3.0, noise: float = 1.0
):
    """Two noisy series sharing a sinusoid of the given period."""
    t = np.arange(n)
    common = amplitude * np.sin(2 * np.pi * t / period)
    return common + noise * rng.standard_normal(n), common + noise * rng.standard_normal(n)


def planted_panel(rng: np.random.Generator, n: int = 512) -> AlignedPanel:
    """Oil, gold and Nifty levels where nifty - 2 oil is stationary and oil, gold share a 64-week cycle."""
    cycle = 300.0 * np.sin(2 * np.pi * np.arange(n) / 64.0)
    oil = 3000.0 + random_walk(rng, n, scale=20.0) + cycle
    gold = 20000.0 + random_walk(rng, n, scale=40.0) + cycle
    nifty = 5000.0 + 2.0 * oil + ar1(rng, n, 0.5, scale=15.0)
    return AlignedPanel(dates=weekly_dates(n), columns={"oil": oil, "gold": gold, "nifty": nifty})


def write_series_csv(
    path: Path,
    dates: Sequence[date],
    values: Iterable[float],
    value_column: str = "value",
    date_format: str = "%Y-%m-%d",
) -> Path:
    lines = [f"date,{value_column}"]
    lines += [f"{d.strftime(date_format)},{float(v)!r}" for d, v in zip(dates, values)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_panel_inputs(directory: Path, panel: AlignedPanel, usdinr: Optional[np.ndarray] = None) -> Dict[str, Path]:
    """Write the four raw input files that rebuild `panel` (oil and gold quoted in USD)."""
    n = panel.n_obs
    rate = np.full(n, 1.0) if usdinr is None else np.asarray(usdinr, dtype=float)
    return {
        "nifty": write_series_csv(directory / "nifty.csv", panel.dates, panel.column("nifty"), "close"),
        "gold_usd": write_series_csv(directory / "gold.csv", panel.dates, panel.column("gold") / rate, "close"),
        "wti_usd": write_series_csv(directory / "wti.csv", panel.dates, panel.column("oil") / rate, "close"),
        "usdinr": write_series_csv(directory / "usdinr.csv", panel.dates, rate, "rate"),
    }
