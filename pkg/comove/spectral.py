"""
Periodogram scan of a series on an arbitrary frequency grid.
"""
import logging
from typing import Optional

import numpy as np
from scipy import fft

from .exceptions import ArgumentError, SampleSizeError
from .models import Periodogram

logger = logging.getLogger(__name__)

NYQUIST = 0.5


def index_grid(n: int, max_index: int = 500) -> np.ndarray:
    """Grid f_k = k / N for k = 0..max_index (cycles per week)."""
    if max_index < 0:
        raise ArgumentError(f"max_index must be non-negative, got {max_index}")
    return np.arange(max_index + 1, dtype=float) / n


def fourier_grid(n: int) -> np.ndarray:
    """Canonical grid k / N for k = 0..floor(N/2)."""
    return np.arange(n // 2 + 1, dtype=float) / n


def _canonical_indices(freqs: np.ndarray, n: int) -> Optional[np.ndarray]:
    k = freqs * n
    rounded = np.rint(k)
    if np.all(np.abs(k - rounded) < 1e-9 * np.maximum(1.0, np.abs(k))):
        return rounded.astype(np.int64)
    return None


def frequency_scan(x, freq_grid, demean: bool = False) -> Periodogram:
    """power(f) = |sum_t x_t exp(i 2 pi f t)|^2 / N on every grid frequency.

    Grid points of the form k / N use the FFT; other points are summed
    directly. Frequencies above 0.5 alias onto lower ones; they are
    evaluated and flagged.

    Raises:
        SampleSizeError: If N < 4
        ArgumentError: If the grid is empty, negative or not strictly increasing
    """
    x = np.asarray(x, dtype=float).ravel()
    freqs = np.asarray(freq_grid, dtype=float).ravel()
    n = x.size
    if n < 4:
        raise SampleSizeError(f"Frequency scan needs N >= 4, got {n}")
    if freqs.size == 0:
        raise ArgumentError("Frequency grid is empty")
    if np.any(freqs < 0) or not np.all(np.isfinite(freqs)):
        raise ArgumentError("Frequencies must be finite and non-negative")
    if np.any(np.diff(freqs) <= 0):
        raise ArgumentError("Frequency grid must be strictly increasing")
    if demean:
        x = x - x.mean()

    aliased = freqs > NYQUIST
    if aliased.any():
        logger.warning("%d grid frequencies exceed the Nyquist limit and alias", int(aliased.sum()))

    k = _canonical_indices(freqs, n)
    if k is not None:
        spectrum = fft.fft(x)
        # sum_t x_t e^{+i2pi f t} is the conjugate of the FFT bin; |.| is unchanged
        power = np.abs(spectrum[k % n]) ** 2 / n
    else:
        t = np.arange(n)
        power = np.empty(freqs.size)
        for i, f in enumerate(freqs):
            power[i] = np.abs(np.exp(2j * np.pi * f * t) @ x) ** 2 / n
    return Periodogram(frequencies=freqs, power=power, aliased=aliased, demeaned=demean)
