"""
Continuous Morlet wavelet transform, wavelet power, cross-wavelet spectrum,
smoothed wavelet coherence, multiple wavelet coherence and AR(1) Monte-Carlo
significance.

Grids are stored scale-major: row i belongs to scales[i], column t to time t.
"""
import logging
import math
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import fft, ndimage
from tqdm import tqdm

from .exceptions import ArgumentError, SampleSizeError, UndefinedStatisticError
from .models import CoherenceField, CwtField
from .utils.rng import as_seed_sequence

logger = logging.getLogger(__name__)

DEFAULT_OMEGA0 = 6.0
DEFAULT_VOICES = 8
DEFAULT_MIN_SCALE = 2.0
DEFAULT_MAX_PERIOD = 512.0
DEFAULT_TIME_SMOOTHING = 2.0  # Gaussian sd in units of the scale s (samples = 2.0 * s / dt)
DEFAULT_SCALE_SMOOTHING = 0.6  # boxcar width in octaves of scale
MIN_CWT_OBS = 16
MIN_SURROGATES = 100
AR1_CLAMP = 0.99
COLLINEAR_EPS = 1e-6
ADMISSIBILITY_TOL = 1e-6


def fourier_factor(omega0: float = DEFAULT_OMEGA0) -> float:
    """Ratio of Fourier period to Morlet scale."""
    return 4.0 * math.pi / (omega0 + math.sqrt(2.0 + omega0 ** 2))


def morlet_hat(scaled_freq: np.ndarray, omega0: float = DEFAULT_OMEGA0) -> np.ndarray:
    """Fourier transform of the analytic Morlet mother wavelet (zero for negative frequencies)."""
    return np.where(
        scaled_freq > 0,
        math.pi ** -0.25 * np.exp(-0.5 * (scaled_freq - omega0) ** 2),
        0.0,
    )


def admissibility_residual(omega0: float = DEFAULT_OMEGA0) -> float:
    """Mean of the mother wavelet relative to its spectral peak."""
    return float(math.exp(-0.5 * omega0 ** 2))


def default_scales(
    n: int,
    dt: float = 1.0,
    voices: int = DEFAULT_VOICES,
    min_scale: float = DEFAULT_MIN_SCALE,
    max_period: float = DEFAULT_MAX_PERIOD,
    omega0: float = DEFAULT_OMEGA0,
) -> np.ndarray:
    """Dyadic grid s0 * 2^(j / voices), clipped to N*dt/2 and to max_period."""
    if voices < 1:
        raise ArgumentError(f"voices must be at least 1, got {voices}")
    s0 = max(min_scale, 2.0) * dt
    s_max = min(n * dt / 2.0, max_period / fourier_factor(omega0))
    if s_max < s0:
        raise ArgumentError(f"No admissible scale for N={n}")
    count = int(math.floor(voices * math.log2(s_max / s0) + 1e-9)) + 1
    return s0 * 2.0 ** (np.arange(count) / voices)


def _validate_scales(scales, n: int, dt: float) -> np.ndarray:
    scales = np.asarray(scales, dtype=float).ravel()
    if scales.size == 0:
        raise ArgumentError("Scale vector is empty")
    if np.any(np.diff(scales) <= 0):
        raise ArgumentError("Scales must be strictly increasing")
    lo, hi = 2.0 * dt, n * dt / 2.0
    tol = 1e-9 * hi
    if scales[0] < lo - tol or scales[-1] > hi + tol:
        raise ArgumentError(
            f"Scales must lie in [{lo:g}, {hi:g}]; got [{scales[0]:g}, {scales[-1]:g}]"
        )
    return scales


def cone_of_influence(n: int, dt: float = 1.0, omega0: float = DEFAULT_OMEGA0, max_period: Optional[float] = None) -> np.ndarray:
    """Largest trustworthy Fourier period at each time (e-folding of edge effects)."""
    distance = n / 2.0 - np.abs(np.arange(n) - (n - 1) / 2.0)
    coi = fourier_factor(omega0) / math.sqrt(2.0) * dt * distance
    if max_period is not None:
        coi = np.minimum(coi, max_period)
    return coi


def padded_length(n: int) -> int:
    """Smallest power of two >= 2n."""
    return 1 << int(math.ceil(math.log2(2 * n)))


def _voices_per_octave(scales: np.ndarray) -> float:
    if scales.size < 2:
        return 0.0
    return 1.0 / float(np.median(np.diff(np.log2(scales))))


def morlet_cwt(
    x,
    scales=None,
    dt: float = 1.0,
    omega0: float = DEFAULT_OMEGA0,
) -> CwtField:
    """Continuous wavelet transform with the analytic Morlet wavelet.

    The series is zero-padded to a power of two of at least 2N, so the
    Fourier-domain product is a linear convolution; each scale is normalised
    to unit energy.

    Args:
        x: Real series of length N >= 16
        scales: Increasing scales within [2*dt, N*dt/2]; default_scales() when omitted
        dt: Sampling interval in weeks
        omega0: Non-dimensional frequency of the mother wavelet

    Returns:
        CwtField

    Raises:
        SampleSizeError: If N < 16
        ArgumentError: If a scale is out of range or the wavelet is not admissible
    """
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    if n < MIN_CWT_OBS:
        raise SampleSizeError(f"CWT needs N >= {MIN_CWT_OBS}, got {n}")
    if admissibility_residual(omega0) > ADMISSIBILITY_TOL:
        raise ArgumentError(f"Morlet wavelet with omega0={omega0} is not admissible (non-zero mean)")
    scales = default_scales(n, dt, omega0=omega0) if scales is None else _validate_scales(scales, n, dt)

    m = padded_length(n)
    x_hat = fft.fft(x, m)
    omega = 2.0 * math.pi * fft.fftfreq(m, dt)
    norm = np.sqrt(2.0 * math.pi * scales / dt)[:, None]
    psi_hat = norm * morlet_hat(scales[:, None] * omega[None, :], omega0)
    coefficients = fft.ifft(x_hat[None, :] * psi_hat, axis=1)[:, :n]

    periods = fourier_factor(omega0) * scales
    coi = cone_of_influence(n, dt, omega0, max_period=float(periods[-1]))
    return CwtField(
        coefficients=coefficients, scales=scales, periods=periods, coi=coi, dt=dt, omega0=omega0
    )


def wavelet_power(field: CwtField) -> np.ndarray:
    """|W|^2 elementwise."""
    return np.abs(field.coefficients) ** 2


def _check_same_grid(a: CwtField, b: CwtField) -> None:
    if a.coefficients.shape != b.coefficients.shape or not np.array_equal(a.scales, b.scales):
        raise ArgumentError("Wavelet fields are defined on different grids")


def cross_wavelet(a: CwtField, b: CwtField) -> np.ndarray:
    """Cross-wavelet spectrum W_a * conj(W_b)."""
    _check_same_grid(a, b)
    return a.coefficients * np.conj(b.coefficients)


def cross_phase(a: CwtField, b: CwtField) -> np.ndarray:
    """Local phase of a relative to b, in (-pi, pi]."""
    return np.angle(cross_wavelet(a, b))


def _boxcar_kernel(width: float) -> np.ndarray:
    """Unit-cell weights of a centred boxcar `width` samples wide, summing to 1."""
    half = width / 2.0
    reach = int(math.ceil(half - 0.5)) if half > 0.5 else 0
    k = np.arange(-reach, reach + 1, dtype=float)
    weights = np.clip(np.minimum(k + 0.5, half) - np.maximum(k - 0.5, -half), 0.0, None)
    return weights / weights.sum()


def smooth(
    grid: np.ndarray,
    scales,
    dt: float = 1.0,
    time_smoothing: float = DEFAULT_TIME_SMOOTHING,
    scale_smoothing: float = DEFAULT_SCALE_SMOOTHING,
) -> np.ndarray:
    """Smooth a (scale x time) grid in time, then across scales.

    Row i is convolved in time with a Gaussian of standard deviation
    time_smoothing * scales[i] / dt samples, applied to the half-sample
    symmetric extension of the row. Columns are then averaged with a boxcar
    scale_smoothing octaves wide. Both kernels sum to one.
    """
    grid = np.asarray(grid)
    scales = np.asarray(scales, dtype=float).ravel()
    if grid.ndim != 2 or grid.shape[0] != scales.size:
        raise ArgumentError(f"Grid shape {grid.shape} does not match {scales.size} scales")
    if time_smoothing < 0 or scale_smoothing < 0:
        raise ArgumentError("Smoothing widths must be non-negative")
    is_complex = np.iscomplexobj(grid)
    out = grid.astype(complex if is_complex else float)
    n = grid.shape[1]

    if time_smoothing > 0:
        extended = np.concatenate([out, out[:, ::-1]], axis=1)
        omega = 2.0 * math.pi * fft.fftfreq(2 * n)
        sigma = time_smoothing * scales[:, None] / dt
        filtered = fft.ifft(fft.fft(extended, axis=1) * np.exp(-0.5 * (sigma * omega[None, :]) ** 2), axis=1)
        out = filtered[:, :n] if is_complex else filtered[:, :n].real

    voices = _voices_per_octave(scales)
    if scale_smoothing > 0 and voices > 0:
        kernel = _boxcar_kernel(scale_smoothing * voices)
        if kernel.size > 1:
            if is_complex:
                out = (ndimage.convolve1d(out.real, kernel, axis=0, mode='reflect')
                       + 1j * ndimage.convolve1d(out.imag, kernel, axis=0, mode='reflect'))
            else:
                out = ndimage.convolve1d(out, kernel, axis=0, mode='reflect')
    return out


def standardize(x) -> np.ndarray:
    """Zero mean, unit variance copy of x.

    Raises:
        UndefinedStatisticError: If x is constant
    """
    x = np.asarray(x, dtype=float).ravel()
    sd = x.std()
    if sd == 0 or not np.isfinite(sd):
        raise UndefinedStatisticError("Coherence is undefined for a constant series")
    return (x - x.mean()) / sd


def _clamp_unit(values: np.ndarray) -> Tuple[np.ndarray, int]:
    finite = np.isfinite(values)
    outside = finite & ((values < 0.0) | (values > 1.0))
    clamped = int(outside.sum())
    if np.any(values[finite] > 1.0 + 1e-6):
        logger.warning("Coherence exceeded 1 by more than 1e-6 at %d cells", int(np.sum(values[finite] > 1.0 + 1e-6)))
    out = values.copy()
    out[finite] = np.clip(values[finite], 0.0, 1.0)
    return out, clamped


class _SmoothedSpectra:
    """Smoothed auto and cross spectra of several standardised series."""

    def __init__(self, series: Sequence[np.ndarray], scales, dt: float, omega0: float,
                 time_smoothing: float, scale_smoothing: float):
        n = series[0].size
        for s in series:
            if s.size != n:
                raise ArgumentError("Series lengths differ")
        self.fields = [morlet_cwt(standardize(s), scales, dt, omega0) for s in series]
        self.template = self.fields[0]
        self._kw = dict(dt=dt, time_smoothing=time_smoothing, scale_smoothing=scale_smoothing)
        inv_scale = 1.0 / self.template.scales[:, None]
        self.power = [smooth(wavelet_power(f) * inv_scale, self.template.scales, **self._kw) for f in self.fields]
        self._inv_scale = inv_scale

    def cross(self, i: int, j: int) -> np.ndarray:
        return smooth(cross_wavelet(self.fields[i], self.fields[j]) * self._inv_scale,
                      self.template.scales, **self._kw)

    def coherency(self, i: int, j: int) -> np.ndarray:
        """Complex coherency S(W_i W_j*/s) / sqrt(S(|W_i|^2/s) S(|W_j|^2/s))."""
        denom = np.sqrt(self.power[i] * self.power[j])
        with np.errstate(divide='ignore', invalid='ignore'):
            return np.where(denom > 0, self.cross(i, j) / denom, 0.0)


def wavelet_coherence(
    x,
    y,
    scales=None,
    dt: float = 1.0,
    omega0: float = DEFAULT_OMEGA0,
    time_smoothing: float = DEFAULT_TIME_SMOOTHING,
    scale_smoothing: float = DEFAULT_SCALE_SMOOTHING,
) -> CoherenceField:
    """Squared wavelet coherence R^2 and phase of two series.

    Inputs are standardised first, so R^2 is unchanged by positive affine
    transforms of either series.
    """
    spectra = _SmoothedSpectra(
        [np.asarray(x, dtype=float).ravel(), np.asarray(y, dtype=float).ravel()],
        scales, dt, omega0, time_smoothing, scale_smoothing,
    )
    coherency = spectra.coherency(0, 1)
    values, clamped = _clamp_unit(np.abs(coherency) ** 2)
    f = spectra.template
    return CoherenceField(
        values=values, scales=f.scales, periods=f.periods, coi=f.coi,
        phase=np.angle(coherency), clamped=clamped,
    )


def multiple_wavelet_coherence(
    z,
    x,
    y,
    scales=None,
    dt: float = 1.0,
    omega0: float = DEFAULT_OMEGA0,
    time_smoothing: float = DEFAULT_TIME_SMOOTHING,
    scale_smoothing: float = DEFAULT_SCALE_SMOOTHING,
    collinear_eps: float = COLLINEAR_EPS,
) -> CoherenceField:
    """Multiple wavelet coherence RM^2 of z on the predictors x and y.

    RM^2 = [|c_zy|^2 + |c_zx|^2 - 2 Re(c_zy c_zx* c_xy*)] / (1 - |c_xy|^2)
    with c the complex smoothed coherencies. Cells where 1 - |c_xy|^2 falls
    below collinear_eps are NaN and marked in `undefined`.
    """
    spectra = _SmoothedSpectra(
        [np.asarray(v, dtype=float).ravel() for v in (z, x, y)],
        scales, dt, omega0, time_smoothing, scale_smoothing,
    )
    c_zx = spectra.coherency(0, 1)
    c_zy = spectra.coherency(0, 2)
    c_xy = spectra.coherency(1, 2)
    numerator = np.abs(c_zy) ** 2 + np.abs(c_zx) ** 2 - 2.0 * np.real(c_zy * np.conj(c_zx) * np.conj(c_xy))
    denominator = 1.0 - np.abs(c_xy) ** 2
    undefined = denominator < collinear_eps
    with np.errstate(divide='ignore', invalid='ignore'):
        raw = np.where(undefined, np.nan, numerator / np.where(undefined, 1.0, denominator))
    if undefined.any():
        logger.warning("Multiple coherence undefined at %d cells (collinear predictors)", int(undefined.sum()))
    values, clamped = _clamp_unit(raw)
    f = spectra.template
    return CoherenceField(
        values=values, scales=f.scales, periods=f.periods, coi=f.coi,
        undefined=undefined, clamped=clamped,
    )


def ar1_coefficient(x) -> float:
    """Lag-1 autocorrelation, clamped into [-0.99, 0.99] with a warning."""
    x = np.asarray(x, dtype=float).ravel()
    d = x - x.mean()
    denom = float(d @ d)
    phi = float(d[1:] @ d[:-1]) / denom if denom > 0 else 0.0
    if abs(phi) > AR1_CLAMP:
        logger.warning("AR(1) coefficient %.4f clamped to %.2f", phi, math.copysign(AR1_CLAMP, phi))
        phi = math.copysign(AR1_CLAMP, phi)
    return phi


def ar1_surrogate(phi: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """Stationary AR(1) path of length n with unit innovation variance."""
    noise = rng.standard_normal(n)
    out = np.empty(n)
    out[0] = noise[0] / math.sqrt(1.0 - phi * phi)
    for t in range(1, n):
        out[t] = phi * out[t - 1] + noise[t]
    return out


def _field_for(series: Sequence[np.ndarray], scales, **kw) -> CoherenceField:
    if len(series) == 2:
        return wavelet_coherence(series[0], series[1], scales, **kw)
    return multiple_wavelet_coherence(series[0], series[1], series[2], scales, **kw)


def significance(
    series: Sequence,
    scales=None,
    n_surrogates: int = 300,
    seed: Union[int, np.random.SeedSequence] = 0,
    dt: float = 1.0,
    omega0: float = DEFAULT_OMEGA0,
    time_smoothing: float = DEFAULT_TIME_SMOOTHING,
    scale_smoothing: float = DEFAULT_SCALE_SMOOTHING,
    progress: bool = False,
    observed: Optional[CoherenceField] = None,
) -> np.ndarray:
    """Monte-Carlo p-values of a coherence (2 series) or multiple coherence (3 series, target first).

    Each input is replaced by an AR(1) surrogate with its lag-1
    autocorrelation. For every scale the null sample pools all inside-COI
    cells of all surrogates; a cell's p-value is the share of that sample at
    or above the observed value. Surrogate i draws from the i-th child of the
    seed, so the grid does not depend on evaluation order.

    Raises:
        ArgumentError: If n_surrogates < 100 or not 2 or 3 series are given
    """
    if n_surrogates < MIN_SURROGATES:
        raise ArgumentError(f"n_surrogates must be at least {MIN_SURROGATES}, got {n_surrogates}")
    if len(series) not in (2, 3):
        raise ArgumentError(f"significance takes 2 or 3 series, got {len(series)}")
    arrays = [np.asarray(s, dtype=float).ravel() for s in series]
    n = arrays[0].size
    kw = dict(dt=dt, omega0=omega0, time_smoothing=time_smoothing, scale_smoothing=scale_smoothing)
    if observed is None:
        observed = _field_for(arrays, scales, **kw)
    scales = observed.scales
    phis = [ar1_coefficient(a) for a in arrays]
    logger.info("Significance: %d AR(1) surrogates, phi=%s", n_surrogates, [round(p, 4) for p in phis])

    inside = observed.inside_coi()
    pooled = [[] for _ in range(scales.size)]
    children = as_seed_sequence(seed).spawn(n_surrogates)
    for child in tqdm(children, desc="surrogates", disable=not progress, leave=False):
        rng = np.random.default_rng(child)
        surrogate = [ar1_surrogate(phi, n, rng) for phi in phis]
        null = _field_for(surrogate, scales, **kw).values
        for i in range(scales.size):
            row = null[i][inside[i]]
            pooled[i].append(row[np.isfinite(row)])

    p_values = np.full(observed.values.shape, np.nan)
    for i in range(scales.size):
        sample = np.sort(np.concatenate(pooled[i])) if pooled[i] else np.empty(0)
        if sample.size == 0:
            continue
        obs = observed.values[i]
        finite = np.isfinite(obs)
        at_or_above = sample.size - np.searchsorted(sample, obs[finite], side='left')
        p_values[i, finite] = at_or_above / sample.size
    return p_values


def band_mean(
    field: CoherenceField,
    period_range: Tuple[float, float],
    time_range: Optional[Tuple[int, int]] = None,
    inside_coi: bool = True,
) -> float:
    """Mean value over a period band [lo, hi] and time window [start, end).

    Returns NaN when the region is empty.
    """
    lo, hi = period_range
    rows = (field.periods >= lo) & (field.periods <= hi)
    cols = np.zeros(field.values.shape[1], dtype=bool)
    start, end = time_range if time_range is not None else (0, field.values.shape[1])
    cols[max(start, 0):min(end, cols.size)] = True
    mask = rows[:, None] & cols[None, :]
    if inside_coi:
        mask &= field.inside_coi()
    values = field.values[mask]
    values = values[np.isfinite(values)]
    return float(values.mean()) if values.size else float('nan')
