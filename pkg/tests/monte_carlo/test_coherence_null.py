"""
Calibration of the wavelet power level and the coherence significance test
under independent AR(1) inputs.
"""
import numpy as np
import pytest

from comove.cwt import default_scales, morlet_cwt, significance, wavelet_coherence, wavelet_power
from tests.synthetic import ar1

pytestmark = pytest.mark.monte_carlo


def test_white_noise_power_is_flat_across_scales():
    rng = np.random.default_rng(2001)
    scales = default_scales(512, voices=4, min_scale=4.0)
    scales = scales[scales <= 32.0]
    levels = np.zeros(scales.size)
    for _ in range(20):
        field = morlet_cwt(rng.standard_normal(512), scales)
        power = wavelet_power(field)
        inside = field.inside_coi()
        levels += np.array([power[i][inside[i]].mean() for i in range(scales.size)])
    levels /= 20
    assert np.all(np.abs(levels / levels.mean() - 1.0) <= 0.2)


def test_significance_is_calibrated_for_independent_pairs():
    rng = np.random.default_rng(2002)
    scales = default_scales(128, voices=2)
    hits, cells = 0, 0
    for k in range(20):
        x, y = ar1(rng, 128, 0.5), ar1(rng, 128, 0.5)
        observed = wavelet_coherence(x, y, scales)
        p = significance([x, y], scales, n_surrogates=100, seed=k, observed=observed)
        inside = observed.inside_coi() & np.isfinite(p)
        hits += int(np.sum(p[inside] <= 0.05))
        cells += int(inside.sum())
    rate = hits / cells
    assert 0.01 <= rate <= 0.12
