import numpy as np
import pytest

from crystalprobe.ramsey_probe import KickVector


class SyntheticModes:
    """Bare frequency/amplitude container for tests that bypass the chain."""

    def __init__(self, frequencies, probe_amplitudes=None):
        self.frequencies = np.asarray(frequencies, dtype=float)
        if probe_amplitudes is None:
            probe_amplitudes = np.zeros_like(self.frequencies)
        self.probe_amplitudes = np.asarray(probe_amplitudes, dtype=float)

    def __len__(self):
        return len(self.frequencies)


def kick_from_magnitudes(mags):
    """Kick vector with the conventional i * |alpha| phases."""
    alphas = 1j * np.asarray(mags, dtype=complex)
    return KickVector(alphas=alphas, total_strength=float(np.sum(np.abs(alphas) ** 2)))


@pytest.fixture
def gate_modes():
    return SyntheticModes([0.3, 1.0, 1.7])


@pytest.fixture
def gate_kick():
    return kick_from_magnitudes([0.4, 0.2, 0.1])


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
