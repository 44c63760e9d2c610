"""Exact algebra of multimode displaced vacuum states.

Everything the Ramsey sequence does to the phonon environment -- displacement
kicks, free evolution, inner products -- stays inside the family of displaced
vacua, so all quantities are evaluated in closed form with no truncation at
any mode count.  A state is an amplitude vector gamma, a unit-modulus scalar
phase accumulated by displacement composition, and a caller-owned complex
weight for superposition bookkeeping.

All operations broadcast: amplitudes of shape (..., M) with phases/weights of
shape (...) evaluate whole time batches at once.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DisplacedVacuum:
    """D(gamma)|0> times a composition phase, scaled by an external weight."""

    amplitudes: np.ndarray
    phase: complex | np.ndarray = 1.0 + 0.0j
    weight: complex | np.ndarray = 1.0 + 0.0j

    @property
    def n_modes(self):
        return self.amplitudes.shape[-1]


def vacuum(n_modes, weight=1.0 + 0.0j):
    """The multimode vacuum (zero displacement, unit phase)."""
    return DisplacedVacuum(np.zeros(n_modes, dtype=complex), 1.0 + 0.0j, weight)


def _check_lengths(a, b):
    if a.shape[-1] != b.shape[-1]:
        raise ValueError(f"mode count mismatch: {a.shape[-1]} vs {b.shape[-1]}")


def displace(state, d):
    """Apply a further displacement d: D(d) D(gamma)|0>.

    Amplitudes add; the composition rule contributes the phase factor
    exp((d gamma* - d* gamma) / 2), which is purely imaginary in the
    exponent and therefore keeps |phase| = 1 exactly.
    """
    d = np.asarray(d, dtype=complex)
    _check_lengths(d, state.amplitudes)
    arg = np.imag(np.sum(d * np.conj(state.amplitudes), axis=-1))
    return DisplacedVacuum(
        amplitudes=state.amplitudes + d,
        phase=state.phase * np.exp(1j * arg),
        weight=state.weight,
    )


def evolve(state, modes, t):
    """Free harmonic evolution for time t: gamma_j -> gamma_j e^{-i omega_j t}.

    Normal-ordered evolution of a coherent state; phase and weight are
    untouched.  t may be a scalar or an array (batched over a leading axis).
    """
    freqs = np.asarray(getattr(modes, "frequencies", modes), dtype=float)
    _check_lengths(freqs, state.amplitudes)
    t = np.asarray(t, dtype=float)
    rot = np.exp(-1j * t[..., None] * freqs) if t.ndim else np.exp(-1j * t * freqs)
    return DisplacedVacuum(
        amplitudes=state.amplitudes * rot,
        phase=state.phase,
        weight=state.weight,
    )


def overlap(a, b):
    """Inner product <a|b> including phases and weights.

    For unit phases and weights this is the standard coherent-state overlap
    exp(-|ga|^2/2 - |gb|^2/2 + ga* . gb).
    """
    _check_lengths(a.amplitudes, b.amplitudes)
    ga, gb = a.amplitudes, b.amplitudes
    expo = np.sum(
        -0.5 * (ga.real**2 + ga.imag**2)
        - 0.5 * (gb.real**2 + gb.imag**2)
        + np.conj(ga) * gb,
        axis=-1,
    )
    return np.conj(a.phase) * b.phase * np.conj(a.weight) * b.weight * np.exp(expo)


def scale(state, factor):
    """Multiply the superposition weight (branch coefficient) by factor."""
    return DisplacedVacuum(state.amplitudes, state.phase, state.weight * factor)
