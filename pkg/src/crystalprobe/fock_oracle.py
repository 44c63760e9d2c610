"""Brute-force truncated Fock-space simulator for small mode counts.

Independent ground truth for the coherent-state machinery: displacement
operators are built per mode by scaling-and-squaring matrix exponentials,
the joint pulse -- free evolution -- counter-pulse sequence is applied to an
explicit state vector, and the probe state follows by partial trace.  The
truncation is policed by the population in the top two Fock levels of every
mode.  Never used in production sweeps.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .ramsey_probe import BlochPair, QubitState

_INV_SQRT2 = 1.0 / np.sqrt(2.0)

LEAKAGE_TOL = 1e-8
MAX_DIMENSION = 10**6


@dataclass(frozen=True)
class FockConfig:
    """Truncated environment: per-mode frequency, kick amplitude, and cutoff."""

    frequencies: np.ndarray
    alphas: np.ndarray
    cutoff: int = 20

    def __post_init__(self):
        object.__setattr__(self, "frequencies", np.asarray(self.frequencies, dtype=float))
        object.__setattr__(self, "alphas", np.asarray(self.alphas, dtype=complex))
        if len(self.frequencies) != len(self.alphas):
            raise ValueError("frequencies and alphas must have equal length")
        if self.n_modes > 4:
            raise ValueError(f"at most 4 modes, got {self.n_modes}")
        if self.dimension > MAX_DIMENSION:
            raise ValueError(f"Hilbert dimension {self.dimension} exceeds {MAX_DIMENSION}")

    @property
    def n_modes(self):
        return len(self.frequencies)

    @property
    def dimension(self):
        return 2 * (self.cutoff + 1) ** self.n_modes


def displacement_matrix(alpha, cutoff):
    """Dense single-mode D(alpha) = expm(alpha a^dag - alpha* a) on cutoff+1 levels."""
    a = np.diag(np.sqrt(np.arange(1, cutoff + 1)), k=1).astype(complex)
    return expm(alpha * a.conj().T - np.conj(alpha) * a)


def _apply_mode_matrix(psi, mat, mode):
    """Apply a single-mode operator to axis mode+1 of the (2, d, .., d) tensor."""
    moved = np.tensordot(mat, psi, axes=([1], [mode + 1]))
    return np.moveaxis(moved, 0, mode + 1)


def _apply_displacement(psi, d_mats, dagger):
    for j, mat in enumerate(d_mats):
        psi = _apply_mode_matrix(psi, mat.conj().T if dagger else mat, j)
    return psi


def _pulse(psi, d_mats, i_factor):
    """(1 + i_factor (sigma^+ D + sigma^- D^dag)) / sqrt(2) on the joint vector."""
    out = psi.copy()
    out[0] += i_factor * _apply_displacement(psi[1][None, ...], d_mats, dagger=False)[0]
    out[1] += i_factor * _apply_displacement(psi[0][None, ...], d_mats, dagger=True)[0]
    return out * _INV_SQRT2


def _leakage(psi, cutoff):
    """Largest population found in the top two Fock levels of any mode."""
    prob = np.abs(psi) ** 2
    worst = 0.0
    for mode in range(psi.ndim - 1):
        swept = np.moveaxis(prob, mode + 1, -1)
        worst = max(worst, float(np.sum(swept[..., cutoff - 1:])))
    return worst


def simulate(config, initial, t):
    """Probe state after the Ramsey sequence, by explicit truncated evolution.

    t may be a scalar or an array; a cutoff-insufficiency error is raised if
    the top two Fock levels of any mode ever hold more than 1e-8 population.
    """
    if not isinstance(initial, BlochPair):
        raise TypeError("initial must be a BlochPair")
    cutoff = config.cutoff
    dims = (cutoff + 1,) * config.n_modes
    d_mats = [displacement_matrix(a, cutoff) for a in config.alphas]

    c_e, c_g = initial.coefficients()
    psi0 = np.zeros((2,) + dims, dtype=complex)
    psi0[(0,) + (0,) * config.n_modes] = c_e
    psi0[(1,) + (0,) * config.n_modes] = c_g

    psi1 = _pulse(psi0, d_mats, -1j)
    leak = _leakage(psi1, cutoff)

    # diagonal free-evolution phases: exp(-i t sum_j n_j omega_j)
    n_grids = np.meshgrid(*[np.arange(cutoff + 1) for _ in dims], indexing="ij")
    energy = sum(w * n for w, n in zip(config.frequencies, n_grids))

    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    rho_ee, rho_gg, rho_eg = [], [], []
    for tc in t_arr:
        psi_t = psi1 * np.exp(-1j * tc * energy)[None, ...]
        psi_f = _pulse(psi_t, d_mats, +1j)
        leak = max(leak, _leakage(psi_f, cutoff))
        mat = psi_f.reshape(2, -1)
        rho = mat @ mat.conj().T
        rho_ee.append(rho[0, 0])
        rho_gg.append(rho[1, 1])
        rho_eg.append(rho[0, 1])

    if leak >= LEAKAGE_TOL:
        raise ValueError(
            f"Fock truncation leakage {leak:g} >= {LEAKAGE_TOL:g}: increase the cutoff"
        )
    if np.ndim(t) == 0:
        return QubitState(rho_ee=rho_ee[0], rho_gg=rho_gg[0], rho_eg=rho_eg[0])
    return QubitState(
        rho_ee=np.array(rho_ee), rho_gg=np.array(rho_gg), rho_eg=np.array(rho_eg)
    )


def vacuum_displacement_overlap(config):
    """<0|D|0> of the truncated displacement; should equal exp(-sum |alpha|^2 / 2)."""
    out = 1.0 + 0.0j
    for a in config.alphas:
        out *= displacement_matrix(a, config.cutoff)[0, 0]
    return out
