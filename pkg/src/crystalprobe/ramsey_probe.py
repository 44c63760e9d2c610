"""Exact reduced dynamics of the Ramsey probe qubit.

The sequence is a +pi/4-area pulse, free evolution for a time t, and a
-pi/4-area pulse, with the pulses taken in the instantaneous limit and the
qubit on resonance (the laser frame removes the bare qubit splitting).  Each
pulse is U = (1 -+ i (sigma^+ D + sigma^- D^dagger)) / sqrt(2), where D
displaces every transverse mode by the state-dependent kick amplitude.  The
conditional environment branches stay superpositions of at most four
displaced vacua, so the reduced density matrix is assembled from closed-form
coherent-state overlaps at any chain size.
"""

from dataclasses import dataclass

import numpy as np

from .coherent_algebra import DisplacedVacuum, displace, evolve, overlap, scale

_INV_SQRT2 = 1.0 / np.sqrt(2.0)

# time-batch chunk for the closed-form overlap assembly; eight branch states
# of shape (chunk, n_modes) live at once, so keep the footprint modest
_CHUNK = 4096


@dataclass(frozen=True)
class KickVector:
    """Per-mode displacement amplitudes of the photon-recoil kick."""

    alphas: np.ndarray
    total_strength: float

    def __len__(self):
        return len(self.alphas)


@dataclass(frozen=True)
class ProbeSignal:
    """Ramsey fringe observables on a time grid.

    xi is the vacuum overlap of the displaced environment, B the
    kick-weighted sine sum, V the fringe visibility
    exp(-sum_j |alpha_j|^2 (1 - cos omega_j t)).
    """

    xi: float
    taus: np.ndarray
    B_of_t: np.ndarray
    V_of_t: np.ndarray


@dataclass(frozen=True)
class QubitState:
    """2x2 Hermitian unit-trace state; entries may be time-batched arrays."""

    rho_ee: np.ndarray | complex
    rho_gg: np.ndarray | complex
    rho_eg: np.ndarray | complex

    def to_matrix(self):
        return np.array(
            [[complex(self.rho_ee), complex(self.rho_eg)],
             [np.conj(complex(self.rho_eg)), complex(self.rho_gg)]]
        )

    @classmethod
    def from_matrix(cls, rho):
        rho = np.asarray(rho)
        return cls(rho_ee=rho[0, 0], rho_gg=rho[1, 1], rho_eg=rho[0, 1])

    def validate(self, atol=1e-10):
        tr = np.asarray(self.rho_ee + self.rho_gg)
        if np.any(np.abs(tr - 1.0) > atol):
            raise ValueError(f"trace deviates from 1 by {np.max(np.abs(tr - 1.0)):g}")
        if np.any(np.abs(np.imag(np.asarray(self.rho_ee))) > atol) or np.any(
            np.abs(np.imag(np.asarray(self.rho_gg))) > atol
        ):
            raise ValueError("populations are not real")
        ee = np.real(np.asarray(self.rho_ee))
        gg = np.real(np.asarray(self.rho_gg))
        lam_min = 0.5 * (ee + gg) - np.sqrt(
            0.25 * (ee - gg) ** 2 + np.abs(np.asarray(self.rho_eg)) ** 2
        )
        if np.any(lam_min < -atol):
            raise ValueError(f"negative eigenvalue {np.min(lam_min):g}")
        return self


@dataclass(frozen=True)
class BlochPair:
    """Antipodal pure-state pair parametrized by the Bloch angles of its first member."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * np.pi:
            raise ValueError(f"phi must lie in [0, 2 pi), got {self.phi}")

    def coefficients(self):
        """(c_e, c_g) of the first member."""
        return np.cos(self.theta / 2.0), np.exp(1j * self.phi) * np.sin(self.theta / 2.0)

    def antipode(self):
        return BlochPair(np.pi - self.theta, (self.phi + np.pi) % (2.0 * np.pi))


SIGMA_X_PAIR = BlochPair(theta=np.pi / 2.0, phi=0.0)


def kick_amplitudes(modes, eta, omega_floor=1e-6):
    """Kick amplitudes alpha_j = i eta sqrt(1/(2 omega_j)) S_1j (units omega0 = 1)."""
    freqs = np.asarray(modes.frequencies, dtype=float)
    if np.any(freqs < omega_floor):
        raise ValueError(f"mode frequency below floor {omega_floor:g}")
    alphas = 1j * eta * np.sqrt(0.5 / freqs) * np.asarray(modes.probe_amplitudes)
    return KickVector(alphas=alphas, total_strength=float(np.sum(np.abs(alphas) ** 2)))


def probe_signal(kick, modes, grid):
    """Fringe observables xi, B(t), V(t) on the grid (blocked over time)."""
    taus = np.asarray(grid.times() if hasattr(grid, "times") else grid, dtype=float)
    freqs = np.asarray(getattr(modes, "frequencies", modes), dtype=float)
    a2 = np.abs(kick.alphas) ** 2
    if len(a2) != len(freqs):
        raise ValueError("kick vector and mode set lengths differ")
    b_t = np.empty_like(taus)
    ln_v = np.empty_like(taus)
    for lo in range(0, len(taus), _CHUNK):
        wt = taus[lo:lo + _CHUNK, None] * freqs[None, :]
        b_t[lo:lo + _CHUNK] = np.sin(wt) @ a2
        ln_v[lo:lo + _CHUNK] = -((1.0 - np.cos(wt)) @ a2)
    return ProbeSignal(
        xi=float(np.exp(-0.5 * kick.total_strength)),
        taus=taus,
        B_of_t=b_t,
        V_of_t=np.exp(ln_v),
    )


def _pulse(e_branches, g_branches, alphas, i_factor):
    """One Ramsey pulse: (1 + i_factor (sigma^+ D + sigma^- D^dagger)) / sqrt(2)."""
    new_e = [scale(s, _INV_SQRT2) for s in e_branches]
    new_e += [scale(displace(s, alphas), i_factor * _INV_SQRT2) for s in g_branches]
    new_g = [scale(s, _INV_SQRT2) for s in g_branches]
    new_g += [scale(displace(s, -alphas), i_factor * _INV_SQRT2) for s in e_branches]
    return new_e, new_g


def _conditional_branches(c_e, c_g, freqs, alphas, t):
    """Environment branch lists attached to |e> and |g> after the full sequence."""
    n = len(alphas)
    e_br, g_br = [], []
    if c_e != 0:
        e_br.append(DisplacedVacuum(np.zeros(n, dtype=complex), weight=complex(c_e)))
    if c_g != 0:
        g_br.append(DisplacedVacuum(np.zeros(n, dtype=complex), weight=complex(c_g)))
    e_br, g_br = _pulse(e_br, g_br, alphas, -1j)
    e_br = [evolve(s, freqs, t) for s in e_br]
    g_br = [evolve(s, freqs, t) for s in g_br]
    e_br, g_br = _pulse(e_br, g_br, alphas, +1j)
    return e_br, g_br


def _branch_inner(bras, kets):
    total = 0.0 + 0.0j
    for a in bras:
        for b in kets:
            total = total + overlap(a, b)
    return total


def _map_pure(c_e, c_g, freqs, alphas, t):
    e_br, g_br = _conditional_branches(c_e, c_g, freqs, alphas, t)
    return QubitState(
        rho_ee=_branch_inner(e_br, e_br),
        rho_gg=_branch_inner(g_br, g_br),
        rho_eg=_branch_inner(g_br, e_br),
    )


def ramsey_map(initial, modes, kick, t):
    """Reduced probe state after the pulse -- evolve(t) -- counter-pulse sequence.

    initial may be a BlochPair (its first member is propagated as a pure
    state) or a QubitState (propagated by linearity through the basis matrix
    units).  t may be a scalar or a 1D array of times; entries of the result
    are batched accordingly.
    """
    freqs = np.asarray(getattr(modes, "frequencies", modes), dtype=float)
    alphas = np.asarray(kick.alphas, dtype=complex)
    t_arr = np.asarray(t, dtype=float)

    def compute(tc):
        if isinstance(initial, BlochPair):
            c_e, c_g = initial.coefficients()
            return _map_pure(c_e, c_g, freqs, alphas, tc)
        if isinstance(initial, QubitState):
            # linearity: U(|q><q'| ox |0><0|) -> branch overlaps per matrix unit
            e_e, g_e = _conditional_branches(1.0, 0.0, freqs, alphas, tc)
            e_g, g_g = _conditional_branches(0.0, 1.0, freqs, alphas, tc)
            br_e = {"e": e_e, "g": g_e}
            br_g = {"e": e_g, "g": g_g}
            rho = {("e", "e"): initial.rho_ee, ("e", "g"): initial.rho_eg,
                   ("g", "e"): np.conj(initial.rho_eg), ("g", "g"): initial.rho_gg}
            out = {}
            for i in ("e", "g"):
                for j in ("e", "g"):
                    acc = 0.0 + 0.0j
                    for q, brq in (("e", br_e), ("g", br_g)):
                        for qp, brqp in (("e", br_e), ("g", br_g)):
                            acc = acc + rho[(q, qp)] * _branch_inner(brqp[j], brq[i])
                    out[(i, j)] = acc
            return QubitState(rho_ee=out[("e", "e")], rho_gg=out[("g", "g")],
                              rho_eg=out[("e", "g")])
        raise TypeError(f"unsupported initial state type {type(initial)!r}")

    if t_arr.ndim == 0:
        return compute(float(t_arr))
    parts = [compute(t_arr[lo:lo + _CHUNK]) for lo in range(0, len(t_arr), _CHUNK)]
    return QubitState(
        rho_ee=np.concatenate([np.atleast_1d(p.rho_ee) for p in parts]),
        rho_gg=np.concatenate([np.atleast_1d(p.rho_gg) for p in parts]),
        rho_eg=np.concatenate([np.atleast_1d(p.rho_eg) for p in parts]),
    )


def trace_distance_closed_form(signal, t=None):
    """Optimal-pair trace distance from the fringe observables.

    D(t) = |1 + 2 cos B (V - xi^4/V) + V^4 + 2 xi^4| / 4, evaluated on the
    signal's grid (t=None) or at one grid sample.
    """
    if t is None:
        v, b = signal.V_of_t, signal.B_of_t
    else:
        idx = int(np.argmin(np.abs(signal.taus - t)))
        if abs(signal.taus[idx] - t) > 1e-9:
            raise ValueError(f"t={t} is not on the signal grid")
        v, b = signal.V_of_t[idx], signal.B_of_t[idx]
    if np.any(np.asarray(v) <= 0):
        raise ValueError("visibility must be positive")
    xi4 = signal.xi**4
    return 0.25 * np.abs(1.0 + 2.0 * np.cos(b) * (v - xi4 / v) + v**4 + 2.0 * xi4)
