"""Equilibrium structure and transverse phonon modes of a ring-periodic ion chain.

Dimensionless units throughout: frequencies are measured in units of
omega0 = sqrt(Q^2 / (m a^3)), lengths in units of the inter-ion spacing a,
and hbar = m = 1.  The transverse confinement nu_t is parametrized by the
tuning parameter delta = nu_t/nu_c - 1, where nu_c is the confinement at
which the planar buckling instability sets in; delta > 0 is the linear
chain, delta < 0 the zigzag.

Inter-ion distances are taken along the periodic 1D coordinate (axial
separation n*a plus transverse offsets), and Coulomb sums enumerate the
offsets n = 1..neighbor_cutoff uniformly for every ion.  This weighting is
what makes the analytic zone-edge dispersion zero coincide with nu_c and
keeps the zigzag Hessian consistent with the linear dispersion formula at
b = 0.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import zeta

# Minimum admissible |delta|: the exactly-critical chain has a vanishing
# soft mode and divergent kick amplitudes, so it is rejected outright.
DELTA_MIN = 1e-7

# Modes whose probe-site amplitude is below this are dropped; anything
# discarded for small frequency must also sit below it.
AMPLITUDE_CUT = 1e-10

DEFAULT_OMEGA_FLOOR = 1e-6

PROBE_SITE = 1  # all ring sites are equivalent; site 1 is the convention


def critical_frequency():
    """Buckling threshold nu_c of the transverse confinement, in units of omega0.

    nu_c = sqrt(7/2 * zeta(3)); the same number is the zero in nu_t of the
    zone-edge transverse dispersion in the infinite-cutoff limit.
    """
    return float(np.sqrt(3.5 * zeta(3)))


@dataclass(frozen=True)
class ChainParams:
    """Physical and numerical configuration of the chain and probe.

    Attributes
    ----------
    n_ions : even int >= 4
    delta : tuning parameter nu_t/nu_c - 1, |delta| >= 1e-7
    eta : Lamb-Dicke parameter of the probe kick (>= 0)
    neighbor_cutoff : largest Coulomb offset |i-j| kept (default n_ions/2)
    omega_floor : minimum admissible retained mode frequency (units omega0)
    """

    n_ions: int
    delta: float
    eta: float = 1.0
    neighbor_cutoff: int = 0  # 0 means the default n_ions // 2
    omega_floor: float = DEFAULT_OMEGA_FLOOR

    def __post_init__(self):
        if self.n_ions < 4 or self.n_ions % 2 != 0:
            raise ValueError(f"n_ions must be even and >= 4, got {self.n_ions}")
        if abs(self.delta) < DELTA_MIN:
            raise ValueError(
                f"|delta| must be >= {DELTA_MIN:g} (got {self.delta:g}): "
                "the exactly-critical chain is inadmissible"
            )
        if self.eta < 0:
            raise ValueError(f"eta must be >= 0, got {self.eta}")
        if self.neighbor_cutoff == 0:
            object.__setattr__(self, "neighbor_cutoff", self.n_ions // 2)
        if not 1 <= self.neighbor_cutoff <= self.n_ions // 2:
            raise ValueError(
                f"neighbor_cutoff must lie in [1, n_ions/2], got {self.neighbor_cutoff}"
            )
        if self.omega_floor <= 0:
            raise ValueError("omega_floor must be positive")

    @property
    def nu_t(self):
        """Transverse confinement in units of omega0.

        delta is measured from the buckling threshold of the configured
        model (finite neighbor_cutoff), so the soft mode vanishes exactly at
        delta -> 0 and the zigzag displacement is nonzero iff delta < 0 at
        every chain size.  The threshold converges to critical_frequency()
        as the cutoff grows.
        """
        return finite_cutoff_critical(self.neighbor_cutoff) * (1.0 + self.delta)


@dataclass(frozen=True)
class ModeSet:
    """Probe-coupled transverse normal modes of one chain configuration.

    frequencies are ascending and in units of omega0; probe_amplitudes are
    the y-components of the orthonormal eigenvectors at the probe site, so
    their squares sum to one over the full y-polarization block.  labels
    carry (momentum index, branch tag) per mode; soft_index points at the
    minimum-frequency retained mode.
    """

    frequencies: np.ndarray
    probe_amplitudes: np.ndarray
    labels: tuple = ()
    soft_index: int = 0

    def __len__(self):
        return len(self.frequencies)


@dataclass(frozen=True)
class ZigzagEquilibrium:
    """Variational zigzag equilibrium: staggered transverse displacement b."""

    b: float
    energy: float
    converged: bool


def transverse_dispersion_sq(k, nu_t, cutoff):
    """Squared transverse phonon frequency of the linear chain at momentum k.

    omega^2(k) = nu_t^2 - 4 sum_{n<=cutoff} sin^2(n k / 2) / n^3, with k in
    units of 1/a.  The zone-edge zero of this expression in nu_t converges
    to critical_frequency() as cutoff grows.
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    n = np.arange(1, cutoff + 1, dtype=float)
    s = 4.0 * np.sum(np.sin(np.outer(k, n) / 2.0) ** 2 / n**3, axis=1)
    out = nu_t**2 - s
    return out if out.size > 1 else float(out[0])


def finite_cutoff_critical(cutoff):
    """Zone-edge instability threshold at a finite Coulomb cutoff."""
    n = np.arange(1, cutoff + 1)
    odd = n[n % 2 == 1].astype(float)
    return float(np.sqrt(4.0 * np.sum(odd**-3)))


def _sorted_modeset(freqs, amps, labels, omega_floor):
    freqs = np.asarray(freqs, dtype=float)
    amps = np.asarray(amps, dtype=float)
    if np.any(freqs < omega_floor):
        bad = freqs[freqs < omega_floor]
        raise ValueError(f"retained mode frequency below floor {omega_floor:g}: {bad}")
    order = np.lexsort((np.arange(len(freqs)), freqs))
    freqs = freqs[order]
    amps = amps[order]
    labels = tuple(labels[i] for i in order)
    total = float(np.sum(amps**2))
    if abs(total - 1.0) > 1e-10:
        raise ValueError(f"probe amplitudes not an orthonormal row: sum S^2 = {total!r}")
    return ModeSet(
        frequencies=freqs,
        probe_amplitudes=amps,
        labels=labels,
        soft_index=int(np.argmin(freqs)),
    )


def linear_spectrum(params):
    """Transverse (y) normal modes of the linear chain.

    Momenta k = 2*pi*m/N for m = 0..N/2; interior momenta carry degenerate
    cosine/sine parity doublets, the ends are singlets (m = 0 uniform,
    m = N/2 alternating).  Probe amplitudes are the orthonormal mode values
    at the probe site.  Modes with vanishing probe amplitude are dropped.
    """
    if params.delta < DELTA_MIN:
        raise ValueError(
            f"linear_spectrum requires delta >= {DELTA_MIN:g}, got {params.delta:g}"
        )
    n_ions = params.n_ions
    cutoff = params.neighbor_cutoff
    nu_t = params.nu_t
    ms = np.arange(0, n_ions // 2 + 1)
    k = 2.0 * np.pi * ms / n_ions
    om_sq = transverse_dispersion_sq(k, nu_t, cutoff)
    om_sq = np.atleast_1d(om_sq)
    if np.any(om_sq <= 0):
        raise ValueError(
            f"linear chain unstable at delta={params.delta:g}, cutoff={cutoff}: "
            f"min omega^2 = {om_sq.min():g}"
        )
    om = np.sqrt(om_sq)

    freqs, amps, labels = [], [], []
    root_n = np.sqrt(n_ions)
    for mi, m in enumerate(ms):
        if m == 0:
            freqs.append(om[mi])
            amps.append(1.0 / root_n)
            labels.append((int(m), "cos"))
        elif m == n_ions // 2:
            # alternating mode (-1)^i / sqrt(N) evaluated at the probe site
            freqs.append(om[mi])
            amps.append((-1.0) ** PROBE_SITE / root_n)
            labels.append((int(m), "cos"))
        else:
            c = np.sqrt(2.0 / n_ions) * np.cos(k[mi] * PROBE_SITE)
            s = np.sqrt(2.0 / n_ions) * np.sin(k[mi] * PROBE_SITE)
            freqs.extend([om[mi], om[mi]])
            amps.extend([c, s])
            labels.extend([(int(m), "cos"), (int(m), "sin")])

    freqs = np.array(freqs)
    amps = np.array(amps)
    keep = np.abs(amps) >= AMPLITUDE_CUT
    labels = [lab for lab, kp in zip(labels, keep) if kp]
    return _sorted_modeset(freqs[keep], amps[keep], labels, params.omega_floor)


def _per_cell_energy(params, b):
    """Potential energy per ion of the staggered configuration, as a function of b.

    Only odd offsets feel the transverse displacement: the axial distance for
    offset n is n, the transverse one 0 (even n) or b (odd n).
    """
    n = np.arange(1, params.neighbor_cutoff + 1, dtype=float)
    odd = n % 2 == 1
    dist = np.sqrt(n**2 + np.where(odd, b * b, 0.0))
    return 0.5 * params.nu_t**2 * (b / 2.0) ** 2 + float(np.sum(1.0 / dist))


def zigzag_equilibrium(params):
    """Staggered transverse displacement minimizing the per-cell potential.

    The stationarity condition factorizes as b * g(b^2) = 0 with g strictly
    increasing, so the nonzero root (present only when the linear chain is
    unstable at this cutoff) is bracketed and solved to machine precision.
    """
    nu_t = params.nu_t
    n = np.arange(1, params.neighbor_cutoff + 1)
    odd = n[n % 2 == 1].astype(float)

    def g(s):
        # d/d(b^2) of the per-cell energy, up to a positive factor
        return nu_t**2 / 4.0 - np.sum((odd**2 + s) ** -1.5)

    if g(0.0) >= 0.0:
        # transverse curvature non-negative: the linear chain is the minimum
        return ZigzagEquilibrium(b=0.0, energy=_per_cell_energy(params, 0.0), converged=True)

    hi = 1.0
    for _ in range(60):
        if g(hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise RuntimeError("zigzag equilibrium bracket expansion failed")
    s_min = brentq(g, 0.0, hi, xtol=1e-15, rtol=8.9e-16)
    b = float(np.sqrt(s_min))

    # analytic curvature at the reported minimum (FD is hopeless at small b)
    curv = nu_t**2 / 4.0 + float(
        np.sum(3.0 * b * b * (odd**2 + b * b) ** -2.5 - (odd**2 + b * b) ** -1.5)
    )
    if curv < 0.0:
        raise RuntimeError(f"negative curvature {curv:g} at reported zigzag minimum")
    return ZigzagEquilibrium(b=b, energy=_per_cell_energy(params, b), converged=True)


def staggered_positions(params, b):
    """Equilibrium coordinates (x_i, y_i) = (i, (-1)^i b/2) on the ring."""
    i = np.arange(params.n_ions)
    return i.astype(float), ((-1.0) ** i) * b / 2.0


def potential_energy(params, b, dx=None, dy=None):
    """Total trap-plus-Coulomb potential for displaced staggered positions.

    dx, dy are per-ion displacements along the ring coordinate and the
    transverse direction.  Used for finite-difference cross-checks of the
    analytic Hessian.
    """
    n_ions = params.n_ions
    dx = np.zeros(n_ions) if dx is None else np.asarray(dx, dtype=float)
    dy = np.zeros(n_ions) if dy is None else np.asarray(dy, dtype=float)
    _, y_eq = staggered_positions(params, b)
    y = y_eq + dy
    u = 0.5 * params.nu_t**2 * float(np.sum(y**2))
    i = np.arange(n_ions)
    for n in range(1, params.neighbor_cutoff + 1):
        j = (i + n) % n_ions
        ax = n + dx[j] - dx[i]
        tr = y[j] - y[i]
        u += float(np.sum(1.0 / np.sqrt(ax**2 + tr**2)))
    return u


def potential_gradient(params, b, dx=None, dy=None):
    """Analytic gradient of potential_energy in the 2N displacements.

    Returns the length-2N vector (d/dx_0.., d/dy_0..); used to validate the
    analytic Hessian by single finite differences, which keeps the roundoff
    noise far below the 1e-6 agreement target.
    """
    n_ions = params.n_ions
    dx = np.zeros(n_ions) if dx is None else np.asarray(dx, dtype=float)
    dy = np.zeros(n_ions) if dy is None else np.asarray(dy, dtype=float)
    _, y_eq = staggered_positions(params, b)
    y = y_eq + dy
    gx = np.zeros(n_ions)
    gy = params.nu_t**2 * y
    i = np.arange(n_ions)
    for n in range(1, params.neighbor_cutoff + 1):
        j = (i + n) % n_ions
        ax = n + dx[j] - dx[i]
        tr = y[j] - y[i]
        r3 = (ax**2 + tr**2) ** 1.5
        fx = -ax / r3
        fy = -tr / r3
        np.add.at(gx, j, fx)
        np.add.at(gx, i, -fx)
        np.add.at(gy, j, fy)
        np.add.at(gy, i, -fy)
    return np.concatenate([gx, gy])


def hessian(params, b):
    """Mass-weighted 2N x 2N Hessian of the full potential at the staggered config.

    Coordinate ordering: x_0..x_{N-1}, y_0..y_{N-1}.  Pairwise Coulomb
    blocks are assembled analytically from (3 v_a v_b - r^2 delta_ab)/r^5.
    """
    n_ions = params.n_ions
    _, y_eq = staggered_positions(params, b)
    big_k = np.zeros((2 * n_ions, 2 * n_ions))
    i = np.arange(n_ions)
    for n in range(1, params.neighbor_cutoff + 1):
        j = (i + n) % n_ions
        dx = float(n)
        dy = y_eq[j] - y_eq[i]
        r2 = dx * dx + dy * dy
        r5 = r2**2.5
        hxx = (3.0 * dx * dx - r2) / r5
        hyy = (3.0 * dy * dy - r2) / r5
        hxy = 3.0 * dx * dy / r5
        xi_, yi_, xj_, yj_ = i, n_ions + i, j, n_ions + j
        np.add.at(big_k, (xi_, xi_), hxx)
        np.add.at(big_k, (xj_, xj_), hxx)
        np.add.at(big_k, (xi_, xj_), -hxx)
        np.add.at(big_k, (xj_, xi_), -hxx)
        np.add.at(big_k, (yi_, yi_), hyy)
        np.add.at(big_k, (yj_, yj_), hyy)
        np.add.at(big_k, (yi_, yj_), -hyy)
        np.add.at(big_k, (yj_, yi_), -hyy)
        np.add.at(big_k, (xi_, yi_), hxy)
        np.add.at(big_k, (yi_, xi_), hxy)
        np.add.at(big_k, (xj_, yj_), hxy)
        np.add.at(big_k, (yj_, xj_), hxy)
        np.add.at(big_k, (xi_, yj_), -hxy)
        np.add.at(big_k, (yj_, xi_), -hxy)
        np.add.at(big_k, (xj_, yi_), -hxy)
        np.add.at(big_k, (yi_, xj_), -hxy)
    big_k[n_ions + i, n_ions + i] += params.nu_t**2
    return big_k


def _dominant_momentum(vec_x, vec_y):
    """Momentum label of an eigenvector: strongest Fourier bin folded to [0, N/2]."""
    power = np.abs(np.fft.rfft(vec_x)) ** 2 + np.abs(np.fft.rfft(vec_y)) ** 2
    return int(np.argmax(power))


def zigzag_spectrum(params, eq):
    """Normal modes of the staggered chain from the full 2N x 2N Hessian.

    Diagonalizes the coupled x-y problem at the zigzag equilibrium and keeps
    the modes with nonvanishing transverse amplitude at the probe site.
    Anything discarded (the axial-translation zero mode in particular) must
    carry no probe amplitude.
    """
    if not eq.converged:
        raise ValueError("zigzag equilibrium did not converge")
    n_ions = params.n_ions
    big_k = hessian(params, eq.b)
    asym = float(np.max(np.abs(big_k - big_k.T)))
    if asym > 1e-10:
        raise RuntimeError(f"Hessian asymmetry {asym:g} beyond tolerance")
    # Deflate the exact axial-translation zero mode before diagonalizing:
    # near criticality its eigenvector would otherwise pick up spurious
    # transverse weight of order eps * |K| / gap from the solver.  The
    # shifted copy keeps zero probe amplitude and is dropped below.
    v0 = np.concatenate([np.full(n_ions, 1.0 / np.sqrt(n_ions)), np.zeros(n_ions)])
    big_k = 0.5 * (big_k + big_k.T) + params.nu_t**2 * np.outer(v0, v0)
    lam, vec = np.linalg.eigh(big_k)

    probe_row = vec[n_ions + PROBE_SITE, :]
    keep = np.abs(probe_row) >= AMPLITUDE_CUT
    floor_sq = params.omega_floor**2
    low = lam < floor_sq
    if np.any(low & keep):
        bad = lam[low & keep]
        raise ValueError(
            f"probe-coupled eigenvalue below omega_floor^2: {bad} "
            f"(chain too close to instability at this cutoff)"
        )

    freqs = np.sqrt(lam[keep])
    amps = probe_row[keep]
    labels = []
    for idx in np.nonzero(keep)[0]:
        vx = vec[:n_ions, idx]
        vy = vec[n_ions:, idx]
        branch = "y" if np.sum(vy**2) >= np.sum(vx**2) else "x"
        labels.append((_dominant_momentum(vx, vy), branch))
    return _sorted_modeset(freqs, amps, labels, params.omega_floor)


def soft_mode_gap(modes):
    """Minimum frequency among the probe-coupled modes."""
    if len(modes) == 0:
        raise ValueError("empty mode set")
    return float(modes.frequencies[modes.soft_index])


def spectrum_for(params):
    """Mode set for either phase: linear for delta > 0, zigzag Hessian otherwise."""
    if params.delta > 0:
        return linear_spectrum(params)
    eq = zigzag_equilibrium(params)
    return zigzag_spectrum(params, eq)
