import numpy as np
import pytest
from scipy.optimize import brentq

from crystalprobe.chain_spectrum import (
    ChainParams,
    critical_frequency,
    finite_cutoff_critical,
    hessian,
    linear_spectrum,
    potential_energy,
    soft_mode_gap,
    spectrum_for,
    transverse_dispersion_sq,
    zigzag_equilibrium,
    zigzag_spectrum,
)

# Independent reference: direct partial sum of n^-3 over 1e7 terms plus the
# Euler-Maclaurin tail, frozen here after cross-checking against the zone-edge
# dispersion zero.
NU_C_REFERENCE = 2.0511458166250693


def test_critical_frequency_against_series_sum():
    n = np.arange(1, 10**7 + 1, dtype=float)
    m = 1e7
    zeta3 = float(np.sum(n**-3)) + 1 / (2 * m**2) - 1 / (2 * m**3) + 1 / (4 * m**4)
    assert abs(critical_frequency() - np.sqrt(3.5 * zeta3)) < 1e-12
    assert abs(critical_frequency() - NU_C_REFERENCE) < 1e-12


def test_critical_frequency_is_dispersion_zero():
    # zero of omega^2(pi) in nu_t at cutoff 1000, against the closed form
    zero = brentq(
        lambda nu: transverse_dispersion_sq(np.pi, nu, 1000), 1.0, 3.0, xtol=1e-14
    )
    assert abs(zero - critical_frequency()) / critical_frequency() < 1e-3


def test_nu_c_exceeds_nu_t_in_zigzag_phase():
    for delta in (-1e-7, -1e-3, -1e-1):
        p = ChainParams(n_ions=20, delta=delta)
        assert critical_frequency() > p.nu_t


def test_params_validation():
    with pytest.raises(ValueError):
        ChainParams(n_ions=5, delta=0.1)
    with pytest.raises(ValueError):
        ChainParams(n_ions=2, delta=0.1)
    with pytest.raises(ValueError):
        ChainParams(n_ions=20, delta=5e-8)
    with pytest.raises(ValueError):
        ChainParams(n_ions=20, delta=0.0)
    with pytest.raises(ValueError):
        ChainParams(n_ions=20, delta=0.1, eta=-0.5)
    with pytest.raises(ValueError):
        ChainParams(n_ions=20, delta=0.1, neighbor_cutoff=11)
    # default cutoff is N/2
    assert ChainParams(n_ions=20, delta=0.1).neighbor_cutoff == 10


def test_linear_spectrum_band_edges():
    p = ChainParams(n_ions=200, delta=0.1)
    modes = linear_spectrum(p)
    # top of the band is the uniform mode at nu_t
    assert np.isclose(modes.frequencies[-1], p.nu_t, rtol=0, atol=1e-12)
    # soft mode at the zone edge: gap^2 = nu_t^2 - nu_{c,cut}^2
    gap_sq = p.nu_t**2 - finite_cutoff_critical(p.neighbor_cutoff) ** 2
    assert np.isclose(soft_mode_gap(modes) ** 2, gap_sq, rtol=1e-12)


def test_linear_spectrum_orthonormal_row():
    for n_ions in (20, 100, 200):
        modes = linear_spectrum(ChainParams(n_ions=n_ions, delta=0.1))
        assert abs(np.sum(modes.probe_amplitudes**2) - 1.0) < 1e-10
        assert np.all(np.diff(modes.frequencies) >= 0)


def test_linear_spectrum_probe_amplitudes_values():
    n_ions = 20
    modes = linear_spectrum(ChainParams(n_ions=n_ions, delta=0.2))
    k = 2 * np.pi / n_ions
    for (m, branch), s1 in zip(modes.labels, modes.probe_amplitudes):
        if m == 0:
            assert np.isclose(s1, 1 / np.sqrt(n_ions))
        elif m == n_ions // 2:
            assert np.isclose(s1, -1 / np.sqrt(n_ions))
        elif branch == "cos":
            assert np.isclose(s1, np.sqrt(2 / n_ions) * np.cos(k * m))
        else:
            assert np.isclose(s1, np.sqrt(2 / n_ions) * np.sin(k * m))


def test_linear_spectrum_zone_edge_vanishes_at_threshold():
    # at the critical confinement the zone-edge frequency is zero up to the
    # series truncation: check the residual for N=2000 directly
    w2 = transverse_dispersion_sq(np.pi, critical_frequency(), 1000)
    assert abs(w2) < 1e-3


def test_linear_spectrum_rejects_zigzag_side():
    p = ChainParams(n_ions=20, delta=-0.1)
    with pytest.raises(ValueError):
        linear_spectrum(p)


def test_dispersion_flat_at_zone_center():
    p = ChainParams(n_ions=1000, delta=0.1)
    modes = linear_spectrum(p)
    k1 = 2 * np.pi / p.n_ions
    w0 = p.nu_t
    w1 = np.sqrt(transverse_dispersion_sq(k1, p.nu_t, p.neighbor_cutoff))
    assert abs(w1 - w0) < 1e-4 * p.nu_t


def test_zigzag_equilibrium_linear_side_is_flat():
    eq = zigzag_equilibrium(ChainParams(n_ions=40, delta=0.1))
    assert eq.b == 0.0
    assert eq.converged


def test_zigzag_equilibrium_square_root_onset():
    # log-log fit of b(delta) over two decades: second-order exponent 1/2
    deltas = -np.logspace(-4, -2, 9)
    bs = [zigzag_equilibrium(ChainParams(n_ions=200, delta=d)).b for d in deltas]
    slope = np.polyfit(np.log(-deltas), np.log(bs), 1)[0]
    assert abs(slope - 0.5) < 0.02


def test_zigzag_equilibrium_is_a_minimum():
    from crystalprobe.chain_spectrum import _per_cell_energy

    p = ChainParams(n_ions=40, delta=-0.05)
    eq = zigzag_equilibrium(p)
    assert eq.b > 0
    assert _per_cell_energy(p, eq.b) <= _per_cell_energy(p, 0.0)
    assert eq.energy == _per_cell_energy(p, eq.b)


def test_zigzag_b_continuous_at_threshold():
    b_small = zigzag_equilibrium(ChainParams(n_ions=40, delta=-1e-7)).b
    assert 0 < b_small < 1e-3


def test_zigzag_spectrum_matches_linear_at_flat_equilibrium():
    from crystalprobe.chain_spectrum import ZigzagEquilibrium, _per_cell_energy

    p = ChainParams(n_ions=40, delta=0.05)
    flat = ZigzagEquilibrium(b=0.0, energy=_per_cell_energy(p, 0.0), converged=True)
    zig = zigzag_spectrum(p, flat)
    lin = linear_spectrum(p)
    # every linear frequency appears among the zigzag eigenfrequencies
    used = np.zeros(len(zig), dtype=bool)
    for w in lin.frequencies:
        cand = np.where(used, np.inf, np.abs(zig.frequencies - w))
        j = int(np.argmin(cand))
        assert cand[j] < 1e-8
        used[j] = True


def test_zigzag_soft_mode_softens_toward_threshold():
    def min_freq(delta):
        p = ChainParams(n_ions=200, delta=delta)
        return soft_mode_gap(zigzag_spectrum(p, zigzag_equilibrium(p)))

    assert min_freq(-1e-4) < min_freq(-1e-1)


def test_zigzag_hessian_orthonormal_eigenbasis():
    p = ChainParams(n_ions=40, delta=-0.03)
    big_k = hessian(p, zigzag_equilibrium(p).b)
    assert np.max(np.abs(big_k - big_k.T)) < 1e-10
    lam, vec = np.linalg.eigh(big_k)
    gram = vec.T @ vec
    assert np.max(np.abs(gram - np.eye(len(gram)))) < 1e-10


def test_zigzag_probe_row_orthonormal_and_count():
    p = ChainParams(n_ions=40, delta=-0.03)
    modes = zigzag_spectrum(p, zigzag_equilibrium(p))
    assert abs(np.sum(modes.probe_amplitudes**2) - 1.0) < 1e-10
    # retained plus discarded spans the full Hessian dimension
    assert len(modes) <= 2 * p.n_ions


def test_gradient_matches_potential_differences():
    from crystalprobe.chain_spectrum import potential_gradient

    p = ChainParams(n_ions=12, delta=-0.04)
    b = zigzag_equilibrium(p).b
    rng = np.random.default_rng(7)
    dx = 1e-3 * rng.normal(size=p.n_ions)
    dy = 1e-3 * rng.normal(size=p.n_ions)
    analytic = potential_gradient(p, b, dx, dy)
    step = 1e-5
    for idx in range(2 * p.n_ions):
        bump = np.zeros(2 * p.n_ions)
        bump[idx] = step
        up = potential_energy(p, b, dx + bump[: p.n_ions], dy + bump[p.n_ions:])
        dn = potential_energy(p, b, dx - bump[: p.n_ions], dy - bump[p.n_ions:])
        assert abs((up - dn) / (2 * step) - analytic[idx]) < 1e-8


def test_hessian_matches_finite_differences():
    from crystalprobe.chain_spectrum import potential_gradient

    p = ChainParams(n_ions=12, delta=-0.04)
    b = zigzag_equilibrium(p).b
    analytic = hessian(p, b)
    n = p.n_ions
    step = 1e-6
    num = np.zeros_like(analytic)
    for idx in range(2 * n):
        bump = np.zeros(2 * n)
        bump[idx] = step
        up = potential_gradient(p, b, bump[:n], bump[n:])
        dn = potential_gradient(p, b, -bump[:n], -bump[n:])
        num[:, idx] = (up - dn) / (2 * step)
    assert np.max(np.abs(analytic - num)) < 1e-6


def test_zero_mode_is_discarded_without_probe_weight():
    p = ChainParams(n_ions=20, delta=-0.05)
    big_k = hessian(p, zigzag_equilibrium(p).b)
    lam, vec = np.linalg.eigh(big_k)
    # exactly one near-zero eigenvalue (axial translation), no probe amplitude
    near_zero = np.abs(lam) < 1e-10
    assert np.sum(near_zero) == 1
    probe_row = vec[p.n_ions + 1, :]
    assert np.all(np.abs(probe_row[near_zero]) < 1e-10)


def test_soft_gap_monotone_in_delta():
    def gap(delta):
        return soft_mode_gap(linear_spectrum(ChainParams(n_ions=100, delta=delta)))

    assert gap(1e-5) < gap(1e-1)
    assert gap(1e-5) > 0


def test_spectrum_for_dispatches_by_phase():
    lin = spectrum_for(ChainParams(n_ions=20, delta=0.1))
    zig = spectrum_for(ChainParams(n_ions=20, delta=-0.1))
    assert np.isclose(np.sum(lin.probe_amplitudes**2), 1.0)
    assert np.isclose(np.sum(zig.probe_amplitudes**2), 1.0)
    assert len(zig) > len(lin)
