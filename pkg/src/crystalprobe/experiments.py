"""Sweep orchestration, text configuration, and CSV persistence.

Everything here is deterministic: no RNG, sweep rows are independent tasks
merged by sorted key, and CSV cells are printed with 12 significant digits
and Unix line endings, so identical configurations produce byte-identical
files regardless of the worker count.
"""

import dataclasses
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .chain_spectrum import ChainParams, soft_mode_gap, spectrum_for
from .nonmarkov import TimeGrid, blp_for_pair, blp_measure, trace_distance
from .ramsey_probe import (
    BlochPair,
    kick_amplitudes,
    probe_signal,
    ramsey_map,
    trace_distance_closed_form,
)


def _is_sigma_x(pair):
    return abs(pair.theta - np.pi / 2.0) < 1e-12 and abs(pair.phi) < 1e-12


# Reference windows (dimensionless tau).  The dynamics window holds several
# ring-recurrence revivals of an N=200 chain; the sweep window stops before
# the near-critical soft mode freezes the visibility, which would otherwise
# invert the backflow minimum; the long window covers many soft-mode periods
# across the whole sweep range.
DYNAMICS_WINDOW = 1500.0
SWEEP_WINDOW = 100.0
LONG_WINDOW = 3000.0


class ConfigError(Exception):
    """Invalid configuration file, key, or value."""


@dataclass
class RunConfig:
    """All knobs of a run: chain, probe, time grid, sweeps, pair, output.

    delta_values / n_values are the sweep axes; theta/phi override the
    initial antipodal pair (sigma_x eigenstates by default); sample_stride
    thins the rows written by the dynamics command without changing the
    integration grid.
    """

    n_ions: int = 200
    delta: float = 0.1
    eta: float = 1.5
    neighbor_cutoff: int = 0
    omega_floor: float = 1e-6
    tau_max: float = DYNAMICS_WINDOW
    dtau: float = 0.05
    theta: float = np.pi / 2.0
    phi: float = 0.0
    delta_values: tuple = ()
    n_values: tuple = (20, 50, 100, 200, 400)
    n_theta: int = 9
    n_phi: int = 12
    prominence: float = 0.05
    sample_stride: int = 1
    out: str = ""

    def chain_params(self, n_ions=None, delta=None):
        try:
            return ChainParams(
                n_ions=n_ions if n_ions is not None else self.n_ions,
                delta=delta if delta is not None else self.delta,
                eta=self.eta,
                neighbor_cutoff=self.neighbor_cutoff,
                omega_floor=self.omega_floor,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def time_grid(self):
        try:
            return TimeGrid(tau_max=self.tau_max, dtau=self.dtau)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def pair(self):
        try:
            return BlochPair(theta=self.theta, phi=self.phi)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def default_delta_values(points_per_decade=7, inner_exp=-7, outer_exp=-1):
    """Two-sided log grid of tuning parameters, 7 points per decade per side."""
    n = (outer_exp - inner_exp) * points_per_decade
    exps = inner_exp + np.arange(n + 1) / points_per_decade
    mags = 10.0**exps
    return tuple(np.concatenate([-mags[::-1], mags]))


def reference_config(study):
    """Production configurations of the standard studies.

    dynamics-far / dynamics-near: N=200 trace-distance runs on the default
    window.  sweep-short: the two-sided tuning scan whose backflow minimum
    marks the transition.  sweep-long: the slow-revival regime, run at weak
    coupling where the soft-mode fluctuations dominate the measure.
    sweep-size: finite-size scan at the near-critical stand-in.
    optimize-pair: the Bloch-grid verification of the optimal pair.
    """
    configs = {
        "dynamics-far": RunConfig(),
        "dynamics-near": RunConfig(delta=1e-5),
        "dynamics-long-far": RunConfig(n_ions=300, tau_max=LONG_WINDOW),
        "dynamics-long-near": RunConfig(n_ions=300, delta=1e-4, tau_max=LONG_WINDOW),
        "sweep-short": RunConfig(n_ions=100, eta=0.7, tau_max=SWEEP_WINDOW),
        "sweep-long": RunConfig(
            n_ions=300,
            eta=0.1,
            tau_max=LONG_WINDOW,
            delta_values=tuple(default_delta_values(inner_exp=-4)),
        ),
        "sweep-size": RunConfig(n_ions=100, delta=1e-5, eta=0.7, tau_max=SWEEP_WINDOW),
        "optimize-pair": RunConfig(n_ions=50, delta=0.1, tau_max=300.0),
    }
    if study not in configs:
        raise ConfigError(f"unknown study {study!r}; one of {sorted(configs)}")
    return configs[study]


_FIELD_TYPES = {f.name: f for f in dataclasses.fields(RunConfig)}


def _parse_value(name, raw, lineno):
    base = _FIELD_TYPES[name].type
    try:
        if name == "delta_values":
            return tuple(float(x) for x in raw.replace(",", " ").split())
        if name == "n_values":
            return tuple(int(x) for x in raw.replace(",", " ").split())
        if base is int:
            return int(raw)
        if base is float:
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"line {lineno}: bad value for {name!r}: {raw!r}") from exc


def parse_config(text, base=None):
    """Parse line-oriented `key = value` text into a RunConfig.

    Unknown keys and malformed lines are errors carrying the line number.
    Blank lines and #-comments are ignored.
    """
    cfg = dataclasses.replace(base) if base is not None else RunConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected `key = value`, got {line!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        setattr(cfg, key, _parse_value(key, raw, lineno))
    return cfg


def apply_overrides(cfg, overrides):
    """Apply CLI `key=value` overrides on top of a parsed config."""
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, _, raw = item.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown override key {key!r}")
        setattr(cfg, key, _parse_value(key, raw.strip(), 0))
    return cfg


def format_cell(value):
    """CSV cell: floats at 12 significant digits, everything else as str."""
    if isinstance(value, (float, np.floating)):
        return f"{value:.12g}"
    return str(value)


def write_csv(path, header, rows):
    """Comma-separated, header row, Unix line endings, deterministic bytes."""
    lines = [",".join(header)]
    lines.extend(",".join(format_cell(v) for v in row) for row in rows)
    payload = "\n".join(lines) + "\n"
    with open(path, "w", newline="") as fh:
        fh.write(payload)
    return path


@dataclass(frozen=True)
class SweepRow:
    """One sweep point: backflow measure with spectrum diagnostics."""

    key: float
    side: str
    measure: float
    xi: float
    soft_gap: float
    runtime: float
    status: str = "ok"


def _signal_for(params, grid):
    modes = spectrum_for(params)
    kick = kick_amplitudes(modes, params.eta, params.omega_floor)
    sig = probe_signal(kick, modes, grid)
    return modes, kick, sig


def run_dynamics(config):
    """Time series of the optimal-pair trace distance and fringe observables.

    Returns (header, rows); the distance column uses the closed form for the
    sigma_x pair and the general map otherwise, while rho_eg always comes
    from the general map on the pair's first member.
    """
    params = config.chain_params()
    grid = config.time_grid()
    pair = config.pair()
    modes, kick, sig = _signal_for(params, grid)
    taus = sig.taus

    rho = ramsey_map(pair, modes, kick, taus)
    if _is_sigma_x(pair):
        d_opt = trace_distance_closed_form(sig)
    else:
        d_opt = trace_distance(rho, ramsey_map(pair.antipode(), modes, kick, taus))

    stride = max(1, int(config.sample_stride))
    rows = [
        (
            taus[i],
            float(np.atleast_1d(d_opt)[i]),
            float(sig.V_of_t[i]),
            float(sig.B_of_t[i]),
            float(np.real(np.atleast_1d(rho.rho_eg)[i])),
            float(np.imag(np.atleast_1d(rho.rho_eg)[i])),
        )
        for i in range(0, len(taus), stride)
    ]
    header = ("tau", "D_opt", "V", "B", "rho_eg_re", "rho_eg_im")
    return header, rows


def _sweep_point(config, grid, n_ions, delta):
    """One sweep row; failures are folded into the row status."""
    t0 = time.perf_counter()
    side = "linear" if delta > 0 else "zigzag"
    try:
        params = config.chain_params(n_ions=n_ions, delta=delta)
        modes, kick, sig = _signal_for(params, grid)
        result = blp_measure(trace_distance_closed_form(sig))
        return SweepRow(
            key=float(delta),
            side=side,
            measure=result.measure,
            xi=sig.xi,
            soft_gap=soft_mode_gap(modes),
            runtime=time.perf_counter() - t0,
        )
    except Exception as exc:  # failure isolation: a bad row never kills a sweep
        return SweepRow(
            key=float(delta),
            side=side,
            measure=float("nan"),
            xi=float("nan"),
            soft_gap=float("nan"),
            runtime=time.perf_counter() - t0,
            status=str(exc).replace(",", ";").replace("\n", " "),
        )


def _run_rows(jobs, threads):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda f: f(), jobs))
    return [f() for f in jobs]


SWEEP_HEADER = ("key", "side", "measure", "xi", "soft_gap", "status")


def sweep_rows_to_csv(rows):
    return [(r.key, r.side, r.measure, r.xi, r.soft_gap, r.status) for r in rows]


def sweep_delta(config, threads=1):
    """Backflow versus tuning parameter on the sigma_x pair, sorted by delta."""
    values = config.delta_values or default_delta_values()
    if len(set(values)) != len(values):
        raise ConfigError("delta_values contains duplicates")
    for d in values:
        if not 1e-7 <= abs(d) <= 1e-1 + 1e-15:
            raise ConfigError(f"delta value {d:g} outside the admitted range")
    grid = config.time_grid()
    jobs = [
        (lambda d=d: _sweep_point(config, grid, config.n_ions, float(d)))
        for d in values
    ]
    rows = _run_rows(jobs, threads)
    rows.sort(key=lambda r: r.key)
    return rows


def sweep_size(config, threads=1):
    """Backflow versus ion number at the near-critical stand-in |delta| = 1e-5."""
    sign = 1.0 if config.delta >= 0 else -1.0
    delta = sign * 1e-5
    values = config.n_values
    if len(set(values)) != len(values):
        raise ConfigError("n_values contains duplicates")
    for n in values:
        if n < 8 or n % 2:
            raise ConfigError(f"n_values entries must be even and >= 8, got {n}")
    grid = config.time_grid()
    jobs = [
        (lambda n=n: dataclasses.replace(
            _sweep_point(config, grid, int(n), delta), key=float(n)))
        for n in values
    ]
    rows = _run_rows(jobs, threads)
    rows.sort(key=lambda r: r.key)
    return rows


def detect_revivals(taus, series, prominence):
    """Local maxima of the series with topographic prominence >= threshold.

    Returns (tau_peak, height) tuples in ascending tau.
    """
    if prominence <= 0:
        raise ValueError("prominence must be positive")
    series = np.asarray(series, dtype=float)
    taus = np.asarray(taus, dtype=float)
    idx, _ = find_peaks(series, prominence=prominence)
    return [(float(taus[i]), float(series[i])) for i in idx]


def blp_summary(config):
    """Backflow of the configured pair on the configured chain."""
    params = config.chain_params()
    grid = config.time_grid()
    pair = config.pair()
    modes = spectrum_for(params)
    kick = kick_amplitudes(modes, params.eta, params.omega_floor)
    if _is_sigma_x(pair):
        sig = probe_signal(kick, modes, grid)
        result = blp_measure(trace_distance_closed_form(sig), pair=pair)
        xi = sig.xi
    else:
        result = blp_for_pair(pair, modes, kick, grid)
        xi = float(np.exp(-0.5 * kick.total_strength))
    return result, xi, soft_mode_gap(modes)
