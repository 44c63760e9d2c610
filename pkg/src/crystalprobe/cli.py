"""Command-line interface.

Subcommands: spectrum, dynamics, blp, sweep-delta, sweep-size,
optimize-pair, validate.  Configuration comes from an optional line-oriented
`key = value` file plus repeatable `--override key=value` flags.  Exit codes:
0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import sys

import numpy as np

from .chain_spectrum import spectrum_for
from .experiments import (
    ConfigError,
    RunConfig,
    SWEEP_HEADER,
    apply_overrides,
    blp_summary,
    parse_config,
    run_dynamics,
    sweep_delta,
    sweep_rows_to_csv,
    sweep_size,
    write_csv,
)
from .fock_oracle import FockConfig, simulate
from .nonmarkov import TimeGrid, optimize_pair, trace_distance
from .ramsey_probe import (
    BlochPair,
    KickVector,
    kick_amplitudes,
    probe_signal,
    ramsey_map,
    trace_distance_closed_form,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="crystalprobe",
        description="Ramsey-probe backflow analysis of an ion chain near its "
        "structural transition",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to a key = value configuration file")
    common.add_argument("--out", help="output CSV path")
    common.add_argument("--threads", type=int, default=1, help="worker threads")
    common.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one configuration key (repeatable)",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, descr in (
        ("spectrum", "write the probe-coupled mode table"),
        ("dynamics", "write the trace-distance time series"),
        ("blp", "write the backflow measure of the configured pair"),
        ("sweep-delta", "backflow across the tuning-parameter grid"),
        ("sweep-size", "backflow across chain sizes at the near-critical point"),
        ("optimize-pair", "backflow over an antipodal Bloch-pair grid"),
        ("validate", "compare the exact map against the truncated Fock oracle"),
    ):
        sub.add_parser(name, parents=[common], help=descr)
    return parser


def _load_config(args):
    cfg = RunConfig()
    if args.config:
        try:
            with open(args.config) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        cfg = parse_config(text, base=cfg)
    cfg = apply_overrides(cfg, args.override)
    if args.out:
        cfg.out = args.out
    return cfg


def _require_out(cfg):
    if not cfg.out:
        raise ConfigError("an output path is required (--out or the `out` key)")
    return cfg.out


def _cmd_spectrum(cfg, args):
    modes = spectrum_for(cfg.chain_params())
    rows = [
        (i, modes.labels[i][0], modes.labels[i][1],
         float(modes.frequencies[i]), float(modes.probe_amplitudes[i]))
        for i in range(len(modes))
    ]
    write_csv(_require_out(cfg), ("index", "k_index", "branch", "omega", "s1"), rows)
    return EXIT_OK


def _cmd_dynamics(cfg, args):
    header, rows = run_dynamics(cfg)
    write_csv(_require_out(cfg), header, rows)
    from .experiments import detect_revivals

    taus = [r[0] for r in rows]
    peaks = detect_revivals(taus, [r[1] for r in rows], cfg.prominence)
    if peaks:
        listed = ", ".join(f"{t:.1f}" for t, _ in peaks[:8])
        more = "" if len(peaks) <= 8 else f" (+{len(peaks) - 8} more)"
        print(f"revivals with prominence >= {cfg.prominence:g}: tau = {listed}{more}")
    return EXIT_OK


def _cmd_blp(cfg, args):
    result, xi, gap = blp_summary(cfg)
    header = ("theta", "phi", "measure", "n_revivals", "xi", "soft_gap")
    row = (cfg.theta, cfg.phi, result.measure, result.n_revivals, xi, gap)
    write_csv(_require_out(cfg), header, [row])
    print(f"measure = {result.measure:.12g} (n_revivals = {result.n_revivals})")
    return EXIT_OK


def _cmd_sweep_delta(cfg, args):
    rows = sweep_delta(cfg, threads=args.threads)
    write_csv(_require_out(cfg), SWEEP_HEADER, sweep_rows_to_csv(rows))
    failures = [r for r in rows if r.status != "ok"]
    for r in failures:
        print(f"row delta={r.key:g} failed: {r.status}", file=sys.stderr)
    return EXIT_OK


def _cmd_sweep_size(cfg, args):
    rows = sweep_size(cfg, threads=args.threads)
    write_csv(_require_out(cfg), SWEEP_HEADER, sweep_rows_to_csv(rows))
    return EXIT_OK


def _cmd_optimize_pair(cfg, args):
    params = cfg.chain_params()
    modes = spectrum_for(params)
    kick = kick_amplitudes(modes, params.eta, params.omega_floor)
    best, rows = optimize_pair(
        modes, kick, cfg.time_grid(), cfg.n_theta, cfg.n_phi, threads=args.threads
    )
    write_csv(_require_out(cfg), ("theta", "phi", "measure"), rows)
    print(f"best pair: theta = {best.theta:.12g}, phi = {best.phi:.12g}")
    return EXIT_OK


ORACLE_GATE = {
    "frequencies": (0.3, 1.0, 1.7),
    "magnitudes": (0.4, 0.2, 0.1),
    "cutoff": 20,
    "tau_max": 50.0,
    "dtau": 0.1,
    "tolerance": 1e-6,
}


def oracle_gate_run():
    """Gate comparison: exact map and closed form versus the Fock oracle.

    Returns (max deviation of the map distance, max deviation of the closed
    form) against the brute-force trace distance on the gate configuration.
    """
    freqs = np.array(ORACLE_GATE["frequencies"])
    alphas = 1j * np.array(ORACLE_GATE["magnitudes"])
    grid = TimeGrid(tau_max=ORACLE_GATE["tau_max"], dtau=ORACLE_GATE["dtau"])
    taus = grid.times()
    modes = freqs
    kick = KickVector(alphas=alphas, total_strength=float(np.sum(np.abs(alphas) ** 2)))
    pair = BlochPair(np.pi / 2.0, 0.0)

    r1 = ramsey_map(pair, modes, kick, taus)
    r2 = ramsey_map(pair.antipode(), modes, kick, taus)
    d_map = trace_distance(r1, r2)
    d_closed = trace_distance_closed_form(probe_signal(kick, modes, grid))

    config = FockConfig(frequencies=freqs, alphas=alphas, cutoff=ORACLE_GATE["cutoff"])
    f1 = simulate(config, pair, taus)
    f2 = simulate(config, pair.antipode(), taus)
    d_oracle = trace_distance(f1, f2)

    return (
        float(np.max(np.abs(d_map - d_oracle))),
        float(np.max(np.abs(d_closed - d_oracle))),
    )


def _cmd_validate(cfg, args):
    dev_map, dev_closed = oracle_gate_run()
    tol = ORACLE_GATE["tolerance"]
    ok = dev_map <= tol and dev_closed <= tol
    print(f"max |D_map - D_oracle|    = {dev_map:.3e}")
    print(f"max |D_closed - D_oracle| = {dev_closed:.3e}")
    print(f"tolerance = {tol:.1e}: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_NUMERICAL


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "dynamics": _cmd_dynamics,
    "blp": _cmd_blp,
    "sweep-delta": _cmd_sweep_delta,
    "sweep-size": _cmd_sweep_size,
    "optimize-pair": _cmd_optimize_pair,
    "validate": _cmd_validate,
}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args)
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, RuntimeError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
