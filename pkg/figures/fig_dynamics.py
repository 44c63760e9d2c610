#!/usr/bin/env python3
"""Overlay two trace-distance time series (far-from-critical vs near-critical).

Usage: fig_dynamics <far.csv> <near.csv> <out.png> [--label-a TXT] [--label-b TXT]
"""

import argparse
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from csv_tables import load_columns, save_figure


def render(csv_a, csv_b, label_a=None, label_b=None):
    a = load_columns(csv_a, required=("tau", "D_opt"))
    b = load_columns(csv_b, required=("tau", "D_opt"))
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    ax.plot(a["tau"], a["D_opt"], color="black", lw=0.8,
            label=label_a or os.path.basename(csv_a))
    ax.plot(b["tau"], b["D_opt"], color="crimson", lw=0.8, alpha=0.85,
            label=label_b or os.path.basename(csv_b))
    ax.set_xlabel(r"$\tau = \omega_0 t$")
    ax.set_ylabel(r"$D(\tau)$")
    ax.set_ylim(0, 1.02)
    ax.legend(frameon=False, fontsize=9)
    ax.set_title("Trace distance of the optimal pair")
    fig.tight_layout()
    return fig


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv_far")
    ap.add_argument("csv_near")
    ap.add_argument("out")
    ap.add_argument("--label-a", default=None)
    ap.add_argument("--label-b", default=None)
    args = ap.parse_args(argv)
    fig = render(args.csv_far, args.csv_near, args.label_a, args.label_b)
    paths = save_figure(fig, args.out)
    plt.close(fig)
    print("wrote " + " ".join(paths))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
