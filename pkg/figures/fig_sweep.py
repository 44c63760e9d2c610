#!/usr/bin/env python3
"""Backflow measure versus tuning parameter on a symmetric-log axis.

Usage: fig_sweep <sweep.csv> <out.png> [--linthresh X]
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from csv_tables import load_columns, save_figure


def render(csv_path, linthresh=1e-7):
    table = load_columns(csv_path, required=("key", "measure"))
    if "status" in table:
        ok = table["status"] == "ok"
    else:
        ok = np.isfinite(table["measure"])
    delta = table["key"][ok]
    measure = table["measure"][ok]

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for sign, color in ((delta > 0, "tab:blue"), (delta < 0, "tab:red")):
        if np.any(sign):
            order = np.argsort(delta[sign])
            ax.plot(delta[sign][order], measure[sign][order], "o-", ms=3,
                    lw=1.0, color=color,
                    label="linear side" if color == "tab:blue" else "zigzag side")
    # mark the innermost bins, where the extremum is expected
    inner = np.argsort(np.abs(delta))[:2]
    ax.plot(delta[inner], measure[inner], "k*", ms=11, zorder=5,
            label="innermost bins")
    ax.set_xscale("symlog", linthresh=linthresh)
    ax.set_xlabel(r"$\Delta$")
    ax.set_ylabel(r"$\mathcal{N}$")
    ax.legend(frameon=False, fontsize=9)
    ax.set_title("Backflow across the structural transition")
    fig.tight_layout()
    return fig


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv")
    ap.add_argument("out")
    ap.add_argument("--linthresh", type=float, default=1e-7)
    args = ap.parse_args(argv)
    fig = render(args.csv, args.linthresh)
    paths = save_figure(fig, args.out)
    plt.close(fig)
    print("wrote " + " ".join(paths))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
