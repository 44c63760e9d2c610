#!/usr/bin/env python3
"""Near-critical backflow versus chain size, with a saturation guide line.

Usage: fig_scaling <sizes.csv> <out.png>
"""

import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from csv_tables import load_columns, save_figure


def render(csv_path):
    table = load_columns(csv_path, required=("key", "measure"))
    if "status" in table:
        ok = table["status"] == "ok"
    else:
        ok = np.isfinite(table["measure"])
    n_ions = table["key"][ok]
    measure = table["measure"][ok]
    order = np.argsort(n_ions)
    n_ions, measure = n_ions[order], measure[order]

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(n_ions, measure, "s-", color="tab:green", ms=5, lw=1.2)
    # saturation level: mean of the last up-to-three points
    tail = measure[-3:] if len(measure) >= 3 else measure
    ax.axhline(float(np.mean(tail)), color="gray", ls="--", lw=0.9,
               label=f"saturation {np.mean(tail):.3g}")
    ax.set_xlabel(r"$N$")
    ax.set_ylabel(r"$\mathcal{N}_{cr}$")
    ax.set_ylim(bottom=0)
    ax.legend(frameon=False, fontsize=9)
    ax.set_title("Finite-size behavior at the near-critical point")
    fig.tight_layout()
    return fig


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv")
    ap.add_argument("out")
    args = ap.parse_args(argv)
    fig = render(args.csv)
    paths = save_figure(fig, args.out)
    plt.close(fig)
    print("wrote " + " ".join(paths))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
