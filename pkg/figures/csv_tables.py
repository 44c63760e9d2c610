"""Minimal CSV access for the figure scripts.

The scripts consume only the simulator's delimited artifacts; nothing here
recomputes physics.  Each loader checks the columns it needs and returns
plain numpy arrays.
"""

import csv

import numpy as np


def load_columns(path, required):
    """Read a headered CSV into a dict of float arrays (non-numeric kept as str)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty CSV")
        missing = [c for c in required if c not in reader.fieldnames]
        if missing:
            raise ValueError(f"{path}: missing columns {missing}")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    out = {}
    for name in reader.fieldnames:
        values = [r[name] for r in rows]
        try:
            out[name] = np.array([float(v) for v in values])
        except ValueError:
            out[name] = np.array(values)
    return out


def save_figure(fig, out_path):
    """Write the figure under the requested path as both PNG and SVG."""
    import os

    root, _ = os.path.splitext(out_path)
    paths = [root + ".png", root + ".svg"]
    for p in paths:
        fig.savefig(p, dpi=200, bbox_inches="tight")
    return paths
