"""Plot a sweep CSV written by ``rfso sweep`` or ``rfso figure``.

This script lives outside the package; it needs the optional ``plot`` extra
(``pip install -e .[plot]``).

Usage::

    rfso figure fig1 --output fig1.csv
    python3 scripts/plot_sweep.py fig1.csv outage_cf --log --output fig1.png
"""
from __future__ import annotations

import argparse
import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

RESERVED = {"family", "seed", "error"}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv")
    ap.add_argument("column", help="value column to plot, e.g. outage_cf or cap_mc")
    ap.add_argument("--output", default="sweep.png")
    ap.add_argument("--log", action="store_true", help="logarithmic y axis")
    args = ap.parse_args()

    with open(args.csv, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        axis = next(c for c in reader.fieldnames if c not in RESERVED)
        curves = defaultdict(lambda: ([], [], []))
        for row in reader:
            if not row[args.column] or row[args.column] == "unbounded":
                continue
            xs, ys, es = curves[row.get("family", "")]
            xs.append(float(row[axis]))
            ys.append(float(row[args.column]))
            se = row.get(f"{args.column}_se")
            es.append(float(se) if se else 0.0)

    fig, ax = plt.subplots(figsize=(6, 4.5))
    for label, (xs, ys, es) in curves.items():
        ax.errorbar(xs, ys, yerr=[3 * e for e in es], marker="o", ms=3, capsize=2,
                    label=label or None)
    ax.set_xlabel(axis)
    ax.set_ylabel(args.column)
    if args.log:
        ax.set_yscale("log")
    ax.grid(True, which="both", alpha=0.3)
    if any(curves):
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
