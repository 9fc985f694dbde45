#!/usr/bin/env python3
"""Plot one or more learning-curve CSVs produced by `mxz curve`.

Usage: plot_curve.py curve.csv [more.csv ...] [-o out.png]
"""

import argparse
import csv
import sys


def read_curve(path):
    games, pct, lo, hi = [], [], [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            games.append(float(row["games_trained"]))
            pct.append(float(row["win_pct"]))
            lo.append(100.0 * float(row["wilson_low"]))
            hi.append(100.0 * float(row["wilson_high"]))
    return games, pct, lo, hi


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", nargs="+", help="curve.csv files")
    ap.add_argument("-o", "--out", default="curve.png")
    args = ap.parse_args()

    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        sys.exit("matplotlib is required (or use the emitted .gnuplot script)")

    fig, ax = plt.subplots(figsize=(9, 5.4))
    for path in args.csv:
        games, pct, lo, hi = read_curve(path)
        (line,) = ax.plot(games, pct, marker="o", label=path)
        ax.fill_between(games, lo, hi, alpha=0.15, color=line.get_color())
    ax.set_xlabel("self-play games trained")
    ax.set_ylabel("win % vs baseline")
    ax.set_ylim(0, 100)
    ax.legend(loc="lower right")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
