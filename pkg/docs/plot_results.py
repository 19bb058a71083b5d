"""Plot FER and throughput CSVs produced by the `rcpolar fer` and
`rcpolar throughput` commands.

Usage:
    python docs/plot_results.py fer.csv throughput.csv ...

Writes one PNG next to each CSV.  The CSVs are plot-ready; this script is
deliberately outside the package so the library stays free of plotting
dependencies.
"""

import csv
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def plot_fer(rows, out):
    fig, ax = plt.subplots(figsize=(7, 5))
    series = defaultdict(list)
    for r in rows:
        series[(r["family"], r["level"])].append(
            (float(r["esn0_db"]), float(r["fer"]))
        )
    for (family, level), pts in sorted(series.items()):
        pts.sort()
        ax.semilogy(*zip(*pts), marker="o", label=f"{family} level {level}")
    ax.set_xlabel("Es/N0 [dB]")
    ax.set_ylabel("frame error rate")
    ax.grid(True, which="both", alpha=0.4)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print("wrote", out)


def plot_throughput(rows, out):
    fig, ax = plt.subplots(figsize=(7, 5))
    series = defaultdict(list)
    for r in rows:
        series[(r["scheme"], r["family"])].append(
            (float(r["esn0_db"]), float(r["throughput"]))
        )
    for (scheme, family), pts in sorted(series.items()):
        pts.sort()
        ax.plot(*zip(*pts), marker="s", label=f"{family} {scheme}")
    ax.set_xlabel("Es/N0 [dB]")
    ax.set_ylabel("throughput [info bits / coded bit]")
    ax.grid(True, alpha=0.4)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print("wrote", out)


def main(paths):
    for path in paths:
        rows = load(path)
        if not rows:
            print("empty csv:", path)
            continue
        out = Path(path).with_suffix(".png")
        if rows[0]["scheme"] == "fer":
            plot_fer(rows, out)
        else:
            plot_throughput(rows, out)


if __name__ == "__main__":
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    main(sys.argv[1:])
