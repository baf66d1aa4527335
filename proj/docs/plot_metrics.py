#!/usr/bin/env python3
"""Plot the CSV traces emitted by `ftc preset` / `ftc optimize` / `ftc consensus`.

Usage:
    python3 plot_metrics.py <csv-dir> [--out <dir>] [--metric grad_at_mean_sq]
"""
import argparse
import csv
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def load(path):
    with open(path) as f:
        reader = csv.DictReader(f)
        rows = list(reader)
    return {k: [float(r[k]) for r in rows] for k in reader.fieldnames}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv_dir", type=pathlib.Path)
    ap.add_argument("--out", type=pathlib.Path, default=pathlib.Path("figures"))
    ap.add_argument("--metric", default="grad_at_mean_sq")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    consensus, optimize = {}, {}
    for path in sorted(args.csv_dir.glob("*.csv")):
        data = load(path)
        (consensus if "objective" not in data else optimize)[path.stem] = data

    if consensus:
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for name, data in consensus.items():
            style = "--" if name.count("static") == 0 else "-"
            ax.semilogy(data["iter"], [max(v, 1e-40) for v in data["consensus_error"]],
                        style, label=name.removeprefix("consensus_"))
        ax.set_xlabel("iteration")
        ax.set_ylabel(r"consensus error $\Xi^{(k)}$")
        ax.legend(fontsize=7)
        ax.grid(alpha=0.3)
        fig.tight_layout()
        fig.savefig(args.out / "consensus.png", dpi=150)
        print(f"wrote {args.out / 'consensus.png'}")

    if optimize:
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for name, data in optimize.items():
            ax.semilogy(data["iter"], [max(v, 1e-40) for v in data[args.metric]], label=name)
        ax.set_xlabel("iteration")
        ax.set_ylabel(args.metric)
        ax.legend(fontsize=7)
        ax.grid(alpha=0.3)
        fig.tight_layout()
        fig.savefig(args.out / f"{args.metric}.png", dpi=150)
        print(f"wrote {args.out / f'{args.metric}.png'}")


if __name__ == "__main__":
    main()
