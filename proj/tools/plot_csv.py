#!/usr/bin/env python3
"""Plot columns of a polx CSV against its first column.

    plot_csv.py series_N100.csv sigma3 zeta s_ent -o fig.png
    plot_csv.py polx_out/fig2_mft_angles/mf_*.csv sigma3 --abs
"""
import argparse

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("csv", nargs="+", help="one or more CSV files with a header row")
    ap.add_argument("columns", nargs="*", default=[], help="columns to plot (default: all but the first)")
    ap.add_argument("--abs", action="store_true", help="plot absolute values")
    ap.add_argument("-o", "--output", default="plot.png")
    args = ap.parse_args()

    files = [a for a in args.csv if a.endswith(".csv")]
    columns = [a for a in args.csv if not a.endswith(".csv")] + args.columns
    fig, ax = plt.subplots(figsize=(7, 4))
    for path in files:
        df = pd.read_csv(path)
        x = df.columns[0]
        for col in columns or df.columns[1:]:
            y = df[col].abs() if args.abs else df[col]
            ax.plot(df[x], y, label=f"{path.rsplit('/', 1)[-1]}: {col}" if len(files) > 1 else col)
        ax.set_xlabel(x)
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
