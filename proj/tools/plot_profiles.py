#!/usr/bin/env python3
#
#   Copyright 2026 The wwr-cva Authors
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#       http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.
"""Plot wwrcva CSV output: EPE profiles (long or wide layout) and CVA sweeps."""

import argparse
import csv
import pathlib
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def read_columns(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    head, body = rows[0], rows[1:]
    return {name: [float(r[i]) for r in body] for i, name in enumerate(head)}


def plot_file(ax, path):
    cols = read_columns(path)
    name = path.stem
    if "t" in cols:
        t = cols["t"]
        if "f_t" in cols:
            ax.plot(t, cols["f_t"], label=name)
        else:
            for key, values in cols.items():
                if key.startswith("rho="):
                    ax.plot(t, values, label=key)
        ax.set_xlabel("t (years)")
        ax.set_ylabel("WWR EPE f(t)")
    else:
        x_name = "rho" if "rho" in cols else "sigma"
        ax.plot(cols[x_name], cols["cva"], marker="o", label=name)
        if "cva_independent" in cols:
            ax.axhline(cols["cva_independent"][0], color="grey", linestyle="--")
        ax.set_xlabel(x_name)
        ax.set_ylabel("CVA")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", nargs="+", type=pathlib.Path, help="epe_*.csv or sweep_*.csv files")
    ap.add_argument("-o", "--output", type=pathlib.Path, default=pathlib.Path("profiles.png"))
    ap.add_argument("--title", default="")
    args = ap.parse_args(argv)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for path in args.csv:
        if not path.exists():
            print(f"plot_profiles: {path} not found", file=sys.stderr)
            return 1
        plot_file(ax, path)
    ax.axhline(0.0, color="black", linewidth=0.5)
    ax.legend(fontsize="small")
    if args.title:
        ax.set_title(args.title)
    fig.tight_layout()
    fig.savefig(args.output, dpi=120)
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
