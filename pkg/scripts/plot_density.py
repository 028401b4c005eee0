#!/usr/bin/env python3
"""Plot a histogram CSV produced by `erwlab simulate --bins N`."""

import sys


def main():
    if len(sys.argv) != 2:
        print("usage: plot_density.py HIST_CSV", file=sys.stderr)
        return 2
    xs, ys = [], []
    with open(sys.argv[1]) as fh:
        for line in fh:
            if line.startswith("#") or line.startswith("x_left"):
                continue
            left, right, dens = (float(v) for v in line.split(","))
            xs.append(0.5 * (left + right))
            ys.append(dens)
    try:
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; here is the histogram as text:")
        peak = max(ys) or 1.0
        for x, y in zip(xs, ys):
            print(f"{x:8.3f} | {'#' * int(60 * y / peak)}")
        return 0
    plt.figure(figsize=(7, 5))
    plt.plot(xs, ys, drawstyle="steps-mid")
    plt.xlabel("x")
    plt.ylabel("density of n^(-a) S_n")
    out = sys.argv[1].rsplit(".", 1)[0] + ".png"
    plt.savefig(out, dpi=150, bbox_inches="tight")
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
