#!/usr/bin/env python3
"""Plot the asympt_ratio column of `erwlab moments` output (tends to 1)."""

import sys


def main():
    if len(sys.argv) != 2:
        print("usage: plot_moment_ratio.py MOMENTS_CSV", file=sys.stderr)
        return 2
    ns, ratios = [], []
    with open(sys.argv[1]) as fh:
        for line in fh:
            if line.startswith("#") or line.startswith("n,"):
                continue
            parts = line.split(",")
            ns.append(int(parts[0]))
            ratios.append(float(parts[4]))
    try:
        import matplotlib.pyplot as plt
    except ImportError:
        step = max(1, len(ns) // 20)
        for n, r in list(zip(ns, ratios))[::step]:
            print(f"n={n:6d}  ratio={r:.6f}")
        return 0
    plt.figure(figsize=(7, 5))
    plt.plot(ns[2:], ratios[2:])
    plt.axhline(1.0, color="gray", lw=0.8)
    plt.xlabel("n")
    plt.ylabel("m_n (a+1) / (2a rho^n)")
    out = sys.argv[1].rsplit(".", 1)[0] + ".png"
    plt.savefig(out, dpi=150, bbox_inches="tight")
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
