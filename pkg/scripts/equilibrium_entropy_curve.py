"""Equilibrium entropy S_eq(alpha) for a few tunneling strengths.

Usage: python3 scripts/equilibrium_entropy_curve.py [--out-dir results/equilibrium]
"""
import argparse

import numpy as np

from spinboson import ModelParams, equilibrium_entropy, solve_renormalization
from spinboson.io import write_csv, write_svg


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default="results/equilibrium")
    args = ap.parse_args()
    alphas = np.round(np.arange(0.0, 0.901, 0.01), 12)
    rows, series = [], []
    for delta in (0.1, 0.01, 0.001):
        s = [equilibrium_entropy(solve_renormalization(ModelParams(float(a), delta))) for a in alphas]
        rows += [(delta, a, v) for a, v in zip(alphas, s)]
        series.append((f"delta={delta:g}", alphas, s))
        print(f"delta={delta:g}: S_eq(0.2)={s[20]:.4f} S_eq(0.5)={s[50]:.4f}")
    write_csv(f"{args.out_dir}/s_eq.csv", ("delta", "alpha", "s_eq"), rows)
    write_svg(f"{args.out_dir}/s_eq.svg", series, "equilibrium entropy", "alpha", "S_eq (bits)")


if __name__ == "__main__":
    main()
