"""Convergence of the Volterra oracle in its step size at one coupling.

Usage: python3 scripts/volterra_dt_study.py [--alpha 0.1]
"""
import argparse

import numpy as np

from spinboson import ModelParams, SelfEnergyEvaluator, bloch_trajectory
from spinboson.oracles import volterra_solve


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--alpha", type=float, default=0.1)
    ap.add_argument("--tmax", type=float, default=50.0)
    args = ap.parse_args()
    ev = SelfEnergyEvaluator.from_params(ModelParams(args.alpha, 0.1))
    for dt in (0.02, 0.01, 0.005):
        times = np.arange(int(round(args.tmax / dt)) + 1) * dt
        ref = bloch_trajectory(times, ev)
        vol = volterra_solve(times, ev.model)
        print(f"dt={dt:<6g} max|dsz|={np.max(np.abs(ref.sz - vol.sz)):.2e} "
              f"max|dsx|={np.max(np.abs(ref.sx - vol.sx)):.2e}")


if __name__ == "__main__":
    main()
