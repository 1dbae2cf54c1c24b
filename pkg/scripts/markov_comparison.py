"""Full dynamics against the on-shell Markov baseline at one coupling.

Usage: python3 scripts/markov_comparison.py [--alpha 0.2] [--tmax 300]
"""
import argparse

import numpy as np

from spinboson import (ModelParams, SelfEnergyEvaluator, bloch_trajectory,
                       entropy_trajectory, find_pole, markov_trajectory)
from spinboson.io import write_entropy_csv, write_svg, write_trajectory_csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--alpha", type=float, default=0.2)
    ap.add_argument("--delta", type=float, default=0.1)
    ap.add_argument("--tmax", type=float, default=300.0)
    ap.add_argument("--dt", type=float, default=0.1)
    ap.add_argument("--out-dir", default="results/markov_comparison")
    args = ap.parse_args()
    times = np.arange(int(round(args.tmax / args.dt)) + 1) * args.dt
    ev = SelfEnergyEvaluator.from_params(ModelParams(args.alpha, args.delta))
    full = bloch_trajectory(times, ev)
    markov = markov_trajectory(times, ev.model, find_pole(ev))
    ent = {}
    for traj in (full, markov):
        e = entropy_trajectory(traj, ev.model)
        ent[traj.method] = e
        write_trajectory_csv(f"{args.out_dir}/trajectory_{traj.method}.csv", traj)
        write_entropy_csv(f"{args.out_dir}/entropy_{traj.method}.csv", e)
        print(f"{traj.method:<7} maxima={e.n_local_maxima} overshoot={e.overshoot:+.4f} "
              f"S(end)-S_eq={e.s_values[-1] - e.s_eq:+.2e}")
    write_svg(f"{args.out_dir}/entropy.svg",
              [(k, times, v.s_values) for k, v in ent.items()],
              f"alpha={args.alpha:g}, delta={args.delta:g}", "omega_c t", "S (bits)")
    write_svg(f"{args.out_dir}/sz.svg",
              [("full", times, full.sz), ("markov", times, markov.sz)],
              "sigma_z(t)", "omega_c t", "<sigma_z>")


if __name__ == "__main__":
    main()
