"""Von Neumann entropy (in bits) of the reduced qubit state."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.signal import find_peaks
from scipy.special import entr

from .dynamics import BlochTrajectory
from .errors import InvalidStateError
from .model import RenormalizedModel, solve_renormalization

NORM_SLACK = 1e-3
NOISE_FLOOR = 1e-3


def binary_entropy(p):
    p = np.asarray(p, dtype=float)
    out = (entr(p) + entr(1.0 - p)) / np.log(2.0)
    return out if out.ndim else float(out)


def entropy_from_bloch(sx, sy, sz):
    """S = -sum lambda log2 lambda with lambda = (1 +- |r|)/2.

    Norms in (1, 1 + 1e-3] are clamped to 1; anything larger means the
    upstream computation produced an unphysical state.
    """
    r = np.sqrt(np.square(sx) + np.square(sy) + np.square(sz))
    if np.any(r > 1.0 + NORM_SLACK) or np.any(~np.isfinite(r)):
        raise InvalidStateError(f"Bloch norm {np.max(r):.6g} exceeds 1 + {NORM_SLACK}")
    r = np.minimum(r, 1.0)
    return binary_entropy(0.5 * (1.0 + r))


def equilibrium_entropy(model: RenormalizedModel) -> float:
    """Long-time entropy from <sigma_x(inf)> = eta.

    In the localized phase the spin stays in its initial state, so the
    entropy is 0 there (not the 1 bit a vanishing eta would suggest).
    """
    if model.localized:
        return 0.0
    return float(binary_entropy(0.5 * (1.0 + model.eta)))


def count_local_maxima(s, floor: float = NOISE_FLOOR) -> int:
    """Interior maxima whose prominence exceeds ``floor``."""
    peaks, _ = find_peaks(np.asarray(s, dtype=float), prominence=floor)
    return int(len(peaks))


def is_monotone_nondecreasing(s, slack: float = NOISE_FLOOR) -> bool:
    s = np.asarray(s, dtype=float)
    return bool(np.all(s >= np.maximum.accumulate(s) - slack))


@dataclass
class EntropySeries:
    times: np.ndarray
    s_values: np.ndarray
    s_eq: float
    overshoot: float
    method: str
    n_local_maxima: int
    t_of_max: float

    def summary(self):
        return {
            "s_eq": self.s_eq,
            "overshoot": self.overshoot,
            "n_local_maxima": self.n_local_maxima,
            "t_of_max": self.t_of_max,
        }


def entropy_trajectory(traj: BlochTrajectory,
                       model: Optional[RenormalizedModel] = None) -> EntropySeries:
    if model is None:
        model = solve_renormalization(traj.params)
    s = np.atleast_1d(entropy_from_bloch(traj.sx, traj.sy, traj.sz))
    s_eq = equilibrium_entropy(model)
    i = int(np.argmax(s))
    return EntropySeries(
        times=traj.times,
        s_values=s,
        s_eq=s_eq,
        overshoot=float(s[i] - s_eq),
        method=traj.method,
        n_local_maxima=count_local_maxima(s),
        t_of_max=float(traj.times[i]),
    )
