"""Level shift R(w), damping gamma(w), the sigma_x-channel combinations and
the coherent pole.

``R + i*gamma`` is sum_k V_k^2 / (w - w_k - i0+) for the Ohmic band. The
closed form of R, written with absolute values inside the logarithm, holds on
the whole real axis; it has a true singularity only at ``w = omega_c``. The
apparent pole at ``w = -delta_r`` is removable and is evaluated by series.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np
from scipy import optimize

from .errors import AmbiguousRootError, SingularityError, UnsupportedRegimeError
from .model import ModelParams, RenormalizedModel, solve_renormalization

SCAN_EDGE = 1e-9
SCAN_POINTS = 2048
EDGE_GUARD = 1e-8
_SERIES_RADIUS = 0.1
_SERIES_TERMS = 24

UNDERDAMPED = "underdamped"
OVERDAMPED = "overdamped"
INCOHERENT = "incoherent"


def _shift_kernel(w, a, c):
    """PV int_0^c w'/((w'+a)^2 (w-w')) dw' for array w (w != c)."""
    u = w + a
    b = c + a
    out = np.empty_like(w)
    near = np.abs(u) < _SERIES_RADIUS * a
    far = ~near
    if np.any(far):
        wf = w[far]
        with np.errstate(divide="ignore", invalid="ignore"):
            logterm = np.log(np.abs(wf) * b / (a * np.abs(c - wf)))
            val = wf / (wf + a) ** 2 * logterm - c / ((wf + a) * b)
        # w ln|w| -> 0 at the origin
        out[far] = np.where(wf == 0.0, -c / (a * b), val)
    if np.any(near):
        r = u[near] / a
        q = a / b
        acc = np.zeros_like(r)
        for m in range(_SERIES_TERMS - 1, -1, -1):
            coef = (1 - q ** (m + 2)) / (m + 2) - (1 - q ** (m + 1)) / (m + 1)
            acc = acc * r + coef
        out[near] = acc / a
    return out


@dataclass(frozen=True)
class SelfEnergyEvaluator:
    model: RenormalizedModel

    @classmethod
    def from_params(cls, params: ModelParams) -> "SelfEnergyEvaluator":
        return cls(solve_renormalization(params))

    @property
    def alpha(self):
        return self.model.alpha

    @property
    def delta_r(self):
        return self.model.delta_r

    @property
    def omega_c(self):
        return self.model.omega_c

    def level_shift(self, omega):
        """Real part R(w); raises SingularityError at w = omega_c."""
        w = np.asarray(omega, dtype=float)
        scalar = w.ndim == 0
        w = np.atleast_1d(w)
        if np.any(w == self.omega_c):
            raise SingularityError("level shift diverges logarithmically at omega_c")
        a = self.delta_r
        if self.alpha == 0.0 or a == 0.0:
            out = np.zeros_like(w)
        else:
            out = 2.0 * self.alpha * a * a * _shift_kernel(w, a, self.omega_c)
        return float(out[0]) if scalar else out

    def damping(self, omega):
        """Imaginary part gamma(w), zero outside [0, omega_c]."""
        w = np.asarray(omega, dtype=float)
        a = self.delta_r
        inside = (w >= 0) & (w <= self.omega_c)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = 2.0 * self.alpha * math.pi * w * a * a / (w + a) ** 2
        out = np.where(inside & (w + a > 0), val, 0.0)
        return out if out.ndim else float(out)

    def sigma_x_channel(self, omega):
        """(Sigma(w), Gamma(w)) = (R(dr+w) - R(dr-w), gamma(dr+w) + gamma(dr-w))."""
        w = np.asarray(omega, dtype=float)
        a = self.delta_r
        shift = self.level_shift(a + w) - self.level_shift(a - w)
        width = self.damping(a + w) + self.damping(a - w)
        return shift, width

    def sigma_x_support(self):
        """Symmetric interval outside which Gamma vanishes identically."""
        a, c = self.delta_r, self.omega_c
        half = max(a, c - a)
        return -half, half

    def pole_function(self, omega):
        return np.asarray(omega) - self.delta_r - self.level_shift(omega)


@dataclass(frozen=True)
class RegimeReport:
    omega0: Optional[float]
    gamma_at_pole: Optional[float]
    alpha_c: float
    label: str
    alpha_star_hint: Optional[float] = None

    def to_dict(self):
        d = asdict(self)
        if d["alpha_star_hint"] is None:
            del d["alpha_star_hint"]
        return d


def _scan_grid(wc, dr):
    # the low edge scales with delta_r: near alpha_c the pole sits at
    # omega0 << delta_r, which may itself be far below omega_c
    lo, hi = SCAN_EDGE * min(wc, dr), (1.0 - SCAN_EDGE) * wc
    uniform = np.linspace(SCAN_EDGE * wc, hi, SCAN_POINTS)
    geometric = np.geomspace(lo, uniform[1], 128)
    return np.unique(np.concatenate([geometric, uniform]))


def find_pole(ev: SelfEnergyEvaluator) -> RegimeReport:
    """Real root of w - delta_r - R(w) in (0, omega_c) and the regime label."""
    m = ev.model
    if m.localized or m.eta <= 0.0:
        raise UnsupportedRegimeError("no pole search in the localized phase (eta = 0)")
    wc = m.omega_c
    grid = _scan_grid(wc, m.delta_r)
    f = ev.pole_function(grid)
    sign_change = np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) < 0)[0]
    roots = [grid[i] for i in np.nonzero(f == 0.0)[0]]
    brackets = [(grid[i], grid[i + 1]) for i in sign_change]
    if len(brackets) + len(roots) > 1:
        raise AmbiguousRootError(
            f"{len(brackets) + len(roots)} sign changes of the pole function", brackets
        )
    if brackets:
        lo, hi = brackets[0]
        w0 = optimize.brentq(ev.pole_function, lo, hi, xtol=1e-15 * wc, rtol=1e-14, maxiter=500)
    elif roots:
        w0 = float(roots[0])
    else:
        w0 = None
    low_guard = EDGE_GUARD * min(wc, m.delta_r)
    if w0 is not None and (w0 - grid[0] < low_guard or grid[-1] - w0 < EDGE_GUARD * wc):
        w0 = None
    if w0 is None:
        return RegimeReport(None, None, m.alpha_c, INCOHERENT)
    g0 = float(ev.damping(w0))
    label = UNDERDAMPED if w0 > g0 else OVERDAMPED
    return RegimeReport(float(w0), g0, m.alpha_c, label)


def regime_at(alpha: float, delta: float, omega_c: float = 1.0) -> RegimeReport:
    ev = SelfEnergyEvaluator.from_params(ModelParams(alpha, delta, omega_c))
    return find_pole(ev)


def _bisect_alpha(pred, lo, hi, tol):
    """Largest alpha with pred True, assuming pred(lo) and not pred(hi)."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def locate_alpha_c(delta: float, omega_c: float = 1.0, tol: float = 1e-6) -> float:
    """Coupling at which the real pole disappears (coherent-incoherent)."""
    def coherent(a):
        try:
            return regime_at(a, delta, omega_c).label != INCOHERENT
        except UnsupportedRegimeError:
            return False

    lo, hi = 0.0, 0.9
    if coherent(hi):
        raise UnsupportedRegimeError("pole persists up to alpha = 0.9")
    return _bisect_alpha(coherent, lo, hi, tol)


def locate_alpha_star(delta: float, omega_c: float = 1.0, tol: float = 1e-6,
                      alpha_c: Optional[float] = None) -> float:
    """Coupling where omega0 = gamma(omega0) (under/overdamped boundary)."""
    if alpha_c is None:
        alpha_c = locate_alpha_c(delta, omega_c, tol)
    underdamped = lambda a: regime_at(a, delta, omega_c).label == UNDERDAMPED
    hi = alpha_c - 10 * tol
    if underdamped(hi):
        raise UnsupportedRegimeError("no overdamped window below alpha_c")
    return _bisect_alpha(underdamped, 0.0, hi, tol)
