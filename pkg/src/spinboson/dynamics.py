"""Bloch-vector dynamics from the real-frequency spectral integrals.

sigma_z(t) = int_0^wc A(w) cos(wt) dw with the quasi-Lorentzian
A = gamma / ((w - dr - R)^2 + gamma^2) / pi, sigma_y follows from
sigma_y = -(1/Delta) d sigma_z/dt (differentiated under the integral), and
sigma_x(t) = eta * (1 - 2 int_0^top B(w) cos(wt) dw) with the even spectral
function B = Gamma / ((w - Sigma)^2 + Gamma^2) / pi of the sigma_x channel.

The spectral weights do not depend on t, so a trajectory evaluates them once
on a panelled Gauss-Legendre rule and contracts against cos/sin matrices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import AmbiguousRootError, ParameterError, QuadratureError, UnsupportedRegimeError
from .model import ModelParams, RenormalizedModel
from .self_energy import INCOHERENT, RegimeReport, SelfEnergyEvaluator, find_pole

ALPHA_ANALYTIC = 1e-6
METHODS = ("full", "residue", "markov", "volterra", "ed")
_GRADING = tuple(10.0 ** -k for k in range(1, 13))
_CHUNK = 256


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-9
    rel_tol: float = 1e-8
    peak_refinement: int = 4
    oscillation_panel_factor: float = 1.0
    order: int = 16
    max_refine: int = 4

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ParameterError("quadrature tolerances must be positive")
        if not 0 < self.oscillation_panel_factor <= 1:
            raise ParameterError("oscillation_panel_factor must lie in (0, 1]")
        if self.peak_refinement < 1 or self.order < 2:
            raise ParameterError("peak_refinement >= 1 and order >= 2 required")

    def peak_factors(self):
        # 4 -> 1, 3.2, 10, 32 half-widths; doubling refines the same span
        k = self.peak_refinement
        if k == 1:
            return [1.0]
        return [10.0 ** (1.5 * j / (k - 1)) for j in range(k)]


@dataclass
class BlochTrajectory:
    times: np.ndarray
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    method: str
    params: ModelParams
    error: Optional[np.ndarray] = None  # (3, n) bound for (sx, sy, sz)
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(f"unknown method {self.method!r}")
        self.times = np.asarray(self.times, dtype=float)
        for name in ("sx", "sy", "sz"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=float))

    def norm(self):
        return np.sqrt(self.sx**2 + self.sy**2 + self.sz**2)

    def __len__(self):
        return len(self.times)


def check_times(times):
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if t.ndim != 1 or t.size == 0:
        raise ParameterError("times must be a non-empty 1-d grid")
    if np.any(t < 0) or np.any(~np.isfinite(t)):
        raise ParameterError("times must be finite and non-negative")
    if np.any(np.diff(t) <= 0):
        raise ParameterError("times must be strictly increasing")
    return t


def _panels(points, lo, hi, max_width):
    pts = np.asarray([p for p in points if lo < p < hi] + [lo, hi], dtype=float)
    pts = np.unique(pts)
    out = [pts[:1]]
    for a, b in zip(pts[:-1], pts[1:]):
        n = max(1, int(math.ceil((b - a) / max_width))) if max_width < np.inf else 1
        out.append(np.linspace(a, b, n + 1)[1:])
    return np.concatenate(out)


def _bisect_panels(breaks):
    mids = 0.5 * (breaks[:-1] + breaks[1:])
    out = np.empty(2 * len(breaks) - 1)
    out[0::2] = breaks
    out[1::2] = mids
    return out


def _gauss_rule(breaks, order):
    x, w = np.polynomial.legendre.leggauss(order)
    lo, hi = breaks[:-1, None], breaks[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (half * x + 0.5 * (hi + lo)).ravel()
    weights = (half * w).ravel()
    return nodes, weights


def _max_width(cfg, t_max):
    if t_max <= 0:
        return np.inf
    return cfg.oscillation_panel_factor * math.pi / t_max


def _z_breaks(ev: SelfEnergyEvaluator, cfg: QuadratureConfig, t_max: float):
    wc, dr = ev.omega_c, ev.delta_r
    pts = [dr]
    try:
        reg = find_pole(ev)
    except AmbiguousRootError:
        reg = None
    if reg is not None and reg.omega0 is not None:
        w0, g0 = reg.omega0, max(reg.gamma_at_pole, 1e-12 * wc)
        pts.append(w0)
        for f in cfg.peak_factors():
            pts += [w0 - f * g0, w0 + f * g0]
    pts += [wc * g for g in _GRADING]  # w ln w behaviour of R at 0
    pts += [wc * (1 - g) for g in _GRADING]  # log singularity of R at wc
    return _panels(pts, 0.0, wc, _max_width(cfg, t_max))


def _x_breaks(ev: SelfEnergyEvaluator, cfg: QuadratureConfig, t_max: float):
    wc, dr = ev.omega_c, ev.delta_r
    top = ev.sigma_x_support()[1]
    _, g0 = ev.sigma_x_channel(0.0)
    pts = [dr, 2 * dr, wc - dr]
    for f in cfg.peak_factors():
        pts.append(f * float(g0))
    for g in _GRADING:
        pts += [dr * (1 - g), dr * (1 + g)]  # kink of gamma(dr - w) and R(0)
        pts.append(wc - dr - wc * g)  # R(dr + w) singular at w = wc - dr
    return _panels(pts, 0.0, top, _max_width(cfg, t_max))


def _z_weights(ev, nodes):
    g = ev.damping(nodes)
    d = nodes - ev.delta_r - ev.level_shift(nodes)
    return g / (d * d + g * g) / math.pi


def _x_weights(ev, nodes):
    s, g = ev.sigma_x_channel(nodes)
    d = nodes - s
    return g / (d * d + g * g) / math.pi


def _contract(times, nodes, vectors, kinds):
    """sum_i v_i trig(w_i t) for every time, chunked to bound memory."""
    out = np.empty((len(vectors), len(times)))
    for s in range(0, len(times), _CHUNK):
        ph = np.outer(times[s:s + _CHUNK], nodes)
        c = np.cos(ph) if "cos" in kinds else None
        sn = np.sin(ph) if "sin" in kinds else None
        for i, (v, kind) in enumerate(zip(vectors, kinds)):
            out[i, s:s + _CHUNK] = (c if kind == "cos" else sn) @ v
    return out


class _ChannelRule:
    """Coarse/fine pair of panelled rules with global refinement."""

    def __init__(self, breaks, weight_fn, cfg):
        self.breaks = breaks
        self.weight_fn = weight_fn
        self.cfg = cfg

    def evaluate(self, times, make_vectors, kinds, what):
        cfg = self.cfg
        breaks = self.breaks
        for _ in range(cfg.max_refine + 1):
            coarse, _ = self._apply(breaks, times, make_vectors, kinds)
            fine_breaks = _bisect_panels(breaks)
            fine, floor = self._apply(fine_breaks, times, make_vectors, kinds)
            err = np.abs(fine - coarse) + floor[:, None]
            tol = cfg.abs_tol + cfg.rel_tol * np.abs(fine)
            if np.all(err <= tol):
                return fine, err
            breaks = fine_breaks
        bad = np.argwhere(err > tol)[0]
        raise QuadratureError(
            f"{what} quadrature did not reach tolerance",
            estimate=float(fine[tuple(bad)]),
            error=float(err[tuple(bad)]),
            t=float(times[bad[1]]),
        )

    def _apply(self, breaks, times, make_vectors, kinds):
        nodes, weights = _gauss_rule(breaks, self.cfg.order)
        vectors = make_vectors(nodes, weights * self.weight_fn(nodes))
        # accumulated rounding of the trig contraction
        floor = np.array([np.abs(v).sum() for v in vectors])
        floor *= 10.0 * math.sqrt(len(nodes)) * np.finfo(float).eps
        return _contract(times, nodes, vectors, kinds), floor


def _analytic_limit(times, params):
    d = params.delta
    return np.zeros_like(times), np.sin(d * times), np.cos(d * times)


def _require_delocalized(ev):
    if ev.model.localized or ev.model.eta <= 0.0:
        raise UnsupportedRegimeError("spectral dynamics need eta > 0 (delocalized phase)")


def _zy_components(times, ev, cfg, want_y=True):
    rule = _ChannelRule(_z_breaks(ev, cfg, float(times.max())), lambda w: _z_weights(ev, w), cfg)
    delta = ev.model.params.delta
    if want_y:
        vals, err = rule.evaluate(
            times, lambda x, v: [v, v * x / delta], ("cos", "sin"), "sigma_z/sigma_y"
        )
        return vals[0], vals[1], err[0], err[1]
    vals, err = rule.evaluate(times, lambda x, v: [v], ("cos",), "sigma_z")
    return vals[0], None, err[0], None


def _x_component(times, ev, cfg):
    rule = _ChannelRule(_x_breaks(ev, cfg, float(times.max())), lambda w: _x_weights(ev, w), cfg)
    vals, err = rule.evaluate(times, lambda x, v: [2.0 * v], ("cos",), "sigma_x")
    eta = ev.model.eta
    return eta * (1.0 - vals[0]), eta * err[0]


def sigma_z_of_t(t: float, ev: SelfEnergyEvaluator, cfg: Optional[QuadratureConfig] = None) -> float:
    """P(t) by panel quadrature of the band spectral function."""
    times = check_times([t])
    params = ev.model.params
    if params.alpha < ALPHA_ANALYTIC:
        return float(_analytic_limit(times, params)[2][0])
    _require_delocalized(ev)
    z, _, _, _ = _zy_components(times, ev, cfg or QuadratureConfig(), want_y=False)
    return float(z[0])


def sigma_y_of_t(t: float, ev: SelfEnergyEvaluator, cfg: Optional[QuadratureConfig] = None) -> float:
    times = check_times([t])
    params = ev.model.params
    if params.alpha < ALPHA_ANALYTIC:
        return float(_analytic_limit(times, params)[1][0])
    _require_delocalized(ev)
    _, y, _, _ = _zy_components(times, ev, cfg or QuadratureConfig())
    return float(y[0])


def sigma_x_of_t(t: float, ev: SelfEnergyEvaluator, cfg: Optional[QuadratureConfig] = None) -> float:
    times = check_times([t])
    params = ev.model.params
    if params.alpha < ALPHA_ANALYTIC:
        return 0.0
    _require_delocalized(ev)
    x, _ = _x_component(times, ev, cfg or QuadratureConfig())
    return float(x[0])


def bloch_trajectory(times, ev: SelfEnergyEvaluator,
                     cfg: Optional[QuadratureConfig] = None) -> BlochTrajectory:
    """Full non-Markovian trajectory on a caller-supplied time grid."""
    times = check_times(times)
    cfg = cfg or QuadratureConfig()
    params = ev.model.params
    if params.alpha < ALPHA_ANALYTIC:
        sx, sy, sz = _analytic_limit(times, params)
        return BlochTrajectory(times, sx, sy, sz, "full", params, np.zeros((3, len(times))))
    _require_delocalized(ev)
    try:
        sz, sy, ez, ey = _zy_components(times, ev, cfg)
        sx, ex = _x_component(times, ev, cfg)
    except QuadratureError as exc:
        raise QuadratureError(f"{exc} (t = {exc.t})", exc.estimate, exc.error, exc.t) from exc
    return BlochTrajectory(times, sx, sy, sz, "full", params, np.vstack([ex, ey, ez]))


def residue_sigma_z(t, regime: RegimeReport, model: RenormalizedModel):
    """Pole approximation cos(w0 t) exp(-gamma_WW t)."""
    if regime.label == INCOHERENT or regime.omega0 is None:
        raise UnsupportedRegimeError("residue approximation needs a real pole")
    t = np.asarray(t, dtype=float)
    out = np.cos(regime.omega0 * t) * np.exp(-model.gamma_ww * t)
    return out if out.ndim else float(out)


def markov_trajectory(times, model: RenormalizedModel, regime: RegimeReport) -> BlochTrajectory:
    """Constant on-shell self-energy baseline.

    sigma_z and sigma_y rotate at omega0 under a common envelope
    exp(-gamma_WW t); sigma_x relaxes as eta (1 - exp(-Gamma(0) t)) with
    Gamma(0) = pi alpha delta_r = 2 gamma_WW.
    """
    times = check_times(times)
    if regime.label == INCOHERENT or regime.omega0 is None:
        raise UnsupportedRegimeError("Markov baseline is defined in the coherent regime only")
    w0, g = regime.omega0, model.gamma_ww
    env = np.exp(-g * times)
    sz = np.cos(w0 * times) * env
    sy = np.sin(w0 * times) * env
    sx = model.eta * (1.0 - np.exp(-2.0 * g * times))
    return BlochTrajectory(times, sx, sy, sz, "markov", model.params)
