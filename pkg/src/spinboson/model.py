"""Model parameters and the continuum forms of the polaron-type transformation.

Units: frequencies in units of the cutoff (``omega_c = 1`` by default), times
in ``1/omega_c``. Temperature is fixed at zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import ConvergenceError, ParameterError

ETA_TOL = 1e-12
ETA_MAX_ITER = 10_000
LOCALIZED_TRIGGER = 1e-8


@dataclass(frozen=True)
class ModelParams:
    """Physical triple (alpha, delta, omega_c) of the Ohmic spin-boson model.

    ``delta`` is the bare tunneling in the same units as ``omega_c``.
    """

    alpha: float
    delta: float
    omega_c: float = 1.0
    temperature: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "delta", "omega_c", "temperature"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ParameterError(f"{name} must be a finite number, got {v!r}")
        if self.temperature != 0.0:
            raise ParameterError("only zero temperature is supported")
        if self.omega_c <= 0:
            raise ParameterError("omega_c must be positive")
        if self.alpha < 0:
            raise ParameterError("alpha must be non-negative")
        if not 0 < self.delta < self.omega_c:
            raise ParameterError("delta must lie in (0, omega_c)")


@dataclass(frozen=True)
class RenormalizedModel:
    params: ModelParams
    eta: float
    delta_r: float
    gamma_ww: float
    alpha_c: float
    converged: bool
    residual: float
    localized: bool = False
    iterations: int = 0

    @property
    def alpha(self) -> float:
        return self.params.alpha

    @property
    def omega_c(self) -> float:
        return self.params.omega_c


def spectral_density(omega, params: ModelParams):
    """J(w) = 2 alpha w on [0, omega_c], zero elsewhere (closed at omega_c)."""
    w = np.asarray(omega, dtype=float)
    out = np.where((w >= 0) & (w <= params.omega_c), 2.0 * params.alpha * w, 0.0)
    return out if out.ndim else float(out)


def xi(omega, delta_r):
    """Adiabatic weight w / (w + delta_r) of a bath mode."""
    w = np.asarray(omega, dtype=float)
    if np.any(w < 0) or delta_r < 0:
        raise ParameterError("xi needs omega >= 0 and delta_r >= 0")
    if np.any((w == 0) & (delta_r == 0)):
        raise ParameterError("xi undefined for omega = delta_r = 0")
    out = w / (w + delta_r)
    return out if out.ndim else float(out)


def coupling_weight(omega, model: RenormalizedModel):
    """Density of the squared transformed couplings, sum_k V_k^2 delta(w - w_k).

    Equals 2 alpha w delta_r^2 / (w + delta_r)^2 on the band, so that
    pi * coupling_weight is the damping rate.
    """
    w = np.asarray(omega, dtype=float)
    dr = model.delta_r
    inside = (w >= 0) & (w <= model.omega_c)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = 2.0 * model.alpha * w * dr**2 / (w + dr) ** 2
    out = np.where(inside & (w + dr > 0), val, 0.0)
    return out if out.ndim else float(out)


def log_eta_closed_form(alpha: float, delta_r: float, omega_c: float = 1.0) -> float:
    """ln eta = -alpha * int_0^wc w/(w+dr)^2 dw, integrated analytically."""
    if delta_r <= 0:
        raise ParameterError("delta_r must be positive")
    x = omega_c / delta_r
    return -alpha * (math.log1p(x) - omega_c / (omega_c + delta_r))


def log_eta_quadrature(alpha: float, delta_r: float, omega_c: float = 1.0) -> float:
    """Direct quadrature of the defining integral (independent check)."""
    val, _ = integrate.quad(
        lambda w: w / (w + delta_r) ** 2,
        0.0,
        omega_c,
        points=[min(delta_r, 0.5 * omega_c)],
        epsabs=0.0,
        epsrel=1e-13,
        limit=200,
    )
    return -alpha * val


def _log_fixed_point_map(u: float, alpha: float, delta: float, omega_c: float) -> float:
    # ln G(e^u), safe for arbitrarily negative u
    log_dr = u + math.log(delta)
    dr = math.exp(log_dr)
    return -alpha * (math.log(omega_c + dr) - log_dr - omega_c / (omega_c + dr))


def _solve_log_eta(alpha, delta, omega_c):
    """Bisection on h(u) = u - g(u); returns None when no finite root exists."""
    h = lambda u: u - _log_fixed_point_map(u, alpha, delta, omega_c)
    hi = 0.0
    if h(hi) <= 0:
        return hi
    lo = -1.0
    while h(lo) > 0:
        lo *= 2.0
        if lo < -1e7:
            return None
    return optimize.brentq(h, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=500)


def solve_renormalization(params: ModelParams) -> RenormalizedModel:
    """Self-consistent tunneling renormalization eta and delta_r = eta * delta.

    Fixed-point iteration from eta = 1. If the iterates drop below 1e-8 or do
    not settle within the iteration cap, the equation is re-solved by bisection
    in ln(eta); the localized phase is reported only when no positive fixed
    point exists at all.
    """
    a, d, wc = params.alpha, params.delta, params.omega_c

    def finish(eta, converged, residual, localized=False, it=0):
        dr = eta * d
        return RenormalizedModel(
            params=params,
            eta=eta,
            delta_r=dr,
            gamma_ww=0.5 * math.pi * a * dr,
            alpha_c=0.5 * (1.0 + dr / wc),
            converged=converged,
            residual=residual,
            localized=localized,
            iterations=it,
        )

    if a == 0.0:
        return finish(1.0, True, 0.0)

    G = lambda eta: math.exp(_log_fixed_point_map(math.log(eta), a, d, wc))
    eta = 1.0
    history = []
    for it in range(1, ETA_MAX_ITER + 1):
        new = G(eta)
        history.append(new)
        if abs(new - eta) < ETA_TOL * max(new, 1e-300) or abs(new - eta) == 0.0:
            if new >= LOCALIZED_TRIGGER:
                return finish(new, True, abs(new - eta), it=it)
            break
        if new < LOCALIZED_TRIGGER:
            break
        eta = new
    else:
        # G is increasing, so iterates are monotone; an alternating sequence
        # means something is badly wrong.
        tail = history[-3:]
        if len(tail) == 3 and (tail[2] - tail[1]) * (tail[1] - tail[0]) < 0:
            raise ConvergenceError(
                "renormalization fixed point oscillates", last_iterates=(tail[1], tail[2])
            )

    u = _solve_log_eta(a, d, wc)
    if u is None:
        return finish(0.0, True, 0.0, localized=True, it=len(history))
    eta = math.exp(u)
    res = abs(u - _log_fixed_point_map(u, a, d, wc))
    return finish(eta, True, res, it=len(history))
