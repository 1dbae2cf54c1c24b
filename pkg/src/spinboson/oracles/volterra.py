"""Time-nonlocal second-order master equation in the transformed frame.

At zero temperature the double commutator reduces to

    d rho/dt = - int_0^t { K(t-t') [s+ s- rho(t') - s- rho(t') s+]
                         + K*(t-t') [rho(t') s+ s- - s- rho(t') s+] } dt'

in the interaction picture of H0' = -(delta_r/2) sigma_x, with
s- = |s1><s2| lowering the sigma_x eigenbasis and the memory kernel
K(tau) = int_0^wc J_V(w) exp(-i (w - delta_r) tau) dw.
At finite temperature each K would carry coth(w/2T) weights and the two
n_k-proportional terms would reappear; neither is exposed here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..dynamics import BlochTrajectory, check_times
from ..errors import ParameterError, StepSizeError
from ..model import RenormalizedModel, coupling_weight

MAX_DT = 0.02
TRACE_TOL = 1e-8
HERMITIAN_TOL = 1e-10
KERNEL_CUT = 1e-10

_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)
_S1 = np.array([1, 1], dtype=complex) / math.sqrt(2)
_S2 = np.array([1, -1], dtype=complex) / math.sqrt(2)
_SM = np.outer(_S1, _S2.conj())  # (sigma_z - i sigma_y)/2
_SP = _SM.conj().T


def _lr(a, b):
    # row-major vec: vec(a X b) = kron(a, b.T) vec(X)
    return np.kron(a, b.T)


_M1 = _lr(_SP @ _SM, _I2) - _lr(_SM, _SP)
_M2 = _lr(_I2, _SP @ _SM) - _lr(_SM, _SP)


@dataclass(frozen=True)
class MemoryKernel:
    """K(n dt) on a uniform grid, linear interpolation in between."""

    dt: float
    values: np.ndarray
    tau_cut: Optional[float]

    @classmethod
    def build(cls, model: RenormalizedModel, dt: float, tau_max: float, order: int = 16):
        n = int(round(tau_max / dt))
        tau = np.arange(n + 1) * dt
        wc = model.omega_c
        panels = max(64, int(math.ceil(2 * wc * tau_max / math.pi)))
        breaks = np.linspace(0.0, wc, panels + 1)
        x, w = np.polynomial.legendre.leggauss(order)
        half = 0.5 * np.diff(breaks)[:, None]
        nodes = (half * x + 0.5 * (breaks[1:] + breaks[:-1])[:, None]).ravel()
        weights = (half * w).ravel() * coupling_weight(nodes, model)
        nu = nodes - model.delta_r
        vals = np.empty(n + 1, dtype=complex)
        for s in range(0, n + 1, 512):
            vals[s:s + 512] = np.exp(-1j * np.outer(tau[s:s + 512], nu)) @ weights
        k0 = abs(vals[0])
        tau_cut = None
        if k0 > 0:
            above = np.nonzero(np.abs(vals) >= KERNEL_CUT * k0)[0]
            last = above[-1] if above.size else 0
            if last < n:
                tau_cut = float(tau[last])
        else:
            tau_cut = 0.0
        return cls(dt=dt, values=vals, tau_cut=tau_cut)

    @property
    def k0(self):
        return self.values[0].real

    @property
    def tau_max(self):
        return self.dt * (len(self.values) - 1)

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        grid = np.arange(len(self.values)) * self.dt
        return np.interp(tau, grid, self.values.real) + 1j * np.interp(tau, grid, self.values.imag)


def _uniform_step(times):
    if len(times) < 2:
        raise ParameterError("volterra_solve needs at least two time points")
    if times[0] != 0.0:
        raise ParameterError("volterra_solve grids start at t = 0")
    dt = times[1] - times[0]
    if not np.allclose(np.diff(times), dt, rtol=1e-9, atol=1e-12):
        raise ParameterError("volterra_solve needs a uniform time grid")
    return float(dt)


def volterra_solve(times, model: RenormalizedModel,
                   kernel: Optional[MemoryKernel] = None) -> BlochTrajectory:
    """Integrate the master equation by trapezoidal product integration.

    Each step is a predictor (explicit Euler) followed by two trapezoidal
    corrector passes; the memory sum is the trapezoid over the whole history
    unless the kernel has decayed below 1e-10 of K(0).
    """
    times = check_times(times)
    dt = _uniform_step(times)
    wc = model.omega_c
    if dt * wc > MAX_DT * (1 + 1e-9):
        raise StepSizeError(f"omega_c * dt = {dt * wc:g} exceeds {MAX_DT}")
    n_steps = len(times) - 1
    if kernel is None:
        kernel = MemoryKernel.build(model, dt, times[-1])
    if not math.isclose(kernel.dt, dt, rel_tol=1e-9) or len(kernel.values) < n_steps + 1:
        raise ParameterError("memory kernel grid does not cover the requested times")
    K = kernel.values[: n_steps + 1]
    Kc = K.conj()
    width = n_steps + 1
    if kernel.tau_cut is not None:
        width = int(round(kernel.tau_cut / dt)) + 1

    rho = np.zeros((n_steps + 1, 4), dtype=complex)
    rho[0] = [1, 0, 0, 0]
    drho = np.zeros_like(rho)

    def memory(n):
        if n == 0:
            return np.zeros(4, dtype=complex)
        j0 = max(0, n - width + 1)
        w = np.full(n + 1 - j0, dt)
        if j0 == 0:
            w[0] *= 0.5
        w[-1] *= 0.5
        k = K[n - j0::-1] * w
        kc = Kc[n - j0::-1] * w
        hist = rho[j0:n + 1]
        return -(_M1 @ (k @ hist) + _M2 @ (kc @ hist))

    f_n = memory(0)
    for n in range(n_steps):
        drho[n] = f_n
        rho[n + 1] = rho[n] + dt * f_n
        for _ in range(2):
            f_next = memory(n + 1)
            rho[n + 1] = rho[n] + 0.5 * dt * (f_n + f_next)
        f_n = f_next
        r = rho[n + 1]
        if abs(r[0] + r[3] - 1.0) > TRACE_TOL:
            raise StepSizeError(f"trace drift {abs(r[0] + r[3] - 1):.3g} at t = {times[n + 1]:g}")
        if abs(r[1] - r[2].conjugate()) > HERMITIAN_TOL:
            raise StepSizeError(f"loss of hermiticity at t = {times[n + 1]:g}")
    drho[n_steps] = f_n

    # back to the Schroedinger picture of the transformed frame
    dr = model.delta_r
    half = 0.5 * dr * times
    U = np.cos(half)[:, None, None] * _I2 + 1j * np.sin(half)[:, None, None] * _SX
    Ud = np.conj(np.transpose(U, (0, 2, 1)))
    rho_i = rho.reshape(-1, 2, 2)
    rho_s = U @ rho_i @ Ud
    h0 = -0.5 * dr * _SX
    drho_s = -1j * (h0 @ rho_s - rho_s @ h0) + U @ drho.reshape(-1, 2, 2) @ Ud
    tr = lambda a, op: np.einsum("nij,ji->n", a, op).real
    sz = tr(rho_s, _SZ)
    sx = model.eta * tr(rho_s, _SX)
    sy = -tr(drho_s, _SZ) / model.params.delta
    info = {"dt": dt, "max_trace_error": float(np.max(np.abs(rho[:, 0] + rho[:, 3] - 1.0)))}
    return BlochTrajectory(times, sx, sy, sz, "volterra", model.params, info=info)
