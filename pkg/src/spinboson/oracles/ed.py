"""Exact propagation of the untransformed Hamiltonian with a discretized bath."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import expm_multiply

from ..dynamics import BlochTrajectory, check_times
from ..errors import DimensionError, NormDriftError, ParameterError
from ..model import ModelParams

MAX_DIM = 100_000
NORM_TOL = 1e-10


@dataclass(frozen=True)
class DiscretizedBath:
    omegas: Tuple[float, ...]
    couplings: Tuple[float, ...]
    edges: Tuple[float, ...]  # descending bin edges, len = n_modes + 1
    n_max: int
    scheme: str

    @property
    def n_modes(self):
        return len(self.omegas)

    @property
    def dimension(self):
        return 2 * (self.n_max + 1) ** self.n_modes

    @staticmethod
    def _weights(params, edges):
        e = np.asarray(edges)
        # int_bin 2 alpha w dw
        return params.alpha * (e[:-1] ** 2 - e[1:] ** 2)

    @classmethod
    def logarithmic(cls, params: ModelParams, n_modes: int, n_max: int, lam: float = 2.0):
        """Modes at omega_c lam^-k; bin k spans (omega_c lam^-(k+1/2), omega_c lam^-(k-1/2)].

        The first bin is clipped at omega_c and the last one extends to zero.
        """
        if n_modes < 1 or n_max < 0 or lam <= 1:
            raise ParameterError("need n_modes >= 1, n_max >= 0, lam > 1")
        wc = params.omega_c
        k = np.arange(n_modes)
        omegas = wc * lam ** (-k)
        edges = np.concatenate([[wc], wc * lam ** (-(k[1:] - 0.5)), [0.0]])
        g = np.sqrt(cls._weights(params, edges))
        return cls(tuple(omegas), tuple(g), tuple(edges), n_max, "logarithmic")

    @classmethod
    def linear(cls, params: ModelParams, n_modes: int, n_max: int):
        if n_modes < 1 or n_max < 0:
            raise ParameterError("need n_modes >= 1 and n_max >= 0")
        edges = np.linspace(params.omega_c, 0.0, n_modes + 1)
        omegas = 0.5 * (edges[:-1] + edges[1:])
        g = np.sqrt(cls._weights(params, edges))
        return cls(tuple(omegas), tuple(g), tuple(edges), n_max, "linear")


def ed_hamiltonian(params: ModelParams, bath: DiscretizedBath):
    """Sparse H = -Delta/2 sx + sum w b+b + 1/2 sum g (b + b+) sz, spin first."""
    if bath.dimension > MAX_DIM:
        raise DimensionError(f"Hilbert dimension {bath.dimension} exceeds {MAX_DIM}")
    d = bath.n_max + 1
    a = sparse.diags(np.sqrt(np.arange(1, d, dtype=float)), 1, format="csr")
    num = sparse.diags(np.arange(d, dtype=float), 0, format="csr")
    eye = sparse.identity(d, format="csr")

    def embed(op, k):
        out = sparse.identity(1, format="csr")
        for j in range(bath.n_modes):
            out = sparse.kron(out, op if j == k else eye, format="csr")
        return out

    sx = sparse.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
    sz = sparse.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]]))
    id2 = sparse.identity(2, format="csr")
    dim_b = d**bath.n_modes
    h_bath = sparse.csr_matrix((dim_b, dim_b))
    x_bath = sparse.csr_matrix((dim_b, dim_b))
    for k, (w, g) in enumerate(zip(bath.omegas, bath.couplings)):
        h_bath = h_bath + w * embed(num, k)
        x_bath = x_bath + 0.5 * g * embed(a + a.T, k)
    h = (-0.5 * params.delta) * sparse.kron(sx, sparse.identity(dim_b), format="csr")
    h = h + sparse.kron(id2, h_bath, format="csr") + sparse.kron(sz, x_bath, format="csr")
    return h.tocsc()


def _propagate(h, psi0, times):
    steps = np.diff(times)
    if len(times) > 1 and np.allclose(steps, steps[0], rtol=1e-10, atol=0):
        return expm_multiply(-1j * h, psi0, start=times[0], stop=times[-1],
                             num=len(times), endpoint=True)
    out = np.empty((len(times), len(psi0)), dtype=complex)
    psi, t_prev = psi0, 0.0
    for i, t in enumerate(times):
        if t > t_prev:
            psi = expm_multiply(-1j * (t - t_prev) * h, psi)
        out[i] = psi
        t_prev = t
    return out


def ed_simulate(times, params: ModelParams, bath: DiscretizedBath) -> BlochTrajectory:
    """Start from |up> x vacuum and return the reduced Bloch vector."""
    times = check_times(times)
    h = ed_hamiltonian(params, bath)
    dim = h.shape[0]
    psi0 = np.zeros(dim, dtype=complex)
    psi0[0] = 1.0
    psis = np.atleast_2d(_propagate(h, psi0, times))
    norms = np.linalg.norm(psis, axis=1)
    drift = float(np.max(np.abs(norms - 1.0)))
    if drift > NORM_TOL:
        raise NormDriftError(f"state norm drifted by {drift:.3g}")
    half = psis.reshape(len(times), 2, dim // 2)
    up = np.sum(np.abs(half[:, 0]) ** 2, axis=1)
    dn = np.sum(np.abs(half[:, 1]) ** 2, axis=1)
    coh = np.sum(half[:, 0] * half[:, 1].conj(), axis=1)
    info = {"n_modes": bath.n_modes, "n_max": bath.n_max, "dimension": dim, "norm_drift": drift}
    return BlochTrajectory(times, 2 * coh.real, -2 * coh.imag, up - dn, "ed", params, info=info)
