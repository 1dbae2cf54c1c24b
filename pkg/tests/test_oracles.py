import numpy as np
import pytest
from scipy.linalg import eigh

from spinboson.dynamics import bloch_trajectory
from spinboson.errors import DimensionError, ParameterError, StepSizeError
from spinboson.model import ModelParams, solve_renormalization
from spinboson.oracles import (
    DiscretizedBath,
    MemoryKernel,
    ed_hamiltonian,
    ed_simulate,
    volterra_solve,
)
from spinboson.self_energy import SelfEnergyEvaluator


@pytest.fixture(scope="module")
def model01():
    return solve_renormalization(ModelParams(0.1, 0.1))


def test_kernel_invariants(model01):
    k = MemoryKernel.build(model01, 0.02, 200.0)
    dr, a = model01.delta_r, model01.alpha
    # K(0) = int_0^1 2 a w dr^2/(w+dr)^2 dw in closed form
    k0 = 2 * a * dr**2 * (np.log((1 + dr) / dr) - 1 / (1 + dr))
    assert k.k0 == pytest.approx(k0, rel=1e-12)
    assert abs(k.values[0].imag) < 1e-16
    assert np.all(np.abs(k.values) <= k.k0 * (1 + 1e-12))
    assert k(0.01) == pytest.approx(0.5 * (k.values[0] + k.values[1]))


def test_volterra_zero_coupling():
    t = np.arange(0, 2001) * 0.02
    tr = volterra_solve(t, solve_renormalization(ModelParams(0.0, 0.1)))
    assert np.allclose(tr.sz, np.cos(0.1 * t), atol=1e-12)
    assert np.allclose(tr.sy, np.sin(0.1 * t), atol=1e-12)


def test_volterra_initial_state(model01):
    tr = volterra_solve(np.arange(11) * 0.02, model01)
    assert (tr.sx[0], tr.sy[0], tr.sz[0]) == pytest.approx((0.0, 0.0, 1.0), abs=1e-15)
    assert tr.info["max_trace_error"] < 1e-8


def test_volterra_step_limit(model01):
    with pytest.raises(StepSizeError):
        volterra_solve(np.arange(5) * 0.05, model01)
    with pytest.raises(ParameterError):
        volterra_solve(np.array([0.0, 0.01, 0.03]), model01)


def test_volterra_matches_quadrature(model01):
    t = np.arange(0, 2501) * 0.02
    ref = bloch_trajectory(t, SelfEnergyEvaluator(model01))
    vol = volterra_solve(t, model01)
    assert np.max(np.abs(ref.sz - vol.sz)) < 1e-5
    assert np.max(np.abs(ref.sx - vol.sx)) < 1e-5


def test_bath_weight_preservation():
    p = ModelParams(0.05, 0.1)
    for bath in (DiscretizedBath.logarithmic(p, 6, 3), DiscretizedBath.linear(p, 5, 2)):
        e = np.asarray(bath.edges)
        g2 = np.square(bath.couplings)
        assert np.allclose(g2, p.alpha * (e[:-1] ** 2 - e[1:] ** 2), rtol=0, atol=1e-12)
        assert g2.sum() == pytest.approx(p.alpha * p.omega_c**2, abs=1e-12)
        w = np.asarray(bath.omegas)
        assert np.all((w > 0) & (w <= p.omega_c))
        assert np.all((w <= e[:-1]) & (w >= e[1:]))


def test_ed_zero_coupling():
    p = ModelParams(0.0, 0.1)
    t = np.linspace(0, 30, 61)
    tr = ed_simulate(t, p, DiscretizedBath.logarithmic(p, 3, 2))
    assert np.allclose(tr.sz, np.cos(0.1 * t), atol=1e-10)
    assert np.allclose(tr.sy, np.sin(0.1 * t), atol=1e-10)
    assert np.allclose(tr.sx, 0.0, atol=1e-10)


def test_ed_single_mode_against_dense():
    p = ModelParams(0.2, 0.1)
    bath = DiscretizedBath.logarithmic(p, 1, 20)
    t = np.linspace(0, 40, 41)
    tr = ed_simulate(t, p, bath)
    evals, vecs = eigh(ed_hamiltonian(p, bath).toarray())
    psi0 = np.zeros(len(evals))
    psi0[0] = 1.0
    c = vecs.T @ psi0
    psis = (vecs @ (np.exp(-1j * np.outer(evals, t)) * c[:, None])).T
    half = psis.reshape(len(t), 2, -1)
    sz = np.sum(np.abs(half[:, 0]) ** 2 - np.abs(half[:, 1]) ** 2, axis=1)
    sx = 2 * np.sum(half[:, 0] * half[:, 1].conj(), axis=1).real
    assert np.allclose(tr.sz, sz, atol=1e-8)
    assert np.allclose(tr.sx, sx, atol=1e-8)


def test_ed_nonuniform_grid_matches_uniform():
    p = ModelParams(0.05, 0.1)
    bath = DiscretizedBath.logarithmic(p, 3, 2)
    t = np.linspace(0, 10, 11)
    a = ed_simulate(t, p, bath)
    b = ed_simulate(t[[0, 3, 4, 10]], p, bath)
    assert np.allclose(a.sz[[0, 3, 4, 10]], b.sz, atol=1e-10)


def test_ed_dimension_cap():
    p = ModelParams(0.05, 0.1)
    with pytest.raises(DimensionError):
        ed_simulate([0.0, 1.0], p, DiscretizedBath.logarithmic(p, 12, 3))
