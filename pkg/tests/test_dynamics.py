import numpy as np
import pytest

from spinboson.dynamics import (
    QuadratureConfig,
    bloch_trajectory,
    check_times,
    markov_trajectory,
    residue_sigma_z,
    sigma_x_of_t,
    sigma_y_of_t,
    sigma_z_of_t,
)
from spinboson.errors import ParameterError, QuadratureError, UnsupportedRegimeError
from spinboson.model import ModelParams
from spinboson.self_energy import SelfEnergyEvaluator, find_pole


def _ev(alpha, delta=0.1):
    return SelfEnergyEvaluator.from_params(ModelParams(alpha, delta))


@pytest.fixture(scope="module")
def ev02():
    return _ev(0.2)


def test_zero_coupling_is_free_precession():
    t = np.linspace(0, 100, 501)
    tr = bloch_trajectory(t, _ev(0.0))
    assert np.array_equal(tr.sz, np.cos(0.1 * t))
    assert np.array_equal(tr.sy, np.sin(0.1 * t))
    assert not np.any(tr.sx)


def test_initial_conditions(ev02):
    tr = bloch_trajectory([0.0], ev02)
    assert tr.sz[0] == pytest.approx(1.0, abs=1e-9)
    assert abs(tr.sx[0]) < 1e-9 and abs(tr.sy[0]) < 1e-9


def test_scalar_entry_points_agree(ev02):
    tr = bloch_trajectory([37.0], ev02)
    assert sigma_z_of_t(37.0, ev02) == pytest.approx(tr.sz[0], abs=1e-9)
    assert sigma_y_of_t(37.0, ev02) == pytest.approx(tr.sy[0], abs=1e-9)
    assert sigma_x_of_t(37.0, ev02) == pytest.approx(tr.sx[0], abs=1e-9)


@pytest.mark.parametrize("t", [3.0, 25.0, 140.0])
def test_sigma_y_derivative_identity(ev02, t):
    h = 1e-3
    tr = bloch_trajectory([t - h, t, t + h], ev02)
    dsz = (tr.sz[2] - tr.sz[0]) / (2 * h)
    assert tr.sy[1] == pytest.approx(-dsz / 0.1, abs=1e-5)


def test_error_estimates_within_tolerance(ev02):
    tr = bloch_trajectory(np.linspace(0, 200, 401), ev02)
    assert tr.error.shape == (3, 401)
    assert np.all(tr.error <= 1e-9 + 1e-8 * np.abs(np.vstack([tr.sx, tr.sy, tr.sz])))


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.7])
def test_bloch_norm_bounded(alpha):
    tr = bloch_trajectory(np.linspace(0, 300, 1201), _ev(alpha))
    assert np.max(tr.norm()) <= 1 + 1e-3


def test_long_time_limit(ev02):
    tr = bloch_trajectory([1000.0], ev02)
    assert tr.sx[0] == pytest.approx(ev02.model.eta, abs=0.02)
    assert abs(tr.sz[0]) < 0.02 and abs(tr.sy[0]) < 0.02


def test_quadrature_failure_reports_time(ev02):
    cfg = QuadratureConfig(abs_tol=1e-300, rel_tol=1e-300, max_refine=0)
    with pytest.raises(QuadratureError) as info:
        bloch_trajectory([5.0], ev02, cfg)
    assert info.value.t == 5.0


def test_localized_phase_rejected():
    with pytest.raises(UnsupportedRegimeError):
        bloch_trajectory([1.0], _ev(1.5))


@pytest.mark.parametrize("bad", [[], [-1.0, 0.0], [0.0, 2.0, 1.0], [np.inf]])
def test_time_grid_validation(bad):
    with pytest.raises(ParameterError):
        check_times(bad)


def test_residue_form(ev02):
    rep = find_pole(ev02)
    t = np.array([0.0, 10.0])
    expect = np.cos(rep.omega0 * t) * np.exp(-ev02.model.gamma_ww * t)
    assert np.allclose(residue_sigma_z(t, rep, ev02.model), expect, rtol=0, atol=0)


def test_markov_baseline_shape(ev02):
    rep = find_pole(ev02)
    t = np.linspace(0, 1000, 2001)
    tr = markov_trajectory(t, ev02.model, rep)
    assert (tr.sx[0], tr.sy[0], tr.sz[0]) == (0.0, 0.0, 1.0)
    assert tr.sx[-1] == pytest.approx(ev02.model.eta, abs=1e-9)
    assert np.all(np.diff(tr.norm()) <= 1e-12)  # monotone shrink while 2 eta^2 < 1


def test_markov_at_zero_coupling_is_free():
    e = _ev(0.0)
    t = np.linspace(0, 50, 11)
    tr = markov_trajectory(t, e.model, find_pole(e))
    assert np.allclose(tr.sz, np.cos(0.1 * t), atol=1e-12)
    assert np.allclose(tr.sy, np.sin(0.1 * t), atol=1e-12)
    assert not np.any(tr.sx)


def test_markov_refuses_incoherent():
    e = _ev(0.6)
    with pytest.raises(UnsupportedRegimeError):
        markov_trajectory([0.0], e.model, find_pole(e))
