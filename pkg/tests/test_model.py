import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinboson.errors import ParameterError
from spinboson.model import (
    ModelParams,
    log_eta_closed_form,
    log_eta_quadrature,
    solve_renormalization,
    spectral_density,
    xi,
)

# frozen from the fixed-point solver after cross-checking against quadrature
PINNED_ETA = {
    0.05: 0.9252678214969404,
    0.1: 0.8500152594362214,
    0.2: 0.6984809275268351,
    0.3: 0.5470023736444289,
    0.5: 0.25839027989466934,
}


@pytest.mark.parametrize("alpha,eta", sorted(PINNED_ETA.items()))
def test_pinned_eta(alpha, eta):
    m = solve_renormalization(ModelParams(alpha, 0.1))
    assert m.eta == pytest.approx(eta, rel=1e-10)
    assert m.delta_r == pytest.approx(0.1 * eta, rel=1e-10)
    assert m.gamma_ww == pytest.approx(0.5 * math.pi * alpha * m.delta_r, rel=1e-14)
    assert m.alpha_c == pytest.approx(0.5 * (1 + m.delta_r), rel=1e-14)
    assert m.converged and not m.localized


def test_zero_coupling_is_bare():
    m = solve_renormalization(ModelParams(0.0, 0.1))
    assert m.eta == 1.0 and m.delta_r == 0.1 and m.gamma_ww == 0.0


def test_strong_coupling_localizes():
    m = solve_renormalization(ModelParams(1.5, 0.1))
    assert m.localized and m.eta == 0.0


def test_near_threshold_still_delocalized():
    # iterates dip below 1e-8 but a positive fixed point exists
    m = solve_renormalization(ModelParams(0.96, 0.1))
    assert not m.localized and m.eta == pytest.approx(2.6489122129840418e-14, rel=1e-6)


@pytest.mark.parametrize("kwargs", [
    dict(alpha=-0.1, delta=0.1),
    dict(alpha=0.1, delta=0.0),
    dict(alpha=0.1, delta=1.0),
    dict(alpha=0.1, delta=0.1, temperature=0.01),
    dict(alpha=float("nan"), delta=0.1),
])
def test_invalid_params(kwargs):
    with pytest.raises(ParameterError):
        ModelParams(**kwargs)


def test_spectral_density_cutoff():
    p = ModelParams(0.2, 0.1)
    assert spectral_density(1.0, p) == pytest.approx(0.4)
    assert spectral_density(1.0 + 1e-12, p) == 0.0
    assert spectral_density(-0.1, p) == 0.0


def test_xi_rejects_degenerate():
    with pytest.raises(ParameterError):
        xi(0.0, 0.0)
    with pytest.raises(ParameterError):
        xi(-1.0, 0.1)


@given(st.floats(0, 10), st.floats(1e-6, 1))
def test_xi_in_unit_interval(w, dr):
    v = xi(w, dr)
    assert 0.0 <= v < 1.0 or (v == 1.0 and dr / (w + dr) < 1e-15)


@given(st.floats(1e-6, 0.99), st.floats(0.0, 2.0))
@settings(max_examples=50, deadline=None)
def test_closed_form_matches_quadrature(dr, alpha):
    a = log_eta_closed_form(alpha, dr)
    b = log_eta_quadrature(alpha, dr)
    assert a == pytest.approx(b, rel=1e-10, abs=1e-14)


@given(st.floats(0.0, 0.9), st.floats(0.0, 0.9), st.floats(1e-3, 0.5))
@settings(max_examples=60, deadline=None)
def test_eta_monotone_in_alpha(a1, a2, delta):
    lo, hi = sorted((a1, a2))
    e_lo = solve_renormalization(ModelParams(lo, delta)).eta
    e_hi = solve_renormalization(ModelParams(hi, delta)).eta
    assert e_hi <= e_lo * (1 + 1e-12)


def test_fixed_point_residual():
    for a in np.linspace(0.0, 0.9, 19):
        m = solve_renormalization(ModelParams(float(a), 0.1))
        if m.eta > 0:
            lhs = math.log(m.eta)
            assert lhs == pytest.approx(log_eta_closed_form(a, m.delta_r), abs=1e-11)
