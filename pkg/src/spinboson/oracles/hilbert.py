"""Numeric principal-value Hilbert transform of the damping rate."""
import math
import warnings

import numpy as np
from scipy import integrate

from ..errors import SingularityError
from ..self_energy import SelfEnergyEvaluator


def _pv_single(w, ev):
    wc = ev.omega_c
    g = lambda x: ev.damping(x) / math.pi
    opts = dict(epsabs=0.0, epsrel=1e-13, limit=400)
    if 0.0 < w < wc:
        gw = g(w)
        # subtract the singular part; the log term integrates it exactly
        smooth = lambda x: (g(x) - gw) / (w - x) if x != w else 0.0
        val, _ = integrate.quad(smooth, 0.0, wc, points=[w], **opts)
        return val + gw * math.log(w / (wc - w))
    pts = [min(ev.delta_r, wc)] if ev.delta_r < wc else None
    val, _ = integrate.quad(lambda x: g(x) / (w - x), 0.0, wc, points=pts, **opts)
    return val


def pv_hilbert(omega, ev: SelfEnergyEvaluator):
    """PV int_0^wc (gamma(w')/pi) / (w - w') dw' by singularity subtraction."""
    w = np.asarray(omega, dtype=float)
    if np.any(np.abs(w - ev.omega_c) < 1e-6 * ev.omega_c):
        raise SingularityError("principal value undefined within 1e-6 of omega_c")
    if ev.alpha == 0.0 or ev.delta_r == 0.0:
        out = np.zeros_like(w)
    else:
        # quad flags roundoff once it reaches ~1e-15 relative; that is accuracy enough
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            vals = [_pv_single(float(x), ev) for x in np.atleast_1d(w)]
        out = np.array(vals).reshape(w.shape)
    return out if out.ndim else float(out)
