"""Pure-NumPy propagation kernels (fallback backend).

One step advances (y, y') across a grid interval with the two-point
Gauss-Magnus scheme: the interval's averaged coefficient matrix plus its
commutator correction is exponentiated in closed form, so constant-coefficient
problems propagate exactly and smooth ones at fourth order.  Batches are
vectorized over the spectral parameter; the step loop itself runs in Python,
which is what the compiled backend accelerates.
"""

from __future__ import annotations

import numpy as np

SQRT3 = np.sqrt(3.0)
_SERIES_CUT = 1e-6
_RESCALE_AT = 1e100


def _fg(delta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """cosh/cos value f and sinh/sinc value g of sqrt(delta), series near zero."""
    small = np.abs(delta) < _SERIES_CUT
    pos = delta > 0
    s = np.sqrt(np.abs(delta))
    sp = np.where(pos, s, 0.0)
    sn = np.where(pos, 0.0, s)
    denom = np.where(s == 0.0, 1.0, s)
    f = np.where(pos, np.cosh(sp), np.cos(sn))
    g = np.where(pos, np.sinh(sp), np.sin(sn)) / denom
    fs = 1.0 + delta * (0.5 + delta * (1.0 / 24.0 + delta / 720.0))
    gs = 1.0 + delta * (1.0 / 6.0 + delta * (1.0 / 120.0 + delta / 5040.0))
    return np.where(small, fs, f), np.where(small, gs, g)


def propagate_end(qg1, qg2, h, mus, y0, v0):
    """March across the whole grid; return endpoint state, the number of sign
    changes of y, and the accumulated log of any magnitude rescaling."""
    mus = np.ascontiguousarray(np.atleast_1d(mus), dtype=np.float64)
    k = mus.size
    y = np.full(k, float(y0))
    v = np.full(k, float(v0))
    crossings = np.zeros(k, dtype=np.int64)
    log_scale = np.zeros(k)
    a_arr = (SQRT3 * h * h / 12.0) * (qg1 - qg2)
    cm = 0.5 * (qg1 + qg2)
    h2 = h * h
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(qg1.size):
            a = a_arr[i]
            hc = h2 * (cm[i] - mus)
            f, g = _fg(a * a + hc)
            ga = g * a
            ynew = (f + ga) * y + (g * h) * v
            vnew = (hc / h * g) * y + (f - ga) * v
            crossings += (ynew < 0.0) != (y < 0.0)
            mag = np.maximum(np.abs(ynew), np.abs(vnew))
            if np.any(mag > _RESCALE_AT):
                big = mag > _RESCALE_AT
                scale = np.where(big, 1.0 / mag, 1.0)
                ynew = ynew * scale
                vnew = vnew * scale
                log_scale += np.where(big, np.log(mag), 0.0)
            y, v = ynew, vnew
    return y, v, crossings, log_scale


def propagate_trace(qg1, qg2, h, mus, y0, v0, backward=False):
    """Full node-by-node traces for a batch of spectral parameters.

    Returns (Y, V, ok) with shape (len(mus), M+1); ok flags batches whose
    states stayed finite.  Backward marches from the right endpoint using the
    exact inverse of each interval step; outputs stay indexed left-to-right.
    """
    mus = np.ascontiguousarray(np.atleast_1d(mus), dtype=np.float64)
    k = mus.size
    m = qg1.size
    Y = np.empty((k, m + 1))
    V = np.empty((k, m + 1))
    a_arr = (SQRT3 * h * h / 12.0) * (qg1 - qg2)
    cm = 0.5 * (qg1 + qg2)
    h2 = h * h
    # overflow to inf is expected for very negative spectral parameters and
    # surfaces through the ok flags, matching the compiled kernel's behavior
    with np.errstate(over="ignore", invalid="ignore"):
        if not backward:
            Y[:, 0] = y0
            V[:, 0] = v0
            for i in range(m):
                a = a_arr[i]
                hc = h2 * (cm[i] - mus)
                f, g = _fg(a * a + hc)
                ga = g * a
                Y[:, i + 1] = (f + ga) * Y[:, i] + (g * h) * V[:, i]
                V[:, i + 1] = (hc / h * g) * Y[:, i] + (f - ga) * V[:, i]
        else:
            Y[:, m] = y0
            V[:, m] = v0
            for i in range(m - 1, -1, -1):
                a = a_arr[i]
                hc = h2 * (cm[i] - mus)
                f, g = _fg(a * a + hc)
                ga = g * a
                Y[:, i] = (f - ga) * Y[:, i + 1] - (g * h) * V[:, i + 1]
                V[:, i] = -(hc / h * g) * Y[:, i + 1] + (f + ga) * V[:, i + 1]
    ok = np.isfinite(Y[:, -1 if not backward else 0]) & np.isfinite(V[:, -1 if not backward else 0])
    return Y, V, ok
