# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled propagation kernels; mirrors _magnus_py exactly.

The step is the two-point Gauss-Magnus exponential step for the first-order
system (y, y'): constant-coefficient intervals propagate exactly, smooth
coefficients at fourth order.
"""

import numpy as np

from libc.math cimport cos, cosh, fabs, log, sin, sinh, sqrt

cdef double SQRT3 = sqrt(3.0)
cdef double SERIES_CUT = 1e-6
cdef double RESCALE_AT = 1e100


cdef inline void _fg(double delta, double* f, double* g) noexcept nogil:
    cdef double s
    if fabs(delta) < SERIES_CUT:
        f[0] = 1.0 + delta * (0.5 + delta * (1.0 / 24.0 + delta / 720.0))
        g[0] = 1.0 + delta * (1.0 / 6.0 + delta * (1.0 / 120.0 + delta / 5040.0))
    elif delta > 0.0:
        s = sqrt(delta)
        f[0] = cosh(s)
        g[0] = sinh(s) / s
    else:
        s = sqrt(-delta)
        f[0] = cos(s)
        g[0] = sin(s) / s


def propagate_end(double[::1] qg1, double[::1] qg2, double h, mus,
                  double y0, double v0):
    """March across the whole grid; return endpoint state, the number of sign
    changes of y, and the accumulated log of any magnitude rescaling."""
    mus_arr = np.ascontiguousarray(np.atleast_1d(mus), dtype=np.float64)
    cdef double[::1] mu_v = mus_arr
    cdef Py_ssize_t k = mu_v.shape[0], m = qg1.shape[0]
    y_out = np.empty(k)
    v_out = np.empty(k)
    c_out = np.zeros(k, dtype=np.int64)
    s_out = np.zeros(k)
    cdef double[::1] y_v = y_out
    cdef double[::1] vv = v_out
    cdef long long[::1] c_v = c_out
    cdef double[::1] s_v = s_out
    a_np = (SQRT3 * h * h / 12.0) * (np.asarray(qg1) - np.asarray(qg2))
    cm_np = 0.5 * (np.asarray(qg1) + np.asarray(qg2))
    cdef double[::1] a_v = a_np
    cdef double[::1] cm_v = cm_np
    cdef double h2 = h * h
    cdef Py_ssize_t j, i
    cdef double mu, y, v, a, hc, f, g, ga, ynew, vnew, mag
    cdef long long crossings
    cdef double log_scale
    with nogil:
        for j in range(k):
            mu = mu_v[j]
            y = y0
            v = v0
            crossings = 0
            log_scale = 0.0
            for i in range(m):
                a = a_v[i]
                hc = h2 * (cm_v[i] - mu)
                _fg(a * a + hc, &f, &g)
                ga = g * a
                ynew = (f + ga) * y + (g * h) * v
                vnew = (hc / h * g) * y + (f - ga) * v
                if (ynew < 0.0) != (y < 0.0):
                    crossings += 1
                mag = fabs(ynew)
                if fabs(vnew) > mag:
                    mag = fabs(vnew)
                if mag > RESCALE_AT:
                    ynew /= mag
                    vnew /= mag
                    log_scale += log(mag)
                y = ynew
                v = vnew
            y_v[j] = y
            vv[j] = v
            c_v[j] = crossings
            s_v[j] = log_scale
    return y_out, v_out, c_out, s_out


def propagate_trace(double[::1] qg1, double[::1] qg2, double h, mus,
                    double y0, double v0, bint backward=False):
    """Full node-by-node traces for a batch of spectral parameters."""
    mus_arr = np.ascontiguousarray(np.atleast_1d(mus), dtype=np.float64)
    cdef double[::1] mu_v = mus_arr
    cdef Py_ssize_t k = mu_v.shape[0], m = qg1.shape[0]
    Y = np.empty((k, m + 1))
    V = np.empty((k, m + 1))
    cdef double[:, ::1] Y_v = Y
    cdef double[:, ::1] V_v = V
    a_np = (SQRT3 * h * h / 12.0) * (np.asarray(qg1) - np.asarray(qg2))
    cm_np = 0.5 * (np.asarray(qg1) + np.asarray(qg2))
    cdef double[::1] a_v = a_np
    cdef double[::1] cm_v = cm_np
    cdef double h2 = h * h
    cdef Py_ssize_t j, i
    cdef double mu, a, hc, f, g, ga
    with nogil:
        for j in range(k):
            mu = mu_v[j]
            if not backward:
                Y_v[j, 0] = y0
                V_v[j, 0] = v0
                for i in range(m):
                    a = a_v[i]
                    hc = h2 * (cm_v[i] - mu)
                    _fg(a * a + hc, &f, &g)
                    ga = g * a
                    Y_v[j, i + 1] = (f + ga) * Y_v[j, i] + (g * h) * V_v[j, i]
                    V_v[j, i + 1] = (hc / h * g) * Y_v[j, i] + (f - ga) * V_v[j, i]
            else:
                Y_v[j, m] = y0
                V_v[j, m] = v0
                for i in range(m - 1, -1, -1):
                    a = a_v[i]
                    hc = h2 * (cm_v[i] - mu)
                    _fg(a * a + hc, &f, &g)
                    ga = g * a
                    Y_v[j, i] = (f - ga) * Y_v[j, i + 1] - (g * h) * V_v[j, i + 1]
                    V_v[j, i] = -(hc / h * g) * Y_v[j, i + 1] + (f + ga) * V_v[j, i + 1]
    edge = Y[:, -1 if not backward else 0]
    vedge = V[:, -1 if not backward else 0]
    ok = np.isfinite(edge) & np.isfinite(vedge)
    return Y, V, ok
