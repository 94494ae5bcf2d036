"""Finite-difference stencils and quadrature weights shared across modules."""

from __future__ import annotations

import numpy as np

__all__ = ["derivative", "quad_weights", "simpson"]

# one-sided first-derivative stencils (times h): order 4 on 5 points,
# order 6 on 7 points, for the first rows of a table; mirrored at the end
_EDGE4 = (
    np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0,
    np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0,
)
_EDGE6 = (
    np.array([-147.0, 360.0, -450.0, 400.0, -225.0, 72.0, -10.0]) / 60.0,
    np.array([-10.0, -77.0, 150.0, -100.0, 50.0, -15.0, 2.0]) / 60.0,
    np.array([2.0, -24.0, -35.0, 80.0, -30.0, 8.0, -1.0]) / 60.0,
)


def derivative(values: np.ndarray, h: float, order: int = 4) -> np.ndarray:
    """Differentiate uniformly sampled values with central stencils of the
    requested order (4 or 6) and matching one-sided stencils at the ends."""
    v = np.asarray(values, dtype=np.float64)
    n = v.size
    d = np.empty(n)
    if order == 4:
        if n < 5:
            raise ValueError("order-4 differentiation needs at least 5 samples")
        d[2:-2] = (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / (12.0 * h)
        edges = _EDGE4
    elif order == 6:
        if n < 7:
            raise ValueError("order-6 differentiation needs at least 7 samples")
        d[3:-3] = (-v[:-6] + 9.0 * v[1:-5] - 45.0 * v[2:-4]
                   + 45.0 * v[4:-2] - 9.0 * v[5:-1] + v[6:]) / (60.0 * h)
        edges = _EDGE6
    else:
        raise ValueError("supported stencil orders are 4 and 6")
    width = len(edges[0])
    for k, coef in enumerate(edges):
        d[k] = coef @ v[:width] / h
        d[n - 1 - k] = -(coef @ v[n - width:][::-1]) / h
    return d


def end_slopes(values: np.ndarray, h: float) -> tuple[float, float]:
    """Order-6 one-sided derivative estimates at both ends of a sample row."""
    v = np.asarray(values, dtype=np.float64)
    if v.size < 7:
        raise ValueError("end slope estimation needs at least 7 samples")
    left = _EDGE6[0] @ v[:7] / h
    right = -(_EDGE6[0] @ v[-7:][::-1]) / h
    return float(left), float(right)


def quad_weights(n: int) -> np.ndarray:
    """Weights (unit spacing) integrating n+1 uniform samples over [0, n].

    Interior rows use the endpoint-corrected trapezoid rule of order 4
    (Gregory weights 3/8, 7/6, 23/24); rows too short for the corrections
    fall back to closed Newton-Cotes rules of at least matching order,
    except the single-interval row where the plain trapezoid is all there is.
    """
    if n < 0:
        raise ValueError("need a nonnegative interval count")
    if n == 0:
        return np.zeros(1)
    if n == 1:
        return np.array([0.5, 0.5])
    if n == 2:
        return np.array([1.0, 4.0, 1.0]) / 3.0
    if n == 3:
        return np.array([3.0, 9.0, 9.0, 3.0]) / 8.0
    if n == 4:
        return np.array([1.0, 4.0, 2.0, 4.0, 1.0]) / 3.0
    if n == 5:
        # composite: Simpson on the first two intervals, 3/8 on the last three
        return np.array([1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0 + 3.0 / 8.0,
                         9.0 / 8.0, 9.0 / 8.0, 3.0 / 8.0])
    w = np.ones(n + 1)
    w[0] = w[-1] = 3.0 / 8.0
    w[1] = w[-2] = 7.0 / 6.0
    w[2] = w[-3] = 23.0 / 24.0
    return w


def simpson(values: np.ndarray, h: float) -> float:
    """Composite Simpson rule; the sample count must be odd (even intervals)."""
    v = np.asarray(values, dtype=np.float64)
    if v.size % 2 == 0:
        raise ValueError("composite Simpson needs an even number of intervals")
    w = np.ones(v.size)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float(h / 3.0 * (w @ v))
