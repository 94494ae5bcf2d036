"""Direct spectral problem: integrate the equation, locate eigenvalues, and
compute norming constants, endpoint values, and characteristic functions.

Eigenvalues are found by counting: the number of sign changes of the
left-normalized solution plus an endpoint phase test gives the exact number of
eigenvalues below any trial value, so bisection per index can neither skip nor
duplicate roots.  Each bracket is then polished with a few Newton steps on the
characteristic function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import (EigenvalueConsistencyError, IntegrationOverflowError,
                     PreconditionError, SearchFailureError)
from .numerics import simpson
from .types import Grid, OperatorSpec, SpectralDatum, SpectrumTable

__all__ = [
    "SolutionTrace",
    "CharacteristicValue",
    "integrate_phi",
    "integrate_psi",
    "char_phi",
    "char_psi",
    "char_derivative",
    "eigenvalues",
    "norming_constant_a",
    "norming_constant_b",
    "kappa",
]

GAUSS_OFFSETS = (0.5 - np.sqrt(3.0) / 6.0, 0.5 + np.sqrt(3.0) / 6.0)

ROOT_TOL = 1e-8          # |Phi(mu)| <= ROOT_TOL * (1 + |mu|) at accepted roots
BISECT_WIDTH = 1e-9
NEWTON_STEPS = 3
FD_STEP = 1e-5           # spectral-parameter step for dPhi/dmu
KAPPA_SELF_TOL = 1e-5
SIMPLICITY_MIN = 1e-6
_MAX_EXPAND = 60


@dataclass(frozen=True, eq=False)
class SolutionTrace:
    """Samples of (y, y') along the grid for one spectral parameter."""

    grid: Grid
    y: np.ndarray
    yprime: np.ndarray
    mu: float
    direction: str  # "forward" (normalized at 0) or "backward" (at pi)

    def __post_init__(self):
        if self.direction not in ("forward", "backward"):
            raise ValueError("direction must be 'forward' or 'backward'")
        for name in ("y", "yprime"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != (self.grid.node_count + 1,):
                raise ValueError(f"{name} must have one sample per grid node")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class CharacteristicValue:
    """Characteristic-function evaluation at one spectral parameter."""

    mu: float
    phi_big: float | None = None
    psi_big: float | None = None
    phi_big_dot: float | None = None

    def __post_init__(self):
        if self.phi_big is None and self.psi_big is None:
            raise ValueError("at least one characteristic value must be present")


class _Tables:
    """Per-operator sampled data shared by all evaluations."""

    def __init__(self, op: OperatorSpec):
        grid = op.grid
        if grid.node_count % 2:
            raise ValueError("the solver grid must have an even number of "
                             "intervals (composite Simpson quadrature)")
        h = grid.spacing
        spline = op.potential.spline()
        base = grid.nodes[:-1]
        self.qg1 = np.ascontiguousarray(spline(base + GAUSS_OFFSETS[0] * h))
        self.qg2 = np.ascontiguousarray(spline(base + GAUSS_OFFSETS[1] * h))
        self.h = h
        self.grid = grid
        self.cot_a = op.angles.cot_alpha
        self.cot_b = op.angles.cot_beta
        self.alpha = op.alpha
        self.beta = op.beta
        self.q_min = float(op.potential.values.min())
        self.q_max = float(op.potential.values.max())

    def end_state(self, mus):
        return backend.propagate_end(self.qg1, self.qg2, self.h,
                                     np.asarray(mus, dtype=np.float64),
                                     1.0, -self.cot_a)

    def traces(self, mus, backward=False):
        if backward:
            y, v, ok = backend.propagate_trace(self.qg1, self.qg2, self.h,
                                               np.asarray(mus, dtype=np.float64),
                                               1.0, -self.cot_b, True)
        else:
            y, v, ok = backend.propagate_trace(self.qg1, self.qg2, self.h,
                                               np.asarray(mus, dtype=np.float64),
                                               1.0, -self.cot_a, False)
        if not ok.all():
            raise IntegrationOverflowError(
                "solution magnitude overflowed during integration; refine the "
                "grid or avoid extremely negative spectral parameters")
        return y, v

    def char_phi(self, mus):
        y, v, _, logs = self.end_state(mus)
        return (y * self.cot_b + v), logs

    def count_below(self, mus):
        """Number of eigenvalues strictly below each trial value."""
        y, v, crossings, _ = self.end_state(mus)
        if not (np.isfinite(y) & np.isfinite(v)).all():
            raise IntegrationOverflowError(
                "endpoint state overflowed while counting eigenvalues")
        rho = np.arctan2(y, v) % np.pi
        return crossings + (rho > (np.pi - self.beta))


def integrate_phi(op: OperatorSpec, mu: float) -> SolutionTrace:
    """Left-normalized solution: y(0) = 1, y'(0) = -cot(alpha)."""
    t = _Tables(op)
    y, v = t.traces([mu])
    return SolutionTrace(op.grid, y[0], v[0], float(mu), "forward")


def integrate_psi(op: OperatorSpec, mu: float) -> SolutionTrace:
    """Right-normalized solution: y(pi) = 1, y'(pi) = -cot(beta)."""
    t = _Tables(op)
    y, v = t.traces([mu], backward=True)
    return SolutionTrace(op.grid, y[0], v[0], float(mu), "backward")


def char_phi(op: OperatorSpec, mu: float) -> CharacteristicValue:
    """Boundary defect of the left-normalized solution at pi."""
    trace = integrate_phi(op, mu)
    value = trace.y[-1] * op.angles.cot_beta + trace.yprime[-1]
    return CharacteristicValue(mu=float(mu), phi_big=float(value))


def char_psi(op: OperatorSpec, mu: float) -> CharacteristicValue:
    """Boundary defect of the right-normalized solution at 0."""
    trace = integrate_psi(op, mu)
    value = trace.y[0] * op.angles.cot_alpha + trace.yprime[0]
    return CharacteristicValue(mu=float(mu), psi_big=float(value))


def char_derivative(op: OperatorSpec, mu: float) -> float:
    """d/dmu of the left characteristic function, by central differences."""
    t = _Tables(op)
    return _char_derivative(t, np.array([float(mu)]))[0]


def _char_derivative(t: _Tables, mus: np.ndarray) -> np.ndarray:
    step = np.maximum(FD_STEP, FD_STEP * np.abs(mus))
    both = np.concatenate([mus + step, mus - step])
    values, logs = t.char_phi(both)
    if np.any(logs != 0.0):
        raise IntegrationOverflowError("characteristic value overflowed")
    k = mus.size
    return (values[:k] - values[k:]) / (2.0 * step)


def _char_values(t: _Tables, mus: np.ndarray) -> np.ndarray:
    values, logs = t.char_phi(mus)
    if np.any(logs != 0.0):
        raise IntegrationOverflowError("characteristic value overflowed")
    return values


def eigenvalues(op: OperatorSpec, n_max: int, want_b: bool = False) -> SpectrumTable:
    """Table of the first n_max + 1 eigenvalues with spectral quantities.

    Indices are assigned by the oscillation count, so entry n is the n-th
    eigenvalue regardless of clustering.  With want_b the right-endpoint
    norming constants are included and the left/right consistency of the
    endpoint values is cross-checked.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    t = _Tables(op)
    lo = t.q_min - t.cot_a**2 - t.cot_b**2 - 1.0
    hi = (n_max + 2.0) ** 2 + t.q_max + 1.0
    for attempt in range(_MAX_EXPAND + 1):
        if t.count_below([lo])[0] == 0:
            break
        if attempt == _MAX_EXPAND:
            raise SearchFailureError(0, "no lower bound found for the spectrum")
        lo -= 2.0 * (hi - lo)
    for attempt in range(_MAX_EXPAND + 1):
        if t.count_below([hi])[0] >= n_max + 1:
            break
        if attempt == _MAX_EXPAND:
            raise SearchFailureError(n_max, "no upper bound found for the spectrum")
        hi += 2.0 * (hi - lo)

    k = n_max + 1
    ns = np.arange(k)
    los = np.full(k, lo)
    his = np.full(k, hi)
    while (his - los).max() > BISECT_WIDTH:
        mid = 0.5 * (los + his)
        above = t.count_below(mid) >= ns + 1
        his = np.where(above, mid, his)
        los = np.where(above, los, mid)
    mus = 0.5 * (los + his)

    for _ in range(NEWTON_STEPS):
        values = _char_values(t, mus)
        dots = _char_derivative(t, mus)
        with np.errstate(divide="ignore", invalid="ignore"):
            candidate = mus - values / dots
        keep = np.isfinite(candidate) & (candidate > los) & (candidate < his)
        mus = np.where(keep, candidate, mus)

    return _assemble_table(t, mus, want_b)


def _assemble_table(t: _Tables, mus: np.ndarray, want_b: bool) -> SpectrumTable:
    values = _char_values(t, mus)
    dots = _char_derivative(t, mus)
    y_end, _, crossings, logs = t.end_state(mus)
    if np.any(logs != 0.0):
        raise IntegrationOverflowError("eigenfunction overflowed at an accepted root")
    for n in range(mus.size):
        if abs(values[n]) > ROOT_TOL * (1.0 + abs(mus[n])):
            raise SearchFailureError(
                n, f"characteristic residual {values[n]:.3e} above tolerance at "
                   f"mu={mus[n]!r}")
        if crossings[n] != n:
            raise SearchFailureError(
                n, f"oscillation count {crossings[n]} does not match the index")
        if abs(dots[n]) < SIMPLICITY_MIN:
            raise EigenvalueConsistencyError(
                f"characteristic derivative too small at index {n}; eigenvalue "
                f"may not be simple at grid resolution")

    y_f, v_f = t.traces(mus)
    if want_b:
        y_b, v_b = t.traces(mus, backward=True)
    data = []
    for n in range(mus.size):
        a_n = simpson(y_f[n] ** 2, t.h)
        phi_end = float(y_f[n][-1])
        b_n = None
        if want_b:
            psi0 = float(y_b[n][0])
            if abs(phi_end * psi0 - 1.0) > KAPPA_SELF_TOL:
                raise EigenvalueConsistencyError(
                    f"endpoint product phi(pi)*psi(0) = {phi_end * psi0!r} deviates "
                    f"from 1 at index {n}; eigenvalue tolerance too loose")
            b_n = simpson(y_b[n] ** 2, t.h)
        data.append(SpectralDatum(n=n, mu=float(mus[n]), a=float(a_n),
                                  phi_end=phi_end, kappa=phi_end, b=b_n))
    return SpectrumTable(tuple(data))


def _require_eigenvalue(t: _Tables, mu: float) -> None:
    value = _char_values(t, np.array([float(mu)]))[0]
    if abs(value) > 10.0 * ROOT_TOL * (1.0 + abs(mu)):
        raise PreconditionError(
            f"mu={mu!r} is not an eigenvalue: characteristic value {value:.3e}")


def norming_constant_a(op: OperatorSpec, mu_n: float) -> float:
    """Squared L2 norm of the left-normalized eigenfunction."""
    t = _Tables(op)
    _require_eigenvalue(t, mu_n)
    y, _ = t.traces([mu_n])
    return float(simpson(y[0] ** 2, t.h))


def norming_constant_b(op: OperatorSpec, mu_n: float) -> float:
    """Squared L2 norm of the right-normalized eigenfunction."""
    t = _Tables(op)
    _require_eigenvalue(t, mu_n)
    y, _ = t.traces([mu_n], backward=True)
    return float(simpson(y[0] ** 2, t.h))


def kappa(op: OperatorSpec, mu_n: float) -> float:
    """Ratio between the left- and right-normalized eigenfunctions.

    Returns the left eigenfunction's value at pi and cross-checks it against
    the right eigenfunction's value at 0 (their product must be 1).
    """
    t = _Tables(op)
    _require_eigenvalue(t, mu_n)
    y_f, _ = t.traces([mu_n])
    y_b, _ = t.traces([mu_n], backward=True)
    product = y_f[0][-1] * y_b[0][0]
    if abs(product - 1.0) > KAPPA_SELF_TOL:
        raise EigenvalueConsistencyError(
            f"endpoint product phi(pi)*psi(0) = {product!r} deviates from 1; "
            f"eigenvalue tolerance too loose")
    return float(y_f[0][-1])
