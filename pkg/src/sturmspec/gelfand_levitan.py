"""Isospectral engine: kernel assembly, the transformation-kernel integral
equation, and reconstruction of the potential and boundary angles.

The kernel F is a finite sum of separable terms built from base-operator
eigenfunction traces.  For each grid abscissa the integral equation is a
Fredholm equation of the second kind in the trailing variable; it is
discretized by collocation at the grid nodes with endpoint-corrected trapezoid
weights (order 4) and solved row by row.  The first few rows are too short for
the corrected weights, so they are solved on a locally refined subgrid (the
separable form of F evaluates anywhere) and restated at the coarse nodes.
The new potential is the base one plus twice the derivative of the kernel's
diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from . import solver
from .errors import CoverageError, SolvabilityError, SturmspecError
from .numerics import derivative, end_slopes, quad_weights
from .types import (Grid, OperatorSpec, PerturbationSeq, Potential,
                    RobinAngles, SpectrumTable)

__all__ = [
    "KernelF",
    "GLSolution",
    "build_kernel_from_coeffs",
    "build_kernel_from_norming",
    "solve_gl",
    "gl_residual",
    "reconstruct_potential",
    "new_alpha",
    "new_beta",
    "new_beta_from_norming",
    "isospectral_construct",
    "transform_solution",
    "restoring_coefficients",
]

DEFAULT_GL_M = 400
_FINE_ROWS = 8       # rows solved on a refined subgrid
_FINE_SUBDIV = 8     # refinement factor for those rows
_DIAG_DERIV_ORDER = 6


@dataclass(frozen=True, eq=False)
class KernelF:
    """Symmetric separable kernel on the closed square of the coarse grid.

    mode_indices/mode_values/mode_slopes retain the separable decomposition
    (which eigenfunction traces enter, their samples on the grid, and their
    exact endpoint derivatives) so the kernel can be evaluated off-node.
    """

    gl_grid: Grid
    values: np.ndarray
    base_spectrum: SpectrumTable
    coeffs: PerturbationSeq
    mode_indices: np.ndarray
    mode_values: np.ndarray
    mode_slopes: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        m = self.gl_grid.node_count
        if values.shape != (m + 1, m + 1):
            raise ValueError("kernel table must cover the full closed square")
        if not np.array_equal(values, values.T):
            raise ValueError("kernel table must be exactly symmetric")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def mode_splines(self):
        return [CubicSpline(self.gl_grid.nodes, v, bc_type=((1, sl), (1, sr)))
                for v, (sl, sr) in zip(self.mode_values, self.mode_slopes)]

    def evaluate(self, s, t):
        """Kernel value at arbitrary points via the separable decomposition."""
        out = np.zeros(np.broadcast(np.asarray(s), np.asarray(t)).shape)
        coeffs = self.coeffs
        for n, sp in zip(self.mode_indices, self.mode_splines()):
            out += coeffs[int(n)] * sp(s) * sp(t)
        return out


@dataclass(frozen=True, eq=False)
class GLSolution:
    """Discrete transformation kernel on the triangle t <= x plus its diagonal
    and the diagonal's derivative."""

    gl_grid: Grid
    K: np.ndarray
    diag: np.ndarray
    diag_derivative: np.ndarray

    def __post_init__(self):
        m = self.gl_grid.node_count
        K = np.asarray(self.K, dtype=np.float64)
        if K.shape != (m + 1, m + 1):
            raise ValueError("kernel solution must cover the full closed square")
        for name in ("diag", "diag_derivative"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != (m + 1,):
                raise ValueError(f"{name} must have one value per node")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        K.setflags(write=False)
        object.__setattr__(self, "K", K)


def _phi0_on_grid(base: OperatorSpec, mus: np.ndarray, gl_grid: Grid):
    """Base eigenfunction samples on the coarse grid with exact end slopes."""
    tables = solver._Tables(base)
    y, v = tables.traces(mus)
    m_solver = base.grid.node_count
    m_gl = gl_grid.node_count
    if m_solver % m_gl == 0:
        stride = m_solver // m_gl
        values = y[:, ::stride]
    else:
        values = np.empty((len(mus), m_gl + 1))
        for k in range(len(mus)):
            spline = CubicSpline(base.grid.nodes, y[k],
                                 bc_type=((1, v[k][0]), (1, v[k][-1])))
            values[k] = spline(gl_grid.nodes)
    slopes = np.column_stack([v[:, 0], v[:, -1]])
    return values, slopes


def build_kernel_from_coeffs(base: OperatorSpec, base_spec: SpectrumTable,
                             c: PerturbationSeq, gl_grid: Grid) -> KernelF:
    """Assemble the separable kernel generated by a coefficient sequence."""
    c.check_admissible(base_spec)
    support = c.support
    if support.size and c.max_index >= len(base_spec):
        raise CoverageError(
            f"spectrum table covers n <= {len(base_spec) - 1} but coefficients "
            f"reach n = {c.max_index}")
    m = gl_grid.node_count
    if support.size == 0:
        return KernelF(gl_grid, np.zeros((m + 1, m + 1)), base_spec, c,
                       np.zeros(0, dtype=int), np.zeros((0, m + 1)), np.zeros((0, 2)))
    mus = np.array([base_spec[int(n)].mu for n in support])
    values, slopes = _phi0_on_grid(base, mus, gl_grid)
    F = np.zeros((m + 1, m + 1))
    for k, n in enumerate(support):
        F += c[int(n)] * np.outer(values[k], values[k])
    F = 0.5 * (F + F.T)  # enforce bitwise symmetry against summation order
    return KernelF(gl_grid, F, base_spec, c, support.astype(int), values, slopes)


def build_kernel_from_norming(base_spec: SpectrumTable, target_a, gl_grid: Grid,
                              base: OperatorSpec) -> KernelF:
    """Kernel for prescribed norming constants: c_n = 1/a_n - 1/a_n0."""
    target = np.asarray(target_a, dtype=np.float64)
    if np.any(target <= 0.0) or not np.all(np.isfinite(target)):
        raise ValueError("target norming constants must be positive and finite")
    if target.size > len(base_spec):
        raise CoverageError("more target norming constants than spectrum entries")
    base_a = np.array([base_spec[n].a for n in range(target.size)])
    coeffs = 1.0 / target - 1.0 / base_a
    return build_kernel_from_coeffs(base, base_spec, PerturbationSeq(coeffs), gl_grid)


def solve_gl(F: KernelF) -> GLSolution:
    """Solve the transformation-kernel equation row by row."""
    grid = F.gl_grid
    m = grid.node_count
    h = grid.spacing
    table = F.values
    K = np.zeros((m + 1, m + 1))
    K[0, 0] = -table[0, 0]  # the x=0 row is algebraic
    splines = F.mode_splines()
    coeffs = [F.coeffs[int(n)] for n in F.mode_indices]

    def f_eval(s, t):
        out = np.zeros(np.broadcast(np.asarray(s), np.asarray(t)).shape)
        for cn, sp in zip(coeffs, splines):
            out += cn * sp(s) * sp(t)
        return out

    x = grid.nodes
    for i in range(1, m + 1):
        try:
            if i < _FINE_ROWS and F.mode_indices.size:
                nf = _FINE_SUBDIV * i
                tf = np.linspace(0.0, x[i], nf + 1)
                wf = quad_weights(nf) * (x[i] / nf)
                ff = f_eval(tf[:, None], tf[None, :])
                rhs = -f_eval(x[i], tf)
                kf = np.linalg.solve(np.eye(nf + 1) + ff * wf[None, :], rhs)
                K[i, : i + 1] = (-table[i, : i + 1]
                                 - (wf * kf) @ f_eval(tf[:, None], x[None, : i + 1]))
            else:
                w = quad_weights(i) * h
                sub = table[: i + 1, : i + 1]
                K[i, : i + 1] = np.linalg.solve(np.eye(i + 1) + sub * w[None, :],
                                                -sub[:, i])
        except np.linalg.LinAlgError as exc:
            raise SolvabilityError(
                f"collocation system singular at row {i} (x = {x[i]:.6f}): {exc}; "
                f"this should not happen for admissible coefficients") from None
    diag = K.diagonal().copy()
    diag_derivative = derivative(diag, h, order=_DIAG_DERIV_ORDER)
    return GLSolution(grid, K, diag, diag_derivative)


def gl_residual(F: KernelF, sol: GLSolution) -> np.ndarray:
    """Per-row maximum residual of the discrete equation, measured with the
    same quadrature each row was solved with."""
    grid = F.gl_grid
    m = grid.node_count
    h = grid.spacing
    x = grid.nodes
    table = F.values
    K = sol.K
    res = np.zeros(m + 1)
    res[0] = abs(K[0, 0] + table[0, 0])
    splines = F.mode_splines()
    coeffs = [F.coeffs[int(n)] for n in F.mode_indices]

    def f_eval(s, t):
        out = np.zeros(np.broadcast(np.asarray(s), np.asarray(t)).shape)
        for cn, sp in zip(coeffs, splines):
            out += cn * sp(s) * sp(t)
        return out

    for i in range(1, m + 1):
        if i < _FINE_ROWS and F.mode_indices.size:
            nf = _FINE_SUBDIV * i
            tf = np.linspace(0.0, x[i], nf + 1)
            wf = quad_weights(nf) * (x[i] / nf)
            rhs = -f_eval(x[i], tf)
            kf = np.linalg.solve(np.eye(nf + 1) + f_eval(tf[:, None], tf[None, :])
                                 * wf[None, :], rhs)
            recon = -table[i, : i + 1] - (wf * kf) @ f_eval(tf[:, None], x[None, : i + 1])
            res[i] = np.abs(K[i, : i + 1] - recon).max()
        else:
            w = quad_weights(i) * h
            lhs = (K[i, : i + 1] + table[i, : i + 1]
                   + (w * K[i, : i + 1]) @ table[: i + 1, : i + 1])
            res[i] = np.abs(lhs).max()
    return res


def reconstruct_potential(base: OperatorSpec, sol: GLSolution) -> Potential:
    """New potential: base plus twice the kernel diagonal's derivative."""
    gl_grid = sol.gl_grid
    m_solver = base.grid.node_count
    m_gl = gl_grid.node_count
    if m_solver % m_gl == 0:
        q0_gl = base.potential.values[:: m_solver // m_gl]
    else:
        q0_gl = base.potential(gl_grid.nodes)
    q_gl = q0_gl + 2.0 * sol.diag_derivative
    if m_gl == m_solver:
        return Potential(base.grid, q_gl)
    slope_l, slope_r = end_slopes(q_gl, gl_grid.spacing)
    spline = CubicSpline(gl_grid.nodes, q_gl, bc_type=((1, slope_l), (1, slope_r)))
    return Potential(base.grid, spline(base.grid.nodes))


def new_alpha(base_alpha: float, c: PerturbationSeq) -> float:
    """Left boundary angle of the constructed operator: the cotangent shifts
    by the coefficient sum."""
    return float(np.arctan2(1.0, 1.0 / np.tan(base_alpha) + c.coeffs.sum()))


def new_beta(base: OperatorSpec, base_spec: SpectrumTable, c: PerturbationSeq) -> float:
    """Right boundary angle of the constructed operator."""
    c.check_admissible(base_spec)
    shift = 0.0
    for n in c.support:
        d = base_spec.require(int(n))
        shift += c[int(n)] * d.phi_end**2 / (1.0 + c[int(n)] * d.a)
    return float(np.arctan2(1.0, base.angles.cot_beta + shift))


def new_beta_from_norming(base: OperatorSpec, base_spec: SpectrumTable,
                          target_a) -> float:
    """Right boundary angle stated directly in terms of norming constants."""
    target = np.asarray(target_a, dtype=np.float64)
    if np.any(target <= 0.0):
        raise ValueError("target norming constants must be positive")
    shift = 0.0
    for n in range(target.size):
        d = base_spec.require(n)
        shift += (d.a - target[n]) * d.phi_end**2 / d.a**2
    return float(np.arctan2(1.0, base.angles.cot_beta + shift))


def restoring_coefficients(c: PerturbationSeq) -> PerturbationSeq:
    """Coefficients that undo a construction.

    A construction shifts each reciprocal norming constant by its coefficient,
    so applying the negated coefficients to the constructed operator shifts
    them back and restores the base (always admissible: the gate works out to
    1/(1 + c_n * a_n) > 0).
    """
    return PerturbationSeq(-c.coeffs)


def isospectral_construct(base: OperatorSpec, c: PerturbationSeq,
                          gl_m: int = DEFAULT_GL_M,
                          base_spectrum: SpectrumTable | None = None) -> OperatorSpec:
    """Full pipeline from a coefficient sequence to the isospectral operator."""
    stage = "spectrum"
    try:
        if base_spectrum is None:
            base_spectrum = solver.eigenvalues(base, max(0, c.max_index))
        stage = "kernel"
        F = build_kernel_from_coeffs(base, base_spectrum, c, Grid.make(gl_m))
        stage = "equation"
        sol = solve_gl(F)
        stage = "potential"
        q = reconstruct_potential(base, sol)
        stage = "angles"
        angles = RobinAngles(new_alpha(base.alpha, c),
                             new_beta(base, base_spectrum, c))
    except SturmspecError as exc:
        exc.args = (f"construction stage '{stage}': {exc}",)
        raise
    return OperatorSpec(q, angles)


def transform_solution(base_trace: solver.SolutionTrace, sol: GLSolution,
                       mu: float) -> solver.SolutionTrace:
    """Push a base-operator solution through the transformation kernel.

    The value trace is the base one plus the kernel integral; the derivative
    trace is recovered by order-6 differentiation of the transformed values,
    except at the left endpoint where it is algebraic.
    """
    if base_trace.direction != "forward":
        raise ValueError("only left-normalized solutions can be transformed")
    gl_grid = sol.gl_grid
    m_base = base_trace.grid.node_count
    m_gl = gl_grid.node_count
    if m_base % m_gl == 0:
        stride = m_base // m_gl
        y0 = base_trace.y[::stride]
    elif m_base == m_gl:
        y0 = base_trace.y
    else:
        spline = CubicSpline(base_trace.grid.nodes, base_trace.y,
                             bc_type=((1, base_trace.yprime[0]),
                                      (1, base_trace.yprime[-1])))
        y0 = spline(gl_grid.nodes)
    h = gl_grid.spacing
    phi = np.empty(m_gl + 1)
    phi[0] = y0[0]
    for i in range(1, m_gl + 1):
        w = quad_weights(i) * h
        phi[i] = y0[i] + (w * sol.K[i, : i + 1]) @ y0[: i + 1]
    dphi = derivative(phi, h, order=6)
    dphi[0] = base_trace.yprime[0] + sol.K[0, 0] * y0[0]
    return solver.SolutionTrace(gl_grid, phi, dphi, float(mu), "forward")
