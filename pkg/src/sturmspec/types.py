"""Domain types shared by every module.

All types are immutable after construction (arrays are frozen) and validate
their invariants eagerly, so a constructed object is always usable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import AdmissibilityError, CoverageError

__all__ = [
    "Grid",
    "RobinAngles",
    "Potential",
    "OperatorSpec",
    "SpectralDatum",
    "SpectrumTable",
    "PerturbationSeq",
]

MIN_NODE_COUNT = 16


def _frozen_array(values, name: str) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must contain only finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform grid of node_count intervals covering [0, pi] inclusive."""

    node_count: int
    nodes: np.ndarray

    def __post_init__(self):
        if int(self.node_count) != self.node_count or self.node_count < MIN_NODE_COUNT:
            raise ValueError(f"node_count must be an integer >= {MIN_NODE_COUNT}")
        object.__setattr__(self, "node_count", int(self.node_count))
        nodes = _frozen_array(self.nodes, "nodes")
        if nodes.size != self.node_count + 1:
            raise ValueError("nodes must have node_count + 1 entries")
        if nodes[0] != 0.0 or nodes[-1] != np.pi:
            raise ValueError("grid must start at 0 and end at pi exactly")
        ref = np.linspace(0.0, np.pi, self.node_count + 1)
        if np.abs(nodes - ref).max() > 1e-12:
            raise ValueError("grid spacing must be uniform to machine precision")
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def make(cls, node_count: int) -> "Grid":
        return cls(node_count, np.linspace(0.0, np.pi, node_count + 1))

    @property
    def spacing(self) -> float:
        return np.pi / self.node_count

    def __eq__(self, other):
        return (isinstance(other, Grid)
                and self.node_count == other.node_count
                and np.array_equal(self.nodes, other.nodes))


@dataclass(frozen=True)
class RobinAngles:
    """Boundary angles (radians); the condition at each endpoint is
    y*cot(angle) + y' = 0.  Dirichlet limits (0 and pi) are excluded."""

    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or not 0.0 < value < np.pi:
                raise ValueError(f"{name} must lie strictly inside (0, pi)")
            if not np.isfinite(1.0 / np.tan(value)):
                raise ValueError(f"cot({name}) must be finite")
            object.__setattr__(self, name, value)

    @property
    def cot_alpha(self) -> float:
        return np.cos(self.alpha) / np.sin(self.alpha)

    @property
    def cot_beta(self) -> float:
        return np.cos(self.beta) / np.sin(self.beta)


@dataclass(frozen=True, eq=False)
class Potential:
    """Real potential sampled on a uniform grid.

    Off-node evaluation follows the interpolation contract of the toolkit:
    a natural cubic spline through the samples, exact at the nodes.
    """

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = _frozen_array(self.values, "values")
        if values.size != self.grid.node_count + 1:
            raise ValueError("values must match the grid node count")
        object.__setattr__(self, "values", values)

    @classmethod
    def zero(cls, grid: Grid) -> "Potential":
        return cls(grid, np.zeros(grid.node_count + 1))

    @classmethod
    def from_callable(cls, grid: Grid, func) -> "Potential":
        return cls(grid, np.asarray(func(grid.nodes), dtype=np.float64))

    def spline(self) -> CubicSpline:
        return CubicSpline(self.grid.nodes, self.values, bc_type="natural")

    def __call__(self, x):
        return self.spline()(x)

    def __eq__(self, other):
        return (isinstance(other, Potential)
                and self.grid == other.grid
                and np.array_equal(self.values, other.values))


@dataclass(frozen=True, eq=False)
class OperatorSpec:
    """One boundary value problem: -y'' + q(x) y = mu y on (0, pi) with Robin
    conditions at both ends."""

    potential: Potential
    angles: RobinAngles

    @property
    def grid(self) -> Grid:
        return self.potential.grid

    @property
    def alpha(self) -> float:
        return self.angles.alpha

    @property
    def beta(self) -> float:
        return self.angles.beta

    def __eq__(self, other):
        return (isinstance(other, OperatorSpec)
                and self.potential == other.potential
                and self.angles == other.angles)


@dataclass(frozen=True)
class SpectralDatum:
    """Eigenvalue with its attached spectral quantities.

    a and b are the squared L2 norms of the left- and right-normalized
    eigenfunctions; phi_end is the left-normalized eigenfunction value at pi,
    which equals the proportionality ratio kappa between the two.
    """

    n: int
    mu: float
    a: float
    phi_end: float
    kappa: float
    b: float | None = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError("n must be a nonnegative integer")
        object.__setattr__(self, "n", int(self.n))
        for name in ("mu", "a", "phi_end", "kappa"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.a <= 0.0:
            raise ValueError("a must be positive")
        if self.b is not None and (not np.isfinite(self.b) or self.b <= 0.0):
            raise ValueError("b must be positive when present")
        if self.kappa == 0.0:
            raise ValueError("kappa must be nonzero")
        if abs(self.kappa - self.phi_end) > 1e-9 * (1.0 + abs(self.kappa)):
            raise ValueError("kappa must equal the endpoint value phi_end")


@dataclass(frozen=True, eq=False)
class SpectrumTable:
    """Contiguously indexed, strictly increasing eigenvalue table."""

    data: tuple[SpectralDatum, ...]

    def __post_init__(self):
        data = tuple(self.data)
        for i, d in enumerate(data):
            if d.n != i:
                raise ValueError(f"indices must be contiguous from 0; entry {i} has n={d.n}")
        mus = np.array([d.mu for d in data])
        if len(mus) > 1 and not np.all(np.diff(mus) > 0.0):
            raise ValueError("eigenvalues must be strictly increasing")
        object.__setattr__(self, "data", data)

    def __len__(self) -> int:
        return len(self.data)

    def __getitem__(self, n: int) -> SpectralDatum:
        return self.data[n]

    def __iter__(self):
        return iter(self.data)

    @property
    def mus(self) -> np.ndarray:
        return np.array([d.mu for d in self.data])

    @property
    def norming_a(self) -> np.ndarray:
        return np.array([d.a for d in self.data])

    @property
    def norming_b(self) -> np.ndarray:
        if any(d.b is None for d in self.data):
            raise CoverageError("table does not carry right-endpoint norming constants")
        return np.array([d.b for d in self.data])

    @property
    def phi_end(self) -> np.ndarray:
        return np.array([d.phi_end for d in self.data])

    @property
    def kappas(self) -> np.ndarray:
        return np.array([d.kappa for d in self.data])

    def require(self, n: int) -> SpectralDatum:
        if n >= len(self.data):
            raise CoverageError(f"spectrum table covers n <= {len(self.data) - 1}, "
                                f"index {n} requested")
        return self.data[n]

    def __eq__(self, other):
        return isinstance(other, SpectrumTable) and self.data == other.data


@dataclass(frozen=True, eq=False)
class PerturbationSeq:
    """Finitely supported real coefficient sequence; entries beyond the stored
    prefix are zero by convention."""

    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        coeffs = _frozen_array(np.atleast_1d(self.coeffs), "coeffs")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[int, float]]) -> "PerturbationSeq":
        """Build from sparse (index, value) pairs."""
        if not pairs:
            return cls(np.zeros(1))
        top = max(int(n) for n, _ in pairs)
        coeffs = np.zeros(top + 1)
        for n, c in pairs:
            coeffs[int(n)] = float(c)
        return cls(coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> float:
        return float(self.coeffs[n]) if n < len(self.coeffs) else 0.0

    @property
    def support(self) -> np.ndarray:
        return np.nonzero(self.coeffs)[0]

    @property
    def max_index(self) -> int:
        sup = self.support
        return int(sup[-1]) if sup.size else -1

    def check_admissible(self, base: SpectrumTable) -> None:
        """Reject sequences with 1 + c_n * a_n <= 0 against the base table."""
        for n in self.support:
            gate = 1.0 + self.coeffs[n] * base.require(int(n)).a
            if gate <= 0.0:
                raise AdmissibilityError(int(n), gate)

    def __eq__(self, other):
        return (isinstance(other, PerturbationSeq)
                and np.array_equal(self.coeffs, other.coeffs))
