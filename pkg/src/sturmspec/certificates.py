"""Numerical certification of the uniqueness statements.

Each certificate evaluates the exact identities a statement hinges on
(vanishing coefficient sums, one-sided norming-constant or endpoint-ratio
differences, endpoint sign signatures) and reports named residuals with a
three-way verdict.  `inconclusive` is first-class: it marks data outside a
statement's scope (for example two-sided differences) or residuals inside the
band between the pass tolerance and the clear-failure threshold, including
truncation tails too large to ignore.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import solver
from .errors import HypothesisError
from .types import OperatorSpec

__all__ = [
    "CertificateReport",
    "DEFAULT_TOLERANCES",
    "THEOREM_IDS",
    "certificate_to_document",
    "thm12_certificate",
    "ambarzumyan_certificate",
    "levinson_even_check",
    "kappa_relations_check",
    "thm52_certificate",
    "marchenko_check",
]

THEOREM_IDS = ("thm1_2", "thm1_4", "thm5_2", "levinson",
               "marchenko_consistency", "kappa_relations")

#: Pass tolerances by residual family; a residual clears its named tolerance
#: to count toward `pass`, and `fail` needs a clear violation (see _FAIL_BAND).
DEFAULT_TOLERANCES = {
    "isospec": 5e-5,        # absolute eigenvalue agreement
    "norming": 1e-4,        # relative norming-constant agreement / one-sidedness
    "sum": 1e-6,            # coefficient sums, scaled by (1 + sum |c_n|)
    "implied_c": 1e-6,      # recovered coefficients forced to zero
    "qdiff": 1e-3,          # direct potential comparison on nodes
    "angle": 1e-6,          # direct boundary-angle comparison
    "even_q": 1e-8,         # node-wise potential symmetry defect
    "even_angle": 1e-10,    # angle-sum defect for evenness
    "end_signature": 1e-5,  # endpoint values vs alternating signs
    "kappa": 1e-4,          # characteristic-function identities
}

_FAIL_BAND = 10.0           # residual > band * tol is a clear failure
_END_SIGNATURE_FAIL = 1e-2  # endpoint signature clearly broken
_EVEN_Q_FAIL = 1e-3         # potential clearly asymmetric
_HYPOTHESIS_TOL = 1e-10
_TAIL_FRACTION = 0.1


@dataclass(frozen=True)
class CertificateReport:
    """Outcome of one certificate: named residuals against their tolerances.

    verdict is `pass` exactly when every named residual is within its declared
    tolerance and no scope flag (one-sidedness violation, oversized truncation
    tail) demoted the result to `inconclusive`.
    """

    theorem_id: str
    residuals: dict[str, float]
    verdict: str
    details: str
    tolerances: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.theorem_id not in THEOREM_IDS:
            raise ValueError(f"unknown theorem id {self.theorem_id!r}")
        if self.verdict not in ("pass", "fail", "inconclusive"):
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def certificate_to_document(report: CertificateReport) -> dict:
    return {
        "theorem_id": report.theorem_id,
        "residuals": {k: float(v) for k, v in report.residuals.items()},
        "verdict": report.verdict,
        "details": report.details,
    }


def _tols(overrides: dict | None) -> dict:
    tols = dict(DEFAULT_TOLERANCES)
    if overrides:
        unknown = set(overrides) - set(tols)
        if unknown:
            raise ValueError(f"unknown tolerance names: {sorted(unknown)}")
        tols.update(overrides)
    return tols


def _decide(residuals: dict[str, float], bounds: dict[str, float],
            scope_flag: str | None = None,
            trust_flag: str | None = None) -> tuple[str, str]:
    """Generic three-way verdict.

    A scope flag (data outside the statement's hypotheses) forces
    `inconclusive` regardless of the other residuals.  A trust flag (for
    example an oversized truncation tail) only demotes a would-be pass; it
    never masks a clear failure.
    """
    if scope_flag:
        return "inconclusive", scope_flag
    over = {k: v for k, v in residuals.items() if v > bounds[k]}
    clear = {k: v for k, v in over.items() if v > _FAIL_BAND * bounds[k]}
    if clear:
        worst = max(clear, key=lambda k: clear[k] / bounds[k])
        return "fail", (f"residual '{worst}' = {clear[worst]:.3e} exceeds "
                        f"{_FAIL_BAND:g} x tolerance {bounds[worst]:.1e}")
    if over:
        worst = max(over, key=lambda k: over[k] / bounds[k])
        return "inconclusive", (f"residual '{worst}' = {over[worst]:.3e} sits between "
                                f"tolerance {bounds[worst]:.1e} and the failure band")
    if trust_flag:
        return "inconclusive", trust_flag
    return "pass", "all residuals within tolerance"


def _q_max_diff(a: OperatorSpec, b: OperatorSpec) -> float:
    if a.grid == b.grid:
        return float(np.abs(a.potential.values - b.potential.values).max())
    return float(np.abs(a.potential.values - b.potential(a.grid.nodes)).max())


def _one_sided_violation(rel_diffs: np.ndarray) -> float:
    """Zero when the differences are one-sided (either all >= 0 or all <= 0 up
    to noise); otherwise the smaller of the two overshoots."""
    up = max(0.0, -float(rel_diffs.min()))     # violation of "all >= 0"
    down = max(0.0, float(rel_diffs.max()))    # violation of "all <= 0"
    return min(up, down)


def thm12_certificate(base: OperatorSpec, candidate: OperatorSpec, n_max: int,
                      tolerances: dict | None = None) -> CertificateReport:
    """Norming-constant uniqueness with the left angle pinned: isospectral
    data with one-sided norming differences force identical operators."""
    tols = _tols(tolerances)
    if abs(base.alpha - candidate.alpha) > _HYPOTHESIS_TOL:
        raise HypothesisError(
            f"left boundary angles differ: {base.alpha!r} vs {candidate.alpha!r}")
    spec0 = solver.eigenvalues(base, n_max)
    spec1 = solver.eigenvalues(candidate, n_max)
    a0 = spec0.norming_a
    a1 = spec1.norming_a
    rel = (a1 - a0) / a0
    implied_c = 1.0 / a1 - 1.0 / a0
    total = float(implied_c.sum())
    sum_tol = tols["sum"] * (1.0 + np.abs(implied_c).sum())
    tail = float(abs(implied_c[-1]))
    residuals = {
        "max_mu_diff": float(np.abs(spec1.mus - spec0.mus).max()),
        "one_sided": _one_sided_violation(rel),
        "norming_sum": abs(total),
        "implied_c_max": float(np.abs(implied_c).max()),
        "q_max_diff": _q_max_diff(base, candidate),
        "beta_diff": abs(base.beta - candidate.beta),
    }
    bounds = {
        "max_mu_diff": tols["isospec"],
        "one_sided": tols["norming"],
        "norming_sum": sum_tol,
        "implied_c_max": tols["implied_c"],
        "q_max_diff": tols["qdiff"],
        "beta_diff": tols["angle"],
    }
    scope = None
    if residuals["one_sided"] > bounds["one_sided"]:
        scope = ("one-sidedness violated: norming-constant differences change "
                 "sign, outside the statement's scope")
    trust = None
    if tail > _TAIL_FRACTION * sum_tol:
        trust = f"truncation tail {tail:.2e} too large for the sum tolerance"
    verdict, why = _decide(residuals, bounds, scope, trust)
    details = (f"n <= {n_max}; sum of implied coefficients = {total:.3e} "
               f"(tail estimate {tail:.2e}); {why}")
    return CertificateReport("thm1_2", residuals, verdict, details, bounds)


def ambarzumyan_certificate(alpha: float, candidate: OperatorSpec, n_max: int,
                            tolerances: dict | None = None) -> CertificateReport:
    """Single-spectrum uniqueness at complementary angles: matching the
    zero-potential spectrum forces the zero potential."""
    tols = _tols(tolerances)
    if abs(candidate.alpha - alpha) > _HYPOTHESIS_TOL:
        raise HypothesisError(
            f"candidate's left angle {candidate.alpha!r} differs from {alpha!r}")
    if abs(candidate.beta - (np.pi - candidate.alpha)) > _HYPOTHESIS_TOL:
        raise HypothesisError(
            "candidate's boundary angles are not complementary: "
            f"beta = {candidate.beta!r}, pi - alpha = {np.pi - candidate.alpha!r}")
    from .types import Potential, RobinAngles  # deferred to avoid cycle noise
    base = OperatorSpec(Potential.zero(candidate.grid),
                        RobinAngles(alpha, np.pi - alpha))
    spec0 = solver.eigenvalues(base, n_max)
    spec1 = solver.eigenvalues(candidate, n_max)
    a0 = spec0.norming_a
    a1 = spec1.norming_a
    implied_c = 1.0 / a1 - 1.0 / a0
    gates = 1.0 + implied_c * a0
    terms = implied_c**2 * a0 / gates
    if terms.min() < -1e-15:
        raise AssertionError("nonnegative-term sum produced a negative term")
    scale = 1.0 + np.abs(implied_c).sum()
    sum_tol = tols["sum"] * scale
    residuals = {
        "max_mu_diff": float(np.abs(spec1.mus - spec0.mus).max()),
        "coeff_sum": abs(float(implied_c.sum())),
        "weighted_sum": abs(float((implied_c / gates).sum())),
        "positive_sum": float(terms.sum()),
        "q_max": float(np.abs(candidate.potential.values).max()),
    }
    bounds = {
        "max_mu_diff": tols["isospec"],
        "coeff_sum": sum_tol,
        "weighted_sum": sum_tol,
        "positive_sum": sum_tol,
        "q_max": tols["qdiff"],
    }
    tail = float(abs(implied_c[-1]))
    trust = None
    if tail > _TAIL_FRACTION * sum_tol:
        trust = f"truncation tail {tail:.2e} too large for the sum tolerance"
    verdict, why = _decide(residuals, bounds, None, trust)
    details = (f"n <= {n_max}; the nonnegative-term sum is {residuals['positive_sum']:.3e}, "
               f"forcing the implied coefficients to zero when it vanishes; {why}")
    return CertificateReport("thm1_4", residuals, verdict, details, bounds)


def levinson_even_check(op: OperatorSpec, n_max: int,
                        tolerances: dict | None = None) -> CertificateReport:
    """Evenness criterion: the potential is symmetric with complementary
    angles exactly when the endpoint values alternate as (-1)^n."""
    tols = _tols(tolerances)
    q = op.potential.values
    r_even_q = float(np.abs(q - q[::-1]).max())
    r_even_angle = abs(op.alpha + op.beta - np.pi)
    spec = solver.eigenvalues(op, n_max)
    signs = (-1.0) ** np.arange(n_max + 1)
    r_end = float(np.abs(spec.phi_end - signs).max())
    residuals = {
        "even_q": r_even_q,
        "even_angle": r_even_angle,
        "end_signature": r_end,
    }
    bounds = {
        "even_q": tols["even_q"],
        "even_angle": tols["even_angle"],
        "end_signature": tols["end_signature"],
    }
    is_even = r_even_q <= bounds["even_q"] and r_even_angle <= bounds["even_angle"]
    clearly_uneven = r_even_q > _EVEN_Q_FAIL or r_even_angle > _EVEN_Q_FAIL
    signature_holds = r_end <= bounds["end_signature"]
    signature_broken = r_end > _END_SIGNATURE_FAIL
    if is_even and signature_holds:
        verdict, why = "pass", "operator certified even; endpoint signature confirms"
    elif clearly_uneven and signature_broken:
        verdict, why = "fail", ("operator is not even and the endpoint "
                                "signature deviates accordingly")
    elif is_even and signature_broken or clearly_uneven and signature_holds:
        verdict, why = "inconclusive", ("evenness residuals and the endpoint "
                                        "signature disagree; numerical inconsistency")
    else:
        verdict, why = "inconclusive", "residuals sit between the pass and failure bands"
    return CertificateReport("levinson", residuals, verdict,
                             f"n <= {n_max}; {why}", bounds)


def kappa_relations_check(op: OperatorSpec, n_max: int,
                          tolerances: dict | None = None) -> CertificateReport:
    """Identities tying norming constants to the characteristic functions and
    the endpoint values of the two normalized eigenfunction families."""
    tols = _tols(tolerances)
    spec = solver.eigenvalues(op, n_max, want_b=True)
    tables = solver._Tables(op)
    mus = spec.mus
    phi_dots = solver._char_derivative(tables, mus)
    psi_dots = _char_psi_derivative(tables, mus)
    y_b, _ = tables.traces(mus, backward=True)
    psi0 = y_b[:, 0]
    a = spec.norming_a
    b = spec.norming_b
    kap = spec.kappas
    phi_end = spec.phi_end
    residuals = {
        "endpoint_product": float(np.abs(kap * psi0 - 1.0).max()),
        "a_vs_phi_dot": float((np.abs(a - np.abs(phi_end) * np.abs(phi_dots)) / a).max()),
        "b_vs_psi_dot": float((np.abs(b - np.abs(psi0) * np.abs(psi_dots)) / b).max()),
        "a_vs_kappa_dot": float((np.abs(a - np.abs(kap) * np.abs(phi_dots)) / a).max()),
        "b_vs_a_kappa": float((np.abs(b - a / kap**2) / b).max()),
    }
    bounds = {name: tols["kappa"] for name in residuals}
    verdict, why = _decide(residuals, bounds)
    return CertificateReport("kappa_relations", residuals, verdict,
                             f"n <= {n_max}; {why}", bounds)


def _char_psi_derivative(tables: solver._Tables, mus: np.ndarray) -> np.ndarray:
    step = np.maximum(solver.FD_STEP, solver.FD_STEP * np.abs(mus))
    both = np.concatenate([mus + step, mus - step])
    y, v = tables.traces(both, backward=True)
    values = y[:, 0] * tables.cot_a + v[:, 0]
    k = mus.size
    return (values[:k] - values[k:]) / (2.0 * step)


def thm52_certificate(base: OperatorSpec, candidate: OperatorSpec, n_max: int,
                      tolerances: dict | None = None,
                      mirrored: bool = False) -> CertificateReport:
    """Endpoint-ratio uniqueness: isospectral data with one-sided |kappa|
    differences force identical operators.  With mirrored=True the right angle
    is pinned instead of the left one and the roles of the angle sums swap."""
    tols = _tols(tolerances)
    if not mirrored and abs(base.alpha - candidate.alpha) > _HYPOTHESIS_TOL:
        raise HypothesisError(
            f"left boundary angles differ: {base.alpha!r} vs {candidate.alpha!r}")
    if mirrored and abs(base.beta - candidate.beta) > _HYPOTHESIS_TOL:
        raise HypothesisError(
            f"right boundary angles differ: {base.beta!r} vs {candidate.beta!r}")
    spec0 = solver.eigenvalues(base, n_max)
    spec1 = solver.eigenvalues(candidate, n_max)
    k0 = np.abs(spec0.kappas)
    k1 = np.abs(spec1.kappas)
    tables0 = solver._Tables(base)
    phi_dots0 = np.abs(solver._char_derivative(tables0, spec0.mus))
    rel = (k1 - k0) / k0
    if mirrored:
        # angle sum for the pinned right endpoint
        sum_value = float(((k0 - k1) / phi_dots0).sum())
        tail = float(abs((k0[-1] - k1[-1]) / phi_dots0[-1]))
        angle_name, angle_value = "alpha_diff", abs(base.alpha - candidate.alpha)
    else:
        sum_value = float(((1.0 / k1 - 1.0 / k0) / phi_dots0).sum())
        tail = float(abs((1.0 / k1[-1] - 1.0 / k0[-1]) / phi_dots0[-1]))
        angle_name, angle_value = "beta_diff", abs(base.beta - candidate.beta)
    scale = 1.0 + float(np.abs(rel).sum())
    sum_tol = tols["sum"] * scale
    residuals = {
        "max_mu_diff": float(np.abs(spec1.mus - spec0.mus).max()),
        "one_sided": _one_sided_violation(rel),
        "kappa_sum": abs(sum_value),
        "kappa_diff_max": float(np.abs(rel).max()),
        "q_max_diff": _q_max_diff(base, candidate),
        angle_name: angle_value,
    }
    bounds = {
        "max_mu_diff": tols["isospec"],
        "one_sided": tols["norming"],
        "kappa_sum": sum_tol,
        "kappa_diff_max": tols["norming"],
        "q_max_diff": tols["qdiff"],
        angle_name: tols["angle"],
    }
    scope = None
    if residuals["one_sided"] > bounds["one_sided"]:
        scope = ("one-sidedness violated: endpoint-ratio differences change "
                 "sign, outside the statement's scope")
    trust = None
    if tail > _TAIL_FRACTION * sum_tol:
        trust = f"truncation tail {tail:.2e} too large for the sum tolerance"
    verdict, why = _decide(residuals, bounds, scope, trust)
    details = (f"n <= {n_max}; {'mirrored (right angle pinned)' if mirrored else 'right'} "
               f"angle sum = {sum_value:.3e} (tail {tail:.2e}); {why}")
    return CertificateReport("thm5_2", residuals, verdict, details, bounds)


def marchenko_check(base: OperatorSpec, candidate: OperatorSpec, n_max: int,
                    tolerances: dict | None = None) -> CertificateReport:
    """Consistency check of the two-sequence uniqueness statement on smooth
    data: matching eigenvalues and norming constants must come with matching
    operators."""
    tols = _tols(tolerances)
    spec0 = solver.eigenvalues(base, n_max)
    spec1 = solver.eigenvalues(candidate, n_max)
    residuals = {
        "max_mu_diff": float(np.abs(spec1.mus - spec0.mus).max()),
        "max_a_rel_diff": float((np.abs(spec1.norming_a - spec0.norming_a)
                                 / spec0.norming_a).max()),
        "q_max_diff": _q_max_diff(base, candidate),
        "alpha_diff": abs(base.alpha - candidate.alpha),
        "beta_diff": abs(base.beta - candidate.beta),
    }
    bounds = {
        "max_mu_diff": tols["isospec"],
        "max_a_rel_diff": tols["norming"],
        "q_max_diff": tols["qdiff"],
        "alpha_diff": tols["angle"],
        "beta_diff": tols["angle"],
    }
    data_match = (residuals["max_mu_diff"] <= bounds["max_mu_diff"]
                  and residuals["max_a_rel_diff"] <= bounds["max_a_rel_diff"])
    scope = None
    if not data_match:
        scope = ("spectral data differ, so the uniqueness statement asserts "
                 "nothing about these operators")
    verdict, why = _decide(residuals, bounds, scope)
    return CertificateReport("marchenko_consistency", residuals, verdict,
                             f"n <= {n_max}; {why}", bounds)
