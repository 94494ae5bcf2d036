import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sturmspec import PerturbationSeq
from sturmspec.certificates import (CertificateReport, ambarzumyan_certificate,
                                    certificate_to_document,
                                    kappa_relations_check, levinson_even_check,
                                    marchenko_check, thm12_certificate,
                                    thm52_certificate)
from sturmspec.errors import HypothesisError
from sturmspec.gelfand_levitan import isospectral_construct
from sturmspec.solver import eigenvalues
from tests.conftest import make_operator

PI = np.pi


class TestReportType:
    def test_enum_validation(self):
        with pytest.raises(ValueError):
            CertificateReport("thm9_9", {}, "pass", "")
        with pytest.raises(ValueError):
            CertificateReport("thm1_2", {}, "maybe", "")

    def test_document_shape(self):
        report = CertificateReport("levinson", {"r": 0.5}, "fail", "because")
        doc = certificate_to_document(report)
        assert set(doc) == {"theorem_id", "residuals", "verdict", "details"}

    def test_pass_iff_residuals_within_tolerance(self, neumann_base):
        report = thm12_certificate(neumann_base, neumann_base, 6)
        within = all(report.residuals[k] <= report.tolerances[k]
                     for k in report.residuals)
        assert report.passed == within


class TestThm12:
    def test_identical_operators(self, neumann_base):
        report = thm12_certificate(neumann_base, neumann_base, 8)
        assert report.verdict == "pass"
        assert all(v == 0.0 for v in report.residuals.values())

    def test_alpha_shift_is_hypothesis_error(self, neumann_base):
        # positive coefficients shift the left angle's cotangent, so the
        # constructed operator violates the pinned-angle hypothesis
        built = isospectral_construct(neumann_base,
                                      PerturbationSeq(np.array([0.5])))
        assert abs(built.alpha - neumann_base.alpha) > 1e-3
        with pytest.raises(HypothesisError):
            thm12_certificate(neumann_base, built, 6)

    def test_mixed_sign_inconclusive(self, neumann_base):
        # coefficients summing to zero keep alpha but make the norming
        # differences two-sided: exactly the case the statement excludes
        c = PerturbationSeq(np.array([0.25, -0.25]))
        built = isospectral_construct(neumann_base, c)
        assert built.alpha == neumann_base.alpha
        report = thm12_certificate(neumann_base, built, 10)
        assert report.verdict == "inconclusive"
        assert "one-sided" in report.details
        assert report.residuals["one_sided"] > report.tolerances["one_sided"]

    def test_pipeline_identity_passes(self, neumann_base):
        built = isospectral_construct(neumann_base, PerturbationSeq(np.zeros(1)))
        report = thm12_certificate(neumann_base, built, 10)
        assert report.verdict == "pass"
        assert report.residuals["implied_c_max"] <= 1e-6
        assert report.residuals["q_max_diff"] <= 1e-3


class TestAmbarzumyan:
    def test_base_itself(self):
        op = make_operator(lambda x: 0.0, PI / 3, 2 * PI / 3)
        report = ambarzumyan_certificate(PI / 3, op, 10)
        assert report.verdict == "pass"
        assert report.residuals["q_max"] == 0.0

    def test_classical_case(self, neumann_base):
        report = ambarzumyan_certificate(PI / 2, neumann_base, 10)
        assert report.verdict == "pass"

    def test_shifted_angles_hypothesis_error(self):
        base = make_operator(lambda x: 0.0, PI / 3, 2 * PI / 3)
        built = isospectral_construct(base, PerturbationSeq(np.array([0.5])))
        with pytest.raises(HypothesisError):
            ambarzumyan_certificate(PI / 3, built, 8)

    def test_nonzero_potential_fails(self):
        # complementary angles but a visibly nonzero potential: the spectrum
        # moves away from the reference and the certificate must say fail
        op = make_operator(lambda x: np.sin(x), PI / 3, 2 * PI / 3)
        report = ambarzumyan_certificate(PI / 3, op, 10)
        assert report.verdict == "fail"


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(min_value=-0.25, max_value=4.0), min_size=1, max_size=10),
       st.lists(st.floats(min_value=0.3, max_value=4.0), min_size=10, max_size=10))
def test_subtraction_identity(cs, a0s):
    """sum c - sum c/(1+c a0) telescopes to the nonnegative-term sum, exactly."""
    c = np.array(cs)
    a0 = np.array(a0s)[: c.size]
    assert np.all(1.0 + c * a0 > 0.05)  # admissible by construction
    lhs = c.sum() - (c / (1.0 + c * a0)).sum()
    terms = c**2 * a0 / (1.0 + c * a0)
    assert np.all(terms >= 0.0)
    assert abs(lhs - terms.sum()) <= 1e-12 * (1.0 + np.abs(c).sum())


class TestLevinson:
    def test_even_reference(self, neumann_base):
        report = levinson_even_check(neumann_base, 12)
        assert report.verdict == "pass"
        assert report.residuals["end_signature"] <= 1e-6

    def test_even_nontrivial(self):
        op = make_operator(lambda x: np.cos(2 * x) * 0.8, PI / 3, 2 * PI / 3)
        report = levinson_even_check(op, 12)
        assert report.verdict == "pass"
        assert report.residuals["end_signature"] <= 1e-5

    def test_asymmetric_fails(self):
        op = make_operator(lambda x: x, PI / 2, PI / 2)
        report = levinson_even_check(op, 12)
        assert report.verdict == "fail"
        assert report.residuals["end_signature"] > 1e-2

    def test_angle_sum_violation_detected(self):
        op = make_operator(lambda x: np.sin(x), PI / 3, PI / 2)
        report = levinson_even_check(op, 8)
        assert report.verdict == "fail"
        assert report.residuals["even_angle"] > 1e-3


class TestKappaRelations:
    def test_reference_operator(self, neumann_base):
        report = kappa_relations_check(neumann_base, 8)
        assert report.verdict == "pass"
        assert max(report.residuals.values()) <= 1e-4

    def test_reference_numbers(self, neumann_base):
        # n = 1: a_1 = pi/2, |kappa_1| = 1, |dPhi/dmu| = pi/2
        table = eigenvalues(neumann_base, 1)
        assert abs(table[1].a - PI / 2) <= 1e-8
        assert abs(abs(table[1].kappa) - 1.0) <= 1e-8

    def test_constructed_member(self, neumann_base):
        built = isospectral_construct(
            neumann_base, PerturbationSeq(np.array([0.4, 0.0, -0.2])))
        report = kappa_relations_check(built, 10)
        assert report.verdict == "pass"

    def test_steep_beta_stress(self):
        # cot(beta) strongly negative pushes the ground state deep below zero
        # (boundary-layer mode, kappa_0 ~ 1e4); residuals stay moderate on a
        # refined grid
        op = make_operator(lambda x: np.sin(2 * x) / 3.0, PI / 2, PI - 0.3, m=4000)
        report = kappa_relations_check(op, 8)
        assert max(report.residuals.values()) <= 1e-3


class TestThm52:
    def test_identical_operators(self, bump_operator):
        report = thm52_certificate(bump_operator, bump_operator, 8)
        assert report.verdict == "pass"

    def test_pipeline_identity_passes(self, neumann_base):
        built = isospectral_construct(neumann_base, PerturbationSeq(np.zeros(1)))
        report = thm52_certificate(neumann_base, built, 8)
        assert report.verdict == "pass"
        assert report.residuals["q_max_diff"] <= 1e-3

    def test_mixed_sign_inconclusive(self, neumann_base):
        # alpha preserved, beta moved, and the endpoint ratios change sign
        # pattern: the certificate must flag one-sidedness, not fail
        c = PerturbationSeq(np.array([0.3, -0.3]))
        built = isospectral_construct(neumann_base, c)
        assert abs(built.beta - neumann_base.beta) > 1e-3
        report = thm52_certificate(neumann_base, built, 10)
        assert report.verdict == "inconclusive"
        assert "one-sided" in report.details

    def test_alpha_hypothesis(self, neumann_base, bump_operator):
        with pytest.raises(HypothesisError):
            thm52_certificate(neumann_base, bump_operator, 6)

    def test_mirrored_hypothesis(self, neumann_base):
        # mirrored mode pins beta instead; same operators still pass
        report = thm52_certificate(neumann_base, neumann_base, 6, mirrored=True)
        assert report.verdict == "pass"
        built = isospectral_construct(neumann_base,
                                      PerturbationSeq(np.array([0.5])))
        with pytest.raises(HypothesisError):
            thm52_certificate(neumann_base, built, 6, mirrored=True)


class TestMarchenko:
    def test_identical(self, neumann_base):
        report = marchenko_check(neumann_base, neumann_base, 8)
        assert report.verdict == "pass"

    def test_different_data_inconclusive(self, neumann_base, bump_operator):
        report = marchenko_check(neumann_base, bump_operator, 8)
        assert report.verdict == "inconclusive"
        assert "differ" in report.details


class TestToleranceOverrides:
    def test_unknown_name_rejected(self, neumann_base):
        with pytest.raises(ValueError):
            thm12_certificate(neumann_base, neumann_base, 4,
                              tolerances={"bogus": 1.0})

    def test_tightened_tolerance_changes_verdict(self, neumann_base):
        c = PerturbationSeq(np.array([0.25, -0.25]))
        built = isospectral_construct(neumann_base, c)
        # huge one-sidedness tolerance accepts the two-sided data; the
        # remaining residuals then decide (and q/beta differ clearly)
        report = thm12_certificate(neumann_base, built, 8,
                                   tolerances={"norming": 1e6})
        assert report.verdict == "fail"
