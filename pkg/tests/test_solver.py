import numpy as np
import pytest

from sturmspec import OperatorSpec, Potential, RobinAngles
from sturmspec.errors import (EigenvalueConsistencyError,
                              IntegrationOverflowError, PreconditionError)
from sturmspec.solver import (char_derivative, char_phi, char_psi, eigenvalues,
                              integrate_phi, integrate_psi, kappa,
                              norming_constant_a, norming_constant_b)
from tests.conftest import make_operator

PI = np.pi


class TestIntegratePhi:
    def test_cosine_solution(self, neumann_base):
        # -y'' = y with y(0)=1, y'(0)=0  ->  y = cos x
        tr = integrate_phi(neumann_base, 1.0)
        x = tr.grid.nodes
        assert np.abs(tr.y - np.cos(x)).max() <= 1e-8
        assert np.abs(tr.yprime + np.sin(x)).max() <= 1e-8

    def test_linear_solution(self):
        # mu = 0, q = 0, alpha = pi/4  ->  y = 1 - x
        op = make_operator(lambda x: 0.0, PI / 4, PI / 2)
        tr = integrate_phi(op, 0.0)
        assert np.abs(tr.y - (1.0 - tr.grid.nodes)).max() <= 1e-10

    def test_initial_conditions_exact(self, bump_operator):
        tr = integrate_phi(bump_operator, 3.7)
        assert tr.y[0] == 1.0
        assert tr.yprime[0] == -bump_operator.angles.cot_alpha

    def test_endpoint_against_high_resolution(self):
        # oracle: the same scheme at 8x resolution, Richardson-verified,
        # plus the independent closed form y(pi, 0) = 1/(1+pi) for this family
        def build(m):
            return make_operator(lambda x: 2.0 / (1.0 + x) ** 2, PI / 4, PI / 2, m=m)

        y2000 = integrate_phi(build(2000), 0.0).y[-1]
        y8000 = integrate_phi(build(8000), 0.0).y[-1]
        y16000 = integrate_phi(build(16000), 0.0).y[-1]
        richardson = abs(y16000 - y8000) / 15.0  # order-4 step-halving estimate
        assert richardson < 1e-10
        # the dominant residual is the sampled potential's node-interpolation
        # error near x = 0, quadratic in the node spacing
        assert abs(y2000 - y16000) <= 2e-8
        assert abs(y2000 - 1.0 / (1.0 + PI)) <= 2e-8

    def test_overflow_raises(self, neumann_base):
        with pytest.raises(IntegrationOverflowError):
            integrate_phi(neumann_base, -1e8)


class TestIntegratePsi:
    def test_closed_form(self, neumann_base):
        # q = 0, beta = pi/2, mu = 1: y = cos(x - pi), so y(0) = -1
        tr = integrate_psi(neumann_base, 1.0)
        x = tr.grid.nodes
        assert np.abs(tr.y - np.cos(x - PI)).max() <= 1e-8
        assert abs(tr.y[0] + 1.0) <= 1e-8

    def test_constant_solution(self, neumann_base):
        tr = integrate_psi(neumann_base, 0.0)
        assert np.abs(tr.y - 1.0).max() <= 1e-10

    def test_reflection_identity(self):
        # oracle: psi equals phi of the reflected operator (potential reversed,
        # both angles reflected through pi/2) composed with x -> pi - x,
        # with the derivative's sign flipped
        alpha, beta = 1.0, 2.0
        op = make_operator(lambda x: np.sin(2 * x) + x / 5.0, alpha, beta)
        reflected = OperatorSpec(
            Potential(op.grid, op.potential.values[::-1]),
            RobinAngles(PI - beta, PI - alpha))
        mu = 7.3
        psi = integrate_psi(op, mu)
        phi_r = integrate_phi(reflected, mu)
        assert np.abs(psi.y - phi_r.y[::-1]).max() <= 1e-10
        assert np.abs(psi.yprime + phi_r.yprime[::-1]).max() <= 1e-10


class TestCharacteristicFunctions:
    def test_zero_at_eigenvalue(self, neumann_base):
        # Phi(mu) = -sqrt(mu) sin(sqrt(mu) pi); mu = 4 is the n = 2 eigenvalue
        assert abs(char_phi(neumann_base, 4.0).phi_big) <= 1e-8

    def test_closed_form_value(self, neumann_base):
        mu = 2.5
        expected = -np.sqrt(mu) * np.sin(np.sqrt(mu) * PI)
        assert abs(char_phi(neumann_base, mu).phi_big - expected) <= 1e-8

    def test_psi_same_zero_set(self, neumann_base):
        for n in (0, 1, 3):
            assert abs(char_psi(neumann_base, float(n * n)).psi_big) <= 1e-7

    def test_wronskian_consistency(self):
        # the Wronskian of the two normalized solutions is constant in x,
        # which forces the two characteristic functions to be negatives
        op = make_operator(lambda x: np.exp(-x), 0.9, 2.3)
        for mu in (-1.0, 0.7, 5.3, 17.2):
            phi = char_phi(op, mu).phi_big
            psi = char_psi(op, mu).psi_big
            assert abs(phi + psi) <= 1e-9 * (1.0 + abs(phi))

    def test_psi_trivial_value(self):
        op = make_operator(lambda x: 0.0, PI / 4, PI / 2)
        assert abs(char_psi(op, 0.0).psi_big - 1.0) <= 1e-10


class TestCharDerivative:
    def test_closed_form_mu1(self, neumann_base):
        # d/dmu[-sqrt(mu) sin(sqrt(mu) pi)] at mu=1 equals pi/2
        assert abs(char_derivative(neumann_base, 1.0) - PI / 2) <= 1e-5

    def test_closed_form_mu4(self, neumann_base):
        # at mu = 4: -sin(2 pi)/4 - (pi/2) cos(2 pi) = -pi/2
        assert abs(char_derivative(neumann_base, 4.0) + PI / 2) <= 1e-5

    def test_against_five_point_stencil(self, bump_operator):
        # oracle: 4th-order five-point stencil at a 10x smaller step
        mu = 6.1
        h = 1e-6 * (1.0 + abs(mu))
        from sturmspec.solver import _Tables, _char_values
        t = _Tables(bump_operator)
        values = _char_values(t, mu + h * np.array([-2.0, -1.0, 1.0, 2.0]))
        stencil = (values[0] - 8 * values[1] + 8 * values[2] - values[3]) / (12 * h)
        assert abs(char_derivative(bump_operator, mu) - stencil) <= 1e-6 * (1 + abs(stencil))


class TestEigenvalues:
    def test_reference_spectrum(self, neumann_base):
        table = eigenvalues(neumann_base, 5)
        assert np.abs(table.mus - np.array([0.0, 1.0, 4.0, 9.0, 16.0, 25.0])).max() <= 1e-8

    def test_constant_shift(self):
        c = 2.75
        op = make_operator(lambda x: c, PI / 2, PI / 2)
        table = eigenvalues(op, 8)
        assert np.abs(table.mus - (np.arange(9) ** 2.0 + c)).max() <= 1e-8

    def test_closed_form_isospectral_potential(self):
        # q = 2 c^2/(1+cx)^2 with matching angles keeps the spectrum at n^2
        for c0 in (1.0, 0.5):
            op = make_operator(lambda x: 2.0 * c0**2 / (1.0 + c0 * x) ** 2,
                               np.arctan2(1.0, c0),
                               np.arctan2(1.0, c0 / (1.0 + c0 * PI)))
            table = eigenvalues(op, 10)
            assert np.abs(table.mus - np.arange(11) ** 2.0).max() <= 1e-6

    def test_grid_convergence_order(self):
        # halving h must cut the eigenvalue error by at least 8x; run on a
        # smooth non-constant potential (constant ones propagate exactly here).
        # sin^3 has vanishing curvature at both ends, so the sampled-potential
        # interpolation is uniformly fourth order and the integrator's own
        # order shows cleanly.
        def err(m):
            op = make_operator(lambda x: np.sin(x) ** 3, PI / 3, 2 * PI / 3, m=m)
            ref = make_operator(lambda x: np.sin(x) ** 3, PI / 3, 2 * PI / 3, m=8000)
            return np.abs(eigenvalues(op, 6).mus - eigenvalues(ref, 6).mus).max()

        e250, e500 = err(250), err(500)
        assert e250 / e500 >= 8.0

    def test_negative_window(self):
        # strongly negative ground state via steep cotangents
        op = make_operator(lambda x: 0.0, 0.2, PI - 0.2)
        table = eigenvalues(op, 3)
        assert table.mus[0] < 0.0
        assert np.all(np.diff(table.mus) > 0.0)

    def test_oscillation_indexing_deep_well(self):
        op = make_operator(lambda x: -40.0 * np.exp(-8.0 * (x - PI / 2) ** 2),
                           PI / 2, PI / 2)
        table = eigenvalues(op, 10)
        assert np.all(np.diff(table.mus) > 0.0)

    def test_reflected_spectra_match(self):
        op = make_operator(lambda x: np.sin(2 * x) + x / 5.0, 1.0, 2.0)
        reflected = OperatorSpec(Potential(op.grid, op.potential.values[::-1]),
                                 RobinAngles(PI - op.beta, PI - op.alpha))
        t0 = eigenvalues(op, 8)
        t1 = eigenvalues(reflected, 8)
        assert np.abs(t0.mus - t1.mus).max() <= 1e-9 * (1 + np.abs(t0.mus)).max()

    def test_n_max_zero(self, neumann_base):
        table = eigenvalues(neumann_base, 0)
        assert len(table) == 1
        assert abs(table[0].mu) <= 1e-10


class TestNormingConstants:
    def test_reference_values(self, neumann_base):
        table = eigenvalues(neumann_base, 3)
        assert abs(table[0].a - PI) <= 1e-8
        for n in (1, 2, 3):
            assert abs(table[n].a - PI / 2) <= 1e-8

    def test_derivative_identity(self, bump_operator):
        # a_n equals |phi(pi)| times |dPhi/dmu| at the eigenvalue
        table = eigenvalues(bump_operator, 6)
        for d in table:
            dot = char_derivative(bump_operator, d.mu)
            assert abs(d.a - abs(d.phi_end) * abs(dot)) <= 1e-5 * d.a
            assert abs(d.a - abs(d.kappa) * abs(dot)) <= 1e-5 * d.a
            assert abs(dot) >= 1e-6  # simplicity margin

    def test_b_equals_a_for_even_operator(self, neumann_base):
        table = eigenvalues(neumann_base, 4, want_b=True)
        for d in table:
            assert abs(d.b - d.a) <= 1e-6 * d.a

    def test_b_identities(self, bump_operator):
        from sturmspec.certificates import _char_psi_derivative
        from sturmspec.solver import _Tables
        table = eigenvalues(bump_operator, 5, want_b=True)
        t = _Tables(bump_operator)
        psi_dots = _char_psi_derivative(t, table.mus)
        y_b, _ = t.traces(table.mus, backward=True)
        for n, d in enumerate(table):
            assert abs(d.b - abs(y_b[n][0]) * abs(psi_dots[n])) <= 1e-5 * d.b
            assert abs(d.b - d.a / d.kappa**2) <= 1e-5 * d.b

    def test_direct_functions(self, neumann_base):
        assert abs(norming_constant_a(neumann_base, 0.0) - PI) <= 1e-8
        assert abs(norming_constant_b(neumann_base, 1.0) - PI / 2) <= 1e-8

    def test_precondition(self, neumann_base):
        with pytest.raises(PreconditionError):
            norming_constant_a(neumann_base, 2.5)


class TestKappa:
    def test_even_operator_signs(self, bump_operator):
        # symmetric potential with complementary angles: phi(pi, mu_n) = (-1)^n
        table = eigenvalues(bump_operator, 6)
        signs = (-1.0) ** np.arange(7)
        assert np.abs(table.phi_end - signs).max() <= 1e-5

    def test_reference_value(self, neumann_base):
        assert abs(kappa(neumann_base, 1.0) + 1.0) <= 1e-6

    def test_self_check_asymmetric(self):
        op = make_operator(lambda x: x, PI / 2, PI / 2)
        table = eigenvalues(op, 5)
        for d in table:
            value = kappa(op, d.mu)  # raises on inconsistency
            assert abs(value - d.phi_end) <= 1e-9 * (1 + abs(value))

    def test_loose_value_rejected(self, neumann_base):
        with pytest.raises((PreconditionError, EigenvalueConsistencyError)):
            kappa(neumann_base, 1.0 + 1e-5)
