import numpy as np
import pytest
from scipy import integrate

from modsymm.bie.kernel import g1_log_kernel
from modsymm.bie.quadrature import (
    DiscreteOperator,
    apply_S0,
    apply_SK,
    apply_STK,
    assemble,
    forward_map,
    kress_matrix,
    kress_weight,
)
from modsymm.bie.trig import NodalValues, TrigPoly, l2_norm, lagrange_basis, nodes
from modsymm.core.exceptions import InputError, PreconditionError

CONSTANT_IMAGE = 2.0 * np.exp(0.5)


def samples(f, n):
    return NodalValues.from_function(f, n)


# --- 1. Kress weights ---


class TestKressWeights:

    def test_closed_form_value(self):
        assert kress_weight(2, 0, 0.0) == pytest.approx(0.625, abs=1e-15)

    def test_matches_adaptive_quadrature(self):
        def integrand(s):
            return lagrange_basis(2, 0, s) * g1_log_kernel(0.0, s)

        total = integrate.quad(integrand, 0.0, np.pi, limit=200)[0]
        total += integrate.quad(integrand, np.pi, 2.0 * np.pi, limit=200)[0]
        assert kress_weight(2, 0, 0.0) == pytest.approx(-total / (2.0 * np.pi), abs=1e-8)

    @pytest.mark.parametrize("n", [2, 8, 16])
    def test_weights_sum_to_zero(self, n, rng):
        t = rng.uniform(0.0, 2.0 * np.pi, 32)
        assert np.max(np.abs(kress_matrix(n, t).sum(axis=1))) <= 1e-12

    def test_translation_equivariance(self, rng):
        n = 6
        t = rng.uniform(0.0, 2.0 * np.pi, 8)
        for j in range(2 * n - 1):
            assert np.max(
                np.abs(kress_weight(n, j + 1, t + np.pi / n) - kress_weight(n, j, t))
            ) <= 1e-13

    def test_index_check(self):
        with pytest.raises(InputError):
            kress_weight(2, 4, 0.0)

    def test_annihilates_constants_at_nodes(self):
        for n in (3, 10):
            assert np.max(np.abs(kress_matrix(n, nodes(n)) @ np.ones(2 * n))) <= 1e-12


# --- 2. Operator application ---


class TestApply:

    def test_circle_eigenvalues(self, circle_parts, rng):
        n = 16
        t = rng.uniform(0.0, 2.0 * np.pi, 16)
        for k in range(1, n):
            for basis in (np.cos, np.sin):
                value = apply_SK(circle_parts, samples(lambda s: basis(k * s), n), t)
                assert np.max(np.abs(value - basis(k * t) / k)) <= 1e-12

    def test_circle_constant(self, circle_parts, rng):
        t = rng.uniform(0.0, 2.0 * np.pi, 5)
        value = apply_SK(circle_parts, samples(np.ones_like, 8), t)
        assert np.max(np.abs(value - 1.0)) <= 1e-13

    def test_zero_density(self, ellipse_parts):
        assert apply_SK(ellipse_parts, NodalValues(4, np.zeros(8)), 0.4) == 0.0

    def test_stk_circle_cos3(self, circle_parts):
        image = apply_STK(circle_parts, samples(lambda s: np.cos(3 * s), 8))
        expected = TrigPoly.cos(3, 8, 1.0 / 3.0)
        assert np.max(np.abs(image.coefficients - expected.coefficients)) <= 1e-12

    def test_stk_matches_sk_at_nodes(self, ellipse_parts, exp_sin):
        v = samples(exp_sin, 10)
        image = apply_STK(ellipse_parts, v)
        t = nodes(10)
        assert np.max(np.abs(image(t) - apply_SK(ellipse_parts, v, t))) <= 1e-13

    def test_stk_converges_on_ellipse(self, ellipse_parts, exp_sin):
        coarse = apply_STK(ellipse_parts, samples(exp_sin, 16))
        fine = apply_STK(ellipse_parts, samples(exp_sin, 32))
        assert l2_norm(fine - coarse) <= 1e-9

    def test_stk_error_decays_geometrically(self, ellipse_parts, exp_sin):
        gaps = []
        for n in (8, 12, 16):
            coarse = apply_STK(ellipse_parts, samples(exp_sin, n))
            fine = apply_STK(ellipse_parts, samples(exp_sin, 2 * n))
            gaps.append(l2_norm(fine - coarse))
        assert gaps[1] <= 0.5 * gaps[0]
        assert gaps[2] <= 0.5 * gaps[1]

    def test_s0_circle_noise_mode(self, circle_parts):
        scale = 1.0 / np.sqrt(np.pi)
        image = apply_S0(circle_parts, samples(lambda s: scale * np.sin(6 * s), 16))
        expected = TrigPoly.sin(6, 16, scale / 6.0)
        assert np.max(np.abs(image.coefficients - expected.coefficients)) <= 1e-12

    def test_s0_circle_constant(self, circle_parts):
        image = apply_S0(circle_parts, samples(np.ones_like, 16))
        assert image.a[0] == pytest.approx(CONSTANT_IMAGE, abs=1e-12)
        assert np.max(np.abs(image.coefficients[1:])) <= 1e-12

    def test_s0_linearity(self, ellipse_parts, rng):
        u = NodalValues(8, rng.standard_normal(16))
        v = NodalValues(8, rng.standard_normal(16))
        combined = apply_S0(ellipse_parts, u * 2.0 + v * -3.0)
        separate = 2.0 * apply_S0(ellipse_parts, u) - 3.0 * apply_S0(ellipse_parts, v)
        assert np.max(np.abs(combined.coefficients - separate.coefficients)) <= 1e-12

    def test_forward_map_is_s0_of_samples(self, ellipse_parts, exp_sin):
        data = forward_map(ellipse_parts, exp_sin, 16)
        direct = apply_S0(ellipse_parts, samples(exp_sin, 16))
        assert np.array_equal(data.coefficients, direct.coefficients)


# --- 3. Assembly ---


class TestAssemble:

    def test_circle_is_diagonal_in_frequency(self, circle_parts):
        n = 8
        operator = assemble(circle_parts, n)
        matrix = operator.coefficient_matrix()
        k = np.arange(1, n + 1)
        expected = np.diag(np.concatenate([[CONSTANT_IMAGE], 1.0 / k, 1.0 / k[:-1]]))
        assert np.max(np.abs(matrix - expected)) <= 1e-10

    def test_orthonormal_form_is_diagonal_on_circle(self, circle_parts):
        matrix = assemble(circle_parts, 6).orthonormal_matrix()
        assert np.max(np.abs(matrix - np.diag(np.diag(matrix)))) <= 1e-10

    def test_ones_column_sum(self, ellipse_parts):
        operator = assemble(ellipse_parts, 8)
        expected = apply_S0(ellipse_parts, samples(np.ones_like, 8))(nodes(8))
        assert np.max(np.abs(operator.matrix @ np.ones(16) - expected)) <= 1e-12

    def test_apply_matches_apply_s0(self, ellipse_parts, rng):
        v = NodalValues(8, rng.standard_normal(16))
        operator = assemble(ellipse_parts, 8)
        gap = operator.apply(v) - apply_S0(ellipse_parts, v)
        assert np.max(np.abs(gap.coefficients)) <= 1e-12

    def test_deterministic(self, ellipse_parts):
        assert np.array_equal(
            assemble(ellipse_parts, 8).matrix, assemble(ellipse_parts, 8).matrix
        )

    def test_matrix_is_read_only(self, ellipse_parts):
        with pytest.raises(ValueError):
            assemble(ellipse_parts, 2).matrix[0, 0] = 1.0

    def test_stability_estimate_on_circle(self, circle_parts):
        n = 8
        operator = assemble(circle_parts, n)
        for column in np.eye(2 * n):
            psi = TrigPoly.from_coefficients(column, n)
            image = operator.apply(psi.nodal_values())
            assert l2_norm(psi) <= n * l2_norm(image) + 1e-9

    def test_shape_check(self, ellipse_parts):
        with pytest.raises(InputError):
            DiscreteOperator(n=2, matrix=np.eye(3), convention=ellipse_parts.convention, kernel=ellipse_parts)

    def test_apply_checks_degree(self, ellipse_parts):
        with pytest.raises(PreconditionError):
            assemble(ellipse_parts, 4).apply(NodalValues(3, np.zeros(6)))
