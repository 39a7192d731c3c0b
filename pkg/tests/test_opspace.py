import numpy as np
import pytest

from realops.linalg import op_norm
from realops.opspace import (CBMap, MatElem, check_ruan_axioms,
                             cbmap_from_json, cbmap_to_json,
                             cb_norm_lower_search, complexification_norm,
                             complexified_elem, complexify_map,
                             complexify_space, conjugate_elem,
                             direct_sum_elem, direct_sum_spaces, elem,
                             elem_from_json, elem_to_json, full_matrix_space,
                             identity_map, level_cb_norm_lower, level_norm,
                             opspace_from_json, opspace_to_json,
                             quotient_level_norm, random_elem, scalar_sandwich,
                             span_space, theta_dual_norm_lower,
                             theta_dual_search)

M2 = full_matrix_space(2)
R1 = span_space([[[1.0]]])
A_DIAG = np.array([[1.0, 0.0], [0.0, -1.0]])
B_FLIP = np.array([[0.0, 1.0], [1.0, 0.0]])

TRANSPOSE = CBMap(M2, M2, np.array([[1, 0, 0, 0], [0, 0, 1, 0],
                                    [0, 1, 0, 0], [0, 0, 0, 1]], float))


def assemble_complex_block(x, y):
    """Brute-force oracle: the 2np x 2nq block matrix [[x, -y], [y, x]]."""
    xm, ym = x.realization(), y.realization()
    return np.block([[xm, -ym], [ym, xm]])


class TestSpaces:
    def test_dependent_basis_rejected(self):
        with pytest.raises(ValueError):
            span_space([[[1.0, 0.0]], [[2.0, 0.0]]])

    def test_gram_condition_reported(self):
        assert M2.gram_condition == pytest.approx(1.0)

    def test_level_norm_identity(self):
        assert level_norm(elem(M2, [1, 0, 0, 1])) == pytest.approx(1.0)

    def test_level_norm_scaled_basis(self):
        two = span_space([[[2.0]]])
        assert level_norm(elem(two, [1.0])) == pytest.approx(2.0)

    def test_level_two_block_diagonal(self):
        c = np.zeros((2, 2, 4))
        c[0, 0] = [1, 0, 0, -1]          # A at position (1,1)
        c[1, 1] = [0, 1, 1, 0]           # B at position (2,2)
        x = MatElem(M2, c)
        # block-diagonal max oracle
        assert level_norm(x) == pytest.approx(
            max(op_norm(A_DIAG), op_norm(B_FLIP)), abs=1e-12)

    def test_coeff_shape_mismatch(self):
        with pytest.raises(ValueError):
            MatElem(M2, np.zeros((2, 2, 3)))

    def test_json_round_trip(self):
        sp = opspace_from_json(opspace_to_json(M2))
        assert np.array_equal(sp.basis, M2.basis)
        x = elem(M2, [1.0, 2.0, 3.0, 4.0])
        x2 = elem_from_json(sp, elem_to_json(x))
        assert np.array_equal(x2.coeffs, x.coeffs)
        u = cbmap_from_json(cbmap_to_json(TRANSPOSE))
        assert np.array_equal(u.matrix, TRANSPOSE.matrix)


class TestComplexification:
    def test_scalar_basis_blocks(self):
        c = complexify_space(R1)
        assert c.dim == 2
        assert np.array_equal(c.basis[0], np.eye(2))
        assert np.array_equal(c.basis[1], np.array([[0.0, -1.0], [1.0, 0.0]]))

    def test_dimension_doubles(self):
        assert complexify_space(M2).dim == 8

    def test_double_complexification_rejected(self):
        with pytest.raises(ValueError):
            complexify_space(complexify_space(M2))

    def test_extends_original_norm(self):
        x = elem(R1, [3.0])
        zero = elem(R1, [0.0])
        assert complexification_norm(R1, x, zero) == pytest.approx(3.0,
                                                                   abs=1e-12)

    def test_scalar_one_plus_i(self):
        one = elem(R1, [1.0])
        assert complexification_norm(R1, one, one) == pytest.approx(
            np.sqrt(2.0), abs=1e-12)

    def test_matches_block_assembly_oracle(self):
        x = elem(M2, [1, 0, 0, -1])
        y = elem(M2, [0, 1, 1, 0])
        expected = op_norm(assemble_complex_block(x, y))
        assert complexification_norm(M2, x, y) == pytest.approx(expected,
                                                                abs=1e-12)

    def test_conjugation_is_an_isometric_involution(self):
        rng = np.random.default_rng(3)
        xc = complexify_space(M2)
        for _ in range(200):
            n = int(rng.integers(1, 3))
            z = MatElem(xc, rng.standard_normal((n, n, 8)))
            zbar = conjugate_elem(z)
            assert np.array_equal(conjugate_elem(zbar).coeffs, z.coeffs)
            assert level_norm(zbar) == pytest.approx(level_norm(z), abs=1e-10)

    def test_level_mismatch_rejected(self):
        with pytest.raises(ValueError):
            complexification_norm(R1, elem(R1, [1.0]),
                                  MatElem(R1, np.zeros((2, 2, 1))))


class TestComplexifyMap:
    def test_identity(self):
        uc = complexify_map(identity_map(M2))
        assert np.array_equal(uc.matrix, np.eye(8))

    def test_scaling(self):
        uc = complexify_map(CBMap(M2, M2, 0.5 * np.eye(4)))
        assert np.array_equal(uc.matrix, 0.5 * np.eye(8))

    def test_restriction_to_real_part(self):
        u = CBMap(M2, M2, np.arange(16.0).reshape(4, 4))
        uc = complexify_map(u)
        x = elem(M2, [1.0, -2.0, 0.5, 3.0])
        zero = elem(M2, np.zeros((1, 1, 4)))
        zc = complexified_elem(uc.domain, x, zero)
        img = uc(zc)
        assert np.allclose(img.coeffs[:, :, :4], u(x).coeffs)
        assert np.allclose(img.coeffs[:, :, 4:], 0.0)

    def test_complete_contraction_stays_contractive(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            a = rng.standard_normal((2, 2))
            a /= op_norm(a)
            b = rng.standard_normal((2, 2))
            b /= op_norm(b)
            mat = np.zeros((4, 4))
            for k in range(4):
                mat[:, k], _ = M2.coefficients(a @ M2.basis[k] @ b)
            uc = complexify_map(CBMap(M2, M2, mat))
            for _ in range(20):
                z = random_elem(uc.domain, 2, rng)
                nz = level_norm(z)
                if nz < 1e-12:
                    continue
                assert level_norm(uc(z)) <= nz * (1.0 + 1e-9)


class TestRuanAxioms:
    def test_full_matrix_space_passes(self):
        rep = check_ruan_axioms(M2, max_level=3, samples=100, seed=5)
        assert rep.passed
        assert rep.direct_sum_deviation <= 1e-10
        assert rep.scalar_action_deviation <= 1e-10

    def test_complexified_space_passes(self):
        rep = check_ruan_axioms(complexify_space(M2), max_level=3,
                                samples=100, seed=5)
        assert rep.passed

    def test_requires_level_two(self):
        with pytest.raises(ValueError):
            check_ruan_axioms(M2, max_level=1)

    def test_direct_sum_and_sandwich_helpers(self):
        x = elem(M2, [1, 0, 0, 1])
        y = MatElem(M2, np.zeros((2, 2, 4)))
        assert direct_sum_elem(x, y).level == 3
        alpha = np.array([[2.0]])
        assert np.allclose(scalar_sandwich(alpha, x, alpha).coeffs,
                           4.0 * x.coeffs)


class TestCbLowerBounds:
    def test_identity_is_one(self):
        assert level_cb_norm_lower(identity_map(M2), 2, restarts=4,
                                   seed=1) == pytest.approx(1.0, abs=1e-9)

    def test_scaling_is_two(self):
        u = CBMap(M2, M2, 2.0 * np.eye(4))
        assert level_cb_norm_lower(u, 3, restarts=4, seed=1) == \
            pytest.approx(2.0, abs=1e-9)

    def test_transpose_witness(self):
        # classical witness: the element with (i, j) entry e_{ji} realizes
        # the swap, and its image has norm 2
        c = np.zeros((2, 2, 4))
        c[0, 0] = [1, 0, 0, 0]
        c[0, 1] = [0, 0, 1, 0]
        c[1, 0] = [0, 1, 0, 0]
        c[1, 1] = [0, 0, 0, 1]
        x = MatElem(M2, c)
        ratio = level_norm(TRANSPOSE(x)) / level_norm(x)
        assert ratio == pytest.approx(2.0, abs=1e-12)
        res = cb_norm_lower_search(TRANSPOSE, 2, restarts=16, seed=3)
        assert res.value >= 2.0 - 1e-6
        # stored witness reproduces its value
        w = MatElem(M2, res.witness)
        assert level_norm(TRANSPOSE(w)) / level_norm(w) == pytest.approx(
            res.value, abs=1e-9)

    def test_monotone_in_level(self):
        vals = [level_cb_norm_lower(TRANSPOSE, lvl, restarts=6, seed=9)
                for lvl in (1, 2, 3)]
        assert vals[0] <= vals[1] <= vals[2]


class TestQuotientNorm:
    def test_element_inside_subspace(self):
        res = quotient_level_norm(M2, [[1, 0, 0, 0]], elem(M2, [1, 0, 0, 0]))
        assert res.value == pytest.approx(0.0, abs=1e-10)
        assert res.converged

    def test_one_parameter_calculus_oracle(self):
        # dist(e12, span e11): sigma_max([[ -t, 1], [0, 0]]) = sqrt(t^2+1),
        # minimized at t = 0 with value 1
        ts = np.linspace(-2, 2, 401)
        oracle = min(op_norm([[-t, 1.0], [0.0, 0.0]]) for t in ts)
        assert oracle == pytest.approx(1.0, abs=1e-12)
        res = quotient_level_norm(M2, [[1, 0, 0, 0]], elem(M2, [0, 1, 0, 0]))
        assert res.value == pytest.approx(1.0, abs=1e-8)

    def test_zero_element(self):
        res = quotient_level_norm(M2, [[1, 0, 0, 0]],
                                  MatElem(M2, np.zeros((1, 1, 4))))
        assert res.value == 0.0

    def test_dependent_subspace_rejected(self):
        with pytest.raises(ValueError):
            quotient_level_norm(M2, [[1, 0, 0, 0], [2, 0, 0, 0]],
                                elem(M2, [0, 1, 0, 0]))


class TestDirectSums:
    def test_scalar_pair(self):
        two = direct_sum_spaces([R1, R1])
        assert level_norm(elem(two, [3.0, -4.0])) == pytest.approx(4.0)

    def test_single_summand_identical(self):
        one = direct_sum_spaces([M2])
        rng = np.random.default_rng(2)
        for _ in range(20):
            c = rng.standard_normal((2, 2, 4))
            assert level_norm(MatElem(one, c)) == pytest.approx(
                level_norm(MatElem(M2, c)), abs=1e-13)

    def test_max_of_components(self):
        dsum = direct_sum_spaces([M2, M2])
        rng = np.random.default_rng(8)
        for _ in range(50):
            x = random_elem(M2, 2, rng)
            y = random_elem(M2, 2, rng)
            c = np.concatenate([x.coeffs, y.coeffs], axis=2)
            assert level_norm(MatElem(dsum, c)) == pytest.approx(
                max(level_norm(x), level_norm(y)), abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            direct_sum_spaces([])


class TestThetaDual:
    def test_row_with_imaginary_entry(self):
        res = theta_dual_search([[1.0, 0.0], [0.0, 0.0]],
                                [[0.0, 1.0], [0.0, 0.0]],
                                m_max=4, restarts=64, seed=0xC0FFEE)
        assert res.lower == pytest.approx(1.0, abs=1e-6)
        assert all(v <= 1.0 + 1e-6 for v in res.restart_values)

    def test_scalar_is_isometric(self):
        assert theta_dual_norm_lower([[1.0]], [[0.0]], m_max=2, restarts=8,
                                     seed=1) == pytest.approx(1.0, abs=1e-9)
        assert theta_dual_norm_lower([[0.6]], [[0.8]], m_max=2, restarts=8,
                                     seed=1) == pytest.approx(1.0, abs=1e-6)

    def test_zero(self):
        assert theta_dual_norm_lower([[0.0]], [[0.0]], m_max=2, restarts=4,
                                     seed=1) == 0.0
