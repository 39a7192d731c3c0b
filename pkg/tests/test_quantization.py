import numpy as np
import pytest

from realops.linalg import op_norm
from realops.opspace import elem, level_norm, random_elem
from realops.quantization import (PAIR_A, PAIR_B, BanachSpace,
                                  banach_from_json, banach_to_json, ell_infty,
                                  ell_one, max_l1_norm_bounds,
                                  min_complexification_check, min_level_norm,
                                  realize_min, reproduce_l12_nonuniqueness,
                                  w2_complex_norm)

L_INF = ell_infty(2)
L_ONE = ell_one(2)


def min_norm_oracle(space, c):
    """Per-functional SVD oracle, independent of the library path."""
    best = 0.0
    for f in space.representatives:
        best = max(best, op_norm(np.tensordot(c, f, axes=([2], [0]))))
    return best


class TestBanachSpace:
    def test_norms(self):
        assert L_INF.norm([3, -4]) == 4.0
        assert L_ONE.norm([3, -4]) == 7.0

    def test_functionals_symmetrized(self):
        e = BanachSpace(2, [[1.0, 0.0], [0.0, 1.0]])
        assert e.functionals.shape == (4, 2)
        assert any(np.array_equal(f, [-1.0, 0.0]) for f in e.functionals)

    def test_dedup_up_to_sign(self):
        e = BanachSpace(2, [[1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])
        assert e.representatives.shape == (2, 2)

    def test_rank_deficient_rejected(self):
        with pytest.raises(ValueError):
            BanachSpace(2, [[1.0, 0.0], [-1.0, 0.0]])

    def test_json_round_trip(self):
        e = banach_from_json(banach_to_json(L_ONE))
        assert np.array_equal(e.representatives, L_ONE.representatives)


class TestMinLevelNorm:
    def test_level_one_ell_inf(self):
        assert min_level_norm(L_INF, np.array([3.0, -4.0])) == 4.0

    def test_witness_pair_is_sqrt_two(self):
        element = np.stack([PAIR_A, PAIR_B], axis=-1)
        # max{|A+B|, |A-B|} computed directly
        direct = max(op_norm(PAIR_A + PAIR_B), op_norm(PAIR_A - PAIR_B))
        assert direct == pytest.approx(np.sqrt(2.0), abs=1e-12)
        assert min_level_norm(L_ONE, element) == pytest.approx(
            np.sqrt(2.0), abs=1e-12)

    def test_identity_and_unit_over_ell_inf(self):
        element = np.stack([np.eye(2), np.array([[0.0, 1.0], [0.0, 0.0]])],
                           axis=-1)
        assert min_level_norm(L_INF, element) == pytest.approx(
            min_norm_oracle(L_INF, element), abs=1e-14)
        assert min_level_norm(L_INF, element) == pytest.approx(1.0, abs=1e-12)

    def test_level_one_extends_banach_norm(self):
        rng = np.random.default_rng(4)
        hexagon = BanachSpace(2, [[1.0, 0.0], [0.5, 1.0], [-0.5, 1.0]])
        for sp in (L_INF, L_ONE, hexagon):
            for _ in range(50):
                v = rng.standard_normal(2)
                assert min_level_norm(sp, v.reshape(1, 1, 2)) == \
                    pytest.approx(sp.norm(v), abs=1e-12)


class TestRealizeMin:
    def test_ell_inf_basis(self):
        xs = realize_min(L_INF)
        assert np.array_equal(xs.basis[0], np.diag([1.0, 0.0]))
        assert np.array_equal(xs.basis[1], np.diag([0.0, 1.0]))

    def test_ell_one_basis(self):
        xs = realize_min(L_ONE)
        assert np.array_equal(xs.basis[0], np.diag([1.0, 1.0]))
        assert np.array_equal(xs.basis[1], np.diag([1.0, -1.0]))

    def test_realization_matches_dual_formula(self):
        rng = np.random.default_rng(5)
        for sp in (L_INF, L_ONE):
            xs = realize_min(sp)
            for _ in range(100):
                n = int(rng.integers(1, 4))
                c = rng.standard_normal((n, n, 2))
                assert level_norm(elem(xs, c)) == pytest.approx(
                    min_level_norm(sp, c), abs=1e-12)


class TestW2Norm:
    def test_three_four_five(self):
        r = BanachSpace(1, [[1.0]])
        assert w2_complex_norm(r, [3.0], [4.0]) == pytest.approx(5.0)

    def test_zero_imaginary_part(self):
        rng = np.random.default_rng(6)
        for _ in range(50):
            x = rng.standard_normal(2)
            assert w2_complex_norm(L_ONE, x, np.zeros(2)) == pytest.approx(
                L_ONE.norm(x), abs=1e-14)

    def test_unit_cross_pair(self):
        assert w2_complex_norm(L_INF, [1.0, 0.0], [0.0, 1.0]) == \
            pytest.approx(1.0)

    def test_even_in_y(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            x, y = rng.standard_normal(2), rng.standard_normal(2)
            assert w2_complex_norm(L_ONE, x, y) == \
                w2_complex_norm(L_ONE, x, -y)


class TestMinComplexification:
    @pytest.mark.parametrize("space", [BanachSpace(1, [[1.0]]), L_INF, L_ONE],
                             ids=["scalars", "ell_inf", "ell_one"])
    def test_agreement(self, space):
        assert min_complexification_check(space, max_level=3, samples=200,
                                          seed=0xC0FFEE) <= 1e-10


class TestMaxL1:
    def test_single_matrix(self):
        rng = np.random.default_rng(8)
        a = rng.standard_normal((2, 2))
        res = max_l1_norm_bounds([a], m_max=2, restarts=8, seed=1)
        assert res.lower == pytest.approx(op_norm(a), abs=1e-9)
        assert res.upper == pytest.approx(op_norm(a), abs=1e-12)

    def test_scalars_reach_l1_norm(self):
        res = max_l1_norm_bounds([[[0.7]], [[-0.3]]], m_max=2, restarts=8,
                                 seed=1)
        assert res.lower == pytest.approx(1.0, abs=1e-12)
        assert res.upper == pytest.approx(1.0, abs=1e-12)

    def test_witness_pair(self):
        # the tuple (A, B) itself witnesses the lower bound 2
        direct = op_norm(np.kron(PAIR_A, PAIR_A) + np.kron(PAIR_B, PAIR_B))
        assert direct == pytest.approx(2.0, abs=1e-12)
        res = max_l1_norm_bounds([PAIR_A, PAIR_B], m_max=2, restarts=16,
                                 seed=2)
        assert res.lower >= 2.0 - 1e-6
        assert res.upper == pytest.approx(2.0, abs=1e-12)

    def test_bracket_is_ordered(self):
        rng = np.random.default_rng(9)
        for t in range(5):
            mats = [rng.standard_normal((2, 2)) for _ in range(2)]
            res = max_l1_norm_bounds(mats, m_max=2, restarts=8, seed=t)
            assert res.lower <= res.upper

    def test_monotone_refinement(self):
        small = max_l1_norm_bounds([PAIR_A, PAIR_B], m_max=2, restarts=8,
                                   seed=5).lower
        more_m = max_l1_norm_bounds([PAIR_A, PAIR_B], m_max=4, restarts=8,
                                    seed=5).lower
        more_r = max_l1_norm_bounds([PAIR_A, PAIR_B], m_max=4, restarts=16,
                                    seed=5).lower
        assert small <= more_m <= more_r + 1e-15


class TestReproduceL12:
    def test_default_run(self):
        rep = reproduce_l12_nonuniqueness(seed=0xC0FFEE)
        assert rep.min_norm == pytest.approx(np.sqrt(2.0), abs=1e-9)
        assert rep.max_lower >= 2.0 - 1e-6
        assert rep.max_upper == pytest.approx(2.0, abs=1e-12)
        assert rep.gap >= 0.58
        assert rep.passed

    def test_homogeneity_of_both_norms(self):
        halved = np.stack([PAIR_A / 2, PAIR_B / 2], axis=-1)
        assert min_level_norm(L_ONE, halved) == pytest.approx(
            np.sqrt(2.0) / 2, abs=1e-12)
        res = max_l1_norm_bounds([PAIR_A / 2, PAIR_B / 2], m_max=2,
                                 restarts=8, seed=3)
        assert res.lower == pytest.approx(1.0, abs=1e-9)
        assert res.upper == pytest.approx(1.0, abs=1e-12)

    def test_single_coefficient_degenerate(self):
        # (A, 0): both structures collapse to the operator norm of A
        element = np.stack([PAIR_A, np.zeros((2, 2))], axis=-1)
        assert min_level_norm(L_ONE, element) == pytest.approx(1.0, abs=1e-12)
        res = max_l1_norm_bounds([PAIR_A, np.zeros((2, 2))], m_max=2,
                                 restarts=8, seed=4)
        assert res.lower == pytest.approx(1.0, abs=1e-9)
        assert res.upper == pytest.approx(1.0, abs=1e-12)


def test_minimality_of_min_structure():
    # maps into a minimal space cannot grow at higher levels: the sampled
    # level-n ratio never beats the exactly computed level-1 norm
    rng = np.random.default_rng(10)
    from realops.opspace import CBMap, full_matrix_space
    dom = full_matrix_space(2)
    cod = realize_min(L_INF)
    for _ in range(5):
        u_mat = rng.standard_normal((2, 4))
        u = CBMap(dom, cod, u_mat)
        norm1 = 0.0
        for f in L_INF.representatives:
            w = (u_mat.T @ f).reshape(2, 2)
            norm1 = max(norm1, float(np.sum(np.linalg.svd(w,
                                                          compute_uv=False))))
        for lvl in (1, 2, 3):
            for _ in range(10):
                x = random_elem(dom, lvl, rng)
                nx = level_norm(x)
                if nx < 1e-12:
                    continue
                assert level_norm(u(x)) <= nx * norm1 * (1 + 1e-9) + 1e-12
