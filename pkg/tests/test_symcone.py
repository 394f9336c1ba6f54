import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rieszmix import symcone as sc
from rieszmix.errors import DimensionMismatch, IndexOutOfRange, NotPositiveDefinite

from conftest import random_lower, random_spd, raw_leading_minors, raw_trailing_minors, rel_err

X2 = np.array([[2.0, 1.0], [1.0, 2.0]])


@st.composite
def spd_matrices(draw, max_r=5):
    r = draw(st.integers(1, max_r))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_spd(np.random.default_rng(seed), r, 0.05, 20.0)


class TestCholesky:
    def test_identity(self):
        np.testing.assert_array_equal(sc.cholesky(np.eye(3)), np.eye(3))

    def test_diagonal(self):
        np.testing.assert_allclose(sc.cholesky(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), rtol=1e-15)

    def test_two_by_two(self):
        expected = np.array([[math.sqrt(2), 0.0], [1 / math.sqrt(2), math.sqrt(1.5)]])
        np.testing.assert_allclose(sc.cholesky(X2), expected, rtol=1e-15)

    @pytest.mark.parametrize("x", [[[1.0, 2.0], [2.0, 1.0]], [[0.0, 0.0], [0.0, 1.0]], [[-1.0]]])
    def test_rejects_outside_cone(self, x):
        with pytest.raises(NotPositiveDefinite):
            sc.cholesky(x)

    def test_pivot_threshold(self):
        x = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-15]])
        with pytest.raises(NotPositiveDefinite):
            sc.cholesky(x)

    def test_round_trip_random(self, rng):
        for _ in range(200):
            x = random_spd(rng, int(rng.integers(1, 6)), 0.01, 100.0)
            u = sc.cholesky(x)
            assert np.all(np.diag(u) > 0)
            assert np.all(np.triu(u, 1) == 0)
            assert rel_err(u @ u.T, x) <= 1e-12

    def test_symmetrizes_or_rejects(self):
        x = X2 + np.array([[0.0, 1e-14], [0.0, 0.0]])
        assert np.array_equal(sc.as_symmetric(x), sc.as_symmetric(x).T)
        with pytest.raises(DimensionMismatch):
            sc.as_symmetric(X2 + np.array([[0.0, 1e-6], [0.0, 0.0]]))


class TestGeneralizedPowers:
    def test_identity_is_one(self, rng):
        for r in range(1, 5):
            s = rng.normal(size=r)
            assert sc.log_gen_power(np.eye(r), s) == 0.0
            assert sc.log_gen_power_star(np.eye(r), s) == 0.0

    def test_constant_shape_gives_determinant_power(self):
        assert sc.log_gen_power(X2, [1.0, 1.0]) == pytest.approx(math.log(3.0), rel=1e-15)
        assert sc.log_gen_power_star(X2, [2.5, 2.5]) == pytest.approx(2.5 * math.log(3.0), rel=1e-15)

    def test_leading_minor_example(self):
        # Delta_1 = 2, Delta_2 = 3: 2^(2-1) * 3^1
        assert sc.log_gen_power(X2, [2.0, 1.0]) == pytest.approx(math.log(6.0), rel=1e-15)

    def test_trailing_minor_example(self):
        x = np.array([[3.0, 1.0], [1.0, 2.0]])
        # Delta*_1 = 2, Delta*_2 = 5: 2^(2-1) * 5^1
        assert sc.log_gen_power_star(x, [2.0, 1.0]) == pytest.approx(math.log(10.0), rel=1e-15)
        assert sc.log_gen_power_star(X2, [2.0, 1.0]) == pytest.approx(math.log(6.0), rel=1e-15)

    def test_unit_shapes_match_raw_minors(self, rng):
        for _ in range(50):
            r = int(rng.integers(1, 6))
            x = random_spd(rng, r, 0.1, 10.0)
            lead = np.concatenate(([1.0], raw_leading_minors(x)))
            trail = np.concatenate(([1.0], raw_trailing_minors(x)))
            for i in range(1, r + 1):
                e = sc.unit(r, i)
                assert sc.log_gen_power(x, e) == pytest.approx(math.log(lead[i] / lead[i - 1]), abs=1e-9)
                assert sc.log_gen_power_star(x, e) == pytest.approx(math.log(trail[i] / trail[i - 1]), abs=1e-9)

    def test_minor_vectors(self, rng):
        x = random_spd(rng, 4)
        np.testing.assert_allclose(np.exp(sc.log_leading_minors(x)), raw_leading_minors(x), rtol=1e-10)
        np.testing.assert_allclose(np.exp(sc.log_trailing_minors(x)), raw_trailing_minors(x), rtol=1e-10)

    @settings(max_examples=100, deadline=None)
    @given(spd_matrices(), st.integers(0, 2**32 - 1))
    def test_inverse_identity(self, x, seed):
        s = np.random.default_rng(seed).uniform(-4, 4, size=x.shape[0])
        lhs = sc.log_gen_power(sc.inv_spd(x), s)
        rhs = sc.log_gen_power_star(x, -sc.star_swap(s))
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))

    def test_triangular_identities(self, rng):
        for _ in range(100):
            r = int(rng.integers(1, 6))
            u = random_lower(rng, r)
            x = random_spd(rng, r)
            s = rng.uniform(-3, 3, size=r)
            uut = sc.triangular_conjugate(u, np.eye(r))
            np.testing.assert_allclose(
                sc.log_leading_minors(sc.triangular_conjugate(u, x)),
                np.cumsum(2 * np.log(np.diag(u))) + sc.log_leading_minors(x),
                atol=1e-10,
            )
            ut_inv = np.linalg.inv(u.T)
            assert sc.log_gen_power(uut, s) == pytest.approx(
                sc.log_gen_power_star(ut_inv @ ut_inv.T, -sc.star_swap(s)), abs=1e-10
            )


class TestShapes:
    def test_rho_kappa(self):
        np.testing.assert_array_equal(sc.rho(3), [0.0, 0.5, 1.0])
        np.testing.assert_array_equal(sc.kappa(2, 3), [0.5, 1.0, 0.0])
        np.testing.assert_array_equal(sc.star_swap([1, 2, 3]), [3, 2, 1])

    @pytest.mark.parametrize(
        "s, expected",
        [
            ([0.0, 0.0], True),
            ([0.0, 0.3], True),
            ([0.2, 0.4], False),
            ([0.2, 0.5], True),
            ([0.0, 0.5, 0.5], True),
            ([0.0, 0.5, 0.7], True),
            ([0.0, 0.5, 0.9], True),
            ([0.0, 0.5, 1.0], True),
            ([0.1, 0.5, 0.9], True),
            ([0.1, 0.5, 0.4], False),
            ([1.0, 0.5, 1.0], True),
            ([-0.1], False),
        ],
    )
    def test_gindikin(self, s, expected):
        assert sc.in_gindikin(s) is expected

    @given(st.lists(st.integers(0, 6), min_size=1, max_size=6))
    def test_poisson_shapes_in_gindikin(self, k):
        assert sc.in_gindikin(np.array(k) + sc.rho(len(k)))

    @given(st.lists(st.floats(-2, 6), min_size=1, max_size=6))
    def test_abs_continuous_implies_gindikin(self, s):
        if sc.is_abs_continuous(s):
            assert sc.in_gindikin(s)


class TestQuadraticRepresentation:
    def test_identity(self, rng):
        g = rng.normal(size=(3, 3))
        y = g + g.T
        np.testing.assert_allclose(sc.quad_rep_apply(np.eye(3), y), y, rtol=1e-15)

    def test_diagonal(self):
        a, b, p, q, s = 2.0, -3.0, 1.5, 0.7, -0.4
        out = sc.quad_rep_apply(np.diag([a, b]), [[p, q], [q, s]])
        np.testing.assert_allclose(out, [[a * a * p, a * b * q], [a * b * q, b * b * s]], rtol=1e-15)

    def test_inverse(self, rng):
        x = random_spd(rng, 4)
        np.testing.assert_allclose(sc.quad_rep_apply(x, sc.inv_spd(x)), x, rtol=1e-12, atol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(spd_matrices(), st.integers(0, 2**32 - 1))
    def test_matches_xyx(self, x, seed):
        g = np.random.default_rng(seed).normal(size=x.shape)
        y = g + g.T
        assert rel_err(sc.quad_rep_apply(x, y), x @ y @ x) <= 1e-12

    def test_operator_matrix(self, rng):
        x = random_spd(rng, 3)
        g = rng.normal(size=(3, 3))
        y = g + g.T
        p = sc.quad_rep_operator(x)
        np.testing.assert_allclose(sc.vec_to_sym(p @ sc.sym_to_vec(y)), x @ y @ x, rtol=1e-12)
        np.testing.assert_allclose(p, p.T, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            sc.quad_rep_apply(np.eye(2), np.eye(3))


class TestBasis:
    def test_orthonormal(self):
        basis = sc.sym_basis(4)
        assert len(basis) == sc.sym_dim(4) == 10
        gram = np.array([[np.trace(a @ b) for b in basis] for a in basis])
        np.testing.assert_allclose(gram, np.eye(10), atol=1e-15)

    def test_round_trip_and_pairing(self, rng):
        g, h = rng.normal(size=(2, 3, 3))
        x, y = g + g.T, h + h.T
        np.testing.assert_allclose(sc.vec_to_sym(sc.sym_to_vec(x)), x, rtol=1e-15)
        assert sc.sym_to_vec(x) @ sc.sym_to_vec(y) == pytest.approx(np.trace(x @ y), rel=1e-13)

    def test_tensor(self, rng):
        g, h = rng.normal(size=(2, 2, 2))
        a, z = g + g.T, h + h.T
        out = sc.vec_to_sym(sc.tensor_operator(a) @ sc.sym_to_vec(z))
        np.testing.assert_allclose(out, np.trace(a @ z) * a, rtol=1e-13)


class TestTriangular:
    def test_conjugate_examples(self, rng):
        y = random_spd(rng, 3)
        np.testing.assert_allclose(sc.triangular_conjugate(np.eye(3), y), y)
        u = random_lower(rng, 3)
        np.testing.assert_allclose(sc.triangular_conjugate(u, np.eye(3)), u @ u.T, rtol=1e-14)
        np.testing.assert_array_equal(sc.triangular_conjugate(np.diag([2.0, 3.0]), sc.diag_unit(2, 1)), np.diag([4.0, 0.0]))

    def test_trailing_block_inverse_simple(self, rng):
        x = random_spd(rng, 3)
        np.testing.assert_array_equal(sc.trailing_block_inverse(x, 0), np.zeros((3, 3)))
        for i in range(4):
            np.testing.assert_allclose(sc.trailing_block_inverse(np.eye(3), i), np.diag([0.0] * (3 - i) + [1.0] * i))
        full = sc.trailing_block_inverse(x, 3)
        np.testing.assert_allclose(full, np.linalg.inv(x), rtol=1e-12)

    def test_trailing_block_identity(self, rng):
        for _ in range(100):
            r = int(rng.integers(1, 6))
            u = random_lower(rng, r)
            x_inv = np.linalg.inv(u @ u.T)
            for i in range(1, r + 1):
                target = u @ np.diag((np.arange(r) >= r - i).astype(float)) @ u.T
                assert rel_err(sc.trailing_block_inverse(x_inv, i), target) <= 1e-10

    def test_index_range(self):
        with pytest.raises(IndexOutOfRange):
            sc.trailing_block_inverse(np.eye(2), 3)
