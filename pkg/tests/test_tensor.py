from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cosserat.errors import InvalidInput, InvalidMass
from cosserat.tensor import (
    IDENTITY,
    anti,
    axl,
    decompose,
    gen_eigen_diag,
    inner,
    norm_sq,
    random_rotation,
    rotation_matrix,
    sym_eigen,
)

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
matrices = st.lists(finite, min_size=9, max_size=9).map(lambda v: np.array(v).reshape(3, 3))
vectors = st.lists(finite, min_size=3, max_size=3).map(np.array)


class TestDecompose:
    def test_identity_is_spherical(self):
        parts = decompose(IDENTITY)
        assert np.all(parts.dev_sym == 0)
        assert np.all(parts.skew == 0)
        assert parts.trace == 3.0

    def test_skew_input(self):
        a = anti([1.0, 2.0, 3.0])
        parts = decompose(a)
        assert np.all(parts.dev_sym == 0)
        np.testing.assert_array_equal(parts.skew, a)
        assert parts.trace == 0.0

    def test_diagonal(self):
        parts = decompose(np.diag([1.0, 2.0, 3.0]))
        np.testing.assert_allclose(parts.dev_sym, np.diag([-1.0, 0.0, 1.0]), atol=1e-15)
        assert parts.trace == 6.0

    def test_rejects_nan(self):
        with pytest.raises(InvalidInput):
            decompose(np.full((3, 3), np.nan))

    @given(matrices)
    def test_recompose_and_pythagoras(self, x):
        parts = decompose(x)
        scale = max(np.max(np.abs(x)), 1e-300)
        assert np.max(np.abs(parts.recompose() - x)) <= 8 * np.finfo(float).eps * scale * 4
        total = norm_sq(x)
        split = norm_sq(parts.dev_sym) + norm_sq(parts.skew) + parts.trace**2 / 3.0
        assert abs(total - split) <= 1e-13 * max(total, 1e-300)

    @given(matrices)
    def test_orthogonality(self, x):
        parts = decompose(x)
        n = max(norm_sq(x), 1e-300)
        assert abs(inner(parts.dev_sym, parts.skew)) <= 1e-14 * n
        assert abs(inner(parts.dev_sym, IDENTITY)) <= 1e-14 * math.sqrt(n) * 4
        assert inner(parts.skew, IDENTITY) == 0.0


class TestAxlAnti:
    def test_axl_of_display(self):
        a = np.array([[0.0, -3.0, 2.0], [3.0, 0.0, -1.0], [-2.0, 1.0, 0.0]])
        np.testing.assert_array_equal(axl(a), [1.0, 2.0, 3.0])

    def test_zero(self):
        np.testing.assert_array_equal(axl(np.zeros((3, 3))), np.zeros(3))

    def test_cross_product(self):
        np.testing.assert_array_equal(anti([0.0, 0.0, 1.0]) @ [1.0, 0.0, 0.0], [0.0, 1.0, 0.0])

    def test_rejects_symmetric(self):
        with pytest.raises(InvalidInput):
            axl(np.eye(3))

    @given(vectors)
    def test_round_trip(self, v):
        a = anti(v)
        np.testing.assert_array_equal(a, -a.T)
        np.testing.assert_array_equal(axl(a), v)

    @given(vectors, vectors)
    def test_anti_is_cross(self, v, w):
        np.testing.assert_allclose(anti(v) @ w, np.cross(v, w), atol=1e-9)


class TestSymEigen:
    def test_diagonal(self):
        w, _ = sym_eigen(np.diag([3.0, 1.0, 2.0]))
        np.testing.assert_array_equal(w, [1.0, 2.0, 3.0])

    def test_two_by_two_block(self):
        s = np.array([[2.0, -2.0, 0.0], [-2.0, 6.0, 0.0], [0.0, 0.0, 3.0]])
        w, _ = sym_eigen(s)
        np.testing.assert_allclose(w, [4 - 2 * math.sqrt(2), 3.0, 4 + 2 * math.sqrt(2)], rtol=1e-14)

    def test_identity(self):
        w, v = sym_eigen(np.eye(3))
        np.testing.assert_array_equal(w, [1.0, 1.0, 1.0])
        np.testing.assert_allclose(v.T @ v, np.eye(3), atol=1e-15)

    def test_rejects_asymmetric(self):
        with pytest.raises(InvalidInput):
            sym_eigen(np.array([[1.0, 2.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]))

    @settings(max_examples=200)
    @given(matrices)
    def test_residual_and_orthonormality(self, x):
        s = x + x.T
        w, v = sym_eigen(s)
        scale = np.linalg.norm(s)
        assert np.all(np.diff(w) >= 0)
        assert np.linalg.norm(s @ v - v * w) <= 1e-12 * max(scale, 1e-300)
        np.testing.assert_allclose(v.T @ v, np.eye(3), atol=1e-12)

    def test_rotation_invariance(self, rng):
        for _ in range(100):
            x = rng.normal(size=(3, 3))
            s = x + x.T
            r = random_rotation(rng)
            w1, _ = sym_eigen(s)
            w2, _ = sym_eigen(r @ s @ r.T)
            assert np.max(np.abs(w1 - w2)) <= 1e-10 * np.max(np.abs(w1))

    def test_matches_numpy(self, rng):
        for _ in range(100):
            x = rng.normal(size=(3, 3))
            s = x + x.T
            np.testing.assert_allclose(sym_eigen(s)[0], np.linalg.eigvalsh(s), atol=1e-12)


class TestGeneralized:
    def test_diagonal(self):
        np.testing.assert_array_equal(gen_eigen_diag(np.diag([0.0, 0.0, 4.0]), np.eye(3)), [0.0, 0.0, 4.0])

    def test_ratio(self):
        np.testing.assert_allclose(gen_eigen_diag(4 * np.eye(3), np.diag([1.0, 1.0, 4.0])), [1.0, 4.0, 4.0])

    def test_wave_block(self):
        q = np.array([[3.0, 0.0, 0.0], [0.0, 2.0, -2.0], [0.0, -2.0, 6.0]])
        got = gen_eigen_diag(q, np.eye(3))
        np.testing.assert_allclose(got, [4 - 2 * math.sqrt(2), 3.0, 4 + 2 * math.sqrt(2)], rtol=1e-14)

    def test_rejects_bad_mass(self):
        with pytest.raises(InvalidMass):
            gen_eigen_diag(np.eye(3), np.diag([1.0, 0.0, 1.0]))
        with pytest.raises(InvalidInput):
            gen_eigen_diag(np.eye(3), np.ones((3, 3)))

    def test_determinant_vanishes(self, rng):
        for _ in range(50):
            x = rng.normal(size=(3, 3))
            q = x + x.T
            m = np.diag(rng.uniform(0.1, 3.0, size=3))
            vals, vecs = gen_eigen_diag(q, m, vectors=True)
            nq = np.linalg.norm(q)
            for lam in vals:
                assert abs(np.linalg.det(q - lam * m)) <= 1e-10 * nq**3
            np.testing.assert_allclose(vecs.T @ m @ vecs, np.eye(3), atol=1e-12)


def test_rotation_matrix_is_orthogonal():
    r = rotation_matrix([1.0, 2.0, 2.0], 0.7)
    np.testing.assert_allclose(r @ r.T, np.eye(3), atol=1e-15)
    assert np.linalg.det(r) == pytest.approx(1.0)
