import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from homrot.eigen4 import eigenvalues
from homrot.projective_core import (
    HomPoint,
    Hyperplane,
    IndeterminatePointError,
    ProjectiveError,
    Tolerance,
    affine_normal,
    apply,
    canonical_plane,
    canonical_point,
    canonical_scale,
    compose,
    conjugate,
    givens,
    is_affine,
    mat_proj_equal,
    proj_equal,
    translation,
)
from homrot.rotation_build import RotationSpec, rotation_rodrigues
from homrot.rotation_classify import classify_rotation
from homrot.stereohomology import make_projection, orthographic_reflection

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
vec4 = arrays(np.float64, 4, elements=finite).filter(lambda v: np.abs(v).max() > 1e-3)
scalars = st.floats(0.01, 100).flatmap(lambda x: st.sampled_from([x, -x]))


class TestTypes:
    def test_tolerance_must_be_positive(self):
        with pytest.raises(ValueError):
            Tolerance(rel=0.0)
        with pytest.raises(ValueError):
            Tolerance(abs=-1.0)

    def test_point_rejects_zero(self):
        with pytest.raises(ProjectiveError):
            HomPoint([0, 0, 0, 0])

    def test_point_is_immutable(self):
        p = HomPoint([1, 2, 3, 1])
        with pytest.raises(ValueError):
            p.coords[0] = 5.0

    def test_ordinary_and_infinite(self):
        assert HomPoint.ordinary(1, 2, 3).is_ordinary()
        assert HomPoint.direction(1, 2, 3).is_infinite()
        assert HomPoint([1, 0, 0, 1e-12]).is_infinite()
        np.testing.assert_allclose(HomPoint([2, 4, 6, 2]).euclidean(), [1, 2, 3])

    def test_plane_infinite(self):
        assert Hyperplane([0, 0, 0, 3]).is_infinite()
        assert not Hyperplane([0, 0, 1, 3]).is_infinite()
        np.testing.assert_allclose(Hyperplane([0, 0, 2, 4]).unit().coeffs, [0, 0, 1, 2])
        with pytest.raises(ProjectiveError):
            Hyperplane([0, 0, 0, 1]).unit()

    def test_plane_contains(self):
        assert Hyperplane([1, 1, 1, -3]).contains([1, 1, 1, 1])
        assert not Hyperplane([1, 1, 1, -3]).contains([0, 0, 0, 1])

    def test_canonical_forms(self):
        np.testing.assert_allclose(canonical_point([2, 4, 6, 2]), [1, 2, 3, 1])
        np.testing.assert_allclose(canonical_point([0, 0, -2, 0]), [0, 0, 1, 0])
        np.testing.assert_allclose(canonical_plane([0, 0, -2, 4]), [0, 0, 1, -2])
        np.testing.assert_allclose(canonical_plane([0, 0, 0, -5]), [0, 0, 0, 1])


class TestApply:
    def test_identity(self):
        np.testing.assert_array_equal(apply(np.eye(4), [2, 1, 5, 1]), [2, 1, 5, 1])

    def test_w_scaling(self):
        y = apply(np.diag([1, 1, 1, 2.0]), [2, 1, 5, 1])
        np.testing.assert_array_equal(y, [2, 1, 5, 2])
        assert proj_equal(y, [1, 0.5, 2.5, 1])

    def test_givens_quarter_turn(self):
        np.testing.assert_allclose(apply(givens(math.pi / 2), [1, 0, 0, 1]), [0, 1, 0, 1], atol=1e-16)

    def test_indeterminate(self):
        P = make_projection([0, 0, 1, 0], [0, 0, 1, 0])
        with pytest.raises(IndeterminatePointError):
            apply(P, [0, 0, 1, 0])


class TestProjEqual:
    def test_examples(self):
        assert proj_equal([1, 2, 3, 4], [2, 4, 6, 8])
        assert not proj_equal([1, 2, 3, 4], [2, 4, 6, 9])
        assert proj_equal([0, 0, 1, 0], [0, 0, -1, 0])

    def test_zero_is_invalid(self):
        with pytest.raises(ProjectiveError):
            proj_equal([0, 0, 0, 0], [1, 0, 0, 0])
        with pytest.raises(ProjectiveError):
            mat_proj_equal(np.zeros((4, 4)), np.eye(4))

    def test_matrix_examples(self):
        from oracles import GOLDEN

        assert mat_proj_equal(GOLDEN, 70 * GOLDEN)
        assert mat_proj_equal(np.eye(4), givens(0.0))
        assert not mat_proj_equal(givens(math.pi / 6), givens(-math.pi / 6))

    def test_complex_vectors(self):
        v = np.array([1, -1j, 0, 0])
        assert proj_equal(v * (2 - 3j), v)

    @given(vec4, scalars)
    def test_reflexive_and_scaled(self, v, k):
        assert proj_equal(v, v)
        assert proj_equal(k * v, v) and proj_equal(v, k * v)

    @given(vec4, vec4)
    def test_symmetric(self, u, v):
        if proj_equal(u, v, 1e-12):
            assert proj_equal(v, u, 1e-9)
        assert proj_equal(u, u + 1e-14 * np.abs(u).max()) and proj_equal(u + 1e-14 * np.abs(u).max(), u)

    @given(vec4, scalars, scalars)
    def test_transitive_on_exact_multiples(self, v, a, b):
        assert proj_equal(a * v, b * (a * v)) and proj_equal(b * a * v, v)


class TestComposeConjugate:
    def test_compose_identity(self, rng):
        A = rng.normal(size=(4, 4))
        np.testing.assert_array_equal(compose(A, np.eye(4)), A)

    def test_compose_givens(self):
        np.testing.assert_allclose(compose(givens(0.3), givens(0.5)), givens(0.8), atol=1e-15)

    def test_reflection_involution(self):
        R = orthographic_reflection([1, 2, 2, -3])
        assert mat_proj_equal(compose(R, R), np.eye(4), 1e-12)

    def test_compose_apply(self, rng):
        A, B, p = rng.normal(size=(4, 4)), rng.normal(size=(4, 4)), rng.normal(size=4)
        assert proj_equal(apply(compose(A, B), p), apply(A, apply(B, p)), 1e-12)

    def test_conjugate_by_identity(self, rng):
        A = rng.normal(size=(4, 4))
        np.testing.assert_allclose(conjugate(A, np.eye(4)), A)

    def test_conjugate_singular(self):
        with pytest.raises(ProjectiveError):
            conjugate(np.eye(4), np.diag([1, 1, 1, 0.0]))

    def test_conjugate_givens_by_translation(self):
        t = np.array([2.0, -1.0, 3.0])
        B = conjugate(givens(0.7), translation(t))
        rep = classify_rotation(B)
        assert rep.is_rotation and abs(rep.theta - 0.7) < 1e-12
        assert proj_equal(rep.direction, [0, 0, 1, 0])
        assert mat_proj_equal(B, rotation_rodrigues(RotationSpec.of(t, [0, 0, 1], 0.7)), 1e-12)

    def test_conjugate_preserves_eigenvalue_ratios(self, rng):
        for _ in range(20):
            A, T = rng.normal(size=(4, 4)), rng.normal(size=(4, 4))
            a = np.sort_complex(eigenvalues(A))
            b = np.sort_complex(eigenvalues(conjugate(A, T)))
            assert np.abs(a - b).max() <= 1e-8 * np.abs(a).max()


class TestScale:
    def test_affine_normal_idempotent(self, rng):
        M = np.vstack([rng.normal(size=(3, 4)), [0, 0, 0, 3.7]])
        N = affine_normal(M)
        assert N[3, 3] == 1.0
        np.testing.assert_array_equal(affine_normal(N), N)

    def test_affine_detection(self, rng):
        assert is_affine(translation([1, 2, 3]))
        assert not is_affine(rng.normal(size=(4, 4)))
        with pytest.raises(ProjectiveError):
            affine_normal(np.ones((4, 4)))

    @settings(max_examples=50)
    @given(arrays(np.float64, (4, 4), elements=finite).filter(lambda m: np.abs(m).max() > 1e-3), scalars)
    def test_canonical_scale_is_a_class_invariant(self, M, k):
        C = canonical_scale(M)
        np.testing.assert_allclose(canonical_scale(k * M), C, atol=1e-12)
        assert mat_proj_equal(C, M)

    def test_canonical_scale_non_affine(self):
        M = -np.ones((4, 4))
        C = canonical_scale(M)
        assert abs(np.linalg.norm(C) - 1.0) < 1e-15 and C.flat[0] > 0
