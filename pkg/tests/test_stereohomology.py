import math

import numpy as np
import pytest

from oracles import random_stereo
from homrot.projective_core import ProjectiveError, apply, givens, mat_proj_equal, proj_equal, translation
from homrot.stereohomology import (
    IDENTITY,
    LABELS,
    NOT_STEREO,
    classify_stereo,
    make_projection,
    make_reflection,
    make_scaling,
    make_shear,
    orthographic_reflection,
)

R3 = math.sqrt(3.0)


class TestProjection:
    def test_orthographic_onto_xy(self):
        np.testing.assert_array_equal(make_projection([0, 0, 1, 0], [0, 0, 1, 0]), np.diag([1, 1, 0, 1.0]))

    def test_central_from_origin(self):
        M = make_projection([0, 0, 0, 1], [0, 0, 1, -1])
        expected = np.eye(4) + np.outer([0, 0, 0, 1], [0, 0, 1, -1])
        np.testing.assert_allclose(M, expected)
        assert proj_equal(apply(M, [2, 3, 4, 1]), [0.5, 0.75, 1, 1])

    def test_rank_idempotent_and_fixes_plane(self, rng):
        for _ in range(50):
            M, s, pi = random_stereo(rng, 1)
            assert np.linalg.matrix_rank(M) == 3
            assert np.linalg.norm(M @ s) <= 1e-10 * np.linalg.norm(M) * np.linalg.norm(s)
            assert mat_proj_equal(M @ M, M, 1e-10)
            # Points of the plane are fixed up to scale.
            x = rng.normal(size=4)
            x -= (x @ pi) / (pi @ pi) * pi
            assert proj_equal(M @ x, x, 1e-9)

    def test_center_on_plane_rejected(self):
        with pytest.raises(ProjectiveError):
            make_projection([1, 0, 0, 0], [0, 0, 1, 0])

    def test_zero_inputs_rejected(self):
        with pytest.raises(ProjectiveError):
            make_projection([0, 0, 0, 0], [0, 0, 1, 0])
        with pytest.raises(ProjectiveError):
            make_projection([0, 0, 1, 0], [0, 0, 1, 0], lam=0.0)


class TestScaling:
    def test_dilation_about_origin(self):
        M = make_scaling([0, 0, 0, 1], [0, 0, 0, 1], rho=1 / 3)
        np.testing.assert_allclose(M / M[3, 3], np.diag([3, 3, 3, 1.0]))

    def test_rho_equals_lambda(self):
        np.testing.assert_allclose(make_scaling([1, 2, 3, 1], [0, 1, 0, 2], rho=2.5, lam=2.5), 2.5 * np.eye(4))

    def test_elementary(self):
        np.testing.assert_array_equal(make_scaling([0, 0, 1, 0], [0, 0, 1, 0], rho=2), np.diag([1, 1, 2, 1.0]))

    def test_eigenvalues(self, rng):
        M = make_scaling(rng.normal(size=4), rng.normal(size=4), rho=3.0, lam=1.5)
        ev = np.sort(np.linalg.eigvals(M).real)
        np.testing.assert_allclose(ev, [1.5, 1.5, 1.5, 3.0], atol=1e-9)


class TestReflection:
    def test_z_plane(self):
        np.testing.assert_array_equal(make_reflection([0, 0, 1, 0], [0, 0, 1, 0]), np.diag([1, 1, -1, 1.0]))

    def test_plane_x_plus_y_plus_z_3(self):
        M = make_reflection(np.array([1, 1, 1, 0]) / R3, np.array([1, 1, 1, -3]) / R3)
        np.testing.assert_allclose(M, np.eye(4) - (2 / 3) * np.outer([1, 1, 1, 0], [1, 1, 1, -3]), atol=1e-15)
        assert proj_equal(apply(M, [1, 1, 1, 1]), [1, 1, 1, 1])
        assert proj_equal(apply(M, [0, 0, 0, 1]), [2, 2, 2, 1])
        np.testing.assert_allclose(orthographic_reflection([1, 1, 1, -3]), M, atol=1e-15)

    def test_central_symmetry(self):
        M = make_reflection([1, 2, 3, 1], [0, 0, 0, 1])
        assert proj_equal(apply(M, [0, 0, 0, 1]), [2, 4, 6, 1])

    def test_involution(self, rng):
        for row in (7, 8, 9):
            M, _, _ = random_stereo(rng, row)
            assert mat_proj_equal(M @ M, np.eye(4), 1e-12)

    def test_conjugation_covariance(self, rng):
        # T R(pi) T^-1 is the reflection with center T s and plane T^-T pi.
        for _ in range(20):
            s, pi = rng.normal(size=4), rng.normal(size=4)
            T = rng.normal(size=(4, 4))
            lhs = T @ make_reflection(s, pi) @ np.linalg.inv(T)
            rhs = make_reflection(T @ s, np.linalg.inv(T).T @ pi)
            assert mat_proj_equal(lhs, rhs, 1e-9)

    def test_infinite_plane_has_no_orthographic_mirror(self):
        with pytest.raises(ProjectiveError):
            orthographic_reflection([0, 0, 0, 1])


class TestShear:
    def test_translation(self):
        M = make_shear([2, 6, -3, 0], [0, 0, 0, 1], mu=7)
        np.testing.assert_allclose(M, translation([2, 6, -3]), atol=1e-15)

    def test_mu_zero(self):
        np.testing.assert_array_equal(make_shear([1, 0, 0, 0], [0, 0, 1, 0], mu=0, lam=2), 2 * np.eye(4))

    def test_adds_z_to_x(self):
        M = make_shear([1, 0, 0, 0], [0, 0, 1, 0], mu=1)
        expected = np.eye(4)
        expected[0, 2] = 1.0
        np.testing.assert_array_equal(M, expected)

    def test_nilpotent_part(self, rng):
        for row in (10, 11, 12):
            M, _, _ = random_stereo(rng, row)
            lam = np.trace(M) / 4
            N = M - lam * np.eye(4)
            assert np.abs(N @ N).max() <= 1e-10 * np.abs(M).max() ** 2

    def test_off_plane_rejected(self):
        with pytest.raises(ProjectiveError):
            make_shear([0, 0, 1, 0], [0, 0, 1, 0], mu=1)


class TestClassify:
    def test_reflection_row8(self):
        c = classify_stereo(np.diag([1, 1, -1, 1.0]))
        assert (c.row, c.label) == (8, "Reflection")
        assert proj_equal(c.spec.center, [0, 0, 1, 0]) and proj_equal(c.spec.plane, [0, 0, 1, 0])
        assert c.orthographic

    def test_translation_row12(self):
        c = classify_stereo(translation([2, 6, -3]))
        assert (c.row, c.label) == (12, "Translation")
        assert proj_equal(c.spec.center, [2, 6, -3, 0])
        assert abs(abs(c.spec.mu) - 7) < 1e-12

    def test_rotation_is_not_stereo(self):
        c = classify_stereo(givens(math.pi / 6))
        assert c.row is None and c.label == NOT_STEREO and not c.is_stereo

    def test_identity(self):
        c = classify_stereo(-3 * np.eye(4))
        assert c.label == IDENTITY and c.row is None

    def test_zero_matrix(self):
        with pytest.raises(ProjectiveError):
            classify_stereo(np.zeros((4, 4)))

    def test_labels_cover_all_rows(self):
        assert sorted(LABELS) == list(range(1, 13))

    @pytest.mark.parametrize("row", range(1, 13))
    def test_round_trip_parameters(self, rng, row):
        for _ in range(20):
            M, s, pi = random_stereo(rng, row)
            k = rng.uniform(0.1, 10)
            c = classify_stereo(k * M)
            assert c.row == row and c.label == LABELS[row]
            assert proj_equal(c.spec.center, s, 1e-8) and proj_equal(c.spec.plane, pi, 1e-8)
            sp = c.spec
            if 1 <= row <= 3:
                rebuilt = make_projection(sp.center, sp.plane, sp.lam)
            elif 4 <= row <= 9:
                rebuilt = make_scaling(sp.center, sp.plane, sp.rho, sp.lam)
            else:
                rebuilt = make_shear(sp.center, sp.plane, sp.mu, sp.lam)
            np.testing.assert_allclose(rebuilt, k * M, atol=1e-8 * np.abs(k * M).max())

    def test_orthographic_flag(self):
        c = classify_stereo(make_projection([1, 0, 0, 0], [1, 0, 0, -2]))
        assert c.row == 2 and c.orthographic
        c = classify_stereo(make_projection([1, 1, 0, 0], [1, 0, 0, -2]))
        assert c.row == 2 and not c.orthographic
        assert classify_stereo(make_projection([0, 0, 0, 1], [1, 0, 0, -2])).orthographic is None
