"""Independent reference values and generators shared by the test modules.

Nothing here calls the library's construction code: the golden matrices are
typed in from their closed forms, and the rotation oracles use the classic
3x3 Rodrigues formula and unit quaternions.
"""

import math

import numpy as np

S3, S35 = math.sqrt(3.0), math.sqrt(35.0)

# Rotation by pi/6 about the axis through (-4, 4, 0) along (-5, 3, 1), overall scale 70.
GOLDEN = np.array([
    [50 + 10 * S3, -30 + 15 * S3 - S35, -10 + 5 * S3 + 3 * S35, 40 - 20 * S3 + 4 * S35],
    [-30 + 15 * S3 + S35, 18 + 26 * S3, 6 - 3 * S3 + 5 * S35, 88 - 44 * S3 + 4 * S35],
    [-10 + 5 * S3 - 3 * S35, 6 - 3 * S3 - 5 * S35, 2 + 34 * S3, -64 + 32 * S3 + 8 * S35],
    [0.0, 0.0, 0.0, 70.0],
])
GOLDEN_POINT = np.array([-4.0, 4.0, 0.0])
GOLDEN_DIR = np.array([-5.0, 3.0, 1.0])
GOLDEN_THETA = math.pi / 6


def golden_line(t):
    return np.array([-4 - 5 * t, 4 + 3 * t, t, 1.0])


def row_golden(theta):
    """Row-vector-convention rotation about the axis through (2,1,5) and (4,7,2)."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([
        [45 * c + 4, 12 - 12 * c - 21 * s, 6 * c - 42 * s - 6, 0],
        [12 - 12 * c + 21 * s, 36 + 13 * c, 18 * c + 14 * s - 18, 0],
        [6 * c + 42 * s - 6, 18 * c - 14 * s - 18, 40 * c + 9, 0],
        [108 - 108 * c - 231 * s, 79 - 79 * c + 112 * s, 230 - 230 * c + 70 * s, 49],
    ]) / 49.0


def hom_translation(t):
    T = np.eye(4)
    T[:3, 3] = t
    return T


def classic_rotation(point, direction, theta):
    """T(p) * [I + sin K + (1 - cos) K^2] * T(-p) with the 3x3 cross-product matrix K."""
    k = np.asarray(direction, float) / np.linalg.norm(direction)
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    R = np.eye(3) + math.sin(theta) * K + (1 - math.cos(theta)) * (K @ K)
    H = np.eye(4)
    H[:3, :3] = R
    p = np.asarray(point, float)
    return hom_translation(p) @ H @ hom_translation(-p)


def quaternion_rotation3(direction, theta):
    k = np.asarray(direction, float) / np.linalg.norm(direction)
    w = math.cos(theta / 2)
    x, y, z = math.sin(theta / 2) * k
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
        [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
        [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
    ])


def random_spec(rng):
    """(point, unit direction, theta) drawn as in the cross-method property."""
    d = rng.normal(size=3)
    return rng.uniform(-10, 10, 3), d / np.linalg.norm(d), rng.uniform(-math.pi, math.pi)


def random_rigid(rng):
    """Proper rigid motion from the quaternion oracle plus a translation."""
    R = quaternion_rotation3(rng.normal(size=3), rng.uniform(-math.pi, math.pi))
    T = np.eye(4)
    T[:3, :3] = R
    T[:3, 3] = rng.uniform(-10, 10, 3)
    return T


def random_point(rng, infinite):
    v = rng.normal(size=4)
    if infinite:
        v[3] = 0.0
    else:
        v[3] = rng.choice([-1, 1]) * rng.uniform(0.3, 2.0)
    return v


def random_plane(rng, infinite):
    v = rng.normal(size=4)
    if infinite:
        v[:3] = 0.0
    return v


# (center infinite, plane infinite) for the three rows of each table block.
OFF_PLANE_ROWS = [(False, False), (True, False), (False, True)]
ON_PLANE_ROWS = [(False, False), (True, False), (True, True)]


def random_stereo(rng, row):
    """A random valid (matrix, s, pi) for table row ``row`` in 1..12."""
    from homrot.stereohomology import make_projection, make_reflection, make_scaling, make_shear

    kind, j = divmod(row - 1, 3)
    lam = rng.choice([-1, 1]) * rng.uniform(0.2, 5.0)
    if kind < 3:
        s_inf, p_inf = OFF_PLANE_ROWS[j]
        while True:
            s, pi = random_point(rng, s_inf), random_plane(rng, p_inf)
            if abs(s @ pi) > 0.1 * np.linalg.norm(s) * np.linalg.norm(pi):
                break
        if kind == 0:
            M = make_projection(s, pi, lam)
        elif kind == 1:
            while True:
                rho = lam * rng.choice([-1, 1]) * rng.uniform(0.2, 5.0)
                if min(abs(rho - lam), abs(rho + lam)) > 0.1 * abs(lam):
                    break
            M = make_scaling(s, pi, rho, lam)
        else:
            M = make_reflection(s, pi, lam)
    else:
        s_inf, p_inf = ON_PLANE_ROWS[j]
        pi = random_plane(rng, p_inf)
        if p_inf:
            s = random_point(rng, True)
        elif s_inf:
            s = random_point(rng, True)
            n = pi[:3]
            s[:3] -= (s[:3] @ n) / (n @ n) * n
        else:
            x = rng.normal(size=3)
            n = pi[:3]
            x -= (x @ n + pi[3]) / (n @ n) * n
            s = np.append(x, 1.0) * rng.uniform(0.5, 2.0)
        M = make_shear(s, pi, rng.choice([-1, 1]) * rng.uniform(0.2, 5.0), lam)
    return M, s, pi
